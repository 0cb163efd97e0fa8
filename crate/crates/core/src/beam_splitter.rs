//! Lossless beam splitter with a vacuum ancilla port.
//!
//! `|0⟩_a ⊗ |n⟩_b ↦ Σ_k c_kⁿ |k⟩_c ⊗ |n−k⟩_d` with
//! `c_kⁿ = √C(n,k) e^{ikφ} R^k T^{n−k}`, `T = cos(θ/2)`, `R = sin(θ/2)`.
//! Port `c` is the weak (reflected) output, `d` the strong one.

use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{domain, Result};
use crate::fock::{apply_annihilation, SingleModeState, TwoModeState};
use crate::scalar::{phase, LnFactorials, Real};

/// Reflectivity above which [`weak_split`] logs a warning.
pub const DEFAULT_WEAK_THRESHOLD: f64 = 0.2;

/// Mixing angle `θ` and reflection phase `φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamSplitterParams<S> {
    theta: S,
    phi: S,
}

impl<S: Real> BeamSplitterParams<S> {
    pub fn from_angle(theta: S, phi: S) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(domain("beam splitter angles must be finite"));
        }
        if theta < S::zero() || theta > S::PI() {
            return Err(domain(format!(
                "mixing angle must lie in [0, π] so that R, T ≥ 0, got {theta}"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// From the amplitude reflectivity `R ∈ [0, 1]`.
    pub fn from_reflectivity(r: S, phi: S) -> Result<Self> {
        if !(r >= S::zero() && r <= S::one()) {
            return Err(domain(format!("reflectivity must lie in [0, 1], got {r}")));
        }
        Self::from_angle(S::lit(2.0) * r.asin(), phi)
    }

    pub fn theta(&self) -> S {
        self.theta
    }

    pub fn phi(&self) -> S {
        self.phi
    }

    /// `T = cos(θ/2)`.
    pub fn transmission(&self) -> S {
        (self.theta / S::lit(2.0)).cos()
    }

    /// `R = sin(θ/2)`.
    pub fn reflectivity(&self) -> S {
        (self.theta / S::lit(2.0)).sin()
    }

    pub fn with_reflectivity(&self, r: S) -> Result<Self> {
        Self::from_reflectivity(r, self.phi)
    }
}

/// Weak-reflectivity split of one input: unnormalized `|u⟩`, `|v⟩` and
/// their norms `μ = ‖u‖`, `ν = ‖v‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakSplitResult<S> {
    pub u: SingleModeState<S>,
    pub v: SingleModeState<S>,
    pub mu: S,
    pub nu: S,
}

impl<S: Real> WeakSplitResult<S> {
    /// `|U⟩ = |u⟩/μ`, `None` when `μ = 0`.
    pub fn u_normalized(&self) -> Option<SingleModeState<S>> {
        self.u.normalize().ok()
    }

    /// `|V⟩ = |v⟩/ν`, `None` when `ν = 0`.
    pub fn v_normalized(&self) -> Option<SingleModeState<S>> {
        self.v.normalize().ok()
    }
}

/// Precomputed `ln n!`, `ln R`, `ln T` for repeated coefficient evaluation.
struct CoefficientTable<S> {
    lf: LnFactorials<S>,
    r: S,
    t: S,
    phi: S,
}

impl<S: Real> CoefficientTable<S> {
    fn new(n_max: usize, p: &BeamSplitterParams<S>) -> Self {
        Self {
            lf: LnFactorials::new(n_max),
            r: p.reflectivity(),
            t: p.transmission(),
            phi: p.phi,
        }
    }

    fn magnitude(&self, n: usize, k: usize) -> S {
        let power = |base: S, e: usize| -> Option<S> {
            match (e, base > S::zero()) {
                (0, _) => Some(S::zero()),
                (_, true) => Some(S::count(e) * base.ln()),
                (_, false) => None,
            }
        };
        match (power(self.r, k), power(self.t, n - k)) {
            (Some(lr), Some(lt)) => (S::lit(0.5) * self.lf.ln_binomial(n, k) + lr + lt).exp(),
            _ => S::zero(),
        }
    }

    fn coefficient(&self, n: usize, k: usize) -> Complex<S> {
        phase(S::count(k) * self.phi) * self.magnitude(n, k)
    }
}

/// `c_kⁿ`.
pub fn bs_coefficient<S: Real>(
    n: usize,
    k: usize,
    p: &BeamSplitterParams<S>,
) -> Result<Complex<S>> {
    if k > n {
        return Err(domain(format!("need 0 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(CoefficientTable::new(n, p).coefficient(n, k))
}

/// Exact output of a beam splitter fed `|0⟩ ⊗ input`.
pub fn apply_bs_exact<S: Real>(
    input: &SingleModeState<S>,
    p: &BeamSplitterParams<S>,
) -> TwoModeState<S> {
    let n_max = input.n_max();
    let table = CoefficientTable::new(n_max, p);
    let mut out = Array2::from_elem((n_max + 1, n_max + 1), Complex::zero());
    for (n, f) in input.amplitudes().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for k in 0..=n {
            out[(k, n - k)] = *f * table.coefficient(n, k);
        }
    }
    TwoModeState::new(out)
}

/// Keeps only the zero- and one-photon weak-port branches:
/// `u_n = Tⁿ f_n`, `v_n = √(n+1) Tⁿ f_{n+1}`.
///
/// The `e^{iφ}R` prefactor of the one-photon branch is not folded into `v`.
pub fn weak_split<S: Real>(
    input: &SingleModeState<S>,
    p: &BeamSplitterParams<S>,
) -> WeakSplitResult<S> {
    weak_split_with_threshold(input, p, S::lit(DEFAULT_WEAK_THRESHOLD))
}

pub fn weak_split_with_threshold<S: Real>(
    input: &SingleModeState<S>,
    p: &BeamSplitterParams<S>,
    threshold: S,
) -> WeakSplitResult<S> {
    let r = p.reflectivity();
    if r > threshold {
        log::warn!(
            "weak split with R = {r} above threshold {threshold}; dropped terms are not small"
        );
    }
    let t = p.transmission();
    let u: Vec<_> = input
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, f)| *f * t.powi(n as i32))
        .collect();
    let u = SingleModeState::unnormalized(u);
    let shifted = SingleModeState::unnormalized(
        std::iter::once(Complex::zero())
            .chain(
                input
                    .amplitudes()
                    .iter()
                    .skip(1)
                    .enumerate()
                    .map(|(n, f)| *f * t.powi(n as i32)),
            )
            .collect(),
    );
    let v = apply_annihilation(&shifted);
    let (mu, nu) = (u.norm(), v.norm());
    WeakSplitResult { u, v, mu, nu }
}

/// Probability carried by the weak-port branches with two or more photons.
pub fn truncation_residual<S: Real>(input: &SingleModeState<S>, p: &BeamSplitterParams<S>) -> S {
    let table = CoefficientTable::new(input.n_max(), p);
    input
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(n, _)| *n >= 2)
        .fold(S::zero(), |acc, (n, f)| {
            let weight = (2..=n).fold(S::zero(), |w, k| w + table.magnitude(n, k).powi(2));
            acc + f.norm_sqr() * weight
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncationConfig;
    use crate::states::{make_even_cat, make_fock, make_odd_cat, CoherentParams};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn bs(r: f64, phi: f64) -> BeamSplitterParams<f64> {
        BeamSplitterParams::from_reflectivity(r, phi).unwrap()
    }

    fn fock(n: usize) -> SingleModeState<f64> {
        make_fock(n, &TruncationConfig::default()).unwrap()
    }

    #[test]
    fn coefficient_special_values() {
        let p = bs(0.3, 0.7);
        assert_eq!(bs_coefficient(0, 0, &p).unwrap(), Complex::new(1.0, 0.0));
        assert_abs_diff_eq!(
            bs_coefficient(1, 0, &p).unwrap().re,
            p.transmission(),
            epsilon = 1e-15
        );
        assert!(bs_coefficient(1, 2, &p).is_err());
    }

    #[test]
    fn coefficients_form_a_distribution() {
        for &(theta, phi) in &[(0.3, 0.0), (1.2, 2.0), (3.0, -1.0), (FRAC_PI_2, 0.4)] {
            let p = BeamSplitterParams::from_angle(theta, phi).unwrap();
            let total: f64 = (0..=7)
                .map(|k| bs_coefficient(7, k, &p).unwrap().norm_sqr())
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn extreme_angles() {
        let through = BeamSplitterParams::from_angle(0.0, 0.0).unwrap();
        assert_eq!(
            bs_coefficient(3, 0, &through).unwrap(),
            Complex::new(1.0, 0.0)
        );
        assert_eq!(
            bs_coefficient(3, 1, &through).unwrap(),
            Complex::new(0.0, 0.0)
        );
        let mirror = BeamSplitterParams::from_angle(std::f64::consts::PI, 0.0).unwrap();
        assert_abs_diff_eq!(
            bs_coefficient(3, 3, &mirror).unwrap().re,
            1.0,
            epsilon = 1e-15
        );
        assert!(BeamSplitterParams::from_angle(-0.1, 0.0).is_err());
        assert!(BeamSplitterParams::from_reflectivity(1.5, 0.0).is_err());
    }

    #[test]
    fn balanced_single_photon() {
        let p = bs(FRAC_1_SQRT_2, 0.0);
        let out = apply_bs_exact(&fock(1), &p);
        assert_abs_diff_eq!(out.amplitude(0, 1).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitude(1, 0).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_eq!(out.amplitude(1, 1), Complex::new(0.0, 0.0));
    }

    #[test]
    fn vacuum_is_invariant() {
        let out = apply_bs_exact(&fock(0), &bs(0.4, 1.0));
        assert_eq!(out.amplitude(0, 0), Complex::new(1.0, 0.0));
        assert_eq!(out.norm_sqr(), 1.0);
    }

    #[test]
    fn two_photon_expansion() {
        let p = bs(0.35, 0.9);
        let (r, t) = (p.reflectivity(), p.transmission());
        let out = apply_bs_exact(&fock(2), &p);
        let e = |x: f64| Complex::new(x.cos(), x.sin());
        let expected = [
            ((0, 2), Complex::new(t * t, 0.0)),
            ((1, 1), e(0.9) * (2f64.sqrt() * r * t)),
            ((2, 0), e(1.8) * (r * r)),
        ];
        for ((k, m), want) in expected {
            assert!((out.amplitude(k, m) - want).norm() < 1e-14, "({k}, {m})");
        }
        assert_eq!(out.amplitude(0, 0), Complex::new(0.0, 0.0));
    }

    #[test]
    fn weak_split_of_number_state() {
        let p = bs(0.1, 0.0);
        let t = p.transmission();
        for n in 1..6 {
            let w = weak_split(&fock(n), &p);
            assert_abs_diff_eq!(w.u.amplitude(n).re, t.powi(n as i32), epsilon = 1e-15);
            assert_abs_diff_eq!(
                w.v.amplitude(n - 1).re,
                (n as f64).sqrt() * t.powi(n as i32 - 1),
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(w.mu, t.powi(n as i32), epsilon = 1e-15);
        }
        let w = weak_split(&fock(0), &p);
        assert_eq!(w.u.amplitude(0), Complex::new(1.0, 0.0));
        assert_eq!(w.nu, 0.0);
        assert!(w.v_normalized().is_none());
    }

    #[test]
    fn weak_split_of_even_cat_scales_alpha() {
        let cfg = TruncationConfig::default();
        let p = bs(0.1, 0.0);
        let a = 1.3;
        let input = make_even_cat(&CoherentParams::real(a).unwrap(), &cfg).unwrap();
        let w = weak_split(&input, &p);
        let ta = CoherentParams::real(p.transmission() * a).unwrap();
        let even = make_even_cat(&ta, &cfg).unwrap();
        let odd = make_odd_cat(&ta, &cfg).unwrap();
        let fu = crate::fock::inner_product(&w.u_normalized().unwrap(), &even).norm();
        let fv = crate::fock::inner_product(&w.v_normalized().unwrap(), &odd).norm();
        // both sides carry an independent 1e-12 truncation tail
        assert_abs_diff_eq!(fu, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fv, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn residual_vanishes_for_few_photons() {
        let p = bs(0.2, 0.3);
        assert_eq!(truncation_residual(&fock(0), &p), 0.0);
        assert_eq!(truncation_residual(&fock(1), &p), 0.0);
    }

    #[test]
    fn residual_scales_as_fourth_power() {
        // leading order: C(5,2) R⁴ T⁶ ≈ 10 R⁴
        let rs = [0.1, 0.05, 0.025];
        let vals: Vec<f64> = rs
            .iter()
            .map(|&r| truncation_residual(&fock(5), &bs(r, 0.0)))
            .collect();
        for w in rs.windows(2).zip(vals.windows(2)) {
            let slope = (w.1[1] / w.1[0]).ln() / (w.0[1] / w.0[0]).ln();
            assert!((slope - 4.0).abs() < 0.1, "slope {slope}");
        }
        assert_abs_diff_eq!(vals[2] / 0.025f64.powi(4), 10.0, epsilon = 0.1);
    }
}
