//! Concurrence of the heralded state, computed three ways: the closed form
//! for a two-term state in nonorthogonal bases, its identical-inputs
//! restriction, and a basis-free oracle from the reduced density matrix.

use num_complex::Complex;
use num_traits::Zero;

use crate::beam_splitter::WeakSplitResult;
use crate::error::{domain, Error, Result};
use crate::fock::{inner_product, BipartiteState};
use crate::protocol::Detector;
use crate::scalar::{imag_unit, phase, Real};

/// Normalization constants and basis overlaps of the heralded state
/// `ν₁μ₂|V₁⟩|U₂⟩ ∓ i e^{iγ} μ₁ν₂|U₁⟩|V₂⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceInputs<S> {
    pub mu1: S,
    pub nu1: S,
    pub mu2: S,
    pub nu2: S,
    /// `⟨V₁|U₁⟩`
    pub overlap1: Complex<S>,
    /// `⟨V₂|U₂⟩`
    pub overlap2: Complex<S>,
    /// `1 − |⟨V₁|U₁⟩|²`, kept separately so it survives `|⟨V|U⟩| → 1`.
    pub residual1: S,
    /// `1 − |⟨V₂|U₂⟩|²`
    pub residual2: S,
    pub gamma: S,
    pub detector: Detector,
}

impl<S: Real> ConcurrenceInputs<S> {
    pub fn new(
        (mu1, nu1, overlap1): (S, S, Complex<S>),
        (mu2, nu2, overlap2): (S, S, Complex<S>),
        gamma: S,
        detector: Detector,
    ) -> Result<Self> {
        let bound = S::one() + S::tolerance(1e-12);
        for (mu, nu, ov) in [(mu1, nu1, overlap1), (mu2, nu2, overlap2)] {
            if !(mu >= S::zero() && nu >= S::zero()) {
                return Err(domain("normalization constants must be nonnegative"));
            }
            if ov.norm() > bound {
                return Err(domain(format!(
                    "overlap magnitude {} violates Cauchy-Schwarz",
                    ov.norm()
                )));
            }
        }
        let residual = |ov: Complex<S>| (S::one() - ov.norm_sqr()).max(S::zero());
        Ok(Self {
            mu1,
            nu1,
            mu2,
            nu2,
            overlap1,
            overlap2,
            residual1: residual(overlap1),
            residual2: residual(overlap2),
            gamma,
            detector,
        })
    }

    /// Reads `μ`, `ν` and `⟨V|U⟩` off the weak splits of both arms. An
    /// undefined overlap (`μ = 0` or `ν = 0`) is set to zero; it multiplies a
    /// vanishing coefficient.
    pub fn from_weak_splits(
        w1: &WeakSplitResult<S>,
        w2: &WeakSplitResult<S>,
        gamma: S,
        detector: Detector,
    ) -> Result<Self> {
        // (⟨V|U⟩, ‖V − ⟨U|V⟩U‖²)
        let overlap = |w: &WeakSplitResult<S>| {
            if w.mu.is_zero() || w.nu.is_zero() {
                return (Complex::zero(), S::one());
            }
            let ov = inner_product(&w.v, &w.u) / (w.mu * w.nu);
            let (inv_mu, inv_nu) = (S::one() / w.mu, S::one() / w.nu);
            let orthogonal = (0..=w.u.n_max().max(w.v.n_max())).fold(S::zero(), |acc, n| {
                let d = w.v.amplitude(n) * inv_nu - w.u.amplitude(n) * inv_mu * ov.conj();
                acc + d.norm_sqr()
            });
            (ov, orthogonal.min(S::one()))
        };
        let (ov1, res1) = overlap(w1);
        let (ov2, res2) = overlap(w2);
        let mut inputs = Self::new((w1.mu, w1.nu, ov1), (w2.mu, w2.nu, ov2), gamma, detector)?;
        inputs.residual1 = res1;
        inputs.residual2 = res2;
        Ok(inputs)
    }
}

/// Values within this distance of `[0, 1]` are clamped; farther is an error.
fn check_range<S: Real>(c: S) -> Result<S> {
    let tol = S::tolerance(1e-9);
    if !c.is_finite() || c < -tol || c > S::one() + tol {
        return Err(Error::OutOfRange(c.as_f64()));
    }
    Ok(c.max(S::zero()).min(S::one()))
}

/// Concurrence in closed form for general (non-identical) inputs.
pub fn concurrence_general<S: Real>(inp: &ConcurrenceInputs<S>) -> Result<S> {
    if inp.nu1.is_zero() && inp.nu2.is_zero() {
        return Err(Error::Degenerate(
            "neither arm has a one-photon branch (nu1 = nu2 = 0)".into(),
        ));
    }
    let p = inp.mu1 * inp.nu1 * inp.mu2 * inp.nu2;
    let numerator = S::lit(2.0) * p * (inp.residual1 * inp.residual2).max(S::zero()).sqrt();
    // upper signs belong to D1
    let s = -inp.detector.relative_sign::<S>();
    let i = imag_unit::<S>();
    let cross = i * phase(-inp.gamma) * inp.overlap1.conj() * inp.overlap2 * s
        - i * phase(inp.gamma) * inp.overlap1 * inp.overlap2.conj() * s;
    let denominator = inp.mu1 * inp.mu1 * inp.nu2 * inp.nu2
        + inp.nu1 * inp.nu1 * inp.mu2 * inp.mu2
        + p * cross.re;
    if denominator.abs() <= S::lit(1e-300).max(S::min_positive_value()) {
        let cause = if inp.mu1.is_zero() || inp.mu2.is_zero() {
            "an arm has no zero-photon branch (mu = 0)"
        } else {
            "heralded state has zero norm"
        };
        return Err(Error::Degenerate(cause.into()));
    }
    check_range(numerator / denominator)
}

/// Identical inputs on both arms: `(1 − x)/(1 ± sin γ · x)`, `+` for `D₁`,
/// with `x = |⟨V|U⟩|²`.
pub fn concurrence_identical<S: Real>(
    overlap_mag_sq: S,
    gamma: S,
    detector: Detector,
) -> Result<S> {
    let tol = S::tolerance(1e-12);
    if !(overlap_mag_sq >= -tol && overlap_mag_sq <= S::one() + tol) {
        return Err(domain(format!(
            "squared overlap must lie in [0, 1], got {overlap_mag_sq}"
        )));
    }
    let x = overlap_mag_sq.max(S::zero()).min(S::one());
    let s = -detector.relative_sign::<S>();
    let denominator = S::one() + s * gamma.sin() * x;
    if denominator <= S::tolerance(1e-12) {
        return Err(Error::Degenerate(
            "identical-input denominator vanishes (|<V|U>| = 1 at the MES phase)".into(),
        ));
    }
    check_range((S::one() - x) / denominator)
}

/// Generalized pure-state concurrence `√(2(1 − Tr ρ₁²))`.
pub fn concurrence_oracle<S: Real>(s: &BipartiteState<S>) -> Result<S> {
    let n2 = s.norm_sqr();
    if (n2 - S::one()).abs() > S::tolerance(1e-8) {
        return Err(Error::NotNormalized(n2.as_f64()));
    }
    let rho = s.reduced_first();
    let purity = rho.iter().fold(S::zero(), |acc, z| acc + z.norm_sqr());
    let linear_entropy = S::lit(2.0) * (S::one() - purity) / (n2 * n2);
    if linear_entropy > S::lit(1e-6) {
        return Ok(linear_entropy.sqrt());
    }
    // Near product states `1 − Tr ρ²` is dominated by rounding. Use the
    // identity 1 − Tr ρ² = 2 Σ_{i<j, k<l} |M_ik M_jl − M_il M_jk|², whose
    // terms vanish individually for product states.
    Ok((S::lit(4.0) * minor_sum(s) / (n2 * n2)).sqrt())
}

/// `Σ_{i<j, k<l} |M_ik M_jl − M_il M_jk|²` over the populated rows and columns.
fn minor_sum<S: Real>(s: &BipartiteState<S>) -> S {
    let m = s.amplitudes();
    let rows: Vec<usize> = (0..m.nrows())
        .filter(|&i| m.row(i).iter().any(|z| !z.is_zero()))
        .collect();
    let cols: Vec<usize> = (0..m.ncols())
        .filter(|&k| m.column(k).iter().any(|z| !z.is_zero()))
        .collect();
    let mut acc = S::zero();
    for (a, &i) in rows.iter().enumerate() {
        for &j in &rows[a + 1..] {
            for (b, &k) in cols.iter().enumerate() {
                for &l in &cols[b + 1..] {
                    acc = acc + (m[(i, k)] * m[(j, l)] - m[(i, l)] * m[(j, k)]).norm_sqr();
                }
            }
        }
    }
    acc
}

/// `x tanh x − n` at `x = |Tα|²`: zero where the hybrid number/cat input
/// pair yields a maximally entangled state.
pub fn hybrid_mes_condition<S: Real>(n: usize, t_alpha_mag: S) -> S {
    let x = t_alpha_mag * t_alpha_mag;
    x * x.tanh() - S::count(n)
}

/// `|Tα|` solving `|Tα|² tanh |Tα|² = n`, by bisection on the monotone
/// `x tanh x`.
pub fn hybrid_mes_root<S: Real>(n: usize) -> Result<S> {
    if n == 0 {
        return Err(domain("the MES condition needs n >= 1"));
    }
    let target = S::count(n);
    let f = |x: S| x * x.tanh() - target;
    // (n+1) tanh(n+1) > n for n >= 1
    let (mut lo, mut hi) = (S::zero(), target + S::one());
    for _ in 0..200 {
        let mid = (lo + hi) / S::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < S::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(((lo + hi) / S::lit(2.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::SingleModeState;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn inputs(
        mu: (f64, f64),
        nu: (f64, f64),
        ov: (Complex<f64>, Complex<f64>),
        gamma: f64,
        d: Detector,
    ) -> ConcurrenceInputs<f64> {
        ConcurrenceInputs::new((mu.0, nu.0, ov.0), (mu.1, nu.1, ov.1), gamma, d).unwrap()
    }

    #[test]
    fn orthogonal_balanced_is_maximal() {
        let zero = c(0.0, 0.0);
        let inp = inputs((0.8, 0.4), (0.6, 0.3), (zero, zero), 1.0, Detector::D1);
        assert_abs_diff_eq!(concurrence_general(&inp).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn missing_one_photon_branch_is_product() {
        let inp = inputs(
            (0.8, 0.4),
            (1.0, 0.0),
            (c(0.3, 0.1), c(0.0, 0.0)),
            1.0,
            Detector::D2,
        );
        assert_eq!(concurrence_general(&inp).unwrap(), 0.0);
    }

    #[test]
    fn general_reduces_to_identical() {
        let ov = c(0.5f64.sqrt(), 0.0);
        for d in [Detector::D1, Detector::D2] {
            let inp = inputs((0.9, 0.9), (0.7, 0.7), (ov, ov), 0.0, d);
            let general = concurrence_general(&inp).unwrap();
            let identical = concurrence_identical(0.5, 0.0, d).unwrap();
            assert_abs_diff_eq!(general, identical, epsilon = 1e-15);
            assert_abs_diff_eq!(general, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn identical_special_values() {
        for &g in &[0.0, 0.4, 2.0, 5.0] {
            assert_eq!(concurrence_identical(0.0, g, Detector::D1).unwrap(), 1.0);
        }
        for &x in &[0.1, 0.5, 0.99] {
            assert_abs_diff_eq!(
                concurrence_identical(x, 1.5 * PI, Detector::D1).unwrap(),
                1.0,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                concurrence_identical(x, FRAC_PI_2, Detector::D2).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
        assert_abs_diff_eq!(
            concurrence_identical(0.5, FRAC_PI_2, Detector::D1).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert!(concurrence_identical(1.5, 0.0, Detector::D1).is_err());
        assert!(matches!(
            concurrence_identical(1.0, 1.5 * PI, Detector::D1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let zero = c(0.0, 0.0);
        let both_empty = inputs((1.0, 0.0), (1.0, 0.0), (zero, zero), 0.0, Detector::D1);
        assert!(matches!(
            concurrence_general(&both_empty),
            Err(Error::Degenerate(_))
        ));
        let no_vacuum_branch = inputs((0.0, 1.0), (0.0, 1.0), (zero, zero), 0.0, Detector::D1);
        assert!(matches!(
            concurrence_general(&no_vacuum_branch),
            Err(Error::Degenerate(_))
        ));
        assert!(ConcurrenceInputs::new(
            (1.0, 1.0, c(1.1, 0.0)),
            (1.0, 1.0, zero),
            0.0,
            Detector::D1
        )
        .is_err());
    }

    #[test]
    fn oracle_on_reference_states() {
        let product = crate::fock::tensor(
            &SingleModeState::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
            &SingleModeState::from_amplitudes(vec![c(1.0, 0.0)]).unwrap(),
        );
        assert_abs_diff_eq!(concurrence_oracle(&product).unwrap(), 0.0, epsilon = 1e-15);

        let h = FRAC_1_SQRT_2;
        let bell = BipartiteState::from_amplitudes(array![
            [c(0.0, 0.0), c(h, 0.0)],
            [c(0.0, -h), c(0.0, 0.0)]
        ])
        .unwrap();
        assert_abs_diff_eq!(concurrence_oracle(&bell).unwrap(), 1.0, epsilon = 1e-15);

        let unnormalized = bell.scale(c(2.0, 0.0));
        assert!(matches!(
            concurrence_oracle(&unnormalized),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn oracle_matches_closed_form_for_two_term_states() {
        // a|A1 B1> + b|A2 B2> with known overlaps
        let a1 = SingleModeState::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let a2 = SingleModeState::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let b1 = SingleModeState::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let b2 = SingleModeState::from_amplitudes(vec![c(0.28, 0.0), c(0.96, 0.0)]).unwrap();
        let (a, b) = (c(0.7, 0.0), c(0.2, 0.5));
        let psi = crate::fock::tensor(&a1, &b1)
            .scale(a)
            .add_scaled(b, &crate::fock::tensor(&a2, &b2));
        let n2 = psi.norm_sqr();
        let x = inner_product(&a1, &a2).norm_sqr();
        let y = inner_product(&b1, &b2).norm_sqr();
        let closed = 2.0 * a.norm() * b.norm() * ((1.0 - x) * (1.0 - y)).sqrt() / n2;
        let oracle = concurrence_oracle(&psi.normalize().unwrap()).unwrap();
        assert_abs_diff_eq!(oracle, closed, epsilon = 1e-13);
    }

    #[test]
    fn oracle_resolves_nearly_product_states() {
        for delta in [1e-4, 1e-7, 1e-9] {
            let s = BipartiteState::from_amplitudes(array![
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), c(delta, 0.0)]
            ])
            .unwrap();
            let want = 2.0 * delta / (1.0 + delta * delta);
            let got = concurrence_oracle(&s).unwrap();
            assert!(
                (got - want).abs() <= 1e-6 * want,
                "delta {delta}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn nearly_parallel_branches_keep_their_residual() {
        use crate::beam_splitter::{weak_split, BeamSplitterParams};
        use crate::protocol::{run_analytic, ProtocolConfig};
        use crate::states::{make_coherent, make_fock, CoherentParams};
        let cfg = crate::fock::TruncationConfig::default();
        let bs = BeamSplitterParams::from_reflectivity(0.05, 0.0).unwrap();
        let coherent = make_coherent(&CoherentParams::new(c(1.3, -0.4)).unwrap(), &cfg).unwrap();
        for eps in [1e-3, 1e-5, 0.0] {
            let mut amps = coherent.amplitudes().to_vec();
            amps[3] += c(eps, 0.0);
            let psi = SingleModeState::from_amplitudes(amps)
                .unwrap()
                .normalize()
                .unwrap();
            let c1 = ProtocolConfig::new(make_fock(2, &cfg).unwrap(), psi, bs, 1.0, Detector::D2)
                .unwrap();
            let w1 = weak_split(&c1.psi1, &bs);
            let w2 = weak_split(&c1.psi2, &bs);
            let inp = ConcurrenceInputs::from_weak_splits(&w1, &w2, c1.gamma, c1.detector).unwrap();
            let general = concurrence_general(&inp).unwrap();
            let oracle = concurrence_oracle(run_analytic(&c1).require_state().unwrap()).unwrap();
            assert_abs_diff_eq!(general, oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn hybrid_root_is_maximally_entangled() {
        let root: f64 = hybrid_mes_root(1).unwrap();
        // independent high-precision value of the root of x tanh x = 1
        assert_abs_diff_eq!(root * root, 1.199_678_640_257_734, epsilon = 1e-12);
        assert!(hybrid_mes_condition(1, root).abs() <= 1e-10);
        let root2: f64 = hybrid_mes_root(2).unwrap();
        assert_abs_diff_eq!(root2 * root2, 2.065_338_138_974_705, epsilon = 1e-12);
        assert!(hybrid_mes_root::<f64>(0).is_err());
    }

    #[test]
    fn out_of_range_values_are_errors() {
        assert!(matches!(check_range(1.1f64), Err(Error::OutOfRange(_))));
        assert!(matches!(check_range(-0.01f64), Err(Error::OutOfRange(_))));
        assert_eq!(check_range(1.0 + 1e-12).unwrap(), 1.0);
        assert_eq!(check_range(-1e-12f64).unwrap(), 0.0);
    }
}
