//! The two-arm entangler.
//!
//! Each input is split on its own weak-reflectivity beam splitter. The two
//! weak outputs `ĉ₁`, `ĉ₂` are mixed on a balanced splitter with output modes
//! `Â₁ = (iĉ₁ + e^{iγ}ĉ₂)/√2` and `Â₂ = (ĉ₁ + ie^{iγ}ĉ₂)/√2`; a single photon
//! at `D₁` (mode `Â₁`) or `D₂` (mode `Â₂`) heralds the strong-mode state
//!
//! ```text
//! |Φ⟩ = e^{iφ}R/√2 · ( |v₁⟩|u₂⟩ ∓ i e^{iγ} |u₁⟩|v₂⟩ )      (− for D₁, + for D₂)
//! ```
//!
//! [`run_analytic`] builds this from the weak splits. [`run_exact`] projects
//! the untruncated output of both arms onto the detector outcome instead.
//! [`run_exact_threshold`] models on/off detectors, where a click also
//! admits the multi-photon events the weak split drops.

use num_complex::Complex;

use crate::beam_splitter::{apply_bs_exact, weak_split, BeamSplitterParams, WeakSplitResult};
use crate::error::{domain, Error, Result};
use crate::fock::{tensor, BipartiteState, SingleModeState, TwoModeState};
use crate::scalar::{imag_unit, phase, LnFactorials, Real};

/// Which detector clicked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    D1,
    D2,
}

impl Detector {
    /// Sign in front of `i e^{iγ}|u₁⟩|v₂⟩`.
    pub fn relative_sign<S: Real>(self) -> S {
        match self {
            Detector::D1 => -S::one(),
            Detector::D2 => S::one(),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Detector::D1 => Detector::D2,
            Detector::D2 => Detector::D1,
        }
    }
}

impl std::fmt::Display for Detector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Detector::D1 => "D1",
            Detector::D2 => "D2",
        })
    }
}

impl std::str::FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D1" | "1" => Ok(Detector::D1),
            "D2" | "2" => Ok(Detector::D2),
            _ => Err(domain(format!("unknown detector {s:?}, expected D1 or D2"))),
        }
    }
}

/// Inputs of both arms, the shared splitter, wave-plate phase and heralding detector.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolConfig<S> {
    pub psi1: SingleModeState<S>,
    pub psi2: SingleModeState<S>,
    pub bs: BeamSplitterParams<S>,
    pub gamma: S,
    pub detector: Detector,
}

impl<S: Real> ProtocolConfig<S> {
    pub fn new(
        psi1: SingleModeState<S>,
        psi2: SingleModeState<S>,
        bs: BeamSplitterParams<S>,
        gamma: S,
        detector: Detector,
    ) -> Result<Self> {
        for psi in [&psi1, &psi2] {
            let n2 = psi.norm_sqr();
            if (n2 - S::one()).abs() > S::tolerance(1e-10) {
                return Err(Error::NotNormalized(n2.as_f64()));
            }
        }
        if !gamma.is_finite() {
            return Err(domain("wave-plate phase must be finite"));
        }
        Ok(Self {
            psi1,
            psi2,
            bs,
            gamma,
            detector,
        })
    }

    pub fn with_bs(&self, bs: BeamSplitterParams<S>) -> Self {
        Self { bs, ..self.clone() }
    }

    pub fn with_detector(&self, detector: Detector, gamma: S) -> Self {
        Self {
            detector,
            gamma,
            ..self.clone()
        }
    }
}

/// Heralded strong-mode state and its probability.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalOutcome<S> {
    /// Unnormalized; its squared norm is the success probability.
    pub state: BipartiteState<S>,
    pub success_probability: S,
    /// `None` for zero-probability outcomes.
    pub normalized_state: Option<BipartiteState<S>>,
}

impl<S: Real> ConditionalOutcome<S> {
    fn from_state(state: BipartiteState<S>) -> Self {
        let success_probability = state.norm_sqr();
        let normalized_state = if success_probability > S::zero() {
            state.normalize().ok()
        } else {
            None
        };
        Self {
            state,
            success_probability,
            normalized_state,
        }
    }

    pub fn is_zero_probability(&self) -> bool {
        self.normalized_state.is_none()
    }

    /// Normalized state, or an error naming the zero-probability outcome.
    pub fn require_state(&self) -> Result<&BipartiteState<S>> {
        self.normalized_state
            .as_ref()
            .ok_or_else(|| Error::ZeroProbability("no single-photon component to herald".into()))
    }

    /// `1 − |⟨a|b⟩|²` of the normalized states; zero-probability pairs agree trivially.
    pub fn infidelity(&self, other: &Self) -> S {
        match (&self.normalized_state, &other.normalized_state) {
            (Some(a), Some(b)) => S::one() - a.fidelity(b),
            (None, None) => S::zero(),
            _ => S::one(),
        }
    }
}

/// Heralded state from the weak splits of both arms.
pub fn run_analytic<S: Real>(c: &ProtocolConfig<S>) -> ConditionalOutcome<S> {
    let w1 = weak_split(&c.psi1, &c.bs);
    let w2 = weak_split(&c.psi2, &c.bs);
    analytic_from_splits(&w1, &w2, &c.bs, c.gamma, c.detector)
}

pub(crate) fn analytic_from_splits<S: Real>(
    w1: &WeakSplitResult<S>,
    w2: &WeakSplitResult<S>,
    bs: &BeamSplitterParams<S>,
    gamma: S,
    detector: Detector,
) -> ConditionalOutcome<S> {
    let relative = imag_unit::<S>() * phase(gamma) * detector.relative_sign::<S>();
    let unscaled = tensor(&w1.v, &w2.u).add_scaled(relative, &tensor(&w1.u, &w2.v));
    let prefactor = phase(bs.phi()) * (bs.reflectivity() * S::FRAC_1_SQRT_2());
    ConditionalOutcome::from_state(unscaled.scale(prefactor))
}

/// Amplitude `⟨K_Â, 0| k₁, k₂⟩_ĉ` (`D₁`) or `⟨0, K_Â| k₁, k₂⟩_ĉ` (`D₂`), `K = k₁ + k₂`.
fn detector_amplitude<S: Real>(
    detector: Detector,
    k1: usize,
    k2: usize,
    gamma: S,
    lf: &LnFactorials<S>,
) -> Complex<S> {
    let total = k1 + k2;
    let magnitude =
        (S::lit(0.5) * lf.ln_binomial(total, k1) - S::lit(0.5) * S::count(total) * S::LN_2()).exp();
    let i = imag_unit::<S>();
    let ph = match detector {
        Detector::D1 => i.powu(k1 as u32) * phase(S::count(k2) * gamma),
        Detector::D2 => (i * phase(gamma)).powu(k2 as u32),
    };
    ph * magnitude
}

/// Unnormalized strong-mode state for exactly `total` photons reaching the
/// clicked detector and none reaching the other.
fn detector_branch<S: Real>(
    arm1: &TwoModeState<S>,
    arm2: &TwoModeState<S>,
    total: usize,
    gamma: S,
    detector: Detector,
    lf: &LnFactorials<S>,
) -> BipartiteState<S> {
    let dims = (arm1.amplitudes().ncols(), arm2.amplitudes().ncols());
    let mut branch = BipartiteState::zeros(dims);
    let lo = total.saturating_sub(arm2.weak_max());
    let hi = total.min(arm1.weak_max());
    for k1 in lo..=hi {
        let x = arm1.strong_given_weak(k1);
        let y = arm2.strong_given_weak(total - k1);
        if x.norm_sqr().is_zero() || y.norm_sqr().is_zero() {
            continue;
        }
        let amp = detector_amplitude(detector, k1, total - k1, gamma, lf);
        branch = branch.add_scaled(amp, &tensor(&x, &y));
    }
    branch
}

/// Projects the exact output of both arms onto one photon at the clicked
/// detector and none at the other.
///
/// The heralded state is defined up to a global phase; for `D₁` the factor
/// `i` from `Â₁` is removed so both paths share the phase convention of
/// [`run_analytic`].
pub fn run_exact<S: Real>(c: &ProtocolConfig<S>) -> ConditionalOutcome<S> {
    let arm1 = apply_bs_exact(&c.psi1, &c.bs);
    let arm2 = apply_bs_exact(&c.psi2, &c.bs);
    exact_from_arms(&arm1, &arm2, c.gamma, c.detector)
}

fn exact_from_arms<S: Real>(
    arm1: &TwoModeState<S>,
    arm2: &TwoModeState<S>,
    gamma: S,
    detector: Detector,
) -> ConditionalOutcome<S> {
    let lf = LnFactorials::new(2);
    let branch = detector_branch(arm1, arm2, 1, gamma, detector, &lf);
    let branch = match detector {
        Detector::D1 => branch.scale(-imag_unit::<S>()),
        Detector::D2 => branch,
    };
    ConditionalOutcome::from_state(branch)
}

/// Exact success probability as a function of `R` (same `φ`).
pub fn success_probability_scaling<S: Real>(
    c: &ProtocolConfig<S>,
    r_values: &[S],
) -> Result<Vec<(S, S)>> {
    r_values
        .iter()
        .map(|&r| {
            let bs = c.bs.with_reflectivity(r)?;
            Ok((r, run_exact(&c.with_bs(bs)).success_probability))
        })
        .collect()
}

/// Probabilities of every detection record, exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeProbabilities<S> {
    /// One photon at `D₁`, none at `D₂`.
    pub d1: S,
    /// One photon at `D₂`, none at `D₁`.
    pub d2: S,
    /// No photon in either weak mode.
    pub no_click: S,
    /// Two or more photons in the weak modes.
    pub multi_photon: S,
}

impl<S: Real> OutcomeProbabilities<S> {
    pub fn total(&self) -> S {
        self.d1 + self.d2 + self.no_click + self.multi_photon
    }
}

/// Full decomposition of the detection statistics.
///
/// `d1`, `d2` come from the projected states; `no_click` and `multi_photon`
/// come from the weak-mode photon distribution of the two arms, so their sum
/// checks the mixing splitter's unitarity in the one-photon sector.
pub fn outcome_probabilities<S: Real>(c: &ProtocolConfig<S>) -> OutcomeProbabilities<S> {
    let arm1 = apply_bs_exact(&c.psi1, &c.bs);
    let arm2 = apply_bs_exact(&c.psi2, &c.bs);
    let p1 = arm1.weak_photon_distribution();
    let p2 = arm2.weak_photon_distribution();
    let mut no_click = S::zero();
    let mut multi_photon = S::zero();
    for (k1, a) in p1.iter().enumerate() {
        for (k2, b) in p2.iter().enumerate() {
            match k1 + k2 {
                0 => no_click = no_click + *a * *b,
                1 => {}
                _ => multi_photon = multi_photon + *a * *b,
            }
        }
    }
    OutcomeProbabilities {
        d1: exact_from_arms(&arm1, &arm2, c.gamma, Detector::D1).success_probability,
        d2: exact_from_arms(&arm1, &arm2, c.gamma, Detector::D2).success_probability,
        no_click,
        multi_photon,
    }
}

/// Heralded ensemble for on/off detectors: the clicked detector received one
/// or more photons, the other none. `branches[j]` holds the unnormalized
/// state for `j + 1` photons; the ensemble is their incoherent mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdOutcome<S> {
    pub branches: Vec<BipartiteState<S>>,
    pub success_probability: S,
}

impl<S: Real> ThresholdOutcome<S> {
    /// `⟨ψ|ρ|ψ⟩` for the normalized mixture `ρ` and a pure state `ψ`.
    pub fn fidelity_with(&self, pure: &BipartiteState<S>) -> S {
        if self.success_probability <= S::zero() {
            return S::zero();
        }
        let norm = pure.norm_sqr();
        let overlap = self
            .branches
            .iter()
            .fold(S::zero(), |acc, b| acc + pure.inner(b).norm_sqr());
        overlap / (norm * self.success_probability)
    }

    /// Fraction of the heralded probability carried by one-photon events.
    pub fn single_photon_fraction(&self) -> S {
        match self.branches.first() {
            Some(b) if self.success_probability > S::zero() => {
                b.norm_sqr() / self.success_probability
            }
            _ => S::zero(),
        }
    }
}

/// Exact heralded ensemble under on/off detection.
pub fn run_exact_threshold<S: Real>(c: &ProtocolConfig<S>) -> ThresholdOutcome<S> {
    let arm1 = apply_bs_exact(&c.psi1, &c.bs);
    let arm2 = apply_bs_exact(&c.psi2, &c.bs);
    let max_total = arm1.weak_max() + arm2.weak_max();
    let lf = LnFactorials::new(max_total.max(1));
    let p1 = arm1.weak_photon_distribution();
    let p2 = arm2.weak_photon_distribution();
    let mut branches = Vec::with_capacity(max_total);
    let mut success_probability = S::zero();
    for total in 1..=max_total {
        // skip photon numbers the arms cannot supply together
        let supplied = (0..=total)
            .filter(|k1| *k1 < p1.len() && total - k1 < p2.len())
            .any(|k1| !(p1[k1] * p2[total - k1]).is_zero());
        let branch = if supplied {
            detector_branch(&arm1, &arm2, total, c.gamma, c.detector, &lf)
        } else {
            BipartiteState::zeros((1, 1))
        };
        success_probability = success_probability + branch.norm_sqr();
        branches.push(branch);
    }
    ThresholdOutcome {
        branches,
        success_probability,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncationConfig;
    use crate::states::{make_even_cat, make_fock, CoherentParams};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn cfg() -> TruncationConfig {
        TruncationConfig::default()
    }

    fn fock(n: usize) -> SingleModeState<f64> {
        make_fock(n, &cfg()).unwrap()
    }

    fn config(
        psi1: SingleModeState<f64>,
        psi2: SingleModeState<f64>,
        r: f64,
        gamma: f64,
        d: Detector,
    ) -> ProtocolConfig<f64> {
        let bs = BeamSplitterParams::from_reflectivity(r, 0.4).unwrap();
        ProtocolConfig::new(psi1, psi2, bs, gamma, d).unwrap()
    }

    fn expected_fock_state(n: usize, m: usize, gamma: f64, d: Detector) -> BipartiteState<f64> {
        let first = tensor(&fock(n - 1), &fock(m)).scale(Complex::new((n as f64).sqrt(), 0.0));
        let rel =
            Complex::new(0.0, d.relative_sign::<f64>()) * Complex::new(gamma.cos(), gamma.sin());
        let second = tensor(&fock(n), &fock(m - 1)).scale(Complex::new((m as f64).sqrt(), 0.0));
        first.add_scaled(rel, &second)
    }

    #[test]
    fn number_state_inputs() {
        for d in [Detector::D1, Detector::D2] {
            for (n, m) in [(1, 1), (2, 1), (3, 2)] {
                let out = run_analytic(&config(fock(n), fock(m), 0.05, 0.7, d));
                let want = expected_fock_state(n, m, 0.7, d);
                assert_abs_diff_eq!(
                    out.normalized_state.unwrap().fidelity(&want),
                    1.0,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn vacuum_inputs_have_zero_probability() {
        let c = config(fock(0), fock(0), 0.05, 0.0, Detector::D1);
        for out in [run_analytic(&c), run_exact(&c)] {
            assert!(out.is_zero_probability());
            assert_eq!(out.success_probability, 0.0);
            assert!(out.require_state().is_err());
        }
        let scaling = success_probability_scaling(&c, &[0.01, 0.05]).unwrap();
        assert!(scaling.iter().all(|(_, p)| *p == 0.0));
    }

    #[test]
    fn rejects_unnormalized_inputs() {
        let half = SingleModeState::from_amplitudes(vec![Complex::new(0.5, 0.0)]).unwrap();
        let bs = BeamSplitterParams::from_reflectivity(0.1, 0.0).unwrap();
        assert!(matches!(
            ProtocolConfig::new(half, fock(1), bs, 0.0, Detector::D1),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn single_photons_give_bell_state() {
        for d in [Detector::D1, Detector::D2] {
            let gamma = 1.1;
            let out = run_exact(&config(fock(1), fock(1), 0.05, gamma, d));
            let want = expected_fock_state(1, 1, gamma, d);
            assert_abs_diff_eq!(
                out.normalized_state.unwrap().fidelity(&want),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn exact_projection_agrees_with_analytic_form() {
        let cat = make_even_cat(&CoherentParams::real(1.0).unwrap(), &cfg()).unwrap();
        for d in [Detector::D1, Detector::D2] {
            let c = config(cat.clone(), fock(2), 0.1, 0.3, d);
            let (a, e) = (run_analytic(&c), run_exact(&c));
            assert!(a.infidelity(&e) < 1e-12);
            assert_abs_diff_eq!(
                a.success_probability,
                e.success_probability,
                epsilon = 1e-15
            );
            // same global phase convention as well
            let diff = a.state.add_scaled(Complex::new(-1.0, 0.0), &e.state).norm();
            assert!(diff < 1e-14, "difference {diff}");
        }
    }

    #[test]
    fn success_probability_for_single_photons() {
        // p = R² T²: one photon must reflect, the other must not
        let c = config(fock(1), fock(1), 0.05, 0.0, Detector::D1);
        let pts = success_probability_scaling(&c, &[0.01, 0.05, 0.1]).unwrap();
        for (r, p) in pts {
            assert_abs_diff_eq!(p, r * r * (1.0 - r * r), epsilon = 1e-15);
        }
    }

    #[test]
    fn probabilities_decompose() {
        let cat = make_even_cat(&CoherentParams::real(1.2).unwrap(), &cfg()).unwrap();
        let c = config(cat, fock(3), 0.15, 2.0, Detector::D2);
        let probs = outcome_probabilities(&c);
        let expected = c.psi1.norm_sqr() * c.psi2.norm_sqr();
        assert_abs_diff_eq!(probs.total(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(probs.total(), 1.0, epsilon = 1e-10);
        assert!(probs.d1 > 0.0 && probs.d2 > 0.0);
    }

    #[test]
    fn detector_swap_with_gamma_shift() {
        let cat = make_even_cat(&CoherentParams::real(0.8).unwrap(), &cfg()).unwrap();
        let c1 = config(cat.clone(), fock(2), 0.1, 0.9, Detector::D1);
        let c2 = c1.with_detector(Detector::D2, 0.9 + PI);
        let (a, b) = (run_exact(&c1), run_exact(&c2));
        assert_abs_diff_eq!(
            a.normalized_state
                .unwrap()
                .fidelity(&b.normalized_state.unwrap()),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn gamma_is_two_pi_periodic() {
        let c = config(fock(2), fock(1), 0.1, FRAC_PI_2, Detector::D1);
        let shifted = c.with_detector(Detector::D1, FRAC_PI_2 + 2.0 * PI);
        let (a, b) = (run_analytic(&c).state, run_analytic(&shifted).state);
        let diff = a.add_scaled(Complex::new(-1.0, 0.0), &b).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn threshold_detection_adds_multi_photon_events() {
        let c = config(fock(1), fock(1), 0.1, 0.0, Detector::D1);
        let t = run_exact_threshold(&c);
        let exact = run_exact(&c);
        assert_abs_diff_eq!(
            t.branches[0].norm_sqr(),
            exact.success_probability,
            epsilon = 1e-15
        );
        // both photons reflected: HOM pairs them on one detector with prob. 1/2
        let r2 = 0.01;
        assert_abs_diff_eq!(t.branches[1].norm_sqr(), 0.5 * r2 * r2, epsilon = 1e-15);
        let infidelity = 1.0 - t.fidelity_with(exact.normalized_state.as_ref().unwrap());
        let fraction = 1.0 - t.single_photon_fraction();
        assert_abs_diff_eq!(infidelity, fraction, epsilon = 1e-15);
    }

    #[test]
    fn parse_detector() {
        assert_eq!("d1".parse::<Detector>().unwrap(), Detector::D1);
        assert_eq!("D2".parse::<Detector>().unwrap(), Detector::D2);
        assert!("D3".parse::<Detector>().is_err());
    }
}
