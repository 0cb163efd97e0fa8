//! Named input scenarios with closed-form heralded states and concurrences:
//! number-state inputs, identical cat inputs, identical squeezed vacua, and
//! a number state paired with an even cat.

use num_complex::Complex;
use num_traits::Zero;

use crate::beam_splitter::{weak_split, BeamSplitterParams};
use crate::entanglement::{concurrence_general, concurrence_oracle, ConcurrenceInputs};
use crate::error::{domain, Error, Result};
use crate::fock::{apply_annihilation, tensor, BipartiteState, SingleModeState, TruncationConfig};
use crate::protocol::{analytic_from_splits, run_exact, Detector, ProtocolConfig};
use crate::scalar::{imag_unit, phase, Real};
use crate::states::{
    make_even_cat, make_fock, make_odd_cat, make_squeezed_vacuum, CoherentParams, SqueezeParams,
};

/// Input pair fed to the two arms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExampleInputs<S> {
    /// `|n⟩` and `|m⟩`.
    Fock { n: usize, m: usize },
    /// Even cat `|α⟩ᵉ` on both arms.
    EvenCat { alpha: Complex<S> },
    /// Odd cat `|α⟩ᵒ` on both arms.
    OddCat { alpha: Complex<S> },
    /// Squeezed vacuum `|SV(r)⟩` on both arms.
    SqueezedVacuum { r: S, theta: S },
    /// `|n⟩` on the first arm, `|α⟩ᵉ` on the second.
    Hybrid { n: usize, alpha: Complex<S> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExampleSpec<S> {
    pub inputs: ExampleInputs<S>,
    pub gamma: S,
    pub detector: Detector,
}

impl<S: Real> ExampleSpec<S> {
    pub fn new(inputs: ExampleInputs<S>, gamma: S, detector: Detector) -> Self {
        Self {
            inputs,
            gamma,
            detector,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.inputs {
            ExampleInputs::Fock { .. } => "fock",
            ExampleInputs::EvenCat { .. } => "even-cat",
            ExampleInputs::OddCat { .. } => "odd-cat",
            ExampleInputs::SqueezedVacuum { .. } => "squeezed-vacuum",
            ExampleInputs::Hybrid { .. } => "hybrid",
        }
    }

    /// Normalized input states of both arms.
    pub fn input_states(
        &self,
        cfg: &TruncationConfig,
    ) -> Result<(SingleModeState<S>, SingleModeState<S>)> {
        Ok(match self.inputs {
            ExampleInputs::Fock { n, m } => (make_fock(n, cfg)?, make_fock(m, cfg)?),
            ExampleInputs::EvenCat { alpha } => {
                let s = make_even_cat(&CoherentParams::new(alpha)?, cfg)?;
                (s.clone(), s)
            }
            ExampleInputs::OddCat { alpha } => {
                let s = make_odd_cat(&CoherentParams::new(alpha)?, cfg)?;
                (s.clone(), s)
            }
            ExampleInputs::SqueezedVacuum { r, theta } => {
                let s = make_squeezed_vacuum(&SqueezeParams::new(r, theta)?, cfg)?;
                (s.clone(), s)
            }
            ExampleInputs::Hybrid { n, alpha } => (
                make_fock(n, cfg)?,
                make_even_cat(&CoherentParams::new(alpha)?, cfg)?,
            ),
        })
    }

    pub fn protocol_config(
        &self,
        bs: BeamSplitterParams<S>,
        cfg: &TruncationConfig,
    ) -> Result<ProtocolConfig<S>> {
        let (psi1, psi2) = self.input_states(cfg)?;
        ProtocolConfig::new(psi1, psi2, bs, self.gamma, self.detector)
    }

    fn relative(&self) -> Complex<S> {
        imag_unit::<S>() * phase(self.gamma) * self.detector.relative_sign::<S>()
    }
}

fn zero_probability(what: &str) -> Error {
    Error::ZeroProbability(format!("{what}: no photon can reach the detectors"))
}

/// `first ⊗ second`-type two-term state `a + rel·b`, normalized.
fn two_term<S: Real>(
    a: BipartiteState<S>,
    rel: Complex<S>,
    b: BipartiteState<S>,
) -> Result<BipartiteState<S>> {
    a.add_scaled(rel, &b).normalize()
}

/// Closed-form normalized heralded state for transmission `t`.
pub fn expected_state<S: Real>(
    e: &ExampleSpec<S>,
    t: S,
    cfg: &TruncationConfig,
) -> Result<BipartiteState<S>> {
    if !(t > S::zero() && t <= S::one()) {
        return Err(domain(format!("transmission must lie in (0, 1], got {t}")));
    }
    let rel = e.relative();
    let real = |x: S| Complex::new(x, S::zero());
    match e.inputs {
        ExampleInputs::Fock { n, m } => {
            if n + m == 0 {
                return Err(zero_probability("vacuum inputs"));
            }
            let first = match n {
                0 => BipartiteState::zeros((1, m + 1)),
                _ => tensor(&make_fock(n - 1, cfg)?, &make_fock(m, cfg)?)
                    .scale(real(S::count(n).sqrt())),
            };
            let second = match m {
                0 => BipartiteState::zeros((n + 1, 1)),
                _ => tensor(&make_fock(n, cfg)?, &make_fock(m - 1, cfg)?)
                    .scale(real(S::count(m).sqrt())),
            };
            two_term(first, rel, second)
        }
        ExampleInputs::EvenCat { alpha } | ExampleInputs::OddCat { alpha } => {
            if alpha.is_zero() {
                return match e.inputs {
                    ExampleInputs::EvenCat { .. } => {
                        Err(zero_probability("even cat with alpha = 0"))
                    }
                    _ => Err(domain("odd coherent state is undefined for alpha = 0")),
                };
            }
            let ta = CoherentParams::new(alpha * t)?;
            let even = make_even_cat(&ta, cfg)?;
            let odd = make_odd_cat(&ta, cfg)?;
            match e.inputs {
                ExampleInputs::EvenCat { .. } => {
                    two_term(tensor(&odd, &even), rel, tensor(&even, &odd))
                }
                _ => two_term(tensor(&even, &odd), rel, tensor(&odd, &even)),
            }
        }
        ExampleInputs::SqueezedVacuum { r, theta } => {
            if r.is_zero() {
                return Err(zero_probability("squeezed vacuum with r = 0"));
            }
            let reduced = SqueezeParams::new(reduced_squeeze(r, t), theta)?;
            let sv = make_squeezed_vacuum(&reduced, cfg)?;
            let lowered = apply_annihilation(&sv);
            two_term(tensor(&lowered, &sv), rel, tensor(&sv, &lowered))
        }
        ExampleInputs::Hybrid { n, alpha } => {
            let ta = alpha * t;
            let x = ta.norm_sqr();
            if n == 0 && ta.is_zero() {
                return Err(zero_probability("vacuum inputs"));
            }
            let even = make_even_cat(&CoherentParams::new(ta)?, cfg)?;
            let first = match n {
                0 => BipartiteState::zeros((1, 1)),
                _ => tensor(&make_fock(n - 1, cfg)?, &even)
                    .scale(real((S::count(n) * x.cosh()).sqrt())),
            };
            let second = if ta.is_zero() {
                BipartiteState::zeros((1, 1))
            } else {
                let odd = make_odd_cat(&CoherentParams::new(ta)?, cfg)?;
                tensor(&make_fock(n, cfg)?, &odd).scale(ta * x.sinh().sqrt())
            };
            two_term(first, rel, second)
        }
    }
}

/// `r̄` with `tanh r̄ = T² tanh r`.
pub fn reduced_squeeze<S: Real>(r: S, t: S) -> S {
    (t * t * r.tanh()).atanh()
}

/// Concurrence of the hybrid number/even-cat heralded state at `x = |Tα|²`:
/// `2|Tα|√(n sinh x cosh x) / (x sinh x + n cosh x)`.
pub fn hybrid_concurrence<S: Real>(n: usize, t_alpha_mag: S) -> Result<S> {
    let x = t_alpha_mag * t_alpha_mag;
    let k = S::count(n);
    let denominator = x * x.sinh() + k * x.cosh();
    if denominator.is_zero() {
        return Err(zero_probability("vacuum inputs"));
    }
    Ok(S::lit(2.0) * t_alpha_mag * (k * x.sinh() * x.cosh()).sqrt() / denominator)
}

/// Closed-form concurrence for transmission `t`. Every scenario has
/// orthogonal `|U⟩`, `|V⟩`, so none of these depends on `γ` or the detector.
pub fn expected_concurrence<S: Real>(e: &ExampleSpec<S>, t: S) -> Result<S> {
    match e.inputs {
        ExampleInputs::Fock { n, m } => {
            if n + m == 0 {
                return Err(zero_probability("vacuum inputs"));
            }
            Ok(S::lit(2.0) * S::count(n * m).sqrt() / S::count(n + m))
        }
        ExampleInputs::EvenCat { alpha } => {
            if alpha.is_zero() {
                Err(zero_probability("even cat with alpha = 0"))
            } else {
                Ok(S::one())
            }
        }
        ExampleInputs::OddCat { alpha } => {
            if alpha.is_zero() {
                Err(domain("odd coherent state is undefined for alpha = 0"))
            } else {
                Ok(S::one())
            }
        }
        ExampleInputs::SqueezedVacuum { r, .. } => {
            if r.is_zero() {
                Err(zero_probability("squeezed vacuum with r = 0"))
            } else {
                Ok(S::one())
            }
        }
        ExampleInputs::Hybrid { n, alpha } => hybrid_concurrence(n, (alpha * t).norm()),
    }
}

/// Pass thresholds for [`check_example`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckTolerances {
    /// `1 − F` bound between the analytic heralded state and the closed form.
    pub analytic_infidelity: f64,
    /// `1 − F` bound for the exact projection, per unit `R²`.
    pub exact_infidelity_per_r2: f64,
    /// Absolute concurrence error on the analytic path.
    pub concurrence: f64,
    /// Absolute concurrence error of the oracle on the exact path.
    pub exact_concurrence: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            analytic_infidelity: 1e-10,
            exact_infidelity_per_r2: 1.0,
            concurrence: 1e-9,
            exact_concurrence: 1e-8,
        }
    }
}

/// One numbered check inside an [`ExampleReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct CheckEntry {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckEntry {
    fn abs(name: &'static str, value: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            expected,
            tolerance,
            passed: (value - expected).abs() <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExampleReport {
    pub example: &'static str,
    pub reflectivity: f64,
    pub gamma: f64,
    pub detector: Detector,
    pub success_probability_analytic: f64,
    pub success_probability_exact: f64,
    pub concurrence_expected: Option<f64>,
    pub concurrence_analytic: Option<f64>,
    pub concurrence_exact: Option<f64>,
    pub entries: Vec<CheckEntry>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

impl std::fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "example {} (R = {}, gamma = {}, detector = {})",
            self.example, self.reflectivity, self.gamma, self.detector
        )?;
        writeln!(
            f,
            "  success probability: analytic {:.6e}, exact {:.6e}",
            self.success_probability_analytic, self.success_probability_exact
        )?;
        let show = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.12}"));
        writeln!(
            f,
            "  concurrence: expected {}, analytic {}, exact {}",
            show(self.concurrence_expected),
            show(self.concurrence_analytic),
            show(self.concurrence_exact)
        )?;
        for e in &self.entries {
            writeln!(
                f,
                "  [{}] {:<28} value {:.3e}  expected {:.3e}  tol {:.1e}",
                if e.passed { "PASS" } else { "FAIL" },
                e.name,
                e.value,
                e.expected,
                e.tolerance
            )?;
        }
        write!(
            f,
            "  overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Runs both heralding paths for a scenario and compares them with the
/// closed forms.
pub fn check_example<S: Real>(
    e: &ExampleSpec<S>,
    bs: &BeamSplitterParams<S>,
    cfg: &TruncationConfig,
    tol: &CheckTolerances,
) -> Result<ExampleReport> {
    let c = e.protocol_config(*bs, cfg)?;
    let w1 = weak_split(&c.psi1, bs);
    let w2 = weak_split(&c.psi2, bs);
    let analytic = analytic_from_splits(&w1, &w2, bs, e.gamma, e.detector);
    let exact = run_exact(&c);
    let r = bs.reflectivity().as_f64();
    let mut report = ExampleReport {
        example: e.name(),
        reflectivity: r,
        gamma: e.gamma.as_f64(),
        detector: e.detector,
        success_probability_analytic: analytic.success_probability.as_f64(),
        success_probability_exact: exact.success_probability.as_f64(),
        concurrence_expected: None,
        concurrence_analytic: None,
        concurrence_exact: None,
        entries: Vec::new(),
    };

    let expected = match expected_state(e, bs.transmission(), cfg) {
        Ok(s) => s,
        Err(Error::ZeroProbability(_)) => {
            report.entries.push(CheckEntry::abs(
                "zero-probability outcome",
                (analytic.success_probability + exact.success_probability).as_f64(),
                0.0,
                0.0,
            ));
            return Ok(report);
        }
        Err(err) => return Err(err),
    };
    let (Some(a_state), Some(x_state)) = (&analytic.normalized_state, &exact.normalized_state)
    else {
        report.entries.push(CheckEntry::abs(
            "nonzero success probability",
            0.0,
            1.0,
            0.0,
        ));
        return Ok(report);
    };

    let c_expected = expected_concurrence(e, bs.transmission())?.as_f64();
    let inputs = ConcurrenceInputs::from_weak_splits(&w1, &w2, e.gamma, e.detector)?;
    let c_analytic = concurrence_general(&inputs)?.as_f64();
    let c_exact = concurrence_oracle(x_state)?.as_f64();
    report.concurrence_expected = Some(c_expected);
    report.concurrence_analytic = Some(c_analytic);
    report.concurrence_exact = Some(c_exact);

    let one = S::one();
    report.entries.extend([
        CheckEntry::abs(
            "analytic infidelity",
            (one - a_state.fidelity(&expected)).as_f64(),
            0.0,
            tol.analytic_infidelity,
        ),
        CheckEntry::abs(
            "exact infidelity",
            (one - x_state.fidelity(&expected)).as_f64(),
            0.0,
            tol.analytic_infidelity
                .max(tol.exact_infidelity_per_r2 * r * r),
        ),
        CheckEntry::abs(
            "analytic concurrence",
            c_analytic,
            c_expected,
            tol.concurrence,
        ),
        CheckEntry::abs(
            "exact concurrence (oracle)",
            c_exact,
            c_expected,
            tol.exact_concurrence,
        ),
    ]);
    Ok(report)
}
