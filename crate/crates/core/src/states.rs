//! Input-state families: number, coherent, even/odd coherent (cat) and
//! squeezed vacuum states.
//!
//! Coefficients are evaluated in log space so that `√((2n)!)`-type factors
//! stay finite up to `n_max_cap`. Each constructor evaluates its family up to
//! the cap, then keeps the shortest prefix whose tail mass is below
//! `epsilon_tail`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{domain, Result};
use crate::fock::{SingleModeState, TruncationConfig};
use crate::scalar::{is_finite, ln_cosh, ln_sinh, phase, LnFactorials, Real};

/// Coherent amplitude `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentParams<S> {
    pub alpha: Complex<S>,
}

impl<S: Real> CoherentParams<S> {
    pub fn new(alpha: Complex<S>) -> Result<Self> {
        if !is_finite(&alpha) {
            return Err(domain("coherent amplitude must be finite"));
        }
        Ok(Self { alpha })
    }

    pub fn real(alpha: S) -> Result<Self> {
        Self::new(Complex::new(alpha, S::zero()))
    }
}

/// Squeeze parameter `r ≥ 0` and squeeze phase `Θ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeParams<S> {
    r: S,
    theta: S,
}

impl<S: Real> SqueezeParams<S> {
    pub fn new(r: S, theta: S) -> Result<Self> {
        if !(r.is_finite() && r >= S::zero()) {
            return Err(domain(format!(
                "squeeze parameter must be finite and >= 0, got {r}"
            )));
        }
        if !theta.is_finite() {
            return Err(domain("squeeze phase must be finite"));
        }
        if r.tanh() >= S::one() {
            return Err(domain("tanh r rounds to 1; squeezing too strong"));
        }
        let two_pi = S::TAU();
        let theta = ((theta % two_pi) + two_pi) % two_pi;
        Ok(Self { r, theta })
    }

    pub fn r(&self) -> S {
        self.r
    }

    pub fn theta(&self) -> S {
        self.theta
    }

    /// `Γ = e^{iΘ} tanh r`.
    pub fn gamma(&self) -> Complex<S> {
        phase(self.theta) * self.r.tanh()
    }
}

/// Evaluates `f_n = exp(ln_mag(n)) e^{i arg(n)}` for `n ≤ cap`, then truncates.
/// `term` returns `None` for identically-zero amplitudes.
fn build_family<S: Real>(
    cfg: &TruncationConfig,
    term: impl Fn(usize) -> Option<(S, S)>,
) -> Result<SingleModeState<S>> {
    let amplitudes: Vec<Complex<S>> = (0..=cfg.n_max_cap)
        .map(|n| match term(n) {
            Some((ln_mag, arg)) => phase(arg) * ln_mag.exp(),
            None => Complex::zero(),
        })
        .collect();
    let probabilities: Vec<S> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let cutoff = cfg.select_cutoff(&probabilities)?;
    let mut amplitudes = amplitudes;
    amplitudes.truncate(cutoff + 1);
    Ok(SingleModeState::from_constructor(amplitudes))
}

/// Number state `|n⟩`.
pub fn make_fock<S: Real>(n: usize, cfg: &TruncationConfig) -> Result<SingleModeState<S>> {
    if n > cfg.n_max_cap {
        return Err(domain(format!(
            "photon number {n} exceeds n_max_cap = {}",
            cfg.n_max_cap
        )));
    }
    let mut amplitudes = vec![Complex::zero(); n + 1];
    amplitudes[n] = Complex::new(S::one(), S::zero());
    Ok(SingleModeState::from_constructor(amplitudes))
}

/// Coherent state `f_n = e^{-|α|²/2} αⁿ/√(n!)`.
pub fn make_coherent<S: Real>(
    p: &CoherentParams<S>,
    cfg: &TruncationConfig,
) -> Result<SingleModeState<S>> {
    if p.alpha.is_zero() {
        return Ok(SingleModeState::vacuum());
    }
    let lf = LnFactorials::new(cfg.n_max_cap);
    let (mag, arg) = p.alpha.to_polar();
    let ln_mag = mag.ln();
    let half = S::lit(0.5);
    build_family(cfg, |n| {
        let k = S::count(n);
        Some((-half * mag * mag + k * ln_mag - half * lf.get(n), k * arg))
    })
}

/// Even coherent state `∝ |α⟩ + |−α⟩`; `α = 0` gives the vacuum.
pub fn make_even_cat<S: Real>(
    p: &CoherentParams<S>,
    cfg: &TruncationConfig,
) -> Result<SingleModeState<S>> {
    if p.alpha.is_zero() {
        return Ok(SingleModeState::vacuum());
    }
    let lf = LnFactorials::new(cfg.n_max_cap);
    let (mag, arg) = p.alpha.to_polar();
    let ln_norm = -S::lit(0.5) * ln_cosh(mag * mag);
    cat_family(cfg, &lf, mag, arg, ln_norm, 0)
}

/// Odd coherent state `∝ |α⟩ − |−α⟩`. Undefined for `α = 0`.
pub fn make_odd_cat<S: Real>(
    p: &CoherentParams<S>,
    cfg: &TruncationConfig,
) -> Result<SingleModeState<S>> {
    if p.alpha.is_zero() {
        return Err(domain("odd coherent state is undefined for alpha = 0"));
    }
    let lf = LnFactorials::new(cfg.n_max_cap);
    let (mag, arg) = p.alpha.to_polar();
    let ln_norm = -S::lit(0.5) * ln_sinh(mag * mag);
    cat_family(cfg, &lf, mag, arg, ln_norm, 1)
}

fn cat_family<S: Real>(
    cfg: &TruncationConfig,
    lf: &LnFactorials<S>,
    mag: S,
    arg: S,
    ln_norm: S,
    parity: usize,
) -> Result<SingleModeState<S>> {
    let ln_mag = mag.ln();
    let half = S::lit(0.5);
    build_family(cfg, |n| {
        (n % 2 == parity).then(|| {
            let k = S::count(n);
            (ln_norm + k * ln_mag - half * lf.get(n), k * arg)
        })
    })
}

/// Squeezed vacuum `f_{2n} = (cosh r)^{-1/2} (−Γ)ⁿ √((2n)!)/(n! 2ⁿ)`.
pub fn make_squeezed_vacuum<S: Real>(
    p: &SqueezeParams<S>,
    cfg: &TruncationConfig,
) -> Result<SingleModeState<S>> {
    if p.r.is_zero() {
        return Ok(SingleModeState::vacuum());
    }
    let lf = LnFactorials::new(cfg.n_max_cap);
    let half = S::lit(0.5);
    let ln_norm = -half * ln_cosh(p.r);
    let ln_tanh = p.r.tanh().ln();
    // −Γ = e^{i(Θ+π)} tanh r
    let arg = p.theta + S::PI();
    build_family(cfg, |index| {
        (index % 2 == 0).then(|| {
            let n = index / 2;
            let k = S::count(n);
            let ln_mag = ln_norm + k * ln_tanh + half * lf.get(2 * n) - lf.get(n) - k * S::LN_2();
            (ln_mag, k * arg)
        })
    })
}
