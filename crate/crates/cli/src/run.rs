//! Evaluation of a single parameter point.

use entangler::{
    concurrence_general, concurrence_oracle, run_analytic, run_exact, weak_split, BeamSplitter,
    ConcurrenceInputs, Error, Protocol, TruncationConfig,
};

use crate::scenario::Point;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub success_probability: f64,
    pub success_probability_analytic: f64,
    /// Closed form from the weak splits; NaN when nothing is heralded.
    pub concurrence_analytic: f64,
    /// Oracle on the exactly projected state; NaN when nothing is heralded.
    pub concurrence_exact: f64,
    /// `1 − F` between the exact and analytic heralded states.
    pub infidelity: f64,
}

pub fn splitter(p: &Point) -> Result<BeamSplitter, Error> {
    BeamSplitter::from_reflectivity(p.reflectivity, p.phi)
}

pub fn protocol(p: &Point, cfg: &TruncationConfig) -> Result<Protocol, Error> {
    p.example().protocol_config(splitter(p)?, cfg)
}

pub fn measure(p: &Point, cfg: &TruncationConfig) -> Result<Measurement, Error> {
    let c = protocol(p, cfg)?;
    let analytic = run_analytic(&c);
    let exact = run_exact(&c);
    let mut m = Measurement {
        success_probability: exact.success_probability,
        success_probability_analytic: analytic.success_probability,
        concurrence_analytic: f64::NAN,
        concurrence_exact: f64::NAN,
        infidelity: f64::NAN,
    };
    if analytic.is_zero_probability() || exact.is_zero_probability() {
        return Ok(m);
    }
    let w1 = weak_split(&c.psi1, &c.bs);
    let w2 = weak_split(&c.psi2, &c.bs);
    let inputs = ConcurrenceInputs::from_weak_splits(&w1, &w2, c.gamma, c.detector)?;
    m.concurrence_analytic = concurrence_general(&inputs)?;
    m.concurrence_exact = concurrence_oracle(exact.require_state()?)?;
    m.infidelity = exact.infidelity(&analytic);
    Ok(m)
}
