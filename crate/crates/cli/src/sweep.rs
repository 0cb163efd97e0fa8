//! Parameter sweeps.

use clap::ValueEnum;
use entangler::{Error, TruncationConfig};
use rayon::prelude::*;

use crate::run::{measure, Measurement};
use crate::scenario::Point;
use crate::table::{num, Table};

pub const SCHEMA: &str = "entangler-sweep/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Parameter {
    #[value(name = "R")]
    Reflectivity,
    Gamma,
    Alpha,
    R,
    N,
    #[value(name = "t_alpha", alias = "t-alpha")]
    TAlpha,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Reflectivity => "R",
            Parameter::Gamma => "gamma",
            Parameter::Alpha => "alpha",
            Parameter::R => "r",
            Parameter::N => "n",
            Parameter::TAlpha => "t_alpha",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    #[value(name = "concurrence_analytic")]
    ConcurrenceAnalytic,
    #[value(name = "concurrence_exact")]
    ConcurrenceExact,
    #[value(name = "success_probability")]
    SuccessProbability,
    #[value(name = "infidelity")]
    Infidelity,
}

impl Output {
    pub const ALL: [Output; 4] = [
        Output::ConcurrenceAnalytic,
        Output::ConcurrenceExact,
        Output::SuccessProbability,
        Output::Infidelity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::ConcurrenceAnalytic => "concurrence_analytic",
            Output::ConcurrenceExact => "concurrence_exact",
            Output::SuccessProbability => "success_probability",
            Output::Infidelity => "infidelity",
        }
    }

    fn pick(self, m: &Measurement) -> f64 {
        match self {
            Output::ConcurrenceAnalytic => m.concurrence_analytic,
            Output::ConcurrenceExact => m.concurrence_exact,
            Output::SuccessProbability => m.success_probability,
            Output::Infidelity => m.infidelity,
        }
    }
}

impl std::fmt::Display for Output {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub fixed: Point,
    pub outputs: Vec<Output>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        let ordered = self.start < self.stop;
        if !ordered {
            return Err(format!(
                "sweep needs start < stop, got {} and {}",
                self.start, self.stop
            ));
        }
        if self.steps < 2 {
            return Err(format!("sweep needs at least 2 steps, got {}", self.steps));
        }
        if self.outputs.is_empty() {
            return Err("sweep needs at least one output".into());
        }
        if self.parameter == Parameter::N
            && (self.start < 0.0 || self.start.fract() != 0.0 || self.stop.fract() != 0.0)
        {
            return Err("an n sweep needs nonnegative integer bounds".into());
        }
        Ok(())
    }

    /// Grid values; an `n` sweep is rounded to distinct integers.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        let mut v: Vec<f64> = (0..self.steps)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / last)
            .collect();
        if self.parameter == Parameter::N {
            v.iter_mut().for_each(|x| *x = x.round());
            v.dedup();
        }
        v
    }

    pub fn point(&self, value: f64) -> Point {
        let mut p = self.fixed;
        match self.parameter {
            Parameter::Reflectivity => p.reflectivity = value,
            Parameter::Gamma => p.gamma = value,
            Parameter::Alpha => p.alpha = value,
            Parameter::R => p.r = value,
            Parameter::N => p.n = value as usize,
            Parameter::TAlpha => p.alpha = value / p.transmission(),
        }
        p
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = [
            "family", "n", "m", "alpha", "t_alpha", "r", "theta", "R", "phi", "gamma", "detector",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        h.extend(self.outputs.iter().map(|o| o.name().to_string()));
        h
    }
}

/// Evaluates every grid point in parallel; rows come out in grid order.
pub fn run_sweep(spec: &SweepSpec, cfg: &TruncationConfig) -> Result<Table, Error> {
    let mut results: Vec<(f64, Point, Measurement)> = spec
        .values()
        .into_par_iter()
        .map(|v| {
            let p = spec.point(v);
            measure(&p, cfg).map(|m| (v, p, m))
        })
        .collect::<Result<_, _>>()?;
    results.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut table = Table::new(SCHEMA, spec.header());
    for (_, p, m) in &results {
        let mut row = vec![
            p.family.to_string(),
            p.n.to_string(),
            p.m.to_string(),
            num(p.alpha),
            num(p.t_alpha()),
            num(p.r),
            num(p.theta),
            num(p.reflectivity),
            num(p.phi),
            num(p.gamma),
            p.detector.to_string(),
        ];
        row.extend(spec.outputs.iter().map(|o| num(o.pick(m))));
        table.push(row);
    }
    Ok(table)
}
