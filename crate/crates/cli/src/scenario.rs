//! Input families selectable from the command line.

use std::fmt;

use clap::{Args, ValueEnum};
use entangler::{Complex, Detector, Example, ExampleInputs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Fock,
    EvenCat,
    OddCat,
    SqueezedVacuum,
    Hybrid,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(
            self.to_possible_value()
                .expect("no skipped variants")
                .get_name(),
        )
    }
}

/// Family parameters. Which of them are required depends on the family.
#[derive(Clone, Debug, Default, Args)]
pub struct FamilyParams {
    /// Photon number of the first arm
    #[arg(long)]
    pub n: Option<usize>,
    /// Photon number of the second arm (fock)
    #[arg(long)]
    pub m: Option<usize>,
    /// Coherent amplitude of the cat component (real)
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Squeeze parameter
    #[arg(long)]
    pub r: Option<f64>,
    /// Squeeze phase [default: 0]
    #[arg(long, value_parser = crate::angle::parse_angle, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Transmitted cat amplitude |Tα| (hybrid); overrides --alpha
    #[arg(long = "t-alpha")]
    pub t_alpha: Option<f64>,
}

/// Fully resolved parameters of one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub r: f64,
    pub theta: f64,
    pub reflectivity: f64,
    pub phi: f64,
    pub gamma: f64,
    pub detector: Detector,
}

impl Point {
    pub fn transmission(&self) -> f64 {
        (1.0 - self.reflectivity * self.reflectivity).sqrt()
    }

    pub fn t_alpha(&self) -> f64 {
        self.alpha * self.transmission()
    }

    pub fn example(&self) -> Example {
        let alpha = Complex::new(self.alpha, 0.0);
        let inputs = match self.family {
            Family::Fock => ExampleInputs::Fock {
                n: self.n,
                m: self.m,
            },
            Family::EvenCat => ExampleInputs::EvenCat { alpha },
            Family::OddCat => ExampleInputs::OddCat { alpha },
            Family::SqueezedVacuum => ExampleInputs::SqueezedVacuum {
                r: self.r,
                theta: self.theta,
            },
            Family::Hybrid => ExampleInputs::Hybrid { n: self.n, alpha },
        };
        Example::new(inputs, self.gamma, self.detector)
    }
}

fn need<T>(v: Option<T>, flag: &str, family: Family) -> Result<T, String> {
    v.ok_or_else(|| format!("{family} requires --{flag}"))
}

/// Checks that `params` carries what `family` needs and resolves the rest.
/// A `|Tα|` given for the hybrid family is converted with the transmission
/// of `reflectivity`.
pub fn resolve(
    family: Family,
    params: &FamilyParams,
    reflectivity: f64,
    phi: f64,
    gamma: f64,
    detector: Detector,
) -> Result<Point, String> {
    let mut p = Point {
        family,
        n: 0,
        m: 0,
        alpha: 0.0,
        r: 0.0,
        theta: params.theta.unwrap_or(0.0),
        reflectivity,
        phi,
        gamma,
        detector,
    };
    match family {
        Family::Fock => {
            p.n = need(params.n, "n", family)?;
            p.m = need(params.m, "m", family)?;
        }
        Family::EvenCat | Family::OddCat => p.alpha = need(params.alpha, "alpha", family)?,
        Family::SqueezedVacuum => p.r = need(params.r, "r", family)?,
        Family::Hybrid => {
            p.n = need(params.n, "n", family)?;
            p.alpha = match (params.t_alpha, params.alpha) {
                (Some(ta), _) => ta / p.transmission(),
                (None, Some(a)) => a,
                (None, None) => return Err("hybrid requires --t-alpha or --alpha".into()),
            };
        }
    }
    Ok(p)
}
