//! Scalar abstraction. Every state container and operation in this crate is
//! generic over a real floating-point type `S`; amplitudes are `Complex<S>`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal must be representable")
    }

    /// Converts a count into `Self`.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count must be representable")
    }

    /// Lossy conversion to `f64` for reporting and tolerance comparisons.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Loosest of `floor` and a multiple of machine epsilon, so that
    /// tolerances pinned for `f64` remain meaningful for `f32`.
    fn tolerance(floor: f64) -> Self {
        let eps = Self::epsilon().as_f64() * 1.0e3;
        Self::lit(floor.max(eps))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex photon-number amplitude.
pub type ComplexAmplitude<S> = Complex<S>;

/// `e^{i angle}`.
pub(crate) fn phase<S: Real>(angle: S) -> Complex<S> {
    Complex::new(angle.cos(), angle.sin())
}

pub(crate) fn imag_unit<S: Real>() -> Complex<S> {
    Complex::new(S::zero(), S::one())
}

pub(crate) fn is_finite<S: Real>(z: &Complex<S>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Table of `ln n!` for `n = 0..=max`.
#[derive(Clone, Debug)]
pub(crate) struct LnFactorials<S> {
    table: Vec<S>,
}

impl<S: Real> LnFactorials<S> {
    pub(crate) fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        let mut acc = 0.0f64;
        table.push(S::zero());
        for i in 1..=max {
            acc += (i as f64).ln();
            table.push(S::lit(acc));
        }
        Self { table }
    }

    pub(crate) fn get(&self, n: usize) -> S {
        self.table[n]
    }

    /// `ln C(n, k)`.
    pub(crate) fn ln_binomial(&self, n: usize, k: usize) -> S {
        self.get(n) - self.get(k) - self.get(n - k)
    }
}

/// `ln cosh x` for `x >= 0` without overflow.
pub(crate) fn ln_cosh<S: Real>(x: S) -> S {
    let two = S::lit(2.0);
    x + (-two * x).exp().ln_1p() - S::LN_2()
}

/// `ln sinh x` for `x > 0` without overflow.
pub(crate) fn ln_sinh<S: Real>(x: S) -> S {
    let two = S::lit(2.0);
    x + (-(-two * x).exp_m1()).ln() - S::LN_2()
}
