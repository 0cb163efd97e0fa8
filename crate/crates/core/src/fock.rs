//! Photon-number (Fock) basis containers.
//!
//! Three containers cover everything the protocol needs:
//!
//! * [`SingleModeState`]: amplitudes `f_n` for `n = 0..=n_max` in one mode.
//! * [`TwoModeState`]: the two output ports of one beam splitter, indexed by
//!   `(k, m)` = (weak-port photons, strong-port photons).
//! * [`BipartiteState`]: the two strong modes after post-selection.
//!
//! States are immutable values. Anything that is not guaranteed to have unit
//! norm carries `normalized == false`; nothing is renormalized silently.

use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::scalar::{is_finite, Real};

/// Controls where infinite photon-number expansions are cut off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationConfig {
    /// Largest tolerated probability mass above `n_max`.
    pub epsilon_tail: f64,
    /// Hard upper bound on `n_max`.
    pub n_max_cap: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            epsilon_tail: 1e-12,
            n_max_cap: 200,
        }
    }
}

impl TruncationConfig {
    pub fn new(epsilon_tail: f64, n_max_cap: usize) -> Result<Self> {
        if !(epsilon_tail > 0.0 && epsilon_tail < 1.0) {
            return Err(domain(format!(
                "epsilon_tail must lie in (0, 1), got {epsilon_tail}"
            )));
        }
        if n_max_cap < 1 {
            return Err(domain("n_max_cap must be at least 1"));
        }
        Ok(Self {
            epsilon_tail,
            n_max_cap,
        })
    }

    /// Picks the smallest `n_max` whose tail mass is below `epsilon_tail`.
    ///
    /// `probabilities` holds `|f_n|²` for `n = 0..=n_max_cap` of a normalized
    /// family. The mass beyond the cap is extrapolated geometrically from the
    /// last two populated entries.
    pub(crate) fn select_cutoff<S: Real>(&self, probabilities: &[S]) -> Result<usize> {
        let populated: Vec<usize> = probabilities
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > S::zero())
            .map(|(n, _)| n)
            .collect();
        let beyond_cap = match populated.as_slice() {
            [] => return Err(domain("state has no populated photon number")),
            [_] => 0.0,
            [.., prev, last] => {
                let (p_prev, p_last) =
                    (probabilities[*prev].as_f64(), probabilities[*last].as_f64());
                let q = p_last / p_prev;
                if *last + 1 < probabilities.len() {
                    // the family terminates before the cap
                    0.0
                } else if q < 1.0 {
                    p_last * q / (1.0 - q)
                } else {
                    f64::INFINITY
                }
            }
        };
        if beyond_cap >= self.epsilon_tail {
            return Err(Error::Capacity {
                tail: beyond_cap,
                epsilon: self.epsilon_tail,
                cap: probabilities.len() - 1,
            });
        }
        // `tail` is the mass strictly above `n`
        let mut tail = beyond_cap;
        for n in (1..probabilities.len()).rev() {
            let with_n = tail + probabilities[n].as_f64();
            if with_n >= self.epsilon_tail {
                return Ok(n);
            }
            tail = with_n;
        }
        Ok(0)
    }
}

/// Truncated single-mode state `Σ_n f_n |n⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleModeState<S> {
    amplitudes: Vec<Complex<S>>,
    normalized: bool,
}

impl<S: Real> SingleModeState<S> {
    /// Wraps raw amplitudes. The result is flagged unnormalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex<S>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(domain("a state needs at least the vacuum amplitude"));
        }
        if !amplitudes.iter().all(is_finite) {
            return Err(domain("amplitudes must be finite"));
        }
        Ok(Self::unnormalized(amplitudes))
    }

    pub(crate) fn unnormalized(amplitudes: Vec<Complex<S>>) -> Self {
        debug_assert!(!amplitudes.is_empty());
        Self {
            amplitudes,
            normalized: false,
        }
    }

    pub(crate) fn from_constructor(amplitudes: Vec<Complex<S>>) -> Self {
        Self {
            amplitudes,
            normalized: true,
        }
    }

    /// The vacuum `|0⟩`.
    pub fn vacuum() -> Self {
        Self::from_constructor(vec![Complex::new(S::one(), S::zero())])
    }

    /// Rescales to unit norm and sets the normalized flag.
    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= S::zero() {
            return Err(Error::ZeroProbability(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|a| *a / norm).collect(),
            normalized: true,
        })
    }

    /// Multiplies every amplitude by `c`. The result is flagged unnormalized.
    pub fn scale(&self, c: Complex<S>) -> Self {
        Self::unnormalized(self.amplitudes.iter().map(|a| *a * c).collect())
    }

    pub fn amplitudes(&self) -> &[Complex<S>] {
        &self.amplitudes
    }

    /// `f_n`, zero above the truncation.
    pub fn amplitude(&self, n: usize) -> Complex<S> {
        self.amplitudes
            .get(n)
            .copied()
            .unwrap_or_else(Complex::zero)
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> S {
        self.amplitudes
            .iter()
            .fold(S::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> S {
        self.norm_sqr().sqrt()
    }

    /// `⟨n̂⟩ = Σ n|f_n|² / Σ|f_n|²`.
    pub fn mean_photon_number(&self) -> S {
        let weighted = self
            .amplitudes
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (n, a)| acc + S::count(n) * a.norm_sqr());
        weighted / self.norm_sqr()
    }

    /// Lowest populated photon number, if any.
    pub fn lowest_populated(&self) -> Option<usize> {
        self.amplitudes.iter().position(|a| !a.is_zero())
    }
}

/// `⟨a|b⟩ = Σ_n conj(a_n) b_n`, with the shorter state zero-padded.
pub fn inner_product<S: Real>(a: &SingleModeState<S>, b: &SingleModeState<S>) -> Complex<S> {
    a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * *y)
}

/// Annihilation operator: `(â f)_n = √(n+1) f_{n+1}`. Always unnormalized.
pub fn apply_annihilation<S: Real>(s: &SingleModeState<S>) -> SingleModeState<S> {
    let amplitudes: Vec<_> = if s.n_max() == 0 {
        vec![Complex::zero()]
    } else {
        s.amplitudes[1..]
            .iter()
            .enumerate()
            .map(|(n, f)| *f * S::count(n + 1).sqrt())
            .collect()
    };
    SingleModeState::unnormalized(amplitudes)
}

/// Product state `a ⊗ b`.
pub fn tensor<S: Real>(a: &SingleModeState<S>, b: &SingleModeState<S>) -> BipartiteState<S> {
    let amplitudes = Array2::from_shape_fn((a.amplitudes.len(), b.amplitudes.len()), |(i, j)| {
        a.amplitudes[i] * b.amplitudes[j]
    });
    BipartiteState {
        amplitudes,
        normalized: a.normalized && b.normalized,
    }
}

/// Output of one beam splitter, indexed by (weak-port photons `k`,
/// strong-port photons `m`).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState<S> {
    amplitudes: Array2<Complex<S>>,
}

impl<S: Real> TwoModeState<S> {
    pub(crate) fn new(amplitudes: Array2<Complex<S>>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &Array2<Complex<S>> {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize, m: usize) -> Complex<S> {
        self.amplitudes
            .get((k, m))
            .copied()
            .unwrap_or_else(Complex::zero)
    }

    /// Largest weak-port photon number held.
    pub fn weak_max(&self) -> usize {
        self.amplitudes.nrows() - 1
    }

    pub fn norm_sqr(&self) -> S {
        self.amplitudes
            .iter()
            .fold(S::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Unnormalized strong-mode state accompanying exactly `k` weak-port photons.
    pub fn strong_given_weak(&self, k: usize) -> SingleModeState<S> {
        if k > self.weak_max() {
            return SingleModeState::unnormalized(vec![Complex::zero(); self.amplitudes.ncols()]);
        }
        SingleModeState::unnormalized(self.amplitudes.row(k).to_vec())
    }

    /// Probability of finding `k` photons in the weak port, `k = 0..=weak_max`.
    pub fn weak_photon_distribution(&self) -> Vec<S> {
        self.amplitudes
            .rows()
            .into_iter()
            .map(|row| row.iter().fold(S::zero(), |acc, a| acc + a.norm_sqr()))
            .collect()
    }
}

/// Pure state of the two strong modes, indexed by `(n₁, n₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState<S> {
    amplitudes: Array2<Complex<S>>,
    normalized: bool,
}

impl<S: Real> BipartiteState<S> {
    /// Wraps a raw amplitude matrix. The result is flagged unnormalized.
    pub fn from_amplitudes(amplitudes: Array2<Complex<S>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(domain("bipartite state needs at least one amplitude"));
        }
        if !amplitudes.iter().all(is_finite) {
            return Err(domain("amplitudes must be finite"));
        }
        Ok(Self {
            amplitudes,
            normalized: false,
        })
    }

    pub(crate) fn zeros(dims: (usize, usize)) -> Self {
        Self {
            amplitudes: Array2::from_elem(dims, Complex::zero()),
            normalized: false,
        }
    }

    pub fn amplitudes(&self) -> &Array2<Complex<S>> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n1: usize, n2: usize) -> Complex<S> {
        self.amplitudes
            .get((n1, n2))
            .copied()
            .unwrap_or_else(Complex::zero)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.amplitudes.dim()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> S {
        self.amplitudes
            .iter()
            .fold(S::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> S {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= S::zero() {
            return Err(Error::ZeroProbability(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: self.amplitudes.mapv(|a| a / norm),
            normalized: true,
        })
    }

    pub fn scale(&self, c: Complex<S>) -> Self {
        Self {
            amplitudes: self.amplitudes.mapv(|a| a * c),
            normalized: false,
        }
    }

    /// `self + c·other`, zero-padding to the larger shape.
    pub fn add_scaled(&self, c: Complex<S>, other: &Self) -> Self {
        let (r1, c1) = self.dims();
        let (r2, c2) = other.dims();
        let dims = (r1.max(r2), c1.max(c2));
        let amplitudes = Array2::from_shape_fn(dims, |(i, j)| {
            self.amplitude(i, j) + c * other.amplitude(i, j)
        });
        Self {
            amplitudes,
            normalized: false,
        }
    }

    /// `⟨self|other⟩` over the common support.
    pub fn inner(&self, other: &Self) -> Complex<S> {
        let (r, c) = (
            self.dims().0.min(other.dims().0),
            self.dims().1.min(other.dims().1),
        );
        let mut acc = Complex::zero();
        for i in 0..r {
            for j in 0..c {
                acc = acc + self.amplitudes[(i, j)].conj() * other.amplitudes[(i, j)];
            }
        }
        acc
    }

    /// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`: invariant under global phase and scale.
    pub fn fidelity(&self, other: &Self) -> S {
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom <= S::zero() {
            return S::zero();
        }
        self.inner(other).norm_sqr() / denom
    }

    /// Reduced density matrix of the first mode, `ρ₁ = M M†`.
    pub fn reduced_first(&self) -> Array2<Complex<S>> {
        let (rows, cols) = self.dims();
        let mut rho = Array2::from_elem((rows, rows), Complex::zero());
        for i in 0..rows {
            for j in i..rows {
                let mut acc = Complex::zero();
                for k in 0..cols {
                    acc = acc + self.amplitudes[(i, k)] * self.amplitudes[(j, k)].conj();
                }
                rho[(i, j)] = acc;
                rho[(j, i)] = acc.conj();
            }
        }
        rho
    }

    /// Marginal photon-number distributions of both modes.
    pub fn marginals(&self) -> (Vec<S>, Vec<S>) {
        let (rows, cols) = self.dims();
        let mut first = vec![S::zero(); rows];
        let mut second = vec![S::zero(); cols];
        for ((i, j), a) in self.amplitudes.indexed_iter() {
            let p = a.norm_sqr();
            first[i] = first[i] + p;
            second[j] = second[j] + p;
        }
        (first, second)
    }
}
