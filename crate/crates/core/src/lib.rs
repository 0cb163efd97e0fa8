//! Truncated Fock-space simulation of a beam-splitter entangler for light
//! fields.
//!
//! Two single-mode inputs each pass a weakly reflecting beam splitter. The
//! weak outputs interfere on a balanced splitter and a single detector click
//! heralds an entangled state of the two strong outputs. This crate builds
//! the input families, applies the splitters exactly or in the weak-split
//! approximation, heralds the strong-mode state, and measures its
//! concurrence in closed form and from the reduced density matrix.
//!
//! Everything is generic over the real scalar (`f32` or `f64`). The aliases
//! at the crate root fix it to `f64`.

pub mod beam_splitter;
pub mod entanglement;
mod error;
pub mod fock;
pub mod protocol;
mod scalar;
pub mod scenarios;
pub mod states;

pub use beam_splitter::{
    apply_bs_exact, bs_coefficient, truncation_residual, weak_split, BeamSplitterParams,
    WeakSplitResult,
};
pub use entanglement::{
    concurrence_general, concurrence_identical, concurrence_oracle, hybrid_mes_condition,
    hybrid_mes_root, ConcurrenceInputs,
};
pub use error::{Error, Result};
pub use fock::{
    apply_annihilation, inner_product, tensor, BipartiteState, SingleModeState, TruncationConfig,
    TwoModeState,
};
pub use num_complex::Complex;
pub use protocol::{
    outcome_probabilities, run_analytic, run_exact, run_exact_threshold,
    success_probability_scaling, ConditionalOutcome, Detector, OutcomeProbabilities,
    ProtocolConfig, ThresholdOutcome,
};
pub use scalar::{ComplexAmplitude, Real};
pub use scenarios::{
    check_example, expected_concurrence, expected_state, CheckTolerances, ExampleInputs,
    ExampleReport, ExampleSpec,
};
pub use states::{
    make_coherent, make_even_cat, make_fock, make_odd_cat, make_squeezed_vacuum, CoherentParams,
    SqueezeParams,
};

pub type C64 = Complex<f64>;
pub type SingleMode = SingleModeState<f64>;
pub type TwoMode = TwoModeState<f64>;
pub type Bipartite = BipartiteState<f64>;
pub type BeamSplitter = BeamSplitterParams<f64>;
pub type WeakSplit = WeakSplitResult<f64>;
pub type Protocol = ProtocolConfig<f64>;
pub type Outcome = ConditionalOutcome<f64>;
pub type Coherent = CoherentParams<f64>;
pub type Squeeze = SqueezeParams<f64>;
pub type Example = ExampleSpec<f64>;

pub type SingleMode32 = SingleModeState<f32>;
pub type Bipartite32 = BipartiteState<f32>;
pub type BeamSplitter32 = BeamSplitterParams<f32>;
