//! Numerical maximization of the quantum violation of bipartite two-outcome
//! Bell inequalities over projective measurements in real or complex local
//! Hilbert spaces of dimension 2, 3 or 4, plus the complex-to-real doubling
//! map that reproduces any complex-qubit correlation with real ququarts.
//!
//! The pieces, bottom up:
//!
//! - [`numerics`]: dense complex matrices, Hermitian eigensolver, SVD.
//! - [`inequality`]: Collins-Gisin coefficient tables, exhaustive classical
//!   bounds over deterministic strategies, file load/save.
//! - [`measurements`]: gauge-fixed projector charts per (field, dimension,
//!   rank) and enumeration of degeneracy/rank combinations.
//! - [`bell_operator`]: assembles the Hermitian Bell operator; the quantum
//!   value is its largest eigenvalue.
//! - [`optimizer`]: uphill simplex with seeded random restarts over all
//!   setting combinations, and cross-dimension sweeps.
//! - [`embedding`]: the component-wise complex-to-real block mapping and the
//!   product-space state mapping, with expectation-value verification.
//! - [`analysis`]: Schmidt decomposition of optima, effective-degeneracy
//!   detection, maximal-entanglement flagging.

pub mod analysis;
pub mod bell_operator;
pub mod embedding;
pub mod inequality;
pub mod measurements;
pub mod numerics;
pub mod optimizer;
pub mod sample;

mod error;

pub use analysis::{analyze, AnalysisOptions, SchmidtDecomposition, SchmidtReport, SettingVerdict};
pub use bell_operator::{assemble, quantum_value, BellOperator};
pub use embedding::{embed_scenario, map_matrix, map_state, verify_expectation, RealEmbedding};
pub use error::{Error, Result};
pub use inequality::{bundled_chsh, bundled_i3322, BellInequality, DeterministicStrategy};
pub use measurements::{Field, ScenarioShape, SettingKind};
pub use numerics::{hermitian_eig_max, svd, EigenPair, Matrix, Scalar};
pub use optimizer::{
    cross_dimension_sweep, maximize_violation, nelder_mead_maximize, OptimizerConfig, SweepConfig,
    SweepOutcome, ViolationResult,
};
