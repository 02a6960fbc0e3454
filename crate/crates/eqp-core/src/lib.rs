//! Reconstruction of entanglement quasiprobability (EQP) distributions of
//! two-qubit polarization states from coincidence-count data.
//!
//! The pipeline: coincidence counts → Pauli correlation matrix with standard
//! errors → local Lorentz boosts and rotations to the standard form →
//! closed-form quasiprobability of the standard form → back-transport through
//! the inverse local operations → 12 weights over pure product states, with
//! Monte Carlo error bars. A strictly negative weight certifies entanglement;
//! nonnegativity certifies separability. Partial transpose, purity, and
//! target fidelity are computed independently as cross-checks.

pub mod diagnostics;
pub mod eqp;
pub mod error;
pub mod io;
pub mod montecarlo;
pub mod pauli;
pub mod reference;
pub mod report;
pub mod standard_form;
pub mod synthgen;
pub mod tomography;

pub use diagnostics::{DiagnosticsReport, Verdict};
pub use eqp::{EqpDecomposition, NegativitySummary, StdEqp};
pub use error::{Error, Result};
pub use montecarlo::{MonteCarloConfig, UncertaintyReport};
pub use pauli::{DensityMatrix, LocalOperator, OutcomeLabel, PauliIndex, QubitVector};
pub use report::{reconstruct, Reconstruction, ReconstructionReport, ReconstructOptions};
pub use standard_form::{BoostSolution, MinkowskiGram, StandardFormResult};
pub use synthgen::{SimulationConfig, StatePreset};
pub use tomography::{CoincidenceMatrix, CorrelationErrors, CorrelationMatrix, SettingMatrix};
