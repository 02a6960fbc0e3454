//! Error type shared by the reconstruction pipeline.

use thiserror::Error;

/// Errors raised by the reconstruction stages.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Coincidence counts contain NaN, infinity, or negative entries.
    #[error("coincidence counts contain a non-finite or negative entry")]
    NonFiniteInput,

    /// The effective count behind correlation entry (row, col) is below the
    /// minimum of 2 required by the standard-error formula.
    #[error("insufficient counts for correlation entry ({row},{col}): normalizer {normalizer} < 2")]
    InsufficientCounts {
        row: usize,
        col: usize,
        normalizer: f64,
    },

    /// A correlation matrix whose (0,0) entry is not 1 was passed to a stage
    /// that requires normalized input.
    #[error("correlation matrix is not normalized: C[0,0] = {c00}")]
    NotNormalized { c00: f64 },

    /// The secular equation has no real root; the Gram matrix is numerically
    /// degenerate.
    #[error("secular equation has no real root")]
    NoRealRoot,

    /// No real root of the secular equation produces a subluminal boost
    /// velocity (|v| < 1).
    #[error("no boost with |v| < 1 exists for this Gram matrix")]
    NoValidBoost,

    /// The boost stage cannot make progress; the state is rank deficient or
    /// otherwise degenerate.
    #[error("degenerate state: boost elimination stalled")]
    DegenerateState,

    /// The boost pass failed to reduce the local components below tolerance
    /// within the iteration limit.
    #[error("standard-form iteration did not converge within {max_passes} passes (residual {residual:.3e})")]
    NotConverged { max_passes: usize, residual: f64 },

    /// The resolvent (λI − γ) is too ill-conditioned for a reliable boost.
    #[error("boost resolvent condition number {condition:.3e} exceeds limit")]
    IllConditioned { condition: f64 },

    /// A separability eigenvector is annihilated by the local transformation.
    #[error("singular local transformation: state norm {norm:.3e} below tolerance")]
    SingularTransformation { norm: f64 },

    /// More than the tolerated fraction of Monte Carlo samples failed.
    #[error("{failed} of {total} Monte Carlo samples failed (> 1% tolerated)")]
    TooManyFailures { failed: usize, total: usize },

    /// The state handed to the simulator is not positive semidefinite.
    #[error("unphysical state: minimal eigenvalue {min_eigenvalue:.3e}")]
    UnphysicalState { min_eigenvalue: f64 },

    /// A density matrix failed the hermiticity check.
    #[error("matrix is not Hermitian within tolerance (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// Malformed counts file.
    #[error("cannot parse counts input: {0}")]
    ParseCounts(String),
}

pub type Result<T> = std::result::Result<T, Error>;
