//! Conversion of raw 6×6 coincidence counts into the Pauli correlation matrix
//! with per-entry standard errors, and assembly of the sampled density matrix.
//!
//! With the setting matrix S, the estimators read
//!
//! ```text
//! C  = (S E Sᵀ) ⊘ (|S| E |S|ᵀ)
//! ΔC = sqrt( ((S²ES²ᵀ) ⊘ (|S|E|S|ᵀ) − C∘C) ⊘ (|S|E|S|ᵀ − 1) )
//! ```
//!
//! where every operation (|·|, square, product ∘, quotient ⊘, sqrt) acts
//! entry-wise. These are deliberately written out as loops over the 4×4 grid
//! rather than as matrix inverses: the entry-wise semantics is the easy thing
//! to get wrong here.

use nalgebra::{Matrix4, Matrix4x6, Matrix6};

use crate::error::{Error, Result};
use crate::pauli::{density_from_correlations, DensityMatrix};

/// Minimum effective count behind a correlation entry; the standard-error
/// formula divides by N − 1.
pub const MIN_EFFECTIVE_COUNTS: f64 = 2.0;

/// Radicands of the error formula more negative than this raise an error
/// instead of being clamped to zero.
const RADICAND_CLAMP: f64 = -1e-12;

// ── Domain types ─────────────────────────────────────────────────────────────

/// Raw coincidence events E(s,t): rows are Alice's outcome s, columns Bob's
/// outcome t, both in the canonical (H,V,D,A,R,L) order. Entries are
/// nonnegative reals so that noise-free expectation-value pipelines run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceMatrix(Matrix6<f64>);

impl CoincidenceMatrix {
    /// Wraps a count grid, rejecting NaN, infinite, or negative entries.
    pub fn new(m: Matrix6<f64>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::NonFiniteInput);
        }
        Ok(CoincidenceMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.sum()
    }

    /// Same-basis 2×2 blocks with zero total counts, as (alice_basis,
    /// bob_basis) indices. A well-posed reconstruction needs every block
    /// populated; callers should warn when this is nonempty.
    pub fn empty_blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for ba in 0..3 {
            for bb in 0..3 {
                let sum: f64 = (0..2)
                    .flat_map(|i| (0..2).map(move |j| (i, j)))
                    .map(|(i, j)| self.0[(2 * ba + i, 2 * bb + j)])
                    .sum();
                if sum == 0.0 {
                    out.push((ba, bb));
                }
            }
        }
        out
    }
}

/// The 4×6 matrix S relating Pauli labels (rows, ordered 0,x,y,z) to outcome
/// labels (columns, ordered H,V,D,A,R,L). Row 0 is all ones; each spatial row
/// holds +1 on the operator's +1 eigenvector and −1 on its −1 eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingMatrix(Matrix4x6<f64>);

impl SettingMatrix {
    pub fn matrix(&self) -> &Matrix4x6<f64> {
        &self.0
    }

    /// Entry-wise absolute value |S|.
    pub fn abs(&self) -> Matrix4x6<f64> {
        self.0.map(f64::abs)
    }

    /// Entry-wise square S²; equals |S| for entries in {−1, 0, 1}.
    pub fn squared(&self) -> Matrix4x6<f64> {
        self.0.map(|x| x * x)
    }
}

/// The setting matrix printed row by row.
pub fn setting_matrix() -> SettingMatrix {
    SettingMatrix(Matrix4x6::from_row_slice(&[
        1.0, 1.0, 1.0, 1.0, 1.0, 1.0, //
        1.0, -1.0, 0.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, -1.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 0.0, 1.0, -1.0,
    ]))
}

/// The 4×4 Pauli correlation matrix ⟨σ_k ⊗ σ_l⟩, indices ordered (0,x,y,z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix(Matrix4<f64>);

impl CorrelationMatrix {
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        CorrelationMatrix(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn c00(&self) -> f64 {
        self.0[(0, 0)]
    }

    /// True when C₀₀ = 1 within `tol`.
    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.c00() - 1.0).abs() <= tol
    }

    /// Alice's local Bloch components (C_x0, C_y0, C_z0).
    pub fn alice_bloch(&self) -> nalgebra::Vector3<f64> {
        nalgebra::Vector3::new(self.0[(1, 0)], self.0[(2, 0)], self.0[(3, 0)])
    }

    /// Bob's local Bloch components (C_0x, C_0y, C_0z).
    pub fn bob_bloch(&self) -> nalgebra::Vector3<f64> {
        nalgebra::Vector3::new(self.0[(0, 1)], self.0[(0, 2)], self.0[(0, 3)])
    }

    /// The 3×3 spatial block ⟨σ_w ⊗ σ_w'⟩ for w, w' ∈ {x,y,z}.
    pub fn spatial(&self) -> nalgebra::Matrix3<f64> {
        self.0.fixed_view::<3, 3>(1, 1).into_owned()
    }
}

/// Standard errors of the mean for each correlation entry; the (0,0) entry is
/// exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationErrors(Matrix4<f64>);

impl CorrelationErrors {
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        CorrelationErrors(m)
    }

    pub fn zeros() -> Self {
        CorrelationErrors(Matrix4::zeros())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().cloned().fold(0.0, f64::max)
    }
}

// ── Estimators ───────────────────────────────────────────────────────────────

/// Samples the correlation matrix and its standard errors from coincidence
/// counts.
///
/// Every (k,l) needs an effective count (|S|E|S|ᵀ)_{k,l} of at least 2;
/// otherwise `InsufficientCounts` is raised. Tiny negative radicands from
/// cancellation at extreme correlations are clamped to zero; anything below
/// −1e−12 raises `NonFiniteInput`.
pub fn sample_correlations(
    counts: &CoincidenceMatrix,
) -> Result<(CorrelationMatrix, CorrelationErrors)> {
    let s = setting_matrix();
    let e = counts.matrix();
    let signed = s.matrix() * e * s.matrix().transpose();
    let norm = s.abs() * e * s.abs().transpose();
    let sq = s.squared() * e * s.squared().transpose();

    let mut c_out = Matrix4::<f64>::zeros();
    let mut dc_out = Matrix4::<f64>::zeros();
    for k in 0..4 {
        for l in 0..4 {
            let n = norm[(k, l)];
            if n < MIN_EFFECTIVE_COUNTS {
                return Err(Error::InsufficientCounts {
                    row: k,
                    col: l,
                    normalizer: n,
                });
            }
            let c_kl = signed[(k, l)] / n;
            c_out[(k, l)] = c_kl;
            let radicand = (sq[(k, l)] / n - c_kl * c_kl) / (n - 1.0);
            dc_out[(k, l)] = if radicand >= 0.0 {
                radicand.sqrt()
            } else if radicand >= RADICAND_CLAMP {
                0.0
            } else {
                return Err(Error::NonFiniteInput);
            };
        }
    }
    // The (0,0) numerator and normalizer coincide, so this holds exactly.
    debug_assert_eq!(c_out[(0, 0)], 1.0);
    dc_out[(0, 0)] = 0.0;
    Ok((CorrelationMatrix(c_out), CorrelationErrors(dc_out)))
}

/// Assembles the reconstructed density matrix from the sampled correlations.
pub fn assemble_density(corr: &CorrelationMatrix) -> DensityMatrix {
    density_from_correlations(corr)
}
