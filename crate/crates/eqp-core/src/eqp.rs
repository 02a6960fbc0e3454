//! Closed-form entanglement quasiprobability of the standard form, its
//! back-transformation to the measured state, and reassembly of the state as
//! a consistency check.
//!
//! For a standard-form state with diagonal (ρ₀, ρ_x, ρ_y, ρ_z) the
//! quasiprobability over pairs of Pauli eigenvectors is block diagonal in the
//! axis: with q = ρ₀ − |ρ_x| − |ρ_y| − |ρ_z|, the same-axis block for w is
//!
//! ```text
//! [ q/12 + (|ρ_w|+ρ_w)/4    q/12 + (|ρ_w|−ρ_w)/4 ]
//! [ q/12 + (|ρ_w|−ρ_w)/4    q/12 + (|ρ_w|+ρ_w)/4 ]
//! ```
//!
//! and all cross-axis entries are structural zeros: those index pairs do not
//! solve the underlying separability eigenvalue problem and carry no weight.
//! A strictly negative entry exists iff q < 0, which is the necessary and
//! sufficient entanglement criterion.

use nalgebra::{Matrix2, Matrix6, Vector3};

use crate::error::{Error, Result};
use crate::pauli::{eigenbasis_of, C64, DensityMatrix, LocalOperator, PauliIndex, QubitVector};

/// Number of quasiprobability weights for a two-qubit state.
pub const WEIGHT_COUNT: usize = 12;

/// Index of the weight for (axis w, Alice sign α, Bob sign β), with signs
/// encoded 0 = +, 1 = −. Slots run (x₊x₊, x₊x₋, x₋x₊, x₋x₋, y₊y₊, …).
pub fn weight_slot(axis: usize, alice_sign: usize, bob_sign: usize) -> usize {
    4 * axis + 2 * alice_sign + bob_sign
}

/// Index of a single-side state for (axis w, sign α): (x₊, x₋, y₊, y₋, z₊, z₋).
pub fn state_slot(axis: usize, sign: usize) -> usize {
    2 * axis + sign
}

/// Human-readable label for a weight slot, e.g. `"x+x-"`.
pub fn weight_label(slot: usize) -> String {
    let axis = ["x", "y", "z"][slot / 4];
    let a = ["+", "-"][(slot % 4) / 2];
    let b = ["+", "-"][slot % 2];
    format!("{axis}{a}{axis}{b}")
}

// ── Standard-form quasiprobability ───────────────────────────────────────────

/// The quasiprobability of a standard-form state: three symmetric 2×2
/// same-axis blocks plus the scalar q. Cross-axis entries are structural
/// zeros kept as an explicit mask, never as numeric weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdEqp {
    pub q: f64,
    /// blocks[axis][alice_sign][bob_sign]
    blocks: [[[f64; 2]; 2]; 3],
}

impl StdEqp {
    /// Weight for a same-axis index pair.
    pub fn block_entry(&self, axis: usize, alice_sign: usize, bob_sign: usize) -> f64 {
        self.blocks[axis][alice_sign][bob_sign]
    }

    /// Entry of the 6×6 matrix over (a, b) ∈ {x₊,x₋,y₊,y₋,z₊,z₋}²; `None`
    /// marks a structural zero.
    pub fn entry(&self, a: usize, b: usize) -> Option<f64> {
        if a / 2 == b / 2 {
            Some(self.blocks[a / 2][a % 2][b % 2])
        } else {
            None
        }
    }

    /// True when (a, b) carries no weight because the index pair does not
    /// solve the separability eigenvalue problem.
    pub fn is_structural_zero(&self, a: usize, b: usize) -> bool {
        a / 2 != b / 2
    }

    /// The matrix representation with structural zeros written as 0.
    pub fn matrix6(&self) -> Matrix6<f64> {
        Matrix6::from_fn(|a, b| self.entry(a, b).unwrap_or(0.0))
    }

    /// The 12 weights in slot order.
    pub fn weights(&self) -> [f64; WEIGHT_COUNT] {
        let mut out = [0.0; WEIGHT_COUNT];
        for axis in 0..3 {
            for a in 0..2 {
                for b in 0..2 {
                    out[weight_slot(axis, a, b)] = self.blocks[axis][a][b];
                }
            }
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.weights().iter().sum()
    }

    pub fn min_entry(&self) -> f64 {
        self.weights().iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the closed-form quasiprobability for a standard-form diagonal
/// (ρ₀, ρ_x, ρ_y, ρ_z). Values with |ρ_w| > 1 (slightly unphysical sampled
/// inputs) are propagated as-is; nothing is clamped.
pub fn std_eqp(diagonal: [f64; 4]) -> StdEqp {
    let q = diagonal[0] - diagonal[1].abs() - diagonal[2].abs() - diagonal[3].abs();
    let mut blocks = [[[0.0; 2]; 2]; 3];
    for axis in 0..3 {
        let rho = diagonal[axis + 1];
        let aligned = q / 12.0 + (rho.abs() + rho) / 4.0;
        let anti = q / 12.0 + (rho.abs() - rho) / 4.0;
        blocks[axis] = [[aligned, anti], [anti, aligned]];
    }
    StdEqp { q, blocks }
}

// ── Transformed decomposition ────────────────────────────────────────────────

/// A pure product-side state of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductState {
    pub ket: QubitVector,
    /// Bloch coefficients of |ψ⟩⟨ψ| = (σ₀ + a_xσ_x + a_yσ_y + a_zσ_z)/2.
    pub bloch: Vector3<f64>,
}

/// The quasiprobability decomposition of the measured state: 12 weights over
/// locally transformed product states, with per-weight standard errors filled
/// in by the Monte Carlo stage.
#[derive(Debug, Clone, PartialEq)]
pub struct EqpDecomposition {
    pub weights: [f64; WEIGHT_COUNT],
    /// Monte Carlo standard deviations, once available.
    pub errors: Option<[f64; WEIGHT_COUNT]>,
    /// Alice's transformed states, in (x₊, x₋, y₊, y₋, z₊, z₋) order.
    pub alice_states: [ProductState; 6],
    /// Bob's transformed states, same order.
    pub bob_states: [ProductState; 6],
}

impl EqpDecomposition {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn min_weight(&self) -> (usize, f64) {
        let mut slot = 0;
        let mut min = f64::INFINITY;
        for (i, w) in self.weights.iter().enumerate() {
            if *w < min {
                min = *w;
                slot = i;
            }
        }
        (slot, min)
    }

    pub fn with_errors(mut self, errors: [f64; WEIGHT_COUNT]) -> Self {
        self.errors = Some(errors);
        self
    }
}

fn transform_side(t: &LocalOperator) -> Result<[ProductState; 6]> {
    let mut out = [ProductState {
        ket: QubitVector::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        bloch: Vector3::zeros(),
    }; 6];
    let gram = t.gram();
    for (axis, w) in PauliIndex::SPATIAL.iter().enumerate() {
        let (plus, minus) = eigenbasis_of(*w);
        for (sign, base) in [plus, minus].iter().enumerate() {
            let norm2 = (base.vector().adjoint() * gram * base.vector())[0].re;
            if norm2 < 1e-14 {
                return Err(Error::SingularTransformation { norm: norm2 });
            }
            let ket = QubitVector::from_vector(
                t.matrix() * base.vector() / C64::new(norm2.sqrt(), 0.0),
            );
            out[state_slot(axis, sign)] = ProductState {
                bloch: ket.bloch(),
                ket,
            };
        }
    }
    Ok(out)
}

/// Norm factors ⟨w_α|T†T|w_α⟩ for the six separability eigenvectors.
fn norm_factors(t: &LocalOperator) -> [f64; 6] {
    let gram = t.gram();
    let mut out = [0.0; 6];
    for (axis, w) in PauliIndex::SPATIAL.iter().enumerate() {
        let (plus, minus) = eigenbasis_of(*w);
        for (sign, base) in [plus, minus].iter().enumerate() {
            out[state_slot(axis, sign)] = (base.vector().adjoint() * gram * base.vector())[0].re;
        }
    }
    out
}

/// Transports the standard-form quasiprobability through the local
/// transformations T_A, T_B:
///
/// P(ā,b̄) = P^(std)(w_α,w_β) · ⟨w_α|T_A†T_A|w_α⟩ · ⟨w_β|T_B†T_B|w_β⟩
///
/// with states |ā⟩ = T_A|w_α⟩ / ⟨w_α|T_A†T_A|w_α⟩^{1/2} and likewise for Bob.
pub fn transform_eqp(
    std: &StdEqp,
    t_a: &LocalOperator,
    t_b: &LocalOperator,
) -> Result<EqpDecomposition> {
    let alice_states = transform_side(t_a)?;
    let bob_states = transform_side(t_b)?;
    let na = norm_factors(t_a);
    let nb = norm_factors(t_b);
    let mut weights = [0.0; WEIGHT_COUNT];
    for axis in 0..3 {
        for a in 0..2 {
            for b in 0..2 {
                weights[weight_slot(axis, a, b)] = std.block_entry(axis, a, b)
                    * na[state_slot(axis, a)]
                    * nb[state_slot(axis, b)];
            }
        }
    }
    Ok(EqpDecomposition {
        weights,
        errors: None,
        alice_states,
        bob_states,
    })
}

/// Σ P(ā,b̄) |ā,b̄⟩⟨ā,b̄|: reassembles the state from the decomposition. This
/// should reproduce the pipeline's input density matrix within 1e−8.
pub fn reassemble_state(d: &EqpDecomposition) -> DensityMatrix {
    let mut rho = nalgebra::Matrix4::<C64>::zeros();
    for axis in 0..3 {
        for a in 0..2 {
            for b in 0..2 {
                let pa: Matrix2<C64> = d.alice_states[state_slot(axis, a)].ket.projector();
                let pb: Matrix2<C64> = d.bob_states[state_slot(axis, b)].ket.projector();
                rho += pa.kronecker(&pb) * C64::new(d.weights[weight_slot(axis, a, b)], 0.0);
            }
        }
    }
    DensityMatrix::from_matrix_unchecked(rho)
}

// ── Negativity summary ───────────────────────────────────────────────────────

/// The most negative weight together with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativitySummary {
    /// Slot of the minimal weight.
    pub slot: usize,
    pub min_weight: f64,
    /// Standard error of that weight, when Monte Carlo errors are present.
    pub std_error: Option<f64>,
    /// −min/σ, defined only when the minimum is negative and σ > 0.
    pub significance: Option<f64>,
    /// Set when the minimum is negative but no finite significance can be
    /// formed (exact pipeline, no errors, or σ = 0).
    pub infinite_significance: bool,
}

/// Summarizes the negativity of a decomposition.
pub fn negativity_summary(d: &EqpDecomposition) -> NegativitySummary {
    let (slot, min_weight) = d.min_weight();
    let std_error = d.errors.map(|e| e[slot]);
    let negative = min_weight < 0.0;
    let significance = match std_error {
        Some(sigma) if negative && sigma > 0.0 => Some(-min_weight / sigma),
        _ => None,
    };
    NegativitySummary {
        slot,
        min_weight,
        std_error,
        significance,
        infinite_significance: negative && significance.is_none(),
    }
}
