//! Independent entanglement and quality metrics used to cross-validate the
//! quasiprobability result: partial transpose, purity, target fidelity,
//! eigenvalues, and the combined verdict.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::eqp::{negativity_summary, EqpDecomposition};
use crate::pauli::{C64, DensityMatrix};

/// A pure two-qubit target state in the {HH, HV, VH, VV} basis.
pub type TwoQubitKet = Vector4<C64>;

/// Default significance threshold (in standard deviations) for calling a
/// negative weight conclusive.
pub const DEFAULT_SIGNIFICANCE_THRESHOLD: f64 = 3.0;

/// Numerical zero for sign decisions on exact pipelines.
const SIGN_TOL: f64 = 1e-12;

// ── Point metrics ────────────────────────────────────────────────────────────

/// Transposes Bob's indices: entry ((i,j),(k,l)) ↦ ((i,l),(k,j)). Hermiticity
/// is preserved; applying it twice restores the input.
pub fn partial_transpose(rho: &DensityMatrix) -> DensityMatrix {
    let m = rho.matrix();
    let mut out = Matrix4::<C64>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = m[(2 * i + l, 2 * k + j)];
                }
            }
        }
    }
    DensityMatrix::from_matrix_unchecked(out)
}

/// tr(ρ²).
pub fn purity(rho: &DensityMatrix) -> f64 {
    (rho.matrix() * rho.matrix()).trace().re
}

/// ⟨ψ|ρ|ψ⟩ for a normalized pure target.
pub fn fidelity_with_target(rho: &DensityMatrix, psi: &TwoQubitKet) -> f64 {
    (psi.adjoint() * rho.matrix() * psi)[0].re
}

/// Real eigenvalues in descending order; their sum equals the trace.
pub fn eigenvalues(rho: &DensityMatrix) -> [f64; 4] {
    rho.eigenvalues()
}

// ── Verdict ──────────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Entangled,
    Separable,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Entangled => "entangled",
            Verdict::Separable => "separable",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Outcome of the combined entanglement analysis. The quasiprobability
/// criterion decides the verdict; the partial-transpose sign is recorded
/// independently and any disagreement is flagged, never reconciled silently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    /// −min/σ when the minimal weight is negative and errors exist.
    pub significance: Option<f64>,
    /// Negative minimum with no finite error estimate (exact pipeline).
    pub infinite_significance: bool,
    /// Whether the partial transpose certifies entanglement.
    pub pt_entangled: bool,
    /// Set when the two criteria point in opposite directions.
    pub disagreement: bool,
}

/// Combines the quasiprobability summary with the partial-transpose check.
///
/// Entangled: minimal weight negative at ≥ `threshold` standard deviations
/// (or exactly negative when no errors exist). Separable: every weight within
/// one standard deviation of nonnegative and q > 0. Anything else is
/// inconclusive.
pub fn verdict(
    d: &EqpDecomposition,
    q: f64,
    pt_min_eigenvalue: f64,
    threshold: f64,
) -> VerdictReport {
    let summary = negativity_summary(d);
    let (eqp_entangled, eqp_separable) = match d.errors {
        Some(errors) => {
            let entangled = summary
                .significance
                .map(|s| s >= threshold)
                .unwrap_or(false);
            let separable = q > 0.0
                && d.weights
                    .iter()
                    .zip(errors.iter())
                    .all(|(w, e)| *w >= -e);
            (entangled, separable)
        }
        None => (
            summary.min_weight < -SIGN_TOL,
            summary.min_weight >= -SIGN_TOL && q > SIGN_TOL,
        ),
    };
    let verdict = if eqp_entangled {
        Verdict::Entangled
    } else if eqp_separable {
        Verdict::Separable
    } else {
        Verdict::Inconclusive
    };
    let pt_entangled = pt_min_eigenvalue < -SIGN_TOL;
    let disagreement = (verdict == Verdict::Entangled && !pt_entangled)
        || (verdict == Verdict::Separable && pt_entangled);
    VerdictReport {
        verdict,
        significance: summary.significance,
        infinite_significance: summary.infinite_significance,
        pt_entangled,
        disagreement,
    }
}

/// Full diagnostics block of a reconstruction.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub purity: f64,
    /// ⟨ψ|ρ|ψ⟩ against the configured target, when one is set.
    pub fidelity: Option<f64>,
    /// Minimal eigenvalue of the partial transpose.
    pub pt_min_eigenvalue: f64,
    /// State eigenvalues, descending.
    pub eigenvalues: [f64; 4],
    /// Min eigenvalue ≥ −1e−8.
    pub physical: bool,
    pub q: f64,
    pub verdict: Verdict,
    pub significance: Option<f64>,
    pub infinite_significance: bool,
    pub pt_entangled: bool,
    pub disagreement: bool,
}

/// Computes every diagnostic for a reconstructed state.
pub fn diagnostics_report(
    rho: &DensityMatrix,
    d: &EqpDecomposition,
    q: f64,
    target: Option<&TwoQubitKet>,
    threshold: f64,
) -> DiagnosticsReport {
    let pt_min = partial_transpose(rho).min_eigenvalue();
    let v = verdict(d, q, pt_min, threshold);
    DiagnosticsReport {
        purity: purity(rho),
        fidelity: target.map(|t| fidelity_with_target(rho, t)),
        pt_min_eigenvalue: pt_min,
        eigenvalues: eigenvalues(rho),
        physical: rho.is_physical(1e-8),
        q,
        verdict: v.verdict,
        significance: v.significance,
        infinite_significance: v.infinite_significance,
        pt_entangled: v.pt_entangled,
        disagreement: v.disagreement,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqp::{std_eqp, transform_eqp, WEIGHT_COUNT};
    use crate::pauli::LocalOperator;
    use crate::synthgen::{maximally_mixed, product_state, random_full_rank_state, singlet_ket, singlet_state, werner_state};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pt_fixes_maximally_mixed() {
        let rho = maximally_mixed();
        let pt = partial_transpose(&rho);
        assert!(pt.max_deviation(&rho) < 1e-15);
    }

    #[test]
    fn pt_of_singlet_has_minus_half_eigenvalue() {
        let pt = partial_transpose(&singlet_state());
        assert_relative_eq!(pt.min_eigenvalue(), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn pt_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let rho = random_full_rank_state(&mut rng);
            let back = partial_transpose(&partial_transpose(&rho));
            assert_eq!(back.matrix(), rho.matrix());
        }
    }

    #[test]
    fn purity_examples_and_bounds() {
        assert_relative_eq!(purity(&singlet_state()), 1.0, epsilon = 1e-12);
        assert_relative_eq!(purity(&maximally_mixed()), 0.25, epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let rho = random_full_rank_state(&mut rng);
            let p = purity(&rho);
            assert!((0.25..=1.0 + 1e-10).contains(&p), "purity {p} out of range");
        }
    }

    #[test]
    fn fidelity_examples() {
        let psi = singlet_ket();
        assert_relative_eq!(fidelity_with_target(&singlet_state(), &psi), 1.0, epsilon = 1e-12);
        assert_relative_eq!(fidelity_with_target(&maximally_mixed(), &psi), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn eigenvalue_examples() {
        let eig = eigenvalues(&singlet_state());
        assert_relative_eq!(eig[0], 1.0, epsilon = 1e-12);
        for v in &eig[1..] {
            assert!(v.abs() < 1e-12);
        }
        let eig = eigenvalues(&maximally_mixed());
        for v in eig {
            assert_relative_eq!(v, 0.25, epsilon = 1e-15);
        }
        // Descending order and unit sum on random states.
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let rho = random_full_rank_state(&mut rng);
            let eig = eigenvalues(&rho);
            assert!(eig.windows(2).all(|w| w[0] >= w[1]));
            assert_relative_eq!(eig.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        }
    }

    fn decomposition_for(diag: [f64; 4]) -> EqpDecomposition {
        transform_eqp(&std_eqp(diag), &LocalOperator::identity(), &LocalOperator::identity())
            .unwrap()
    }

    #[test]
    fn verdict_ideal_singlet() {
        let d = decomposition_for([1.0, -1.0, -1.0, -1.0]);
        let pt_min = partial_transpose(&singlet_state()).min_eigenvalue();
        let v = verdict(&d, -2.0, pt_min, DEFAULT_SIGNIFICANCE_THRESHOLD);
        assert_eq!(v.verdict, Verdict::Entangled);
        assert!(v.infinite_significance);
        assert!(v.pt_entangled);
        assert!(!v.disagreement);
    }

    #[test]
    fn verdict_ideal_product() {
        // Product state diagonal after standard form: all |ρ_w| < 1, q > 0.
        let rho = product_state();
        let corr = crate::pauli::correlations_from_density(&rho);
        let sf = crate::standard_form::to_standard_form(&corr).unwrap();
        let d = transform_eqp(&std_eqp(sf.diagonal), &sf.t_a, &sf.t_b).unwrap();
        let pt_min = partial_transpose(&rho).min_eigenvalue();
        let v = verdict(&d, sf.q(), pt_min, DEFAULT_SIGNIFICANCE_THRESHOLD);
        assert_eq!(v.verdict, Verdict::Separable);
        assert!(!v.pt_entangled);
        assert!(!v.disagreement);
    }

    #[test]
    fn verdict_werner_boundary_inconclusive() {
        let rho = werner_state(1.0 / 3.0);
        let corr = crate::pauli::correlations_from_density(&rho);
        let sf = crate::standard_form::to_standard_form(&corr).unwrap();
        let d = transform_eqp(&std_eqp(sf.diagonal), &sf.t_a, &sf.t_b).unwrap();
        let pt_min = partial_transpose(&rho).min_eigenvalue();
        assert!(pt_min.abs() < 1e-10);
        let v = verdict(&d, sf.q(), pt_min, DEFAULT_SIGNIFICANCE_THRESHOLD);
        assert_eq!(v.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verdict_with_errors_requires_threshold() {
        let d = decomposition_for([1.0, -1.0, -1.0, -1.0]).with_errors([0.1; WEIGHT_COUNT]);
        // Significance 1.67 < 3: inconclusive.
        let v = verdict(&d, -2.0, -0.5, 3.0);
        assert_eq!(v.verdict, Verdict::Inconclusive);
        assert!(v.disagreement == false);
        // Lower threshold: entangled.
        let v = verdict(&d, -2.0, -0.5, 1.0);
        assert_eq!(v.verdict, Verdict::Entangled);
    }

    #[test]
    fn separable_with_errors_tolerates_small_negatives() {
        let d = decomposition_for([1.0, 0.4, 0.3, 0.2]);
        let mut weights = d.weights;
        weights[3] = -0.005; // within 1σ of zero
        let d = EqpDecomposition {
            weights,
            errors: Some([0.01; WEIGHT_COUNT]),
            alice_states: d.alice_states,
            bob_states: d.bob_states,
        };
        let v = verdict(&d, 0.1, 0.2, 3.0);
        assert_eq!(v.verdict, Verdict::Separable);
    }

    #[test]
    fn pt_sign_matches_q_sign_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut kept = 0;
        for _ in 0..1000 {
            let rho = random_full_rank_state(&mut rng);
            let corr = crate::pauli::correlations_from_density(&rho);
            let sf = crate::standard_form::to_standard_form(&corr).unwrap();
            let q = sf.q();
            let pt_min = partial_transpose(&rho).min_eigenvalue();
            if q.abs() < 1e-8 || pt_min.abs() < 1e-8 {
                continue;
            }
            assert_eq!(q < 0.0, pt_min < 0.0);
            kept += 1;
        }
        assert!(kept > 900);
    }
}
