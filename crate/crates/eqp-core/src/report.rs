//! Pipeline orchestration and the serializable reconstruction report.

use nalgebra::Matrix4;
use serde::Serialize;

use crate::diagnostics::{diagnostics_report, DiagnosticsReport, TwoQubitKet};
use crate::eqp::{
    negativity_summary, reassemble_state, std_eqp, transform_eqp, weight_label, EqpDecomposition,
    WEIGHT_COUNT,
};
use crate::error::Result;
use crate::montecarlo::{propagate, MonteCarloConfig, UncertaintyReport};
use crate::pauli::{C64, DensityMatrix, LocalOperator};
use crate::standard_form::{to_standard_form, StandardFormResult};
use crate::tomography::{assemble_density, sample_correlations, CoincidenceMatrix, CorrelationErrors, CorrelationMatrix};

/// Options for a full reconstruction.
#[derive(Debug, Clone)]
pub struct ReconstructOptions {
    pub mc: MonteCarloConfig,
    pub significance_threshold: f64,
    /// Pure target state for the fidelity diagnostic.
    pub target: Option<TwoQubitKet>,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            mc: MonteCarloConfig::default(),
            significance_threshold: crate::diagnostics::DEFAULT_SIGNIFICANCE_THRESHOLD,
            target: Some(crate::synthgen::singlet_ket()),
        }
    }
}

/// Everything the pipeline produces for one counts grid.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub correlations: CorrelationMatrix,
    pub errors: CorrelationErrors,
    pub density: DensityMatrix,
    pub standard_form: StandardFormResult,
    /// Decomposition with Monte Carlo errors filled in.
    pub decomposition: EqpDecomposition,
    pub uncertainty: UncertaintyReport,
    pub diagnostics: DiagnosticsReport,
    /// Max entry deviation between Σ P |ā,b̄⟩⟨ā,b̄| and the reconstructed ρ.
    pub reassembly_deviation: f64,
    /// Same-basis blocks that carried no counts (warning-level).
    pub empty_blocks: Vec<(usize, usize)>,
}

/// Runs tomography, standard form, quasiprobability transport, Monte Carlo
/// propagation, and diagnostics on a counts grid.
pub fn reconstruct(counts: &CoincidenceMatrix, opts: &ReconstructOptions) -> Result<Reconstruction> {
    let (correlations, errors) = sample_correlations(counts)?;
    let density = assemble_density(&correlations);
    let standard_form = to_standard_form(&correlations)?;
    let bare = transform_eqp(&std_eqp(standard_form.diagonal), &standard_form.t_a, &standard_form.t_b)?;
    let uncertainty = propagate(&correlations, &errors, opts.target.as_ref(), &opts.mc)?;
    let decomposition = bare.with_errors(uncertainty.weight_std);
    let reassembly_deviation = reassemble_state(&decomposition).max_deviation(&density);
    let diagnostics = diagnostics_report(
        &density,
        &decomposition,
        standard_form.q(),
        opts.target.as_ref(),
        opts.significance_threshold,
    );
    Ok(Reconstruction {
        correlations,
        errors,
        density,
        standard_form,
        decomposition,
        uncertainty,
        diagnostics,
        reassembly_deviation,
        empty_blocks: counts.empty_blocks(),
    })
}

// ── Serializable report ──────────────────────────────────────────────────────

fn matrix4_rows(m: &Matrix4<f64>) -> Vec<Vec<f64>> {
    (0..4).map(|i| (0..4).map(|j| m[(i, j)]).collect()).collect()
}

/// A complex matrix split into real and imaginary parts.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexMatrix {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ComplexMatrix {
    fn from4(m: &Matrix4<C64>) -> Self {
        ComplexMatrix {
            re: (0..4).map(|i| (0..4).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..4).map(|i| (0..4).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }

    fn from_local(op: &LocalOperator) -> Self {
        let m = op.matrix();
        ComplexMatrix {
            re: (0..2).map(|i| (0..2).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..2).map(|i| (0..2).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }
}

/// Input provenance recorded in the report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Provenance {
    pub input_path: Option<String>,
    pub input_sha256: Option<String>,
    /// Seconds since the Unix epoch; suppressed in reproducible mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub tool_version: String,
}

/// Echo of the configuration that produced the report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub mc_samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub align: bool,
    pub significance_threshold: f64,
    pub target: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationsSection {
    pub c: Vec<Vec<f64>>,
    pub dc: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StandardFormSection {
    /// (ρ₀, ρ_x, ρ_y, ρ_z).
    pub diagonal: [f64; 4],
    pub q: f64,
    pub residual: f64,
    pub scale: f64,
    pub boost_passes: usize,
    pub regularized: bool,
    pub t_a: ComplexMatrix,
    pub t_b: ComplexMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightEntry {
    pub label: String,
    pub weight: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EqpSection {
    pub weights: Vec<WeightEntry>,
    pub total: f64,
    pub min_weight: f64,
    pub min_label: String,
    /// Bloch coefficients of the six transformed states per side, in
    /// (x₊, x₋, y₊, y₋, z₊, z₋) order.
    pub alice_bloch: Vec<[f64; 3]>,
    pub bob_bloch: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloSection {
    pub samples: usize,
    pub failed_samples: usize,
    pub regularized_samples: usize,
    pub purity_std: f64,
    pub fidelity_std: Option<f64>,
    pub pt_min_eigenvalue_std: f64,
}

/// The complete JSON report. Field order is fixed by declaration order, so
/// identical inputs and flags serialize to identical bytes (timestamps are
/// omitted in reproducible mode).
#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    pub provenance: Provenance,
    pub config: ConfigEcho,
    pub correlations: CorrelationsSection,
    pub density: ComplexMatrix,
    pub standard_form: StandardFormSection,
    pub eqp: EqpSection,
    pub montecarlo: MonteCarloSection,
    pub diagnostics: DiagnosticsReport,
    pub reassembly_deviation: f64,
    pub warnings: Vec<String>,
}

impl Reconstruction {
    /// Assembles the serializable report.
    pub fn to_report(&self, provenance: Provenance, config: ConfigEcho) -> ReconstructionReport {
        let summary = negativity_summary(&self.decomposition);
        let errors = self.decomposition.errors.unwrap_or([0.0; WEIGHT_COUNT]);
        let weights = (0..WEIGHT_COUNT)
            .map(|i| WeightEntry {
                label: weight_label(i),
                weight: self.decomposition.weights[i],
                error: errors[i],
            })
            .collect();
        let mut warnings = Vec::new();
        for (a, b) in &self.empty_blocks {
            warnings.push(format!(
                "same-basis block ({},{}) carries no counts; reconstruction may be ill-posed",
                ["HV", "DA", "RL"][*a], ["HV", "DA", "RL"][*b]
            ));
        }
        if self.standard_form.regularized {
            warnings.push("correlation matrix was regularized with white noise (1e-9)".into());
        }
        if self.uncertainty.failed_samples > 0 {
            warnings.push(format!(
                "{} of {} Monte Carlo samples failed",
                self.uncertainty.failed_samples, self.uncertainty.samples
            ));
        }
        ReconstructionReport {
            provenance,
            config,
            correlations: CorrelationsSection {
                c: matrix4_rows(self.correlations.matrix()),
                dc: matrix4_rows(self.errors.matrix()),
            },
            density: ComplexMatrix::from4(self.density.matrix()),
            standard_form: StandardFormSection {
                diagonal: self.standard_form.diagonal,
                q: self.standard_form.q(),
                residual: self.standard_form.residual,
                scale: self.standard_form.scale,
                boost_passes: self.standard_form.boost_passes,
                regularized: self.standard_form.regularized,
                t_a: ComplexMatrix::from_local(&self.standard_form.t_a),
                t_b: ComplexMatrix::from_local(&self.standard_form.t_b),
            },
            eqp: EqpSection {
                weights,
                total: self.decomposition.total(),
                min_weight: summary.min_weight,
                min_label: weight_label(summary.slot),
                alice_bloch: self
                    .decomposition
                    .alice_states
                    .iter()
                    .map(|s| [s.bloch[0], s.bloch[1], s.bloch[2]])
                    .collect(),
                bob_bloch: self
                    .decomposition
                    .bob_states
                    .iter()
                    .map(|s| [s.bloch[0], s.bloch[1], s.bloch[2]])
                    .collect(),
            },
            montecarlo: MonteCarloSection {
                samples: self.uncertainty.samples,
                failed_samples: self.uncertainty.failed_samples,
                regularized_samples: self.uncertainty.regularized_samples,
                purity_std: self.uncertainty.purity_std,
                fidelity_std: self.uncertainty.fidelity_std,
                pt_min_eigenvalue_std: self.uncertainty.pt_min_eigenvalue_std,
            },
            diagnostics: self.diagnostics.clone(),
            reassembly_deviation: self.reassembly_deviation,
            warnings,
        }
    }
}

/// CSV rendering of the 12 weights with errors.
pub fn weights_csv(d: &EqpDecomposition) -> String {
    let errors = d.errors.unwrap_or([0.0; WEIGHT_COUNT]);
    let mut out = String::from("label,weight,error\n");
    for i in 0..WEIGHT_COUNT {
        out.push_str(&format!("{},{},{}\n", weight_label(i), d.weights[i], errors[i]));
    }
    out
}
