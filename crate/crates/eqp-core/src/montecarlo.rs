//! Monte Carlo propagation of the count statistics through the full
//! reconstruction: correlation matrices are resampled entry-wise from
//! Gaussians with mean C and deviation ΔC, each sample runs the
//! standard-form + quasiprobability pipeline, and the spread of the resulting
//! weights gives the error bars.

use nalgebra::Matrix4;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::diagnostics::{fidelity_with_target, partial_transpose, purity, TwoQubitKet};
use crate::eqp::{std_eqp, transform_eqp, weight_slot, WEIGHT_COUNT};
use crate::error::{Error, Result};
use crate::pauli::density_from_correlations;
use crate::standard_form::to_standard_form;
use crate::tomography::{CorrelationErrors, CorrelationMatrix};

/// Default number of resampled correlation matrices.
pub const DEFAULT_SAMPLES: usize = 50_000;

/// Fraction of failed samples tolerated before the whole propagation errors.
pub const FAILURE_TOLERANCE: f64 = 0.01;

/// Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloConfig {
    /// Sample count; at least 2.
    pub samples: usize,
    /// Seed; together with the sample index it fully determines each draw,
    /// so results are identical for any worker count.
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    /// Align each sample's axis labeling to the point estimate before
    /// accumulating statistics (see [`align_to_point`]).
    pub align: bool,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            workers: 0,
            align: true,
        }
    }
}

/// Standard deviations of the propagated quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub weight_std: [f64; WEIGHT_COUNT],
    pub purity_std: f64,
    pub fidelity_std: Option<f64>,
    pub pt_min_eigenvalue_std: f64,
    /// Samples whose pipeline failed outright (never silently dropped from
    /// the accounting).
    pub failed_samples: usize,
    /// Samples that needed the white-noise regularization.
    pub regularized_samples: usize,
    pub samples: usize,
}

// ── Axis alignment ───────────────────────────────────────────────────────────

/// All six permutations of three axes.
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Finds the signed axis permutation of a sample's standard-form diagonal
/// that best matches the point estimate (minimal Euclidean distance), and
/// permutes the 12 weights accordingly. A sign flip of an axis swaps Bob's
/// ± labels within that block, which is how a π rotation on Bob's side
/// relabels the block's entries.
///
/// The singular-value ordering can branch-switch under noise; without this
/// relabeling the per-slot variance would be artificially inflated.
pub fn align_to_point(
    point_diag: &[f64; 3],
    sample_diag: &[f64; 3],
    weights: &[f64; WEIGHT_COUNT],
) -> [f64; WEIGHT_COUNT] {
    let mut best_cost = f64::INFINITY;
    let mut best = ([0usize, 1, 2], [1.0f64, 1.0, 1.0]);
    for perm in PERMS {
        for signs_bits in 0..8u8 {
            let signs = [
                if signs_bits & 1 == 0 { 1.0 } else { -1.0 },
                if signs_bits & 2 == 0 { 1.0 } else { -1.0 },
                if signs_bits & 4 == 0 { 1.0 } else { -1.0 },
            ];
            let cost: f64 = (0..3)
                .map(|i| {
                    let d = point_diag[i] - signs[i] * sample_diag[perm[i]];
                    d * d
                })
                .sum();
            if cost < best_cost {
                best_cost = cost;
                best = (perm, signs);
            }
        }
    }
    let (perm, signs) = best;
    let mut out = [0.0; WEIGHT_COUNT];
    for i in 0..3 {
        for a in 0..2 {
            for b in 0..2 {
                let b_src = if signs[i] < 0.0 { 1 - b } else { b };
                out[weight_slot(i, a, b)] = weights[weight_slot(perm[i], a, b_src)];
            }
        }
    }
    out
}

// ── Sampling ─────────────────────────────────────────────────────────────────

fn sample_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 over the (seed, index) pair: independent per-sample streams
    // regardless of worker partitioning.
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One resampled correlation matrix: independent Gaussian entries with the
/// (0,0) entry pinned at 1.
fn draw_correlations(
    c: &Matrix4<f64>,
    dc: &Matrix4<f64>,
    rng: &mut ChaCha8Rng,
) -> CorrelationMatrix {
    let mut m = Matrix4::<f64>::zeros();
    for k in 0..4 {
        for l in 0..4 {
            let noise: f64 = StandardNormal.sample(rng);
            m[(k, l)] = c[(k, l)] + dc[(k, l)] * noise;
        }
    }
    m[(0, 0)] = 1.0;
    CorrelationMatrix::from_matrix(m)
}

struct SampleOutcome {
    weights: [f64; WEIGHT_COUNT],
    purity: f64,
    fidelity: Option<f64>,
    pt_min: f64,
    regularized: bool,
}

fn run_sample(
    corr: &CorrelationMatrix,
    target: Option<&TwoQubitKet>,
    point_diag: Option<&[f64; 3]>,
) -> Result<SampleOutcome> {
    let sf = to_standard_form(corr)?;
    let d = transform_eqp(&std_eqp(sf.diagonal), &sf.t_a, &sf.t_b)?;
    let weights = match point_diag {
        Some(p) => {
            let sample_diag = [sf.diagonal[1], sf.diagonal[2], sf.diagonal[3]];
            align_to_point(p, &sample_diag, &d.weights)
        }
        None => d.weights,
    };
    let rho = density_from_correlations(corr);
    Ok(SampleOutcome {
        weights,
        purity: purity(&rho),
        fidelity: target.map(|t| fidelity_with_target(&rho, t)),
        pt_min: partial_transpose(&rho).min_eigenvalue(),
        regularized: sf.regularized,
    })
}

/// Streaming mean/variance accumulator (Welford); exact zeros for constant
/// input.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn std(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).sqrt()
        }
    }
}

/// Propagates (C, ΔC) through the pipeline.
///
/// The point estimate must reconstruct successfully first; its diagonal
/// anchors the axis alignment. Samples are drawn and propagated exactly as
/// generated (no censoring of unphysical draws); hard pipeline failures are
/// counted and more than 1% of them aborts with `TooManyFailures`.
/// Statistics are accumulated in sample-index order, so a fixed (C, ΔC,
/// seed, samples) yields bitwise-identical reports for any worker count.
pub fn propagate(
    c: &CorrelationMatrix,
    dc: &CorrelationErrors,
    target: Option<&TwoQubitKet>,
    cfg: &MonteCarloConfig,
) -> Result<UncertaintyReport> {
    assert!(cfg.samples >= 2, "need at least 2 samples");
    // The pipeline must succeed on the point estimate before any resampling.
    let point_sf = to_standard_form(c)?;
    transform_eqp(&std_eqp(point_sf.diagonal), &point_sf.t_a, &point_sf.t_b)?;
    let point_diag = [
        point_sf.diagonal[1],
        point_sf.diagonal[2],
        point_sf.diagonal[3],
    ];

    let c_m = *c.matrix();
    let dc_m = *dc.matrix();
    let align_anchor = cfg.align.then_some(point_diag);

    let worker = |idx: usize| -> Option<SampleOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, idx));
        let sample = draw_correlations(&c_m, &dc_m, &mut rng);
        run_sample(&sample, target, align_anchor.as_ref()).ok()
    };

    let outcomes: Vec<Option<SampleOutcome>> = if cfg.workers == 1 {
        (0..cfg.samples).map(worker).collect()
    } else if cfg.workers == 0 {
        (0..cfg.samples).into_par_iter().map(worker).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .expect("thread pool");
        pool.install(|| (0..cfg.samples).into_par_iter().map(worker).collect())
    };

    let failed = outcomes.iter().filter(|o| o.is_none()).count();
    if (failed as f64) > FAILURE_TOLERANCE * cfg.samples as f64 {
        return Err(Error::TooManyFailures {
            failed,
            total: cfg.samples,
        });
    }

    let mut weight_acc = [Welford::default(); WEIGHT_COUNT];
    let mut purity_acc = Welford::default();
    let mut fidelity_acc = Welford::default();
    let mut pt_acc = Welford::default();
    let mut regularized = 0usize;
    for outcome in outcomes.iter().flatten() {
        for (acc, w) in weight_acc.iter_mut().zip(outcome.weights.iter()) {
            acc.push(*w);
        }
        purity_acc.push(outcome.purity);
        if let Some(f) = outcome.fidelity {
            fidelity_acc.push(f);
        }
        pt_acc.push(outcome.pt_min);
        if outcome.regularized {
            regularized += 1;
        }
    }

    let mut weight_std = [0.0; WEIGHT_COUNT];
    for (out, acc) in weight_std.iter_mut().zip(weight_acc.iter()) {
        *out = acc.std();
    }
    Ok(UncertaintyReport {
        weight_std,
        purity_std: purity_acc.std(),
        fidelity_std: target.map(|_| fidelity_acc.std()),
        pt_min_eigenvalue_std: pt_acc.std(),
        failed_samples: failed,
        regularized_samples: regularized,
        samples: cfg.samples,
    })
}
