//! Synthetic coincidence-count generation: Born-rule outcome probabilities
//! for the 36 polarizer settings and Poisson count statistics, for desk-scale
//! reproduction of experimental runs.

use nalgebra::{Matrix4, Matrix6, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::pauli::{outcome_vector, C64, DensityMatrix, OutcomeLabel};
use crate::tomography::CoincidenceMatrix;

/// Default expected pairs per polarizer-setting pair. Each same-basis block
/// collects 4× this in expectation, so the default yields just over one
/// million coincidences across the 6×6 grid (36 × 30,000 = 1.08M).
pub const DEFAULT_PAIRS_PER_SETTING: f64 = 30_000.0;

// ── State presets ────────────────────────────────────────────────────────────

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// |ψ⟩ = (|H,V⟩ − |V,H⟩)/√2.
pub fn singlet_ket() -> Vector4<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Vector4::new(c(0.0, 0.0), c(r, 0.0), c(-r, 0.0), c(0.0, 0.0))
}

/// The singlet projector.
pub fn singlet_state() -> DensityMatrix {
    DensityMatrix::from_ket(&singlet_ket())
}

/// The separable target (|H⟩+|V⟩)/√2 ⊗ |H⟩.
pub fn product_ket() -> Vector4<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Vector4::new(c(r, 0.0), c(0.0, 0.0), c(r, 0.0), c(0.0, 0.0))
}

pub fn product_state() -> DensityMatrix {
    DensityMatrix::from_ket(&product_ket())
}

/// p·singlet + (1−p)·identity/4; entangled iff p > 1/3.
pub fn werner_state(p: f64) -> DensityMatrix {
    let m = singlet_state().matrix() * c(p, 0.0)
        + Matrix4::identity() * c((1.0 - p) / 4.0, 0.0);
    DensityMatrix::from_matrix_unchecked(m)
}

/// Identity/4.
pub fn maximally_mixed() -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(Matrix4::identity() * c(0.25, 0.0))
}

/// Named source states for the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatePreset {
    Singlet,
    Product,
    Werner(f64),
    MaximallyMixed,
}

impl StatePreset {
    pub fn state(self) -> DensityMatrix {
        match self {
            StatePreset::Singlet => singlet_state(),
            StatePreset::Product => product_state(),
            StatePreset::Werner(p) => werner_state(p),
            StatePreset::MaximallyMixed => maximally_mixed(),
        }
    }
}

/// A full-rank random two-qubit state from GG†/tr(GG†) with complex Gaussian
/// G. Used as a test ensemble; full rank holds almost surely.
pub fn random_full_rank_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    use rand_distr::StandardNormal;
    let g = Matrix4::from_fn(|_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_matrix_unchecked(m / c(tr, 0.0))
}

// ── Simulation ───────────────────────────────────────────────────────────────

/// Configuration for a synthetic run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub preset: StatePreset,
    /// Expected pairs per polarizer-setting pair; must be positive.
    pub pairs_per_setting: f64,
    pub seed: u64,
    /// Emit exact expectations instead of Poisson draws.
    pub noise_free: bool,
}

impl SimulationConfig {
    pub fn new(preset: StatePreset) -> Self {
        SimulationConfig {
            preset,
            pairs_per_setting: DEFAULT_PAIRS_PER_SETTING,
            seed: 0,
            noise_free: false,
        }
    }
}

/// Born-rule outcome probabilities p(s,t) = ⟨s,t|ρ|s,t⟩ over the six
/// polarization outcomes on each side. Every same-basis 2×2 block sums to 1.
/// Rejects states with min eigenvalue < −1e−8.
pub fn outcome_probabilities(rho: &DensityMatrix) -> Result<Matrix6<f64>> {
    let min_eig = rho.min_eigenvalue();
    if min_eig < -1e-8 {
        return Err(Error::UnphysicalState {
            min_eigenvalue: min_eig,
        });
    }
    let mut p = Matrix6::<f64>::zeros();
    for s in OutcomeLabel::ALL {
        for t in OutcomeLabel::ALL {
            let st = outcome_vector(s).vector().kronecker(outcome_vector(t).vector());
            p[(s.index(), t.index())] = (st.adjoint() * rho.matrix() * st)[0].re.max(0.0);
        }
    }
    Ok(p)
}

/// Simulates the coincidence grid for a source state.
///
/// Convention: the four outcome combinations of a same-basis block belong to
/// one basis-pair setting that collects 4 × `pairs_per_setting` expected
/// pairs, so E(s,t) ~ Poisson(4 · pairs_per_setting · p(s,t)) independently
/// per entry. With the noise-free flag the exact expectations are emitted.
pub fn sample_counts(cfg: &SimulationConfig) -> Result<CoincidenceMatrix> {
    assert!(
        cfg.pairs_per_setting > 0.0,
        "pairs_per_setting must be positive"
    );
    let p = outcome_probabilities(&cfg.preset.state())?;
    let scale = 4.0 * cfg.pairs_per_setting;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut e = Matrix6::<f64>::zeros();
    // Fixed row-major order keeps seeded output bitwise reproducible.
    for s in 0..6 {
        for t in 0..6 {
            let lambda = scale * p[(s, t)];
            e[(s, t)] = if cfg.noise_free {
                lambda
            } else if lambda > 0.0 {
                Poisson::new(lambda).expect("positive lambda").sample(&mut rng)
            } else {
                0.0
            };
        }
    }
    CoincidenceMatrix::new(e)
}
