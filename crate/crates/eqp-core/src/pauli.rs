//! Polarization-qubit basis states, the Pauli-operator convention used
//! throughout this crate, and conversions between Pauli correlation matrices
//! and density operators.
//!
//! The Pauli labels follow the polarization convention in which each operator
//! is diagonal in one of the three mutually unbiased polarization bases:
//!
//! | here | eigenbasis | textbook equivalent |
//! |------|------------|---------------------|
//! | σ_x  | {H, V}     | σ_z                 |
//! | σ_y  | {D, A}     | σ_x                 |
//! | σ_z  | {R, L}     | σ_y                 |
//!
//! This is a cyclic relabeling of the textbook axes, so it preserves the
//! Pauli algebra (σ_x σ_y = i σ_z and cyclic) and with it all SU(2)/Bloch
//! machinery. Two-qubit matrices are always ordered {|H,H⟩, |H,V⟩, |V,H⟩,
//! |V,V⟩}, and 4×4 correlation matrices index Pauli labels as (0, x, y, z).

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::tomography::CorrelationMatrix;

pub type C64 = Complex<f64>;

/// Tolerance for hermiticity and normalization checks on constructed states.
pub const HERMITICITY_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

// ── Basis labels ─────────────────────────────────────────────────────────────

/// One of the six polarization outcomes. {H,V}, {D,A}, {R,L} form three
/// mutually unbiased bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeLabel {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl OutcomeLabel {
    /// All six labels in the canonical order used for count matrices.
    pub const ALL: [OutcomeLabel; 6] = [
        OutcomeLabel::H,
        OutcomeLabel::V,
        OutcomeLabel::D,
        OutcomeLabel::A,
        OutcomeLabel::R,
        OutcomeLabel::L,
    ];

    /// Position in the canonical (H,V,D,A,R,L) order.
    pub fn index(self) -> usize {
        match self {
            OutcomeLabel::H => 0,
            OutcomeLabel::V => 1,
            OutcomeLabel::D => 2,
            OutcomeLabel::A => 3,
            OutcomeLabel::R => 4,
            OutcomeLabel::L => 5,
        }
    }

    /// Index of the mutually unbiased basis this outcome belongs to:
    /// 0 for {H,V}, 1 for {D,A}, 2 for {R,L}.
    pub fn basis(self) -> usize {
        self.index() / 2
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeLabel::H => "H",
            OutcomeLabel::V => "V",
            OutcomeLabel::D => "D",
            OutcomeLabel::A => "A",
            OutcomeLabel::R => "R",
            OutcomeLabel::L => "L",
        }
    }

    pub fn parse(s: &str) -> Option<OutcomeLabel> {
        match s.trim() {
            "H" => Some(OutcomeLabel::H),
            "V" => Some(OutcomeLabel::V),
            "D" => Some(OutcomeLabel::D),
            "A" => Some(OutcomeLabel::A),
            "R" => Some(OutcomeLabel::R),
            "L" => Some(OutcomeLabel::L),
            _ => None,
        }
    }
}

impl std::fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Label of a Pauli operator; index 0 denotes the identity σ_0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliIndex {
    I,
    X,
    Y,
    Z,
}

impl PauliIndex {
    pub const ALL: [PauliIndex; 4] = [PauliIndex::I, PauliIndex::X, PauliIndex::Y, PauliIndex::Z];

    /// The three non-identity labels, in the (x, y, z) order used for the
    /// spatial part of correlation matrices.
    pub const SPATIAL: [PauliIndex; 3] = [PauliIndex::X, PauliIndex::Y, PauliIndex::Z];

    /// Position in the canonical (0, x, y, z) order.
    pub fn index(self) -> usize {
        match self {
            PauliIndex::I => 0,
            PauliIndex::X => 1,
            PauliIndex::Y => 2,
            PauliIndex::Z => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PauliIndex::I => "0",
            PauliIndex::X => "x",
            PauliIndex::Y => "y",
            PauliIndex::Z => "z",
        }
    }
}

// ── Single-qubit states ──────────────────────────────────────────────────────

/// A single-qubit state vector in the {|H⟩, |V⟩} basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitVector(Vector2<C64>);

impl QubitVector {
    pub fn new(a: C64, b: C64) -> Self {
        QubitVector(Vector2::new(a, b))
    }

    pub fn from_vector(v: Vector2<C64>) -> Self {
        QubitVector(v)
    }

    pub fn vector(&self) -> &Vector2<C64> {
        &self.0
    }

    pub fn amplitudes(&self) -> (C64, C64) {
        (self.0[0], self.0[1])
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Returns the state scaled to unit norm.
    pub fn normalized(&self) -> QubitVector {
        QubitVector(self.0 / c(self.0.norm(), 0.0))
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &QubitVector) -> C64 {
        self.0.dotc(&other.0)
    }

    /// The projector |ψ⟩⟨ψ|.
    pub fn projector(&self) -> Matrix2<C64> {
        self.0 * self.0.adjoint()
    }

    /// Bloch coefficients (a_x, a_y, a_z) with a_w = ⟨ψ|σ_w|ψ⟩, in the
    /// polarization Pauli convention of this crate.
    pub fn bloch(&self) -> Vector3<f64> {
        let p = self.projector();
        Vector3::from_fn(|i, _| {
            let s = pauli_matrix(PauliIndex::SPATIAL[i]);
            (p * s.matrix()).trace().re
        })
    }
}

// ── Local operators ──────────────────────────────────────────────────────────

/// Determinant threshold below which a local operator counts as singular.
pub const INVERTIBILITY_TOL: f64 = 1e-12;

/// A 2×2 complex operator acting on a single qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalOperator(Matrix2<C64>);

impl LocalOperator {
    pub fn new(m: Matrix2<C64>) -> Self {
        LocalOperator(m)
    }

    pub fn identity() -> Self {
        LocalOperator(Matrix2::identity())
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn det(&self) -> C64 {
        self.0.determinant()
    }

    pub fn is_invertible(&self) -> bool {
        self.det().norm() > INVERTIBILITY_TOL
    }

    pub fn adjoint(&self) -> LocalOperator {
        LocalOperator(self.0.adjoint())
    }

    /// T†T, the positive operator governing weight transport.
    pub fn gram(&self) -> Matrix2<C64> {
        self.0.adjoint() * self.0
    }

    pub fn inverse(&self) -> Option<LocalOperator> {
        if !self.is_invertible() {
            return None;
        }
        self.0.try_inverse().map(LocalOperator)
    }

    /// Apply the operator to a state (unnormalized result).
    pub fn apply(&self, v: &QubitVector) -> QubitVector {
        QubitVector(self.0 * v.vector())
    }

    pub fn compose(&self, rhs: &LocalOperator) -> LocalOperator {
        LocalOperator(self.0 * rhs.0)
    }

    pub fn scale(&self, s: f64) -> LocalOperator {
        LocalOperator(self.0 * c(s, 0.0))
    }

    /// The 4×4 real matrix Λ with Λ_{k,l} = tr(σ_k T σ_l T†)/2, describing how
    /// conjugation by this operator acts on Pauli coefficients: a state with
    /// coefficient vector γ maps to Λγ. For a pair of local operators the
    /// correlation matrix transforms as C ↦ Λ(T_A) C Λ(T_B)ᵀ.
    pub fn bloch_matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|k, l| {
            let sk = pauli_matrix(PauliIndex::ALL[k]);
            let sl = pauli_matrix(PauliIndex::ALL[l]);
            (sk.matrix() * self.0 * sl.matrix() * self.0.adjoint()).trace().re / 2.0
        })
    }
}

// ── Density matrices ─────────────────────────────────────────────────────────

/// A two-qubit operator in the {|H,H⟩, |H,V⟩, |V,H⟩, |V,V⟩} basis. Hermitian
/// by construction; positivity is checked where needed, never assumed, since
/// sampled matrices may be slightly unphysical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix4<C64>);

impl DensityMatrix {
    /// Wraps a matrix after checking hermiticity within `HERMITICITY_TOL`.
    pub fn from_matrix(m: Matrix4<C64>) -> Result<Self> {
        let dev = (m - m.adjoint()).norm();
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(DensityMatrix(m))
    }

    /// Wraps a matrix that is Hermitian by construction.
    pub fn from_matrix_unchecked(m: Matrix4<C64>) -> Self {
        DensityMatrix(m)
    }

    /// The projector |ψ⟩⟨ψ| of a pure two-qubit state.
    pub fn from_ket(psi: &nalgebra::Vector4<C64>) -> Self {
        DensityMatrix(psi * psi.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        (self.trace() - 1.0).abs() <= HERMITICITY_TOL
    }

    /// Real eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let eig = nalgebra::SymmetricEigen::new(self.0);
        let mut vals = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2], eig.eigenvalues[3]];
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[3]
    }

    /// Positivity within tolerance `eps` (min eigenvalue ≥ −eps).
    pub fn is_physical(&self, eps: f64) -> bool {
        self.min_eigenvalue() >= -eps
    }

    /// Largest entrywise deviation from another operator.
    pub fn max_deviation(&self, other: &DensityMatrix) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

// ── Operator and basis tables ────────────────────────────────────────────────

/// The Pauli operator for a label, in the polarization convention:
/// σ_x = |H⟩⟨H|−|V⟩⟨V|, σ_y = |D⟩⟨D|−|A⟩⟨A|, σ_z = |R⟩⟨R|−|L⟩⟨L|.
pub fn pauli_matrix(w: PauliIndex) -> LocalOperator {
    let m = match w {
        PauliIndex::I => Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
        PauliIndex::X => Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
        PauliIndex::Y => Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        PauliIndex::Z => Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
    };
    LocalOperator(m)
}

/// The state vector of a polarization outcome in the {|H⟩, |V⟩} basis.
pub fn outcome_vector(s: OutcomeLabel) -> QubitVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match s {
        OutcomeLabel::H => QubitVector::new(c(1.0, 0.0), c(0.0, 0.0)),
        OutcomeLabel::V => QubitVector::new(c(0.0, 0.0), c(1.0, 0.0)),
        OutcomeLabel::D => QubitVector::new(c(r, 0.0), c(r, 0.0)),
        OutcomeLabel::A => QubitVector::new(c(r, 0.0), c(-r, 0.0)),
        OutcomeLabel::R => QubitVector::new(c(r, 0.0), c(0.0, r)),
        OutcomeLabel::L => QubitVector::new(c(r, 0.0), c(0.0, -r)),
    }
}

/// The (+1, −1) eigenvectors of a spatial Pauli operator:
/// x → (H, V), y → (D, A), z → (R, L).
///
/// Panics if called with the identity label.
pub fn eigenbasis_of(w: PauliIndex) -> (QubitVector, QubitVector) {
    match w {
        PauliIndex::I => panic!("eigenbasis_of requires a spatial Pauli label"),
        PauliIndex::X => (outcome_vector(OutcomeLabel::H), outcome_vector(OutcomeLabel::V)),
        PauliIndex::Y => (outcome_vector(OutcomeLabel::D), outcome_vector(OutcomeLabel::A)),
        PauliIndex::Z => (outcome_vector(OutcomeLabel::R), outcome_vector(OutcomeLabel::L)),
    }
}

/// The two-qubit operator σ_k ⊗ σ_l.
pub fn pauli_product(k: PauliIndex, l: PauliIndex) -> Matrix4<C64> {
    pauli_matrix(k).matrix().kronecker(pauli_matrix(l).matrix())
}

// ── Correlation ↔ density conversions ────────────────────────────────────────

/// Assembles ρ = Σ_{k,l} C_{k,l} σ_k⊗σ_l / 4 from a Pauli correlation matrix.
pub fn density_from_correlations(corr: &CorrelationMatrix) -> DensityMatrix {
    let c_m = corr.matrix();
    let mut rho = Matrix4::<C64>::zeros();
    for (k, pk) in PauliIndex::ALL.iter().enumerate() {
        for (l, pl) in PauliIndex::ALL.iter().enumerate() {
            rho += pauli_product(*pk, *pl) * c(c_m[(k, l)] / 4.0, 0.0);
        }
    }
    DensityMatrix::from_matrix_unchecked(rho)
}

/// Extracts C_{k,l} = tr(ρ σ_k⊗σ_l). Left inverse of
/// [`density_from_correlations`]; the trace is real within 1e−12 for
/// Hermitian input and the imaginary part is discarded.
pub fn correlations_from_density(rho: &DensityMatrix) -> CorrelationMatrix {
    let m = Matrix4::from_fn(|k, l| {
        (rho.matrix() * pauli_product(PauliIndex::ALL[k], PauliIndex::ALL[l])).trace().re
    });
    CorrelationMatrix::from_matrix(m)
}

// ── Rotations and SU(2) ──────────────────────────────────────────────────────

/// The 2×2 unitary realizing a spatial rotation on Bloch coefficients in this
/// crate's Pauli convention: conjugation by the result maps coefficient
/// vectors (a_x, a_y, a_z) to R·(a_x, a_y, a_z).
///
/// Uses the quaternion extraction of the rotation, branching on the largest
/// diagonal entry for stability; `r` must be a proper rotation (det +1).
pub fn su2_from_rotation(r: &Matrix3<f64>) -> LocalOperator {
    let trace = r.trace();
    // Quaternion (q0, qx, qy, qz); picks the extraction pivot with the
    // largest magnitude to avoid dividing by a small number.
    let (q0, qx, qy, qz);
    if trace > r[(0, 0)].max(r[(1, 1)]).max(r[(2, 2)]) {
        let s = (1.0 + trace).sqrt() * 2.0;
        q0 = s / 4.0;
        qx = (r[(2, 1)] - r[(1, 2)]) / s;
        qy = (r[(0, 2)] - r[(2, 0)]) / s;
        qz = (r[(1, 0)] - r[(0, 1)]) / s;
    } else if r[(0, 0)] > r[(1, 1)] && r[(0, 0)] > r[(2, 2)] {
        let s = (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt() * 2.0;
        qx = s / 4.0;
        q0 = (r[(2, 1)] - r[(1, 2)]) / s;
        qy = (r[(0, 1)] + r[(1, 0)]) / s;
        qz = (r[(0, 2)] + r[(2, 0)]) / s;
    } else if r[(1, 1)] > r[(2, 2)] {
        let s = (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).sqrt() * 2.0;
        qy = s / 4.0;
        q0 = (r[(0, 2)] - r[(2, 0)]) / s;
        qx = (r[(0, 1)] + r[(1, 0)]) / s;
        qz = (r[(1, 2)] + r[(2, 1)]) / s;
    } else {
        let s = (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).sqrt() * 2.0;
        qz = s / 4.0;
        q0 = (r[(1, 0)] - r[(0, 1)]) / s;
        qx = (r[(0, 2)] + r[(2, 0)]) / s;
        qy = (r[(1, 2)] + r[(2, 1)]) / s;
    }
    // U = q0·σ_0 − i(qx σ_x + qy σ_y + qz σ_z)
    let mut u = Matrix2::identity() * c(q0, 0.0);
    for (q, w) in [(qx, PauliIndex::X), (qy, PauliIndex::Y), (qz, PauliIndex::Z)] {
        u += pauli_matrix(w).matrix() * c(0.0, -q);
    }
    LocalOperator(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mat2(rows: [[C64; 2]; 2]) -> Matrix2<C64> {
        Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    #[test]
    fn pauli_matrices_match_convention() {
        let x = pauli_matrix(PauliIndex::X);
        assert_eq!(*x.matrix(), mat2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]));
        let i = pauli_matrix(PauliIndex::I);
        assert_eq!(*i.matrix(), Matrix2::identity());
        let z = pauli_matrix(PauliIndex::Z);
        assert_eq!(*z.matrix(), mat2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]));
        let y = pauli_matrix(PauliIndex::Y);
        assert_eq!(*y.matrix(), mat2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]));
    }

    #[test]
    fn pauli_orthogonality() {
        for k in PauliIndex::ALL {
            for l in PauliIndex::ALL {
                let prod = pauli_matrix(k).matrix() * pauli_matrix(l).matrix();
                let expected = if k == l { 2.0 } else { 0.0 };
                assert!((prod.trace().re - expected).abs() < 1e-15);
                assert!(prod.trace().im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn outcome_vectors_match_convention() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(outcome_vector(OutcomeLabel::H).amplitudes(), (c(1.0, 0.0), c(0.0, 0.0)));
        assert_eq!(outcome_vector(OutcomeLabel::D).amplitudes(), (c(r, 0.0), c(r, 0.0)));
        assert_eq!(outcome_vector(OutcomeLabel::R).amplitudes(), (c(r, 0.0), c(0.0, r)));
        assert_eq!(outcome_vector(OutcomeLabel::A).amplitudes(), (c(r, 0.0), c(-r, 0.0)));
        assert_eq!(outcome_vector(OutcomeLabel::L).amplitudes(), (c(r, 0.0), c(0.0, -r)));
        for s in OutcomeLabel::ALL {
            assert_relative_eq!(outcome_vector(s).norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bases_are_mutually_unbiased() {
        for s in OutcomeLabel::ALL {
            for t in OutcomeLabel::ALL {
                let ov = outcome_vector(s).inner(&outcome_vector(t)).norm_sqr();
                if s.basis() != t.basis() {
                    assert_relative_eq!(ov, 0.5, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigenbasis_satisfies_eigen_relations() {
        for w in PauliIndex::SPATIAL {
            let (plus, minus) = eigenbasis_of(w);
            let s = pauli_matrix(w);
            let sp = s.apply(&plus);
            let sm = s.apply(&minus);
            assert!((sp.vector() - plus.vector()).norm() < 1e-14);
            assert!((sm.vector() + minus.vector()).norm() < 1e-14);
        }
    }

    #[test]
    #[should_panic]
    fn eigenbasis_rejects_identity() {
        let _ = eigenbasis_of(PauliIndex::I);
    }

    fn singlet_projector() -> Matrix4<C64> {
        // Independent construction: |ψ⟩ = (|H,V⟩ − |V,H⟩)/√2 written out by hand.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = nalgebra::Vector4::new(c(0.0, 0.0), c(r, 0.0), c(-r, 0.0), c(0.0, 0.0));
        psi * psi.adjoint()
    }

    #[test]
    fn density_from_correlations_maximally_mixed() {
        let corr = CorrelationMatrix::from_matrix(Matrix4::from_diagonal(&nalgebra::Vector4::new(
            1.0, 0.0, 0.0, 0.0,
        )));
        let rho = density_from_correlations(&corr);
        assert!((rho.matrix() - Matrix4::<C64>::identity() * c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn density_from_correlations_singlet() {
        let corr = CorrelationMatrix::from_matrix(Matrix4::from_diagonal(&nalgebra::Vector4::new(
            1.0, -1.0, -1.0, -1.0,
        )));
        let rho = density_from_correlations(&corr);
        assert!((rho.matrix() - singlet_projector()).norm() < 1e-14);
        assert_relative_eq!(rho.trace(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn correlations_from_density_examples() {
        let mixed = DensityMatrix::from_matrix_unchecked(Matrix4::identity() * c(0.25, 0.0));
        let cm = correlations_from_density(&mixed);
        let expected = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 0.0, 0.0, 0.0));
        assert!((cm.matrix() - expected).norm() < 1e-14);

        let singlet = DensityMatrix::from_matrix_unchecked(singlet_projector());
        let cs = correlations_from_density(&singlet);
        let expected = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        assert!((cs.matrix() - expected).norm() < 1e-13);
    }

    #[test]
    fn hermiticity_check_rejects_asymmetric() {
        let mut m = singlet_projector();
        m[(0, 1)] += c(1e-6, 0.0);
        assert!(DensityMatrix::from_matrix(m).is_err());
    }

    proptest! {
        #[test]
        fn correlation_round_trip(entries in proptest::collection::vec(-1.0f64..1.0, 15)) {
            let mut m = Matrix4::<f64>::zeros();
            m[(0, 0)] = 1.0;
            let mut it = entries.into_iter();
            for k in 0..4 {
                for l in 0..4 {
                    if (k, l) != (0, 0) {
                        m[(k, l)] = it.next().unwrap();
                    }
                }
            }
            let corr = CorrelationMatrix::from_matrix(m);
            let back = correlations_from_density(&density_from_correlations(&corr));
            prop_assert!((back.matrix() - corr.matrix()).abs().max() < 1e-12);
        }

        #[test]
        fn su2_realizes_rotation(axis in proptest::collection::vec(-1.0f64..1.0, 3),
                                 angle in -std::f64::consts::PI..std::f64::consts::PI) {
            let n = Vector3::new(axis[0], axis[1], axis[2]);
            prop_assume!(n.norm() > 1e-3);
            let n = n.normalize();
            let r = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(n), angle);
            let u = su2_from_rotation(r.matrix());
            // Unitary with unit determinant.
            prop_assert!((u.matrix() * u.matrix().adjoint() - Matrix2::identity()).norm() < 1e-10);
            prop_assert!((u.det() - c(1.0, 0.0)).norm() < 1e-10);
            // Conjugation acts on Bloch coefficients exactly as the rotation.
            let lambda = u.bloch_matrix();
            prop_assert!((lambda[(0, 0)] - 1.0).abs() < 1e-10);
            for i in 0..3 {
                prop_assert!(lambda[(0, 1 + i)].abs() < 1e-10);
                prop_assert!(lambda[(1 + i, 0)].abs() < 1e-10);
                for j in 0..3 {
                    prop_assert!((lambda[(1 + i, 1 + j)] - r.matrix()[(i, j)]).abs() < 1e-10);
                }
            }
        }
    }
}
