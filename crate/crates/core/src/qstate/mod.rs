//! Two-qubit density operators, their Bloch-domain decomposition and the
//! singular values of the correlation tensor.
//!
//! Basis ordering is the computational one, `|00⟩, |01⟩, |10⟩, |11⟩`, with
//! the first tensor factor belonging to the first party of the source.

mod family;
mod random;

pub use family::{make_state, BellState, StateFamily};
pub use random::{random_local_unitary, random_state, RandomKind};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, kron, pauli, Mat3, Mat4, Vec3};

/// Tolerance for the Hermitian, unit-trace and PSD checks.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: Mat4,
}

impl TwoQubitState {
    /// Validates `matrix` as a density operator.
    pub fn new(matrix: Mat4) -> Result<Self> {
        let mut herm_dev: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                herm_dev = herm_dev.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if herm_dev > STATE_TOLERANCE {
            return Err(Error::NotPhysical(format!(
                "matrix is not Hermitian (max |m_ij - conj(m_ji)| = {herm_dev:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - c(1.0)).norm() > STATE_TOLERANCE {
            return Err(Error::NotPhysical(format!(
                "trace is {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let (eigs, _) = linalg::hermitian_eigen(&matrix);
        if eigs[0] < -STATE_TOLERANCE {
            return Err(Error::NotPhysical(format!(
                "matrix is not positive semidefinite (smallest eigenvalue {:.3e})",
                eigs[0]
            )));
        }
        Ok(Self { matrix })
    }

    /// Builds `|ψ⟩⟨ψ|` after normalising `ket`.
    pub fn from_ket(ket: &linalg::Ket) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotPhysical("zero or non-finite state vector".into()));
        }
        Self::new(linalg::projector(&(ket / c(norm))))
    }

    /// Real and imaginary parts given row-major.
    pub fn from_parts(re: &[[f64; 4]; 4], im: &[[f64; 4]; 4]) -> Result<Self> {
        let mut m = Mat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = linalg::C64::new(re[i][j], im[i][j]);
            }
        }
        Self::new(m)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Mat4::identity() * c(0.25),
        }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    /// Row-major (re, im) parts.
    pub fn parts(&self) -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
        let mut re = [[0.0; 4]; 4];
        let mut im = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                re[i][j] = self.matrix[(i, j)].re;
                im[i][j] = self.matrix[(i, j)].im;
            }
        }
        (re, im)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let (e, _) = linalg::hermitian_eigen(&self.matrix);
        [e[0], e[1], e[2], e[3]]
    }

    /// `(U ⊗ V) ρ (U ⊗ V)†`.
    pub fn apply_local_unitaries(&self, u: &linalg::Mat2, v: &linalg::Mat2) -> Self {
        let w = kron(u, v);
        let m = w * self.matrix * w.adjoint();
        Self {
            matrix: (m + m.adjoint()) * c(0.5),
        }
    }

    /// `ρ_A ⊗ ρ_B` from two valid single-qubit density matrices.
    pub fn product(a: &linalg::Mat2, b: &linalg::Mat2) -> Result<Self> {
        Self::new(kron(a, b))
    }

    /// Explicit descriptor reproducing this matrix exactly.
    pub fn to_family(&self) -> StateFamily {
        let (re, im) = self.parts();
        StateFamily::Explicit { re, im }
    }

    pub fn bloch(&self) -> BlochDecomposition {
        bloch_decompose(self)
    }

    pub fn singular_triple(&self) -> SingularTriple {
        singular_triple(self)
    }
}

/// Local Bloch vectors and correlation tensor of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochDecomposition {
    pub u: Vec3,
    pub v: Vec3,
    /// `r[(i, j)] = Tr[ρ σ_i ⊗ σ_j]`.
    pub r: Mat3,
}

impl BlochDecomposition {
    /// `ρ = ¼ (I + u·σ ⊗ I + I ⊗ v·σ + Σ r_ij σ_i ⊗ σ_j)`.
    pub fn reconstruct(&self) -> Mat4 {
        let id = linalg::identity2();
        let mut m = Mat4::identity();
        for i in 0..3 {
            m += kron(&pauli(i + 1), &id) * c(self.u[i]);
            m += kron(&id, &pauli(i + 1)) * c(self.v[i]);
            for j in 0..3 {
                m += kron(&pauli(i + 1), &pauli(j + 1)) * c(self.r[(i, j)]);
            }
        }
        m * c(0.25)
    }

    /// True when both local Bloch vectors vanish, i.e. the state is
    /// Bell-diagonal up to local unitaries.
    pub fn is_locally_bell_diagonal(&self, tol: f64) -> bool {
        self.u.norm() <= tol && self.v.norm() <= tol
    }
}

pub fn bloch_decompose(state: &TwoQubitState) -> BlochDecomposition {
    let rho = state.matrix();
    let id = linalg::identity2();
    let expect = |op: Mat4| (rho * op).trace().re;
    let mut u = Vec3::zeros();
    let mut v = Vec3::zeros();
    let mut r = Mat3::zeros();
    for i in 0..3 {
        u[i] = expect(kron(&pauli(i + 1), &id));
        v[i] = expect(kron(&id, &pauli(i + 1)));
        for j in 0..3 {
            r[(i, j)] = expect(kron(&pauli(i + 1), &pauli(j + 1)));
        }
    }
    BlochDecomposition { u, v, r }
}

/// Singular values of the correlation tensor, `e1 ≥ e2 ≥ e3 ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularTriple {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl SingularTriple {
    /// Sorts the three magnitudes into descending order.
    pub fn new(values: [f64; 3]) -> Self {
        let mut v = values.map(f64::abs);
        v.sort_by(|a, b| b.total_cmp(a));
        Self {
            e1: v[0],
            e2: v[1],
            e3: v[2],
        }
    }

    pub fn of_tensor(r: &Mat3) -> Self {
        let (_, s, _) = linalg::svd3(r);
        Self::new([s[0], s[1], s[2]])
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.e1, self.e2, self.e3]
    }
}

pub fn singular_triple(state: &TwoQubitState) -> SingularTriple {
    SingularTriple::of_tensor(&bloch_decompose(state).r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, Ket};

    fn bell_phi_plus() -> TwoQubitState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        TwoQubitState::from_ket(&Ket::new(c(s), c(0.0), c(0.0), c(s))).unwrap()
    }

    #[test]
    fn maximally_mixed_has_zero_bloch_data() {
        let b = bloch_decompose(&TwoQubitState::maximally_mixed());
        assert!(b.u.norm() < 1e-15 && b.v.norm() < 1e-15 && b.r.norm() < 1e-15);
    }

    #[test]
    fn phi_plus_tensor_by_direct_traces() {
        // ⟨XX⟩ = 1, ⟨YY⟩ = -1, ⟨ZZ⟩ = 1, everything else 0.
        let b = bloch_decompose(&bell_phi_plus());
        let expected = Mat3::from_diagonal(&Vec3::new(1.0, -1.0, 1.0));
        assert!((b.r - expected).norm() < 1e-14);
        assert!(b.u.norm() < 1e-14 && b.v.norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Mat4::identity() * c(0.25);
        m[(0, 1)] = c(0.1);
        assert!(matches!(TwoQubitState::new(m), Err(Error::NotPhysical(_))));
    }

    #[test]
    fn rejects_bad_trace() {
        let m = Mat4::identity() * c(0.3);
        let err = TwoQubitState::new(m).unwrap_err();
        assert!(err.to_string().contains("trace"));
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = Mat4::from_diagonal(&nalgebra::Vector4::new(c(0.6), c(0.6), c(-0.1), c(-0.1)));
        let err = TwoQubitState::new(m).unwrap_err();
        assert!(err.to_string().contains("positive semidefinite"));
    }

    #[test]
    fn accepts_tiny_negative_within_tolerance() {
        let m = Mat4::from_diagonal(&nalgebra::Vector4::new(
            c(0.5 + 5e-11),
            c(0.5),
            c(-5e-11),
            C64::new(0.0, 0.0),
        ));
        assert!(TwoQubitState::new(m).is_ok());
    }

    #[test]
    fn triple_sorting() {
        let t = SingularTriple::new([0.2, -0.9, 0.5]);
        assert_eq!(t.as_array(), [0.9, 0.5, 0.2]);
    }
}
