//! Small dense helpers shared by the state, entanglement and network modules.
//!
//! Everything here is fixed-size: 2x2 and 4x4 complex matrices for qubit
//! operators, 3x3 real matrices for correlation tensors.

use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3, Vector4, SVD};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
pub type Mat3 = Matrix3<f64>;
pub type Vec3 = Vector3<f64>;
pub type Ket = Vector4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

/// Pauli matrix `k` for k in {1, 2, 3} (x, y, z).
pub fn pauli(k: usize) -> Mat2 {
    match k {
        1 => Mat2::new(ZERO, ONE, ONE, ZERO),
        2 => Mat2::new(ZERO, -I, I, ZERO),
        3 => Mat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range 1..=3"),
    }
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `n · σ` for a real 3-vector.
pub fn bloch_operator(n: &Vec3) -> Mat2 {
    pauli(1) * c(n[0]) + pauli(2) * c(n[1]) + pauli(3) * c(n[2])
}

/// `σ_y ⊗ σ_y`, the two-qubit spin flip.
pub fn spin_flip() -> Mat4 {
    kron(&pauli(2), &pauli(2))
}

pub fn projector(ket: &Ket) -> Mat4 {
    ket * ket.adjoint()
}

pub fn trace_re(m: &Mat4) -> f64 {
    m.trace().re
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian 4x4 matrix.
pub fn hermitian_eigen(m: &Mat4) -> (Vector4<f64>, Mat4) {
    let h = (m + m.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = Vector4::zeros();
    let mut vectors = Mat4::zeros();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = eig.eigenvalues[src];
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Real SVD `m = U diag(s) Vᵀ` with singular values sorted descending and
/// `U`, `V` orthogonal.
pub fn svd3(m: &Mat3) -> (Mat3, Vec3, Mat3) {
    let svd = SVD::new(*m, true, true);
    let u = svd.u.expect("U requested");
    let v_t = svd.v_t.expect("Vᵀ requested");
    let s = svd.singular_values;
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let mut uu = Mat3::zeros();
    let mut vv = Mat3::zeros();
    let mut ss = Vec3::zeros();
    for (dst, &src) in order.iter().enumerate() {
        uu.set_column(dst, &u.column(src));
        vv.set_column(dst, &v_t.row(src).transpose());
        ss[dst] = s[src];
    }
    (uu, ss, vv)
}

/// Any unit vector orthogonal to `v` (which must be nonzero).
pub fn orthogonal_unit(v: &Vec3) -> Vec3 {
    let axis = if v[0].abs() <= v[1].abs() && v[0].abs() <= v[2].abs() {
        Vec3::x()
    } else if v[1].abs() <= v[2].abs() {
        Vec3::y()
    } else {
        Vec3::z()
    };
    v.cross(&axis).normalize()
}

/// SU(2) element from a unit quaternion `(a, b, c, d)`.
pub fn su2_from_quaternion(q: [f64; 4]) -> Mat2 {
    let [a, b, cc, d] = q;
    Mat2::new(
        C64::new(a, b),
        C64::new(cc, d),
        C64::new(-cc, d),
        C64::new(a, -b),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        for k in 1..=3 {
            let p = pauli(k);
            assert!((p * p - identity2()).norm() < 1e-15);
            assert!((p - p.adjoint()).norm() < 1e-15);
        }
        // σx σy = i σz
        let lhs = pauli(1) * pauli(2);
        assert!((lhs - pauli(3) * I).norm() < 1e-15);
    }

    #[test]
    fn svd3_is_sorted_and_reconstructs() {
        let m = Mat3::new(0.1, -0.7, 0.2, 0.4, 0.3, -0.5, 0.0, 0.25, 0.9);
        let (u, s, v) = svd3(&m);
        assert!(s[0] >= s[1] && s[1] >= s[2] && s[2] >= 0.0);
        let rebuilt = u * Mat3::from_diagonal(&s) * v.transpose();
        assert!((rebuilt - m).norm() < 1e-13);
        assert!((u.transpose() * u - Mat3::identity()).norm() < 1e-13);
    }

    #[test]
    fn orthogonal_unit_is_orthogonal() {
        for v in [Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.3, -2.0, 0.5), Vec3::new(0.0, 0.0, 4.0)] {
            let w = orthogonal_unit(&v);
            assert!(w.dot(&v).abs() < 1e-14);
            assert!((w.norm() - 1.0).abs() < 1e-14);
        }
    }
}
