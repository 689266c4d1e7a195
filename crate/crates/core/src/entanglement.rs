//! Wootters concurrence and the correlation-tensor entanglement witness.

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, c, Mat4};
use crate::qstate::{SingularTriple, TwoQubitState};

/// Concurrence of a two-qubit state, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Concurrence(f64);

impl Concurrence {
    pub fn new(value: f64) -> Option<Self> {
        (0.0..=1.0).contains(&value).then_some(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

/// Eigenvalue cutoff below which a spectral component of ρ is treated as
/// rounding noise when forming its square-root factor.
fn rank_cutoff(max_eig: f64) -> f64 {
    64.0 * f64::EPSILON * max_eig.max(f64::MIN_POSITIVE)
}

/// The Wootters values λ₁ ≥ … ≥ λ₄: square roots of the eigenvalues of
/// `ρ (σy⊗σy) ρ* (σy⊗σy)`.
///
/// Computed as the singular values of `Ψᵀ (σy⊗σy) Ψ` with `ρ = ΨΨ†`, which
/// has the same spectrum and stays accurate for rank-deficient states.
pub fn wootters_lambdas(state: &TwoQubitState) -> [f64; 4] {
    let (eigs, vecs) = linalg::hermitian_eigen(state.matrix());
    let cutoff = rank_cutoff(eigs[3]);
    let mut psi = Mat4::zeros();
    for k in 0..4 {
        if eigs[k] > cutoff {
            psi.set_column(k, &(vecs.column(k) * c(eigs[k].sqrt())));
        }
    }
    let tau = psi.transpose() * linalg::spin_flip() * psi;
    let s = SVD::new(tau, false, false).singular_values;
    let mut out = [s[0], s[1], s[2], s[3]];
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Same quantities via the Hermitian form `sqrt(√ρ ρ̃ √ρ)`.
pub fn wootters_lambdas_hermitian(state: &TwoQubitState) -> [f64; 4] {
    let (eigs, vecs) = linalg::hermitian_eigen(state.matrix());
    let sqrt_d = Mat4::from_diagonal(&eigs.map(|e| c(e.max(0.0).sqrt())));
    let sqrt_rho = vecs * sqrt_d * vecs.adjoint();
    let flip = linalg::spin_flip();
    let tilde = flip * state.matrix().conjugate() * flip;
    let h = sqrt_rho * tilde * sqrt_rho;
    let (mu, _) = linalg::hermitian_eigen(&h);
    let mut out = [mu[0], mu[1], mu[2], mu[3]].map(|m| m.max(0.0).sqrt());
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Values below this are rounding noise on a separable state and read as 0.
pub const CONCURRENCE_FLOOR: f64 = 1e-12;

/// `C = max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
pub fn concurrence(state: &TwoQubitState) -> Concurrence {
    let l = wootters_lambdas(state);
    let value = (l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0);
    Concurrence(if value < CONCURRENCE_FLOOR { 0.0 } else { value })
}

/// `e1 + e2 > 1` certifies entanglement; separable states always satisfy
/// `e1 + e2 ≤ 1`. A `false` result is inconclusive.
pub fn entanglement_certified_by_tensor(triple: &SingularTriple) -> bool {
    triple.e1 + triple.e2 > 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{make_state, singular_triple, StateFamily};

    fn conc(f: StateFamily) -> f64 {
        concurrence(&make_state(&f).unwrap()).value()
    }

    #[test]
    fn bell_states_are_maximally_entangled() {
        for index in 0..4 {
            assert!((conc(StateFamily::Bell { index }) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_is_separable() {
        assert_eq!(concurrence(&TwoQubitState::maximally_mixed()).value(), 0.0);
    }

    #[test]
    fn horodecki_mix_concurrence_is_p() {
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let value = conc(StateFamily::HorodeckiMix { p });
            assert!((value - p).abs() < 1e-10, "p={p} got {value}");
        }
    }

    #[test]
    fn werner_concurrence() {
        for k in 0..=20 {
            let v = k as f64 / 20.0;
            let expected = ((3.0 * v - 1.0) / 2.0).max(0.0);
            assert!((conc(StateFamily::Werner { v }) - expected).abs() < 1e-10, "v={v}");
        }
    }

    #[test]
    fn x_subclass_concurrence_is_twice_y2() {
        // x4 = y1 = 0; y2 up to sqrt(x2 x3).
        for (x1, x2, x3, frac) in [(0.2, 0.5, 0.3, 0.9), (0.0, 0.5, 0.5, 1.0), (0.6, 0.1, 0.3, 0.4)] {
            let y2 = frac * f64::sqrt(x2 * x3);
            let value = conc(StateFamily::XState { x1, x2, x3, x4: 0.0, y1: 0.0, y2 });
            assert!((value - 2.0 * y2).abs() < 1e-10, "{value} vs {}", 2.0 * y2);
        }
    }

    #[test]
    fn separable_draws_have_zero_concurrence() {
        use crate::qstate::{random_state, RandomKind};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let s = random_state(&mut rng, RandomKind::Separable);
            assert!(concurrence(&s).is_zero());
        }
    }

    #[test]
    fn tensor_witness_examples() {
        assert!(entanglement_certified_by_tensor(&SingularTriple::new([1.0, 1.0, 1.0])));
        assert!(!entanglement_certified_by_tensor(&SingularTriple::new([0.5, 0.25, 0.0])));
        let w = make_state(&StateFamily::Werner { v: 0.6 }).unwrap();
        assert!(entanglement_certified_by_tensor(&singular_triple(&w)));
        assert!((concurrence(&w).value() - 0.4).abs() < 1e-12);
    }
}
