use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{make_state, StateFamily, TwoQubitState};
use crate::linalg::{c, su2_from_quaternion, Ket, Mat2, Mat4, C64};

/// Random-state ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RandomKind {
    /// `GG†/Tr(GG†)`, G a 4x4 complex standard-normal matrix.
    MixedGinibre,
    /// Normalised complex-Gaussian 4-vector.
    PureHaar,
    /// Dirichlet(1,1,1,1) weights over the Bell projectors.
    BellDiagonal,
    /// Rank-2 Bell-diagonal layout with `C ~ U(0,1]`, `S ~ U(-√(1-C²), √(1-C²))`.
    #[value(name = "rank2-bd")]
    #[serde(rename = "rank2-bd")]
    Rank2Bd,
    /// Real X state, parameters uniform over the physical region.
    XState,
    /// Schmidt form with `C ~ U[0,1]`, rotated by Haar local unitaries.
    PureSchmidt,
    /// Convex mixture of 1..=4 random product pure states.
    Separable,
}

impl RandomKind {
    pub const ALL: [RandomKind; 7] = [
        RandomKind::MixedGinibre,
        RandomKind::PureHaar,
        RandomKind::BellDiagonal,
        RandomKind::Rank2Bd,
        RandomKind::XState,
        RandomKind::PureSchmidt,
        RandomKind::Separable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RandomKind::MixedGinibre => "mixed-ginibre",
            RandomKind::PureHaar => "pure-haar",
            RandomKind::BellDiagonal => "bell-diagonal",
            RandomKind::Rank2Bd => "rank2-bd",
            RandomKind::XState => "x-state",
            RandomKind::PureSchmidt => "pure-schmidt",
            RandomKind::Separable => "separable",
        }
    }
}

impl std::fmt::Display for RandomKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

fn dirichlet_ones<R: Rng + ?Sized, const N: usize>(rng: &mut R) -> [f64; N] {
    let mut w = [0.0; N];
    for x in w.iter_mut() {
        *x = Exp1.sample(rng);
    }
    let total: f64 = w.iter().sum();
    w.map(|x| x / total)
}

fn haar_ket<R: Rng + ?Sized>(rng: &mut R) -> Ket {
    let k = Ket::from_fn(|_, _| complex_normal(rng));
    let n = k.norm();
    k / c(n)
}

fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> nalgebra::Vector2<C64> {
    let k = nalgebra::Vector2::from_fn(|_, _| complex_normal(rng));
    let n = k.norm();
    k / c(n)
}

/// Haar-random SU(2) element.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let mut q: [f64; 4] = [0.0; 4];
    for x in q.iter_mut() {
        *x = StandardNormal.sample(rng);
    }
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    su2_from_quaternion(q.map(|x| x / n))
}

fn uniform_sym<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Draws one state from `kind` using `rng`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, kind: RandomKind) -> TwoQubitState {
    match kind {
        RandomKind::MixedGinibre => {
            let g = Mat4::from_fn(|_, _| complex_normal(rng));
            let m = g * g.adjoint();
            let tr = m.trace().re;
            let m = m / c(tr);
            TwoQubitState::new((m + m.adjoint()) * c(0.5)).expect("Ginibre draws are PSD")
        }
        RandomKind::PureHaar => TwoQubitState::from_ket(&haar_ket(rng)).expect("normalised ket"),
        RandomKind::BellDiagonal => {
            let weights = dirichlet_ones::<_, 4>(rng);
            make_state(&StateFamily::BellDiagonal { weights }).expect("Dirichlet weights")
        }
        RandomKind::Rank2Bd => loop {
            let conc = 1.0 - rng.random::<f64>();
            let s = uniform_sym(rng) * (1.0 - conc * conc).max(0.0).sqrt();
            if let Ok(st) = make_state(&StateFamily::RankTwoBellDiagonal { c: conc, s }) {
                break st;
            }
        },
        RandomKind::XState => {
            let [x1, x2, x3, x4] = dirichlet_ones::<_, 4>(rng);
            let y1 = uniform_sym(rng) * (x1 * x4).sqrt();
            let y2 = uniform_sym(rng) * (x2 * x3).sqrt();
            make_state(&StateFamily::XState { x1, x2, x3, x4, y1, y2 }).expect("physical X state")
        }
        RandomKind::PureSchmidt => {
            let conc = rng.random::<f64>();
            let base = make_state(&StateFamily::PureSchmidt { c: conc }).expect("C in [0,1)");
            let u = random_local_unitary(rng);
            let v = random_local_unitary(rng);
            base.apply_local_unitaries(&u, &v)
        }
        RandomKind::Separable => {
            let terms = rng.random_range(1..=4usize);
            let raw: Vec<f64> = (0..terms).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = raw.iter().sum();
            let mut m = Mat4::zeros();
            for w in raw {
                let a = haar_qubit(rng);
                let b = haar_qubit(rng);
                let ket = a.kronecker(&b);
                m += ket * ket.adjoint() * c(w / total);
            }
            TwoQubitState::new((m + m.adjoint()) * c(0.5)).expect("mixture of products")
        }
    }
}
