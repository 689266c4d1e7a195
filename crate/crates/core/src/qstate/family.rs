use serde::{Deserialize, Serialize};

use super::TwoQubitState;
use crate::error::{Error, Result};
use crate::linalg::{c, projector, Ket, Mat4, C64};

/// Slack allowed when checking equality-type family constraints.
const PARAM_TOLERANCE: f64 = 1e-10;

/// The four Bell states, indexed 0..=3 in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    /// (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// (|01⟩ − |10⟩)/√2
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn from_index(index: u8) -> Option<Self> {
        Self::ALL.get(index as usize).copied()
    }

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn ket(self) -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = c(0.0);
        match self {
            BellState::PhiPlus => Ket::new(c(s), z, z, c(s)),
            BellState::PhiMinus => Ket::new(c(s), z, z, c(-s)),
            BellState::PsiPlus => Ket::new(z, c(s), c(s), z),
            BellState::PsiMinus => Ket::new(z, c(s), c(-s), z),
        }
    }

    pub fn projector(self) -> Mat4 {
        projector(&self.ket())
    }
}

/// Named state families. Doubles as the JSON state descriptor:
/// `{"family": "<tag>", ...params}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateFamily {
    /// `v |ψ⁻⟩⟨ψ⁻| + (1 − v) I/4`.
    Werner { v: f64 },
    /// Weights over (φ⁺, φ⁻, ψ⁺, ψ⁻).
    BellDiagonal { weights: [f64; 4] },
    /// `½ [[0,0,0,0],[0,1−S,C,0],[0,C,1+S,0],[0,0,0,0]]`.
    #[serde(rename = "rank2_bell_diagonal")]
    RankTwoBellDiagonal {
        #[serde(alias = "C")]
        c: f64,
        #[serde(alias = "S")]
        s: f64,
    },
    /// Real X state: diagonal `x1..x4`, `y1` on the outer anti-diagonal,
    /// `y2` on the inner one.
    XState {
        x1: f64,
        x2: f64,
        x3: f64,
        x4: f64,
        y1: f64,
        y2: f64,
    },
    /// `p |ψ⁺⟩⟨ψ⁺| + (1 − p) |00⟩⟨00|`.
    HorodeckiMix { p: f64 },
    /// `ν₀|00⟩ + ν₁|11⟩` with concurrence `C`.
    PureSchmidt {
        #[serde(alias = "C")]
        c: f64,
    },
    Bell { index: u8 },
    Explicit {
        re: [[f64; 4]; 4],
        #[serde(default)]
        im: [[f64; 4]; 4],
    },
}

impl StateFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            StateFamily::Werner { .. } => "werner",
            StateFamily::BellDiagonal { .. } => "bell_diagonal",
            StateFamily::RankTwoBellDiagonal { .. } => "rank2_bell_diagonal",
            StateFamily::XState { .. } => "x_state",
            StateFamily::HorodeckiMix { .. } => "horodecki_mix",
            StateFamily::PureSchmidt { .. } => "pure_schmidt",
            StateFamily::Bell { .. } => "bell",
            StateFamily::Explicit { .. } => "explicit",
        }
    }

    pub fn instantiate(&self) -> Result<TwoQubitState> {
        make_state(self)
    }
}

fn invalid(family: &'static str, constraint: impl Into<String>) -> Error {
    Error::InvalidParameter {
        family,
        constraint: constraint.into(),
    }
}

fn check_unit_interval(family: &'static str, name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(family, format!("{name} = {x} is outside [0, 1]")));
    }
    Ok(())
}

fn real_matrix(rows: [[f64; 4]; 4]) -> Mat4 {
    Mat4::from_fn(|i, j| c(rows[i][j]))
}

pub fn make_state(family: &StateFamily) -> Result<TwoQubitState> {
    let tag = family.tag();
    let matrix = match *family {
        StateFamily::Werner { v } => {
            check_unit_interval(tag, "v", v)?;
            BellState::PsiMinus.projector() * c(v) + Mat4::identity() * c((1.0 - v) / 4.0)
        }
        StateFamily::BellDiagonal { weights } => {
            if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| **w < 0.0) {
                return Err(invalid(tag, format!("weight[{k}] = {w} is negative")));
            }
            let total: f64 = weights.iter().sum();
            if (total - 1.0).abs() > PARAM_TOLERANCE {
                return Err(invalid(tag, format!("weights sum to {total}, expected 1")));
            }
            BellState::ALL
                .iter()
                .zip(weights)
                .fold(Mat4::zeros(), |acc, (b, w)| acc + b.projector() * c(w))
        }
        StateFamily::RankTwoBellDiagonal { c: conc, s } => {
            if !(conc > 0.0 && conc <= 1.0) {
                return Err(invalid(tag, format!("C = {conc} is outside (0, 1]")));
            }
            let limit = (1.0 - conc * conc).max(0.0).sqrt();
            // C = 1 only admits S = 0, where the state is the Bell state ψ⁺.
            let ok = s.abs() < limit || (conc == 1.0 && s == 0.0);
            if !ok {
                return Err(invalid(tag, format!("|S| = {} is not below sqrt(1 - C²) = {limit}", s.abs())));
            }
            real_matrix([
                [0.0, 0.0, 0.0, 0.0],
                [0.0, (1.0 - s) / 2.0, conc / 2.0, 0.0],
                [0.0, conc / 2.0, (1.0 + s) / 2.0, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ])
        }
        StateFamily::XState { x1, x2, x3, x4, y1, y2 } => {
            for (name, x) in [("x1", x1), ("x2", x2), ("x3", x3), ("x4", x4)] {
                if x < 0.0 {
                    return Err(invalid(tag, format!("{name} = {x} is negative")));
                }
            }
            let total = x1 + x2 + x3 + x4;
            if (total - 1.0).abs() > PARAM_TOLERANCE {
                return Err(invalid(tag, format!("x1 + x2 + x3 + x4 = {total}, expected 1")));
            }
            if y1 * y1 > x1 * x4 + PARAM_TOLERANCE {
                return Err(invalid(tag, format!("y1² > x1·x4 ({} > {})", y1 * y1, x1 * x4)));
            }
            if y2 * y2 > x2 * x3 + PARAM_TOLERANCE {
                return Err(invalid(tag, format!("y2² > x2·x3 ({} > {})", y2 * y2, x2 * x3)));
            }
            real_matrix([
                [x1, 0.0, 0.0, y1],
                [0.0, x2, y2, 0.0],
                [0.0, y2, x3, 0.0],
                [y1, 0.0, 0.0, x4],
            ])
        }
        StateFamily::HorodeckiMix { p } => {
            check_unit_interval(tag, "p", p)?;
            let mut zero_zero = Mat4::zeros();
            zero_zero[(0, 0)] = c(1.0);
            BellState::PsiPlus.projector() * c(p) + zero_zero * c(1.0 - p)
        }
        StateFamily::PureSchmidt { c: conc } => {
            check_unit_interval(tag, "C", conc)?;
            let (a, b) = ((1.0 + conc).sqrt(), (1.0 - conc).sqrt());
            let nu0 = (a + b) / 2.0;
            let nu1 = (a - b) / 2.0;
            projector(&Ket::new(c(nu0), c(0.0), c(0.0), c(nu1)))
        }
        StateFamily::Bell { index } => BellState::from_index(index)
            .ok_or_else(|| invalid(tag, format!("index {index} is outside 0..=3")))?
            .projector(),
        StateFamily::Explicit { re, im } => {
            Mat4::from_fn(|i, j| C64::new(re[i][j], im[i][j]))
        }
    };
    TwoQubitState::new(matrix)
}
