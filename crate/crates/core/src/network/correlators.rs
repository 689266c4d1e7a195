use serde::{Deserialize, Serialize};

use super::{NetworkSpec, Topology};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Vec3};

/// Unit-norm and orthogonality slack for measurement settings.
pub const SETTING_TOLERANCE: f64 = 1e-10;

/// Parity axes one input qubit of a Bell-state measurement is read out
/// along: `z` enters the `I` correlator, `x` the `J` correlator. The
/// standard BSM uses `z = e₃`, `x = e₁`; any orthonormal pair is the same
/// measurement after a local unitary on that qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitFrame {
    pub z: Vec3,
    pub x: Vec3,
}

impl QubitFrame {
    pub fn standard() -> Self {
        Self {
            z: Vec3::z(),
            x: Vec3::x(),
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        check_unit(&format!("{name}.z"), &self.z)?;
        check_unit(&format!("{name}.x"), &self.x)?;
        let overlap = self.z.dot(&self.x);
        if overlap.abs() > SETTING_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "{name}: parity axes are not orthogonal (z·x = {overlap:.3e})"
            )));
        }
        Ok(())
    }
}

/// Frames of one intermediate chain party: `prev` for the qubit from the
/// source on its left, `next` for the qubit from the source on its right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsmFrame {
    pub prev: QubitFrame,
    pub next: QubitFrame,
}

impl BsmFrame {
    pub fn standard() -> Self {
        Self {
            prev: QubitFrame::standard(),
            next: QubitFrame::standard(),
        }
    }
}

/// Settings of a chain: `a, a′` for the first extreme party, `b, b′` for the
/// last one. `bsm` is either empty (standard BSM everywhere) or holds one
/// frame per intermediate party.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSettings {
    pub a: Vec3,
    pub a_prime: Vec3,
    pub b: Vec3,
    pub b_prime: Vec3,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bsm: Vec<BsmFrame>,
}

impl LinearSettings {
    pub fn new(a: Vec3, a_prime: Vec3, b: Vec3, b_prime: Vec3) -> Self {
        Self {
            a,
            a_prime,
            b,
            b_prime,
            bsm: Vec::new(),
        }
    }

    fn frame(&self, party: usize) -> BsmFrame {
        self.bsm.get(party).copied().unwrap_or_else(BsmFrame::standard)
    }
}

/// Settings for one star edge: the edge party's `a0, a1` and the central
/// party's factors `b0, b1` acting on this source's qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarEdge {
    pub a0: Vec3,
    pub a1: Vec3,
    pub b0: Vec3,
    pub b1: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarSettings {
    pub edges: Vec<StarEdge>,
}

fn check_unit(name: &str, v: &Vec3) -> Result<()> {
    let norm = v.norm();
    if (norm - 1.0).abs() > SETTING_TOLERANCE || !norm.is_finite() {
        return Err(Error::NonUnitSetting {
            name: name.to_string(),
            norm,
        });
    }
    Ok(())
}

fn validate_linear(net: &NetworkSpec, s: &LinearSettings) -> Result<()> {
    check_unit("a", &s.a)?;
    check_unit("a_prime", &s.a_prime)?;
    check_unit("b", &s.b)?;
    check_unit("b_prime", &s.b_prime)?;
    if !s.bsm.is_empty() && s.bsm.len() != net.n() - 1 {
        return Err(Error::SettingsShape {
            expected: net.n() - 1,
            found: s.bsm.len(),
        });
    }
    for (k, f) in s.bsm.iter().enumerate() {
        f.prev.validate(&format!("bsm[{k}].prev"))?;
        f.next.validate(&format!("bsm[{k}].next"))?;
    }
    Ok(())
}

/// Chain correlators with the given settings already validated.
pub(crate) fn linear_correlators_raw(tensors: &[Mat3], s: &LinearSettings) -> (f64, f64) {
    let n = tensors.len();
    let sum_a = s.a + s.a_prime;
    let diff_a = s.a - s.a_prime;
    let sum_b = s.b + s.b_prime;
    let diff_b = s.b - s.b_prime;
    let mut i_n = 0.25;
    let mut j_n = 0.25;
    for (j, r) in tensors.iter().enumerate() {
        let (left_z, left_x) = if j == 0 {
            (sum_a, diff_a)
        } else {
            let f = s.frame(j - 1).next;
            (f.z, f.x)
        };
        let (right_z, right_x) = if j == n - 1 {
            (sum_b, diff_b)
        } else {
            let f = s.frame(j).prev;
            (f.z, f.x)
        };
        i_n *= left_z.dot(&(r * right_z));
        j_n *= left_x.dot(&(r * right_x));
    }
    (i_n, j_n)
}

/// `(I_n, J_n)` for a chain; the inequality reads `√|I_n| + √|J_n| ≤ 1`.
pub fn linear_correlators(net: &NetworkSpec, settings: &LinearSettings) -> Result<(f64, f64)> {
    net.require(Topology::Linear)?;
    validate_linear(net, settings)?;
    Ok(linear_correlators_raw(&net.tensors(), settings))
}

pub(crate) fn star_correlators_raw(tensors: &[Mat3], s: &StarSettings) -> (f64, f64, f64) {
    let n = tensors.len();
    let mut j0 = 0.5f64.powi(n as i32);
    let mut j1 = j0;
    for (r, e) in tensors.iter().zip(&s.edges) {
        j0 *= (e.a0 + e.a1).dot(&(r * e.b0));
        j1 *= (e.a0 - e.a1).dot(&(r * e.b1));
    }
    let inv_n = 1.0 / n as f64;
    (j0, j1, j0.abs().powf(inv_n) + j1.abs().powf(inv_n))
}

/// `(J_0, J_1, N_star)` with `J_y = 2⁻ⁿ Π_i (a0ⁱ + (−1)ʸ a1ⁱ)ᵀ R_i b_yⁱ` and
/// `N_star = |J_0|^(1/n) + |J_1|^(1/n)`.
pub fn star_correlators(net: &NetworkSpec, settings: &StarSettings) -> Result<(f64, f64, f64)> {
    net.require(Topology::Star)?;
    if settings.edges.len() != net.n() {
        return Err(Error::SettingsShape {
            expected: net.n(),
            found: settings.edges.len(),
        });
    }
    for (i, e) in settings.edges.iter().enumerate() {
        check_unit(&format!("edges[{i}].a0"), &e.a0)?;
        check_unit(&format!("edges[{i}].a1"), &e.a1)?;
        check_unit(&format!("edges[{i}].b0"), &e.b0)?;
        check_unit(&format!("edges[{i}].b1"), &e.b1)?;
    }
    Ok(star_correlators_raw(&net.tensors(), settings))
}

/// Settings attaining the closed-form chain maximum, built from the singular
/// vectors of each correlation tensor.
pub fn optimal_linear_settings(net: &NetworkSpec) -> LinearSettings {
    let svds: Vec<_> = net.tensors().iter().map(linalg::svd3).collect();
    let p: f64 = svds.iter().map(|(_, s, _)| s[0]).product();
    let q: f64 = svds.iter().map(|(_, s, _)| s[1]).product();
    let theta = q.sqrt().atan2(p.sqrt());
    let (cos, sin) = (theta.cos(), theta.sin());

    let (u_first, _, _) = &svds[0];
    let (_, _, v_last) = &svds[svds.len() - 1];
    let a = u_first.column(0) * cos + u_first.column(1) * sin;
    let a_prime = u_first.column(0) * cos - u_first.column(1) * sin;
    let b = v_last.column(0) * cos + v_last.column(1) * sin;
    let b_prime = v_last.column(0) * cos - v_last.column(1) * sin;

    let bsm = (0..net.n() - 1)
        .map(|k| {
            let (_, _, v) = &svds[k];
            let (u, _, _) = &svds[k + 1];
            BsmFrame {
                prev: QubitFrame {
                    z: v.column(0).into(),
                    x: v.column(1).into(),
                },
                next: QubitFrame {
                    z: u.column(0).into(),
                    x: u.column(1).into(),
                },
            }
        })
        .collect();
    LinearSettings {
        a,
        a_prime,
        b,
        b_prime,
        bsm,
    }
}

/// Settings attaining the closed-form star maximum.
pub fn optimal_star_settings(net: &NetworkSpec) -> StarSettings {
    let svds: Vec<_> = net.tensors().iter().map(linalg::svd3).collect();
    let n = svds.len() as f64;
    let x = svds.iter().map(|(_, s, _)| s[0]).product::<f64>().powf(1.0 / n);
    let y = svds.iter().map(|(_, s, _)| s[1]).product::<f64>().powf(1.0 / n);
    let theta = y.atan2(x);
    let (cos, sin) = (theta.cos(), theta.sin());
    let edges = svds
        .iter()
        .map(|(u, _, v)| StarEdge {
            a0: u.column(0) * cos + u.column(1) * sin,
            a1: u.column(0) * cos - u.column(1) * sin,
            b0: v.column(0).into(),
            b1: v.column(1).into(),
        })
        .collect();
    StarSettings { edges }
}
