//! Normalised violation measure `M` and the star-minus-chain advantage `D_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{b_linear_from_triples, b_star_from_triples, Topology};
use crate::qstate::TwoQubitState;

/// Normaliser for the violation amount.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum VmaxMode {
    /// The rounded constant `0.414`.
    #[default]
    #[value(name = "printed-0.414")]
    #[serde(rename = "printed-0.414")]
    Printed,
    /// `√2 − 1`.
    #[value(name = "exact-sqrt2-minus-1")]
    #[serde(rename = "exact-sqrt2-minus-1")]
    Exact,
}

impl VmaxMode {
    pub fn value(self) -> f64 {
        match self {
            VmaxMode::Printed => 0.414,
            VmaxMode::Exact => 2f64.sqrt() - 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlocalityMeasure {
    /// `max(0, B − 1)`.
    pub v: f64,
    /// `v / V_max`, clipped to `[0, 1]`.
    pub m: f64,
}

pub fn measure(b: f64) -> NonlocalityMeasure {
    measure_with(b, VmaxMode::default())
}

pub fn measure_with(b: f64, mode: VmaxMode) -> NonlocalityMeasure {
    let v = (b - 1.0).max(0.0);
    NonlocalityMeasure {
        v,
        m: (v / mode.value()).clamp(0.0, 1.0),
    }
}

/// `M(B_star) − M(B_linear)` for one source list placed in both topologies.
pub fn delta_n(sources: &[TwoQubitState], mode: VmaxMode) -> Result<f64> {
    if sources.len() < 2 {
        return Err(Error::TooFewSources(sources.len()));
    }
    let triples: Vec<_> = sources.iter().map(TwoQubitState::singular_triple).collect();
    Ok(delta_from_bs(b_linear_from_triples(&triples), b_star_from_triples(&triples), mode))
}

fn delta_from_bs(b_lin: f64, b_star: f64, mode: VmaxMode) -> f64 {
    measure_with(b_star, mode).m - measure_with(b_lin, mode).m
}

fn check_visibilities(vis: &[f64]) -> Result<()> {
    if vis.len() < 2 {
        return Err(Error::TooFewSources(vis.len()));
    }
    if let Some(v) = vis.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidParameter {
            family: "werner",
            constraint: format!("visibility {v} outside [0, 1]"),
        });
    }
    Ok(())
}

/// `D_n` for Werner sources, from `B_lin = sqrt(2V)` and
/// `B_star = √2 · V^(1/n)` with `V = Π v_i`.
pub fn werner_delta(visibilities: &[f64], mode: VmaxMode) -> Result<f64> {
    check_visibilities(visibilities)?;
    Ok(werner_delta_product(visibilities.iter().product(), visibilities.len(), mode))
}

/// [`werner_delta`] as a function of the visibility product alone.
pub fn werner_delta_product(v: f64, n: usize, mode: VmaxMode) -> f64 {
    let b_lin = (2.0 * v).sqrt();
    let b_star = 2f64.sqrt() * v.powf(1.0 / n as f64);
    delta_from_bs(b_lin, b_star, mode)
}

/// The piecewise closed form as commonly printed: `0` up to `2^(−n/2)`,
/// `3.41597 V^(1/n)` up to `1/2`, then `3.41597 (V^(1/n) − V^(1/2))`. Its
/// middle branch lacks the `−1/0.414` offset, so it disagrees with
/// [`werner_delta_product`] there; it is kept for side-by-side output.
pub fn werner_delta_printed(v: f64, n: usize) -> f64 {
    const SLOPE: f64 = 3.41597;
    let root = v.powf(1.0 / n as f64);
    if v <= 2f64.powf(-(n as f64) / 2.0) {
        0.0
    } else if v <= 0.5 {
        SLOPE * root
    } else {
        SLOPE * (root - v.sqrt())
    }
}

/// `K` needed to reach measure `m`: `(V_max m + 1)² − 1` for a chain and its
/// `n/2` power for a star.
pub fn fixed_measure_entanglement(topology: Topology, m: f64, n: usize, mode: VmaxMode) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::InvalidArgument(format!("measure must lie in [0, 1], got {m}")));
    }
    let base = (mode.value() * m + 1.0).powi(2) - 1.0;
    Ok(match topology {
        Topology::Linear => base,
        Topology::Star => base.powf(n as f64 / 2.0),
    })
}
