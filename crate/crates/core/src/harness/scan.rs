use serde::{Deserialize, Serialize};

use crate::bounds::threshold_product;
use crate::error::{Error, Result};
use crate::measures::{measure_with, werner_delta_printed, werner_delta_product, VmaxMode};
use crate::network::Topology;

/// Inclusive arithmetic grid `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(Error::InvalidArgument(format!(
                "grid needs start ≤ stop and step > 0, got {start}:{stop}:{step}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// Unit interval split into `resolution` cells.
    pub fn unit(resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::InvalidArgument("resolution must be at least 1".into()));
        }
        Self::new(0.0, 1.0, 1.0 / resolution as f64)
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|k| (self.start + k as f64 * self.step).min(self.stop)).collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("grid `{s}` is not of the form start:stop:step"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nums[0], nums[1], nums[2])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub concurrences: Vec<f64>,
    pub product: f64,
    /// Whether the lower bound certifies a violation: `Π C > threshold`.
    pub detected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub topology: Topology,
    pub n: usize,
    pub resolution: usize,
    pub threshold: f64,
    pub cells: Vec<RegionCell>,
}

impl RegionGrid {
    /// Cell at multi-index `idx` (each in `0..=resolution`).
    pub fn cell(&self, idx: &[usize]) -> &RegionCell {
        let side = self.resolution + 1;
        let flat = idx.iter().fold(0, |acc, &i| acc * side + i);
        &self.cells[flat]
    }
}

/// Concurrence grid `{0, 1/r, …, 1}^n` marked by the topology's threshold.
pub fn region_scan(topology: Topology, n: usize, resolution: usize) -> Result<RegionGrid> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!("region scans support 2 ≤ n ≤ 4, got {n}")));
    }
    let axis = Grid::unit(resolution)?.values();
    let threshold = threshold_product(topology, n);
    let side = axis.len();
    let cells = (0..side.pow(n as u32))
        .map(|mut flat| {
            let mut concurrences = vec![0.0; n];
            for slot in concurrences.iter_mut().rev() {
                *slot = axis[flat % side];
                flat /= side;
            }
            let product: f64 = concurrences.iter().product();
            RegionCell {
                detected: product > threshold,
                product,
                concurrences,
            }
        })
        .collect();
    Ok(RegionGrid {
        topology,
        n,
        resolution,
        threshold,
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    /// `None` for the chain frontier `e1 + e2 = 1`.
    pub n: Option<usize>,
    pub e1: f64,
    pub e2: f64,
}

/// Violation frontiers for one source with singular values `(e1, e2)` among
/// Bell sources: `e1^(2/n) + e2^(2/n) = 1` for each star size, and the
/// size-independent chain frontier `e1 + e2 = 1`.
pub fn frontier_scan(ns: &[usize], resolution: usize) -> Result<Vec<FrontierPoint>> {
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::TooFewSources(n));
    }
    let axis = Grid::unit(resolution)?.values();
    let mut points: Vec<FrontierPoint> = axis
        .iter()
        .map(|&e1| FrontierPoint { n: None, e1, e2: 1.0 - e1 })
        .collect();
    for &n in ns {
        let p = 2.0 / n as f64;
        points.extend(axis.iter().map(|&e1| FrontierPoint {
            n: Some(n),
            e1,
            e2: (1.0 - e1.powf(p)).max(0.0).powf(1.0 / p),
        }));
    }
    Ok(points)
}

/// Whether the star frontiers bend inward as `n` grows: at every `e1`, the
/// frontier for larger `n` lies on or below the one for smaller `n`, and all
/// lie on or below the chain frontier.
pub fn frontiers_nested(points: &[FrontierPoint]) -> bool {
    let mut ns: Vec<usize> = points.iter().filter_map(|p| p.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let curve = |n: Option<usize>| -> Vec<&FrontierPoint> { points.iter().filter(|p| p.n == n).collect() };
    let mut outer = curve(None);
    for n in ns {
        let inner = curve(Some(n));
        if inner.len() != outer.len() {
            return false;
        }
        if inner.iter().zip(&outer).any(|(i, o)| i.e1 != o.e1 || i.e2 > o.e2 + 1e-15) {
            return false;
        }
        outer = inner;
    }
    true
}

/// How a visibility grid maps to the product `V = Π v_i`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GridMode {
    /// Grid values are the common per-source visibility `v`; `V = vⁿ`.
    #[default]
    Identical,
    /// Grid values are the product `V` itself.
    Product,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    /// Per-source visibility when sources are identical.
    pub v_source: Option<f64>,
    #[serde(rename = "V")]
    pub v_product: f64,
    pub b_linear: f64,
    pub b_star: f64,
    pub m_linear: f64,
    pub m_star: f64,
    pub delta_n: f64,
    /// The piecewise printed closed form, for comparison.
    pub delta_printed: f64,
}

/// `D_n` of Werner networks over a visibility grid.
pub fn werner_sweep(ns: &[usize], grid: &Grid, mode: GridMode, vmax: VmaxMode) -> Result<Vec<SweepRow>> {
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::TooFewSources(n));
    }
    let values = grid.values();
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::InvalidArgument("visibility grid must lie in [0, 1]".into()));
    }
    let mut rows = Vec::with_capacity(ns.len() * values.len());
    for &n in ns {
        for &g in &values {
            let (v_source, v) = match mode {
                GridMode::Identical => (Some(g), g.powi(n as i32)),
                GridMode::Product => (None, g),
            };
            let b_linear = (2.0 * v).sqrt();
            let b_star = 2f64.sqrt() * v.powf(1.0 / n as f64);
            rows.push(SweepRow {
                n,
                v_source,
                v_product: v,
                b_linear,
                b_star,
                m_linear: measure_with(b_linear, vmax).m,
                m_star: measure_with(b_star, vmax).m,
                delta_n: werner_delta_product(v, n, vmax),
                delta_printed: werner_delta_printed(v, n),
            });
        }
    }
    Ok(rows)
}
