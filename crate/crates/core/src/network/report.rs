use serde::{Deserialize, Serialize};

use super::{
    b_linear_from_triples, b_star_from_triples, linear_correlators_raw, optimal_linear_settings,
    optimal_star_settings, star_correlators_raw, NetworkSpec, Topology,
};
use crate::bounds::{self, ConcurrenceProfile};
use crate::measures::{measure_with, VmaxMode};
use crate::qstate::{SingularTriple, StateFamily, STATE_TOLERANCE};

pub use crate::bounds::BoundStatus;

/// Slack used when marking a bound as satisfied.
const SATISFIED_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub vmax_mode: VmaxMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub label: String,
    /// `None` when the bound is not stated for this network.
    pub value: Option<f64>,
    pub status: BoundStatus,
    pub applicable: bool,
    /// Whether `B` lies on the right side of the bound, when applicable.
    pub satisfied: Option<bool>,
}

impl BoundEntry {
    fn upper(label: &str, value: Option<f64>, status: BoundStatus, b: f64) -> Self {
        Self {
            label: label.to_string(),
            value,
            status,
            applicable: value.is_some(),
            satisfied: value.map(|v| b <= v + SATISFIED_SLACK),
        }
    }

    fn lower(label: &str, value: f64, status: BoundStatus, b: f64) -> Self {
        Self {
            label: label.to_string(),
            value: Some(value),
            status,
            applicable: true,
            satisfied: Some(value <= b + SATISFIED_SLACK),
        }
    }
}

/// Measures for the same sources in both arrangements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub vmax_mode: VmaxMode,
    /// Violation amount `max(0, B − 1)` of the analysed topology.
    pub v: f64,
    /// Measure of the analysed topology.
    pub m: f64,
    pub b_linear: f64,
    pub b_star: f64,
    pub m_linear: f64,
    pub m_star: f64,
    pub delta_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub topology: Topology,
    pub n: usize,
    #[serde(rename = "B")]
    pub b: f64,
    pub violation: bool,
    /// Inequality functional evaluated at the analytic optimal settings:
    /// `√|I_n| + √|J_n|` for a chain, `|J_0|^(1/n) + |J_1|^(1/n)` for a star.
    pub correlator_sum: f64,
    pub singular_values: Vec<SingularTriple>,
    pub concurrences: Vec<f64>,
    #[serde(rename = "K")]
    pub k: f64,
    pub threshold_product: f64,
    pub bell_diagonal: bool,
    pub separable_sources: usize,
    pub star_separable_nogo: bool,
    pub upper_bounds: Vec<BoundEntry>,
    pub lower_bounds: Vec<BoundEntry>,
    pub measures: MeasureSummary,
    /// The sources as explicit matrices; the report parses as a network.
    pub sources: Vec<StateFamily>,
}

pub fn analyze(net: &NetworkSpec) -> BoundReport {
    analyze_with(net, &AnalysisOptions::default())
}

pub fn analyze_with(net: &NetworkSpec, options: &AnalysisOptions) -> BoundReport {
    let n = net.n();
    let topology = net.topology();
    let triples = net.triples();
    let profile = ConcurrenceProfile::of_network(net);
    let b_linear = b_linear_from_triples(&triples);
    let b_star = b_star_from_triples(&triples);
    let b = match topology {
        Topology::Linear => b_linear,
        Topology::Star => b_star,
    };

    let tensors = net.tensors();
    let correlator_sum = match topology {
        Topology::Linear => {
            let (i, j) = linear_correlators_raw(&tensors, &optimal_linear_settings(net));
            i.abs().sqrt() + j.abs().sqrt()
        }
        Topology::Star => star_correlators_raw(&tensors, &optimal_star_settings(net)).2,
    };

    let bell_diagonal = net
        .sources()
        .iter()
        .all(|s| s.bloch().is_locally_bell_diagonal(STATE_TOLERANCE));
    let lower_status = bounds::lower_bound_status(bell_diagonal);

    let (upper_bounds, lower_bounds) = match topology {
        Topology::Linear => (
            vec![BoundEntry::upper("upper_lin", Some(bounds::upper_lin(&profile)), BoundStatus::Proven, b)],
            vec![BoundEntry::lower("lower_lin", bounds::lower_lin(&profile), lower_status, b)],
        ),
        Topology::Star => (
            vec![
                BoundEntry::upper(
                    "upper_star_general",
                    Some(bounds::upper_star_general(&profile)),
                    BoundStatus::Proven,
                    b,
                ),
                BoundEntry::upper(
                    "upper_star_entangled",
                    bounds::upper_star_entangled(&profile).ok(),
                    BoundStatus::Proven,
                    b,
                ),
            ],
            vec![BoundEntry::lower("lower_star", bounds::lower_star(&profile), lower_status, b)],
        ),
    };

    let separable_sources = profile.separable_count();
    let star_separable_nogo =
        topology == Topology::Star && bounds::star_separable_nogo(n, separable_sources).unwrap_or(false);

    let mode = options.vmax_mode;
    let own = measure_with(b, mode);
    let m_linear = measure_with(b_linear, mode).m;
    let m_star = measure_with(b_star, mode).m;

    BoundReport {
        topology,
        n,
        b,
        violation: b > 1.0,
        correlator_sum,
        singular_values: triples,
        concurrences: profile.values().iter().map(|c| c.value()).collect(),
        k: profile.k(),
        threshold_product: bounds::threshold_product(topology, n),
        bell_diagonal,
        separable_sources,
        star_separable_nogo,
        upper_bounds,
        lower_bounds,
        measures: MeasureSummary {
            vmax_mode: mode,
            v: own.v,
            m: own.m,
            b_linear,
            b_star,
            m_linear,
            m_star,
            delta_n: m_star - m_linear,
        },
        sources: net.to_descriptor().sources,
    }
}
