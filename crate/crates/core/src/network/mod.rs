//! Linear (chain) and star networks of independent two-qubit sources.
//!
//! In a chain, source `j` sends its first qubit to party `A_j` and its second
//! to `A_{j+1}`; the `n − 1` intermediate parties perform a Bell-state
//! measurement. In a star, each source sends its first qubit to an edge party
//! and its second to the shared central party.

mod correlators;
mod report;

pub use correlators::{
    linear_correlators, optimal_linear_settings, optimal_star_settings, star_correlators, BsmFrame,
    LinearSettings, QubitFrame, StarEdge, StarSettings, SETTING_TOLERANCE,
};
pub(crate) use correlators::{linear_correlators_raw, star_correlators_raw};
pub use report::{analyze, analyze_with, AnalysisOptions, BoundEntry, BoundReport, BoundStatus, MeasureSummary};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::qstate::{SingularTriple, StateFamily, TwoQubitState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Linear,
    Star,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Topology::Linear => "linear",
            Topology::Star => "star",
        })
    }
}

/// A validated network: topology plus `n ≥ 2` ordered sources.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    topology: Topology,
    sources: Vec<TwoQubitState>,
}

impl NetworkSpec {
    pub fn new(topology: Topology, sources: Vec<TwoQubitState>) -> Result<Self> {
        if sources.len() < 2 {
            return Err(Error::TooFewSources(sources.len()));
        }
        Ok(Self { topology, sources })
    }

    pub fn linear(sources: Vec<TwoQubitState>) -> Result<Self> {
        Self::new(Topology::Linear, sources)
    }

    pub fn star(sources: Vec<TwoQubitState>) -> Result<Self> {
        Self::new(Topology::Star, sources)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn sources(&self) -> &[TwoQubitState] {
        &self.sources
    }

    pub fn n(&self) -> usize {
        self.sources.len()
    }

    /// Same sources, other arrangement.
    pub fn with_topology(&self, topology: Topology) -> Self {
        Self {
            topology,
            sources: self.sources.clone(),
        }
    }

    pub fn tensors(&self) -> Vec<Mat3> {
        self.sources.iter().map(|s| s.bloch().r).collect()
    }

    pub fn triples(&self) -> Vec<SingularTriple> {
        self.sources.iter().map(TwoQubitState::singular_triple).collect()
    }

    pub fn from_descriptor(desc: &NetworkDescriptor) -> Result<Self> {
        let sources = desc
            .sources
            .iter()
            .enumerate()
            .map(|(index, f)| {
                f.instantiate().map_err(|e| Error::Source {
                    index,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(desc.topology, sources)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let desc: NetworkDescriptor = serde_json::from_str(json)?;
        Self::from_descriptor(&desc)
    }

    /// Descriptor with every source written out as an explicit matrix.
    pub fn to_descriptor(&self) -> NetworkDescriptor {
        NetworkDescriptor {
            topology: self.topology,
            sources: self.sources.iter().map(TwoQubitState::to_family).collect(),
        }
    }

    pub(crate) fn require(&self, expected: Topology) -> Result<()> {
        if self.topology != expected {
            return Err(Error::WrongTopology {
                expected,
                found: self.topology,
            });
        }
        Ok(())
    }
}

/// JSON network descriptor: `{"topology": "linear"|"star", "sources": [...]}`.
/// Extra top-level keys are ignored, so a serialized [`BoundReport`] can be
/// read back as a network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDescriptor {
    pub topology: Topology,
    pub sources: Vec<StateFamily>,
}

/// `sqrt(Π e1 + Π e2)`.
pub fn b_linear_from_triples(triples: &[SingularTriple]) -> f64 {
    let p1: f64 = triples.iter().map(|t| t.e1).product();
    let p2: f64 = triples.iter().map(|t| t.e2).product();
    (p1 + p2).sqrt()
}

/// `sqrt((Π e1)^(2/n) + (Π e2)^(2/n))`.
pub fn b_star_from_triples(triples: &[SingularTriple]) -> f64 {
    let n = triples.len() as f64;
    let p1: f64 = triples.iter().map(|t| t.e1).product();
    let p2: f64 = triples.iter().map(|t| t.e2).product();
    (p1.powf(2.0 / n) + p2.powf(2.0 / n)).sqrt()
}

/// Maximal value of the chain inequality over measurement settings.
pub fn b_linear(net: &NetworkSpec) -> Result<f64> {
    net.require(Topology::Linear)?;
    Ok(b_linear_from_triples(&net.triples()))
}

/// Maximal value of the star inequality over measurement settings.
pub fn b_star(net: &NetworkSpec) -> Result<f64> {
    net.require(Topology::Star)?;
    Ok(b_star_from_triples(&net.triples()))
}

/// Closed-form maximum for whichever topology `net` has.
pub fn b_value(net: &NetworkSpec) -> f64 {
    match net.topology {
        Topology::Linear => b_linear_from_triples(&net.triples()),
        Topology::Star => b_star_from_triples(&net.triples()),
    }
}
