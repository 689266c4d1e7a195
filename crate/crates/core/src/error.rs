use thiserror::Error;

use crate::network::Topology;

#[derive(Debug, Error)]
pub enum Error {
    /// A state-family parameter lies outside its physical range.
    #[error("invalid {family} parameters: {constraint}")]
    InvalidParameter {
        family: &'static str,
        constraint: String,
    },

    /// A matrix failed one of the density-operator checks.
    #[error("not a valid two-qubit state: {0}")]
    NotPhysical(String),

    #[error("operation requires a {expected} network, got {found}")]
    WrongTopology { expected: Topology, found: Topology },

    #[error("a network needs at least 2 sources, got {0}")]
    TooFewSources(usize),

    #[error("setting `{name}` is not a unit vector (norm {norm})")]
    NonUnitSetting { name: String, norm: f64 },

    #[error("settings describe {found} parties/sources, network needs {expected}")]
    SettingsShape { expected: usize, found: usize },

    #[error("bound requires every source to be entangled, but source {index} has zero concurrence")]
    ZeroConcurrence { index: usize },

    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("source {index}: {source}")]
    Source {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
