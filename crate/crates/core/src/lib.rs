//! Maximal violations of n-local inequalities in linear and star networks
//! of independent two-qubit sources, their concurrence bounds, and seeded
//! numerical campaigns that probe them.

pub mod bounds;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod measures;
pub mod network;
pub mod optimizer;
pub mod qstate;

pub use error::{Error, Result};
