//! Synthetic graphs and fixtures with known ground truth.
//!
//! - network archetypes: centralized (star), decentralized (interlinked hubs
//!   with leaves) and distributed (random regular);
//! - planted core-periphery block graphs;
//! - dated trajectories that drift from centralized to distributed and back,
//!   with an economic series optionally driven by one feature.

mod archetype;
mod trajectory;

use chrono::NaiveDate;
use thiserror::Error;

use crate::graph::{DailyGraph, GraphError};
use crate::ingest::TransferRecord;

pub use archetype::{
    gen_archetype, gen_planted_cp, random_regular, Archetype, Planted, REGULAR_MAX_TRIES,
};
pub use trajectory::{
    bundled_trajectory_spec, gen_trajectory, persistent_hub_address, CouplingTarget, Trajectory, TrajectorySpec,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, SynthError>;

pub(crate) fn invalid(msg: impl Into<String>) -> SynthError {
    SynthError::InvalidParams(msg.into())
}

/// Deterministic 20-byte hex address for synthetic account `i`. Sorting the
/// addresses sorts the indices.
pub fn synth_address(i: usize) -> String {
    format!("0x{i:040x}")
}

pub fn synth_addresses(n: usize) -> Vec<String> {
    (0..n).map(synth_address).collect()
}

/// Day used for single synthetic graphs that are not part of a trajectory.
pub fn default_day() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 10, 10).expect("valid date")
}

/// One unit transfer per edge at noon of the graph's day, so that
/// rebuilding the daily graph from the records returns the same graph.
pub fn graph_transfers(g: &DailyGraph) -> Vec<TransferRecord> {
    let noon = g.day.and_hms_opt(12, 0, 0).expect("valid time").and_utc();
    g.topology
        .edges()
        .map(|(u, v)| TransferRecord {
            from_address: g.nodes[u].clone(),
            to_address: g.nodes[v].clone(),
            value: 1.0,
            timestamp: noon,
        })
        .collect()
}

pub(crate) fn wrap(topology: &crate::graph::SimpleGraph, day: NaiveDate) -> Result<DailyGraph> {
    Ok(DailyGraph::from_topology(day, &synth_addresses(topology.n()), topology)?)
}
