//! Core-periphery structure: detection, significance against randomized
//! graphs with the same degrees, and counterfactual core removal.

mod be;
mod km;
mod null_model;
mod significance;

use thiserror::Error;

use crate::graph::{DailyGraph, GraphError, SimpleGraph};

pub use be::{be_detect, be_quality, be_quality_counts, DEFAULT_RESTARTS};
pub use km::{km_multi_detect, km_quality};
pub use null_model::{expected_degree_graph, rewire, NullModel, SWAPS_PER_EDGE};
pub use significance::{qs_significance, qs_significance_for, ALPHA, DEFAULT_N_RAND, MIN_N_RAND};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CpError {
    #[error("graph with {nodes} nodes is too small for core-periphery detection")]
    DegenerateGraph { nodes: usize },
    #[error("cannot randomize a graph with {edges} edges")]
    RewireFailure { edges: usize },
    #[error("at least {MIN_N_RAND} randomizations are required, got {0}")]
    TooFewRandomizations(usize),
    #[error("no edges survive core removal")]
    EmptyCounterfactual,
}

pub type Result<T> = std::result::Result<T, CpError>;

/// Core/periphery labels for every node of a graph.
///
/// Single-pair assignments put every node in pair 0 and carry the Pearson
/// correlation between the adjacency matrix and the ideal pattern as
/// `quality`. Multi-pair assignments carry the configuration-model quality
/// instead, and a pair may consist of core nodes only.
#[derive(Debug, Clone, PartialEq)]
pub struct CpAssignment {
    pub core: Vec<bool>,
    pub pair_id: Vec<usize>,
    pub quality: f64,
}

impl CpAssignment {
    pub fn core_count(&self) -> usize {
        self.core.iter().filter(|&&c| c).count()
    }

    pub fn num_pairs(&self) -> usize {
        self.pair_id.iter().max().map_or(0, |&p| p + 1)
    }

    pub fn core_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.core.iter().enumerate().filter(|(_, &c)| c).map(|(i, _)| i)
    }
}

/// Detection algorithm used for the observed graph and every null replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detector {
    /// Single-pair Borgatti-Everett with random-restart label switching.
    Be { restarts: usize },
    /// Multi-pair label switching on the configuration-model quality.
    KmConfig { restarts: usize },
}

impl Default for Detector {
    fn default() -> Self {
        Self::Be { restarts: DEFAULT_RESTARTS }
    }
}

impl Detector {
    pub fn detect(&self, g: &SimpleGraph, seed: u64) -> Result<CpAssignment> {
        match *self {
            Self::Be { restarts } => be_detect(g, seed, restarts),
            Self::KmConfig { restarts } => km_multi_detect(g, seed, restarts),
        }
    }
}

/// Outcome of the core-periphery significance test.
#[derive(Debug, Clone, PartialEq)]
pub struct CpTestResult {
    pub p_value: f64,
    pub significant: bool,
    pub n_randomizations: usize,
    pub observed_quality: f64,
    pub null_qualities: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreStats {
    pub core_cnt: usize,
    /// Mean degree of core nodes.
    pub avg_core_neighbor: f64,
}

pub fn core_stats(g: &SimpleGraph, a: &CpAssignment) -> CoreStats {
    let degrees: Vec<usize> = a.core_nodes().map(|u| g.degree(u)).collect();
    let core_cnt = degrees.len();
    let avg_core_neighbor = if core_cnt == 0 {
        0.0
    } else {
        degrees.iter().sum::<usize>() as f64 / core_cnt as f64
    };
    CoreStats { core_cnt, avg_core_neighbor }
}

/// Drop core nodes, their edges, and any node left isolated.
pub fn remove_cores(g: &DailyGraph, a: &CpAssignment) -> Result<DailyGraph> {
    assert_eq!(a.core.len(), g.num_nodes(), "assignment does not belong to this graph");
    g.without_nodes(&a.core).map_err(|e| match e {
        GraphError::EmptyDay(_) => CpError::EmptyCounterfactual,
        other => unreachable!("unexpected graph error {other}"),
    })
}
