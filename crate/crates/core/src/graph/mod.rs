//! Daily transaction graphs.
//!
//! A [`DailyGraph`] is the simple undirected graph of one UTC day: one node
//! per address, one edge per unordered address pair that exchanged tokens,
//! weighted by the total value moved in either direction. All structural
//! statistics work on the unweighted [`SimpleGraph`] underneath; weights are
//! kept only as edge metadata.

mod centrality;
mod clustering;
mod components;
mod degree;

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use thiserror::Error;

use crate::ingest::TransferRecord;

pub use centrality::{
    closeness_centrality, closeness_centrality_stats, eigenvector_centrality,
    eigenvector_centrality_stats, EIGEN_MAX_ITER, EIGEN_TOL,
};
pub use clustering::{clustering_stats, local_clustering, ClusteringStats};
pub use components::{connected_components, giant_component_ratio, ComponentPartition};
pub use degree::{degree_stats, degree_stats_with_top, DegreeStats};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("no edges remain for {0}")]
    EmptyDay(NaiveDate),
    #[error("record dated {found} passed for day {expected}")]
    OffDay { expected: NaiveDate, found: NaiveDate },
    #[error("graph with {nodes} nodes is too small for this statistic")]
    DegenerateGraph { nodes: usize },
    #[error("eigenvector centrality did not converge in {0} iterations")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Unweighted simple undirected graph on nodes `0..n`, stored as sorted
/// adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl SimpleGraph {
    /// Build from an edge list. Self-loops and repeated pairs are ignored.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u},{v}) out of range for {n} nodes");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut m2 = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Self { adj, m: m2 / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// True when both graphs have identical per-node degrees.
    pub fn same_degrees(&self, other: &SimpleGraph) -> bool {
        self.degrees() == other.degrees()
    }
}

/// Options for [`build_daily_graph`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Keep pairs whose only transfers had value zero.
    pub keep_zero_edges: bool,
}

/// One day's undirected transaction graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyGraph {
    pub day: NaiveDate,
    /// Addresses, sorted; node `i` is `nodes[i]`.
    pub nodes: Vec<String>,
    pub topology: SimpleGraph,
    /// Weight per edge, aligned with `topology.edges()`.
    pub weights: Vec<f64>,
}

impl DailyGraph {
    /// Build from pre-aggregated weighted pairs keyed by address.
    pub fn from_weighted_pairs(
        day: NaiveDate,
        pairs: &BTreeMap<(String, String), f64>,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(GraphError::EmptyDay(day));
        }
        let names: BTreeSet<&String> = pairs.keys().flat_map(|(a, b)| [a, b]).collect();
        let nodes: Vec<String> = names.into_iter().cloned().collect();
        let index = |a: &String| nodes.binary_search(a).expect("endpoint indexed");
        let mut indexed: Vec<((usize, usize), f64)> = pairs
            .iter()
            .map(|((a, b), &w)| {
                let (i, j) = (index(a), index(b));
                ((i.min(j), i.max(j)), w)
            })
            .collect();
        indexed.sort_by(|x, y| x.0.cmp(&y.0));
        let topology = SimpleGraph::from_edges(nodes.len(), indexed.iter().map(|e| e.0));
        let weights = indexed.into_iter().map(|e| e.1).collect();
        Ok(Self { day, nodes, topology, weights })
    }

    /// Wrap a topology with generated names and unit weights. Isolated nodes
    /// are dropped so the result satisfies the daily-graph invariants.
    pub fn from_topology(day: NaiveDate, names: &[String], topology: &SimpleGraph) -> Result<Self> {
        let pairs: BTreeMap<(String, String), f64> = topology
            .edges()
            .map(|(u, v)| {
                let (a, b) = (&names[u], &names[v]);
                ((a.min(b).clone(), a.max(b).clone()), 1.0)
            })
            .collect();
        Self::from_weighted_pairs(day, &pairs)
    }

    pub fn num_nodes(&self) -> usize {
        self.topology.n()
    }

    pub fn num_edges(&self) -> usize {
        self.topology.m()
    }

    pub fn index_of(&self, address: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(address)).ok()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let (a, b) = (u.min(v), u.max(v));
        self.topology
            .edges()
            .position(|e| e == (a, b))
            .map(|i| self.weights[i])
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Remove the nodes flagged in `drop`, then any nodes left isolated.
    pub fn without_nodes(&self, drop: &[bool]) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for ((u, v), &w) in self.topology.edges().zip(&self.weights) {
            if !drop[u] && !drop[v] {
                pairs.insert((self.nodes[u].clone(), self.nodes[v].clone()), w);
            }
        }
        Self::from_weighted_pairs(self.day, &pairs)
    }
}

/// Build the undirected graph of one day's transfers.
///
/// Self-transfers are dropped, as are zero-value transfers unless
/// `opts.keep_zero_edges`. Values between the same two accounts are summed
/// regardless of direction.
pub fn build_daily_graph(
    batch: &[TransferRecord],
    day: NaiveDate,
    opts: BuildOptions,
) -> Result<DailyGraph> {
    let mut pairs: BTreeMap<(String, String), f64> = BTreeMap::new();
    for r in batch {
        if r.day() != day {
            return Err(GraphError::OffDay { expected: day, found: r.day() });
        }
        if r.from_address == r.to_address || (r.value <= 0.0 && !opts.keep_zero_edges) {
            continue;
        }
        let key = if r.from_address < r.to_address {
            (r.from_address.clone(), r.to_address.clone())
        } else {
            (r.to_address.clone(), r.from_address.clone())
        };
        *pairs.entry(key).or_insert(0.0) += r.value;
    }
    DailyGraph::from_weighted_pairs(day, &pairs)
}
