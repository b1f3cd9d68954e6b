use rand::seq::SliceRandom;
use rand::Rng;

use super::{default_day, invalid, wrap, Result};
use crate::graph::{DailyGraph, SimpleGraph};
use crate::seed;

/// Pairing-model attempts before random-regular generation gives up.
pub const REGULAR_MAX_TRIES: usize = 1000;

/// One of the three classic communication-network shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Archetype {
    /// Star `K_{1, n-1}`.
    Centralized { n: usize },
    /// `n_hubs` hubs forming a clique, each with `per_hub` private leaves.
    Decentralized { n_hubs: usize, per_hub: usize },
    /// Random `degree`-regular graph on `n` nodes.
    Distributed { n: usize, degree: usize },
}

impl Archetype {
    pub fn topology(&self, seed: u64) -> Result<SimpleGraph> {
        match *self {
            Self::Centralized { n } => {
                if n < 2 {
                    return Err(invalid("centralized network needs n >= 2"));
                }
                Ok(SimpleGraph::from_edges(n, (1..n).map(|leaf| (0, leaf))))
            }
            Self::Decentralized { n_hubs, per_hub } => {
                if n_hubs < 1 || per_hub < 1 || (n_hubs == 1 && per_hub < 1) {
                    return Err(invalid("decentralized network needs at least one hub with one leaf"));
                }
                let mut edges = Vec::new();
                for h in 0..n_hubs {
                    for k in h + 1..n_hubs {
                        edges.push((h, k));
                    }
                    for l in 0..per_hub {
                        edges.push((h, n_hubs + h * per_hub + l));
                    }
                }
                Ok(SimpleGraph::from_edges(n_hubs * (1 + per_hub), edges))
            }
            Self::Distributed { n, degree } => {
                let mut rng = seed::rng(seed, &[0x7265_6775]);
                random_regular(n, degree, &mut rng)
            }
        }
    }
}

pub fn gen_archetype(archetype: Archetype, seed: u64) -> Result<DailyGraph> {
    wrap(&archetype.topology(seed)?, default_day())
}

/// Random `degree`-regular simple graph by the pairing model, rejecting
/// pairings with loops or repeated pairs.
pub fn random_regular<R: Rng>(n: usize, degree: usize, rng: &mut R) -> Result<SimpleGraph> {
    if degree == 0 || degree >= n || (n * degree) % 2 == 1 {
        return Err(invalid(format!("no simple {degree}-regular graph on {n} nodes")));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat(u).take(degree)).collect();
    'attempt: for _ in 0..REGULAR_MAX_TRIES {
        stubs.shuffle(rng);
        let mut seen = std::collections::HashSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        return Ok(SimpleGraph::from_edges(n, seen));
    }
    Err(invalid(format!("pairing model failed {REGULAR_MAX_TRIES} times for {degree}-regular n={n}")))
}

/// A planted core-periphery graph with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Planted {
    pub graph: DailyGraph,
    /// Planted core flag per node of `graph`.
    pub truth: Vec<bool>,
}

/// Two-block stochastic block graph: nodes `0..n_core` form the core.
/// Nodes that end up isolated are not part of the returned graph.
pub fn gen_planted_cp(
    n_core: usize,
    n_periph: usize,
    p_cc: f64,
    p_cp: f64,
    p_pp: f64,
    seed: u64,
) -> Result<Planted> {
    let probs = [p_cc, p_cp, p_pp];
    if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(invalid("block probabilities must lie in [0, 1]"));
    }
    if !(p_cc >= p_cp && p_cp >= p_pp) {
        return Err(invalid("expected p_cc >= p_cp >= p_pp"));
    }
    if n_core == 0 || n_periph == 0 {
        return Err(invalid("both blocks must be non-empty"));
    }
    let topology = planted_topology(n_core, n_periph, p_cc, p_cp, p_pp, seed);
    let graph = wrap(&topology, default_day())?;
    let core_names: std::collections::HashSet<String> =
        super::synth_addresses(n_core).into_iter().collect();
    let truth = graph.nodes.iter().map(|a| core_names.contains(a)).collect();
    Ok(Planted { graph, truth })
}

pub(crate) fn planted_topology(
    n_core: usize,
    n_periph: usize,
    p_cc: f64,
    p_cp: f64,
    p_pp: f64,
    seed: u64,
) -> SimpleGraph {
    let mut rng = seed::rng(seed, &[0x706c_616e]);
    let n = n_core + n_periph;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = match (u < n_core, v < n_core) {
                (true, true) => p_cc,
                (false, false) => p_pp,
                _ => p_cp,
            };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, edges)
}
