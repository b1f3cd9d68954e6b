//! Null models for the core-periphery significance test.

use std::collections::HashSet;
use std::str::FromStr;

use rand::Rng;

use super::{CpError, Result};
use crate::graph::SimpleGraph;

/// How randomized comparison graphs are drawn from an observed graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NullModel {
    /// Double-edge swaps; every node keeps its exact degree.
    #[default]
    DegreePreserving,
    /// Independent edges with probability proportional to the degree
    /// product; degrees are preserved in expectation only.
    ExpectedDegree,
}

impl NullModel {
    pub fn sample<R: Rng>(&self, g: &SimpleGraph, rng: &mut R) -> Result<SimpleGraph> {
        match self {
            Self::DegreePreserving => rewire(g, SWAPS_PER_EDGE, rng),
            Self::ExpectedDegree => expected_degree_graph(g, rng),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::DegreePreserving => "degree-preserving",
            Self::ExpectedDegree => "expected-degree",
        }
    }
}

impl FromStr for NullModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "degree-preserving" | "rewire" => Ok(Self::DegreePreserving),
            "expected-degree" | "chung-lu" => Ok(Self::ExpectedDegree),
            other => Err(format!("unknown null model `{other}`")),
        }
    }
}

/// Double-edge swap attempts per edge for one null graph.
pub const SWAPS_PER_EDGE: usize = 10;

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Degree-preserving randomization by double-edge swaps.
///
/// Each attempt picks two edges `(a,b)`, `(c,d)` and rewires them to
/// `(a,d)`, `(c,b)` (orientation chosen at random). Attempts that would
/// create a self-loop or a parallel edge are rejected, so the result is a
/// simple graph with exactly the input degree sequence. Graphs that admit no
/// valid swap (stars, complete graphs) come back unchanged.
pub fn rewire<R: Rng>(g: &SimpleGraph, swaps_per_edge: usize, rng: &mut R) -> Result<SimpleGraph> {
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.len() < 2 {
        return Err(CpError::RewireFailure { edges: edges.len() });
    }
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let attempts = swaps_per_edge * edges.len();
    for _ in 0..attempts {
        let i = rng.gen_range(0..edges.len());
        let j = rng.gen_range(0..edges.len());
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (c, d) = if rng.gen::<bool>() { edges[j] } else { (edges[j].1, edges[j].0) };
        if a == d || c == b || a == c || b == d {
            continue;
        }
        let (e1, e2) = (key(a, d), key(c, b));
        if present.contains(&e1) || present.contains(&e2) {
            continue;
        }
        present.remove(&edges[i]);
        present.remove(&edges[j]);
        present.insert(e1);
        present.insert(e2);
        edges[i] = e1;
        edges[j] = e2;
    }
    Ok(SimpleGraph::from_edges(g.n(), edges))
}


/// Expected-degree random graph: each pair `u != v` is linked independently
/// with probability `min(1, d_u d_v / sum(d))`, using the skip-ahead sampler
/// over weight-sorted nodes so the cost is linear in nodes plus edges.
pub fn expected_degree_graph<R: Rng>(g: &SimpleGraph, rng: &mut R) -> Result<SimpleGraph> {
    let n = g.n();
    if g.m() < 2 {
        return Err(CpError::RewireFailure { edges: g.m() });
    }
    let weights: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let seq: Vec<f64> = order.iter().map(|&u| weights[u]).collect();
    let rho = 1.0 / seq.iter().sum::<f64>();
    let mut edges = Vec::new();
    for u in 0..n.saturating_sub(1) {
        let factor = seq[u] * rho;
        let mut v = u + 1;
        let mut p = (seq[v] * factor).min(1.0);
        while v < n && p > 0.0 {
            if p != 1.0 {
                let r: f64 = rng.gen();
                v += (r.ln() / (1.0 - p).ln()).floor() as usize;
            }
            if v < n {
                let q = (seq[v] * factor).min(1.0);
                if rng.gen::<f64>() < q / p {
                    edges.push((order[u], order[v]));
                }
                p = q;
                v += 1;
            }
        }
    }
    Ok(SimpleGraph::from_edges(n, edges))
}
