//! Multi-pair core-periphery detection under the configuration model.
//!
//! Quality of a labelling with pair ids `g` and core flags `x`:
//!
//! ```text
//! Q = 1/(2M) * sum_{i != j, g_i = g_j} (A_ij - d_i d_j / 2M) * x_ij
//! ```
//!
//! with `x_ij = 0` only when both `i` and `j` are periphery. Optimized by
//! label switching: each node in turn moves to the (pair, role) among its
//! neighbours' pairs, its own pair or a fresh pair that raises `Q` most.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use super::{be_detect, CpAssignment, CpError, Result};
use crate::graph::SimpleGraph;
use crate::seed;

const MAX_SWEEPS: usize = 200;

pub fn km_quality(g: &SimpleGraph, pair_id: &[usize], core: &[bool]) -> f64 {
    let m2 = 2.0 * g.m() as f64;
    if m2 == 0.0 {
        return 0.0;
    }
    let mut within = 0.0;
    for (u, v) in g.edges() {
        if pair_id[u] == pair_id[v] && (core[u] || core[v]) {
            within += 2.0;
        }
    }
    // per pair: total degree, periphery degree, sum of squared core degrees
    let mut sums: BTreeMap<usize, (f64, f64, f64)> = BTreeMap::new();
    for u in 0..g.n() {
        let d = g.degree(u) as f64;
        let e = sums.entry(pair_id[u]).or_default();
        e.0 += d;
        if core[u] {
            e.2 += d * d;
        } else {
            e.1 += d;
        }
    }
    let expected: f64 = sums.values().map(|&(all, per, core_sq)| all * all - per * per - core_sq).sum();
    (within - expected / m2) / m2
}

struct State<'a> {
    g: &'a SimpleGraph,
    m2: f64,
    pair: Vec<usize>,
    core: Vec<bool>,
    deg_all: Vec<f64>,
    deg_core: Vec<f64>,
    members: Vec<usize>,
    empty: Vec<usize>,
}

impl<'a> State<'a> {
    fn new(g: &'a SimpleGraph, pair: Vec<usize>, core: Vec<bool>) -> Self {
        let n = g.n();
        let mut s = Self {
            g,
            m2: 2.0 * g.m() as f64,
            pair,
            core,
            deg_all: vec![0.0; n],
            deg_core: vec![0.0; n],
            members: vec![0; n],
            empty: Vec::new(),
        };
        for u in 0..n {
            s.add(u);
        }
        s.empty = (0..n).rev().filter(|&p| s.members[p] == 0).collect();
        s
    }

    fn add(&mut self, u: usize) {
        self.members[self.pair[u]] += 1;
        let d = self.g.degree(u) as f64;
        self.deg_all[self.pair[u]] += d;
        if self.core[u] {
            self.deg_core[self.pair[u]] += d;
        }
    }

    fn remove(&mut self, u: usize) {
        self.members[self.pair[u]] -= 1;
        if self.members[self.pair[u]] == 0 {
            self.empty.push(self.pair[u]);
        }
        let d = self.g.degree(u) as f64;
        self.deg_all[self.pair[u]] -= d;
        if self.core[u] {
            self.deg_core[self.pair[u]] -= d;
        }
    }

    /// Contribution (up to the constant factor 2/2M) of `u` sitting in
    /// `pair` with role `core`, given the other members. `u` must already be
    /// removed from the degree sums.
    fn contribution(&self, u: usize, pair: usize, core: bool, links: &BTreeMap<usize, (f64, f64)>) -> f64 {
        let d = self.g.degree(u) as f64;
        let (k_all, k_core) = links.get(&pair).copied().unwrap_or((0.0, 0.0));
        if core {
            k_all - d * self.deg_all[pair] / self.m2
        } else {
            k_core - d * self.deg_core[pair] / self.m2
        }
    }

    /// An unused pair id.
    fn free_pair(&mut self) -> Option<usize> {
        while let Some(&p) = self.empty.last() {
            if self.members[p] == 0 {
                return Some(p);
            }
            self.empty.pop();
        }
        None
    }

    /// Move `u` to its best (pair, role); true if it moved.
    fn relocate(&mut self, u: usize) -> bool {
        let mut links: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
        for &v in self.g.neighbors(u) {
            let e = links.entry(self.pair[v]).or_default();
            e.0 += 1.0;
            if self.core[v] {
                e.1 += 1.0;
            }
        }
        self.remove(u);
        let free_pair = self.free_pair().expect("u's own pair is free or another one is");
        let (old_pair, old_core) = (self.pair[u], self.core[u]);
        let current = self.contribution(u, old_pair, old_core, &links);
        let mut best = (old_pair, old_core, current);
        let candidates = links.keys().copied().chain([old_pair, free_pair]);
        // periphery is tried first so that it wins ties: while every other
        // member of a pair is core the two roles score the same, and only a
        // periphery member lets the pattern differ from a plain community
        for p in candidates {
            for role in [false, true] {
                let gain = self.contribution(u, p, role, &links);
                if gain > best.2 + 1e-12 {
                    best = (p, role, gain);
                }
            }
        }
        if best.0 == old_pair && best.1 {
            let demoted = self.contribution(u, old_pair, false, &links);
            if demoted >= best.2 - 1e-12 {
                best = (old_pair, false, demoted);
            }
        }
        self.pair[u] = best.0;
        self.core[u] = best.1;
        self.add(u);
        (best.0, best.1) != (old_pair, old_core)
    }

    fn run(&mut self, order: &[usize]) {
        for _ in 0..MAX_SWEEPS {
            let mut moved = false;
            for &u in order {
                moved |= self.relocate(u);
            }
            if !moved {
                break;
            }
        }
    }

    fn into_assignment(self) -> CpAssignment {
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        let pair_id: Vec<usize> = self
            .pair
            .iter()
            .map(|&p| {
                let next = relabel.len();
                *relabel.entry(p).or_insert(next)
            })
            .collect();
        let quality = km_quality(self.g, &pair_id, &self.core);
        CpAssignment { core: self.core, pair_id, quality }
    }
}

/// Multi-pair detection. The first start embeds the single-pair
/// Borgatti-Everett labelling as one pair; further starts begin from
/// singleton core pairs visited in seeded random order. The best final
/// quality wins.
pub fn km_multi_detect(g: &SimpleGraph, seed: u64, restarts: usize) -> Result<CpAssignment> {
    let n = g.n();
    if n < 3 {
        return Err(CpError::DegenerateGraph { nodes: n });
    }
    let mut best: Option<CpAssignment> = None;
    for restart in 0..restarts.max(1) {
        let mut rng = seed::rng(seed, &[1, restart as u64]);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut state = if restart == 0 {
            let be = be_detect(g, seed::derive(seed, &[2]), super::DEFAULT_RESTARTS)?;
            State::new(g, vec![0; n], be.core)
        } else {
            State::new(g, (0..n).collect(), vec![true; n])
        };
        state.run(&order);
        let a = state.into_assignment();
        if best.as_ref().map_or(true, |b| a.quality > b.quality) {
            best = Some(a);
        }
    }
    Ok(best.expect("at least one restart"))
}
