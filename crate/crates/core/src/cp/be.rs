//! Single-pair Borgatti-Everett detection.
//!
//! The quality of a labelling is the Pearson correlation between the
//! off-diagonal adjacency entries and the ideal pattern, which is 1 for every
//! pair with at least one core endpoint and 0 for periphery-periphery pairs.
//! Both vectors are binary, so the correlation depends only on four counts:
//! node pairs `N`, edges `M`, ideal ones `K` and edges outside the
//! periphery-periphery block. A label flip changes those counts in O(1),
//! which makes exhaustive flip scans cheap.

use rand::Rng;

use super::{CpAssignment, CpError, Result};
use crate::graph::SimpleGraph;
use crate::seed;

pub const DEFAULT_RESTARTS: usize = 10;

/// Pearson correlation of two binary vectors of length `pairs` with `edges`
/// and `ideal` ones respectively and `overlap` shared ones. Zero when either
/// vector is constant.
pub fn be_quality_counts(pairs: u64, edges: u64, ideal: u64, overlap: u64) -> f64 {
    let (n, m, k, e) = (pairs as f64, edges as f64, ideal as f64, overlap as f64);
    let denom = m * (n - m) * k * (n - k);
    if denom <= 0.0 {
        return 0.0;
    }
    (n * e - m * k) / denom.sqrt()
}

fn pair_count(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

struct Counts {
    pairs: u64,
    edges: u64,
    n: u64,
}

impl Counts {
    fn quality(&self, cores: u64, pp_edges: u64) -> f64 {
        let periphery = self.n - cores;
        let ideal = self.pairs - pair_count(periphery);
        be_quality_counts(self.pairs, self.edges, ideal, self.edges - pp_edges)
    }
}

/// Quality of an arbitrary labelling.
pub fn be_quality(g: &SimpleGraph, core: &[bool]) -> f64 {
    let counts = Counts { pairs: pair_count(g.n() as u64), edges: g.m() as u64, n: g.n() as u64 };
    let cores = core.iter().filter(|&&c| c).count() as u64;
    let pp = g.edges().filter(|&(u, v)| !core[u] && !core[v]).count() as u64;
    counts.quality(cores, pp)
}

/// One greedy run from `core`: repeatedly apply the single flip with the
/// largest quality, while it strictly improves and leaves at least one node
/// on each side.
fn climb(g: &SimpleGraph, counts: &Counts, core: &mut [bool]) -> f64 {
    let n = g.n();
    // periphery neighbours per node
    let mut pdeg: Vec<u64> = (0..n)
        .map(|u| g.neighbors(u).iter().filter(|&&v| !core[v]).count() as u64)
        .collect();
    let mut cores = core.iter().filter(|&&c| c).count() as u64;
    let mut pp: u64 = (0..n).filter(|&u| !core[u]).map(|u| pdeg[u]).sum::<u64>() / 2;
    let mut current = counts.quality(cores, pp);
    loop {
        // For a fixed core count the quality falls as periphery-periphery
        // edges grow, so the best demotion is the core node with the fewest
        // periphery neighbours and the best promotion the periphery node with
        // the most.
        let mut demote: Option<usize> = None;
        let mut promote: Option<usize> = None;
        for u in 0..n {
            if core[u] {
                if demote.map_or(true, |d| pdeg[u] < pdeg[d]) {
                    demote = Some(u);
                }
            } else if promote.map_or(true, |p| pdeg[u] > pdeg[p]) {
                promote = Some(u);
            }
        }
        let mut best: Option<(usize, f64)> = None;
        if let Some(u) = demote.filter(|_| cores > 1) {
            best = Some((u, counts.quality(cores - 1, pp + pdeg[u])));
        }
        if let Some(u) = promote.filter(|_| counts.n - cores > 1) {
            let q = counts.quality(cores + 1, pp - pdeg[u]);
            if best.map_or(true, |(b, bq)| q > bq || (q == bq && u < b)) {
                best = Some((u, q));
            }
        }
        match best {
            Some((u, q)) if q > current => {
                if core[u] {
                    pp += pdeg[u];
                    cores -= 1;
                    for &v in g.neighbors(u) {
                        pdeg[v] += 1;
                    }
                } else {
                    pp -= pdeg[u];
                    cores += 1;
                    for &v in g.neighbors(u) {
                        pdeg[v] -= 1;
                    }
                }
                core[u] = !core[u];
                current = q;
            }
            _ => return current,
        }
    }
}

/// Best labelling over `restarts` randomized greedy runs.
pub fn be_detect(g: &SimpleGraph, seed: u64, restarts: usize) -> Result<CpAssignment> {
    let n = g.n();
    if n < 3 {
        return Err(CpError::DegenerateGraph { nodes: n });
    }
    let counts = Counts { pairs: pair_count(n as u64), edges: g.m() as u64, n: n as u64 };
    let mut best: Option<(Vec<bool>, f64)> = None;
    for restart in 0..restarts.max(1) {
        let mut rng = seed::rng(seed, &[restart as u64]);
        let share: f64 = rng.gen_range(0.05..0.95);
        let mut core: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < share).collect();
        if !core.iter().any(|&c| c) {
            core[rng.gen_range(0..n)] = true;
        }
        if core.iter().all(|&c| c) {
            core[rng.gen_range(0..n)] = false;
        }
        let q = climb(g, &counts, &mut core);
        if best.as_ref().map_or(true, |(_, bq)| q > *bq) {
            best = Some((core, q));
        }
    }
    let (core, quality) = best.expect("at least one restart");
    Ok(CpAssignment { pair_id: vec![0; n], core, quality })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::fixtures::perfect_cp;
    use crate::graph::testutil::{complete, gnp};
    use crate::stats::pearson;

    /// Pearson correlation over explicit vectors of all node pairs.
    fn vector_quality(g: &SimpleGraph, core: &[bool]) -> f64 {
        let n = g.n();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                a.push(if g.has_edge(i, j) { 1.0 } else { 0.0 });
                b.push(if core[i] || core[j] { 1.0 } else { 0.0 });
            }
        }
        pearson(&a, &b)
    }

    fn brute_force_max(g: &SimpleGraph) -> f64 {
        let n = g.n();
        let mut best = f64::NEG_INFINITY;
        for mask in 1u32..(1 << n) - 1 {
            let core: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            best = best.max(vector_quality(g, &core));
        }
        best
    }

    #[test]
    fn perfect_structure_recovered() {
        let g = perfect_cp(3, 9);
        let a = be_detect(&g, 42, DEFAULT_RESTARTS).unwrap();
        assert_eq!(a.core, (0..12).map(|i| i < 3).collect::<Vec<_>>());
        assert!((a.quality - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complete_graph_all_splits_equal() {
        let g = complete(6);
        let a = be_detect(&g, 1, DEFAULT_RESTARTS).unwrap();
        assert_eq!(a.quality, brute_force_max(&g));
        assert!(a.core_count() >= 1 && a.core_count() < 6);
    }

    #[test]
    fn too_small() {
        let g = SimpleGraph::from_edges(2, [(0, 1)]);
        assert_eq!(be_detect(&g, 0, 1), Err(CpError::DegenerateGraph { nodes: 2 }));
    }

    #[test]
    fn count_formula_is_pearson() {
        for seed in 0..20 {
            let g = gnp(14, 0.3, seed);
            let a = be_detect(&g, seed, 3).unwrap();
            assert!((a.quality - vector_quality(&g, &a.core)).abs() < 1e-12);
            assert!((be_quality(&g, &a.core) - a.quality).abs() < 1e-15);
        }
    }

    #[test]
    fn locally_optimal_and_mostly_global() {
        let mut hits = 0;
        for seed in 0..40u64 {
            let g = gnp(8 + (seed % 3) as usize, 0.35, 7000 + seed);
            let a = be_detect(&g, seed, DEFAULT_RESTARTS).unwrap();
            for u in 0..g.n() {
                let mut flipped = a.core.clone();
                flipped[u] = !flipped[u];
                let c = flipped.iter().filter(|&&x| x).count();
                if c == 0 || c == g.n() {
                    continue;
                }
                assert!(be_quality(&g, &flipped) <= a.quality, "seed {seed} flip {u}");
            }
            if (a.quality - brute_force_max(&g)).abs() < 1e-12 {
                hits += 1;
            }
        }
        assert!(hits >= 36, "{hits}/40");
    }

    #[test]
    fn deterministic_per_seed() {
        let g = gnp(40, 0.1, 3);
        assert_eq!(be_detect(&g, 9, 4).unwrap(), be_detect(&g, 9, 4).unwrap());
    }
}
