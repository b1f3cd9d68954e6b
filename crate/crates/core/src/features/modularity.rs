//! Newman-Girvan modularity of a greedily maximized partition.
//!
//! `Q = sum_c (e_c / m - (d_c / 2m)^2)` where `e_c` counts edges inside
//! community `c` and `d_c` is its degree total. Communities never span
//! connected components (merging across them always lowers `Q`), so each
//! component is optimized on its own: exhaustively over all set partitions
//! when it has at most [`EXACT_MAX_NODES`] nodes, otherwise by CNM
//! agglomeration followed by seeded single-node moves.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;

use crate::graph::{connected_components, SimpleGraph};
use crate::seed;

/// Components up to this size are partitioned exhaustively (Bell(8) = 4140).
pub const EXACT_MAX_NODES: usize = 8;
const MAX_MOVE_SWEEPS: usize = 100;

/// Modularity of the given community labelling.
pub fn modularity_of(g: &SimpleGraph, community: &[usize]) -> f64 {
    let m = g.m() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let mut inside: HashMap<usize, f64> = HashMap::new();
    let mut degree: HashMap<usize, f64> = HashMap::new();
    for (u, v) in g.edges() {
        if community[u] == community[v] {
            *inside.entry(community[u]).or_default() += 1.0;
        }
    }
    for u in 0..g.n() {
        *degree.entry(community[u]).or_default() += g.degree(u) as f64;
    }
    let mut keys: Vec<usize> = degree.keys().copied().collect();
    keys.sort_unstable();
    keys.iter()
        .map(|c| inside.get(c).copied().unwrap_or(0.0) / m - (degree[c] / (2.0 * m)).powi(2))
        .sum()
}

/// Community label per node from greedy maximization; labels are dense and
/// numbered by first appearance.
pub fn modularity_partition(g: &SimpleGraph, seed: u64) -> Vec<usize> {
    let comps = connected_components(g);
    let mut community = vec![usize::MAX; g.n()];
    let mut next = 0;
    for (ci, members) in comps.members().into_iter().enumerate() {
        let local = if members.len() <= EXACT_MAX_NODES {
            exact_component(g, &members)
        } else {
            greedy_component(g, &members, seed::derive(seed, &[ci as u64]))
        };
        let base = next;
        for (i, &u) in members.iter().enumerate() {
            community[u] = base + local[i];
            next = next.max(base + local[i] + 1);
        }
    }
    relabel(&community)
}

/// Modularity of the greedily maximized partition. Zero for an edgeless
/// graph.
pub fn modularity(g: &SimpleGraph, seed: u64) -> f64 {
    modularity_of(g, &modularity_partition(g, seed))
}

fn relabel(labels: &[usize]) -> Vec<usize> {
    let mut map: HashMap<usize, usize> = HashMap::new();
    labels
        .iter()
        .map(|&c| {
            let k = map.len();
            *map.entry(c).or_insert(k)
        })
        .collect()
}

/// Local adjacency of a component: node `i` is `members[i]`.
fn local_adjacency(g: &SimpleGraph, members: &[usize]) -> Vec<Vec<usize>> {
    let index: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    members.iter().map(|&u| g.neighbors(u).iter().map(|v| index[v]).collect()).collect()
}

/// Objective restricted to one component, up to the shared `1/m` scale:
/// `sum_c (e_c - d_c^2 / 4m)`.
fn local_score(adj: &[Vec<usize>], labels: &[usize], m: f64) -> f64 {
    let k = labels.iter().max().map_or(0, |&x| x + 1);
    let mut inside = vec![0.0; k];
    let mut deg = vec![0.0; k];
    for (u, nbrs) in adj.iter().enumerate() {
        deg[labels[u]] += nbrs.len() as f64;
        for &v in nbrs {
            if u < v && labels[u] == labels[v] {
                inside[labels[u]] += 1.0;
            }
        }
    }
    inside.iter().zip(&deg).map(|(e, d)| e - d * d / (4.0 * m)).sum()
}

/// Best partition of a small component by walking every restricted growth
/// string. The first maximum in enumeration order wins.
fn exact_component(g: &SimpleGraph, members: &[usize]) -> Vec<usize> {
    let k = members.len();
    let m = g.m() as f64;
    let adj = local_adjacency(g, members);
    let mut labels = vec![0usize; k];
    let mut best = labels.clone();
    let mut best_score = local_score(&adj, &labels, m);
    // labels[i] <= 1 + max(labels[..i]); advance like an odometer
    loop {
        let mut i = k;
        loop {
            if i <= 1 {
                return best;
            }
            i -= 1;
            let cap = labels[..i].iter().max().copied().unwrap_or(0) + 1;
            if labels[i] < cap {
                labels[i] += 1;
                for l in labels.iter_mut().skip(i + 1) {
                    *l = 0;
                }
                break;
            }
        }
        let s = local_score(&adj, &labels, m);
        if s > best_score + 1e-14 {
            best_score = s;
            best.copy_from_slice(&labels);
        }
    }
}

/// CNM agglomeration: repeatedly merge the adjacent pair of communities
/// with the largest positive gain, then polish with single-node moves.
fn greedy_component(g: &SimpleGraph, members: &[usize], seed: u64) -> Vec<usize> {
    let k = members.len();
    let m = g.m() as f64;
    let adj = local_adjacency(g, members);
    // links[c][d] = edges between communities c and d
    let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            *links[u].entry(v).or_default() += 1.0;
        }
    }
    let mut deg: Vec<f64> = adj.iter().map(|n| n.len() as f64).collect();
    let mut alive = vec![true; k];
    let mut owner: Vec<usize> = (0..k).collect();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for c in (0..k).filter(|&c| alive[c]) {
            for (&d, &w) in links[c].range(c + 1..) {
                let gain = w - deg[c] * deg[d] / (2.0 * m);
                if gain > 1e-12 && best.map_or(true, |(b, _, _)| gain > b + 1e-12) {
                    best = Some((gain, c, d));
                }
            }
        }
        let Some((_, c, d)) = best else { break };
        // fold d into c
        let d_links = std::mem::take(&mut links[d]);
        for (e, w) in d_links {
            if e == c {
                continue;
            }
            *links[c].entry(e).or_default() += w;
            let back = links[e].remove(&d).unwrap_or(0.0);
            *links[e].entry(c).or_default() += back;
        }
        links[c].remove(&d);
        deg[c] += deg[d];
        alive[d] = false;
        for o in owner.iter_mut() {
            if *o == d {
                *o = c;
            }
        }
    }
    refine_moves(&adj, &mut owner, m, seed);
    relabel(&owner)
}

/// Move single nodes to the neighbouring community with the best strictly
/// positive gain until no move helps.
fn refine_moves(adj: &[Vec<usize>], labels: &mut [usize], m: f64, seed: u64) {
    let k = adj.len();
    let mut tot = vec![0.0; k];
    for (u, nbrs) in adj.iter().enumerate() {
        tot[labels[u]] += nbrs.len() as f64;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(&mut seed::rng(seed, &[0x6d6f_7665]));
    for _ in 0..MAX_MOVE_SWEEPS {
        let mut moved = false;
        for &u in &order {
            let d = adj[u].len() as f64;
            let mut to: BTreeMap<usize, f64> = BTreeMap::new();
            for &v in &adj[u] {
                *to.entry(labels[v]).or_default() += 1.0;
            }
            let own = labels[u];
            tot[own] -= d;
            let score = |c: usize, links: f64| links - d * tot[c] / (2.0 * m);
            let stay = score(own, to.get(&own).copied().unwrap_or(0.0));
            let mut best = (own, stay);
            for (&c, &w) in &to {
                let s = score(c, w);
                if s > best.1 + 1e-12 {
                    best = (c, s);
                }
            }
            tot[best.0] += d;
            if best.0 != own {
                labels[u] = best.0;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testutil::{complete, gnp, star};

    fn two_triangles() -> SimpleGraph {
        SimpleGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    }

    /// Maximum over every set partition of the whole graph, enumerated by
    /// recursive assignment (independent of the odometer above).
    fn brute_max(g: &SimpleGraph) -> f64 {
        fn go(g: &SimpleGraph, i: usize, labels: &mut Vec<usize>, k: usize, best: &mut f64) {
            if i == g.n() {
                *best = best.max(modularity_of(g, labels));
                return;
            }
            for c in 0..=k {
                labels.push(c);
                go(g, i + 1, labels, k.max(c + 1), best);
                labels.pop();
            }
        }
        let mut best = f64::NEG_INFINITY;
        go(g, 0, &mut Vec::new(), 0, &mut best);
        best
    }

    #[test]
    fn two_triangles_is_half() {
        let g = two_triangles();
        assert_eq!(modularity(&g, 0), 0.5);
        assert_eq!(modularity_partition(&g, 0), vec![0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn complete_single_community_is_zero() {
        let g = complete(5);
        assert!(modularity_of(&g, &[0; 5]).abs() < 1e-15);
        assert!(modularity(&g, 0).abs() < 1e-15);
    }

    #[test]
    fn exact_on_small_graphs() {
        for seed in 0..40 {
            let n = 3 + (seed as usize % 6);
            let g = gnp(n, 0.45, 900 + seed);
            if g.m() == 0 {
                continue;
            }
            assert!((modularity(&g, seed) - brute_max(&g)).abs() < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn greedy_is_bounded_and_deterministic() {
        for seed in 0..10 {
            let g = gnp(60, 0.08, seed);
            if g.m() == 0 {
                continue;
            }
            let q = modularity(&g, seed);
            assert_eq!(q, modularity(&g, seed));
            assert!((-0.5..=1.0).contains(&q));
            let labels = modularity_partition(&g, seed);
            assert!((q - modularity_of(&g, &labels)).abs() < 1e-12);
            // never worse than keeping each component whole
            let comps = connected_components(&g);
            assert!(q >= modularity_of(&g, &comps.assignment) - 1e-12);
        }
    }

    #[test]
    fn star_has_no_community_structure() {
        assert!(modularity(&star(20), 1).abs() < 1e-12);
    }

    #[test]
    fn ring_of_cliques_splits_into_cliques() {
        // eight 5-cliques joined in a ring by single edges
        let mut edges = Vec::new();
        for c in 0..8 {
            let base = c * 5;
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((base + i, base + j));
                }
            }
            edges.push((base + 4, (base + 5) % 40));
        }
        let g = SimpleGraph::from_edges(40, edges);
        let labels = modularity_partition(&g, 3);
        for c in 0..8 {
            let block = &labels[c * 5..c * 5 + 5];
            assert!(block.iter().all(|&l| l == block[0]));
        }
        assert_eq!(labels.iter().max(), Some(&7));
    }
}
