use std::collections::VecDeque;

use super::SimpleGraph;

/// Connected components of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Component id per node. Ids are ordered by size, largest first; ties
    /// keep the order of the smallest member node.
    pub assignment: Vec<usize>,
    /// Component sizes, non-increasing.
    pub sizes: Vec<usize>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }

    /// Node lists per component, each sorted.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.sizes.len()];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

pub fn connected_components(g: &SimpleGraph) -> ComponentPartition {
    let n = g.n();
    let mut raw = vec![usize::MAX; n];
    let mut raw_sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if raw[start] != usize::MAX {
            continue;
        }
        let id = raw_sizes.len();
        raw[start] = id;
        queue.push_back(start);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in g.neighbors(u) {
                if raw[v] == usize::MAX {
                    raw[v] = id;
                    queue.push_back(v);
                }
            }
        }
        raw_sizes.push(size);
    }
    let mut order: Vec<usize> = (0..raw_sizes.len()).collect();
    order.sort_by(|&a, &b| raw_sizes[b].cmp(&raw_sizes[a]).then(a.cmp(&b)));
    let mut rank = vec![0; order.len()];
    for (new_id, &old) in order.iter().enumerate() {
        rank[old] = new_id;
    }
    ComponentPartition {
        assignment: raw.iter().map(|&c| rank[c]).collect(),
        sizes: order.iter().map(|&c| raw_sizes[c]).collect(),
    }
}

/// Largest component size over node count.
pub fn giant_component_ratio(g: &SimpleGraph) -> f64 {
    if g.n() == 0 {
        return f64::NAN;
    }
    connected_components(g).largest() as f64 / g.n() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testutil::gnp;

    /// Reachability by repeated boolean matrix squaring-free closure (Warshall).
    fn closure_components(g: &SimpleGraph) -> Vec<usize> {
        let n = g.n();
        let mut r = vec![vec![false; n]; n];
        for u in 0..n {
            r[u][u] = true;
            for &v in g.neighbors(u) {
                r[u][v] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    for j in 0..n {
                        if r[k][j] {
                            r[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        for i in 0..n {
            if !seen[i] {
                let members: Vec<usize> = (0..n).filter(|&j| r[i][j]).collect();
                for &j in &members {
                    seen[j] = true;
                }
                sizes.push(members.len());
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    #[test]
    fn small_cases() {
        let two = SimpleGraph::from_edges(4, [(0, 1), (2, 3)]);
        let p = connected_components(&two);
        assert_eq!(p.sizes, vec![2, 2]);
        assert_eq!(giant_component_ratio(&two), 0.5);
        let path = SimpleGraph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(connected_components(&path).sizes, vec![3]);
        assert_eq!(giant_component_ratio(&path), 1.0);
        // sizes {6, 3, 1}: the singleton is an isolated node in the raw topology
        let g = SimpleGraph::from_edges(
            10,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (6, 7), (7, 8)],
        );
        assert_eq!(connected_components(&g).sizes, vec![6, 3, 1]);
        assert_eq!(giant_component_ratio(&g), 0.6);
    }

    #[test]
    fn matches_transitive_closure() {
        for seed in 0..30 {
            let g = gnp(60, 0.02 + 0.001 * seed as f64, seed);
            let p = connected_components(&g);
            assert_eq!(p.sizes, closure_components(&g), "seed {seed}");
            assert_eq!(p.sizes.iter().sum::<usize>(), 60);
            for (u, v) in g.edges() {
                assert_eq!(p.assignment[u], p.assignment[v]);
            }
        }
    }
}
