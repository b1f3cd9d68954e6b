use super::SimpleGraph;
use crate::stats::{mean, pop_std};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringStats {
    pub cluster_mean: f64,
    pub cluster_std: f64,
    /// `3 * triangles / connected triples`; 0 when there are no triples.
    pub transitivity: f64,
}

/// Triangles through each node.
fn triangles_per_node(g: &SimpleGraph) -> Vec<u64> {
    let mut t = vec![0u64; g.n()];
    for (u, v) in g.edges() {
        // count common neighbours w > v so each triangle u < v < w is seen once
        let (a, b) = (g.neighbors(u), g.neighbors(v));
        let (mut i, mut j) = (a.partition_point(|&x| x <= v), b.partition_point(|&x| x <= v));
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    t[u] += 1;
                    t[v] += 1;
                    t[a[i]] += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    t
}

/// Unweighted local clustering coefficient; 0 for nodes of degree < 2.
pub fn local_clustering(g: &SimpleGraph) -> Vec<f64> {
    triangles_per_node(g)
        .iter()
        .enumerate()
        .map(|(u, &t)| {
            let d = g.degree(u) as f64;
            if d < 2.0 {
                0.0
            } else {
                2.0 * t as f64 / (d * (d - 1.0))
            }
        })
        .collect()
}

pub fn clustering_stats(g: &SimpleGraph) -> ClusteringStats {
    let t = triangles_per_node(g);
    let local = local_clustering(g);
    let closed: f64 = t.iter().map(|&x| x as f64).sum();
    let triples: f64 = g
        .degrees()
        .iter()
        .map(|&d| (d * d.saturating_sub(1)) as f64 / 2.0)
        .sum();
    ClusteringStats {
        cluster_mean: mean(&local),
        cluster_std: pop_std(&local),
        transitivity: if triples == 0.0 { 0.0 } else { closed / triples },
    }
}
