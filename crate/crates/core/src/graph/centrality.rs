use std::collections::VecDeque;

use super::{GraphError, Result, SimpleGraph};
use crate::stats::{mean, pop_std};

/// Max-norm change between successive iterates that counts as converged.
pub const EIGEN_TOL: f64 = 1e-10;
pub const EIGEN_MAX_ITER: usize = 1000;

/// Eigenvector centrality by power iteration on `A + I`, started from the
/// uniform vector and normalized to unit Euclidean length.
///
/// The identity shift leaves eigenvectors unchanged but keeps bipartite
/// graphs (stars, paths) from oscillating between two iterates.
pub fn eigenvector_centrality(g: &SimpleGraph) -> Result<Vec<f64>> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::DegenerateGraph { nodes: 0 });
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    for _ in 0..EIGEN_MAX_ITER {
        for u in 0..n {
            next[u] = x[u] + g.neighbors(u).iter().map(|&v| x[v]).sum::<f64>();
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(GraphError::DegenerateGraph { nodes: n });
        }
        let mut delta: f64 = 0.0;
        for u in 0..n {
            next[u] /= norm;
            delta = delta.max((next[u] - x[u]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if delta < EIGEN_TOL {
            return Ok(x);
        }
    }
    Err(GraphError::NoConvergence(EIGEN_MAX_ITER))
}

pub fn eigenvector_centrality_stats(g: &SimpleGraph) -> Result<(f64, f64)> {
    let x = eigenvector_centrality(g)?;
    Ok((mean(&x), pop_std(&x)))
}

/// Closeness with the Wasserman-Faust correction for disconnected graphs:
/// `((r - 1) / (n - 1)) * ((r - 1) / sum of distances)`, where `r` counts the
/// nodes reachable from `u` including itself. Nodes that reach nothing get 0.
pub fn closeness_centrality(g: &SimpleGraph) -> Vec<f64> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut out = Vec::with_capacity(n);
    for src in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[src] = 0;
        queue.push_back(src);
        let (mut reached, mut total) = (0usize, 0usize);
        while let Some(u) = queue.pop_front() {
            reached += 1;
            total += dist[u];
            for &v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if total == 0 || n < 2 {
            out.push(0.0);
        } else {
            let r = (reached - 1) as f64;
            out.push((r / total as f64) * (r / (n - 1) as f64));
        }
    }
    out
}

pub fn closeness_centrality_stats(g: &SimpleGraph) -> (f64, f64) {
    let c = closeness_centrality(g);
    (mean(&c), pop_std(&c))
}
