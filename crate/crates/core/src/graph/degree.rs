use super::{GraphError, Result, SimpleGraph};
use crate::stats::{mean, pop_std};

/// Degree dispersion statistics of one day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub degree_mean: f64,
    pub degree_std: f64,
    pub top10_degree_mean: f64,
    pub top10_degree_std: f64,
    /// `top10_degree_mean / degree_mean`.
    pub top10_degree_mean_ratio: f64,
    /// Edge density `2m / (n (n - 1))`.
    pub relative_degree: f64,
    /// Mean degree centrality, `degree / (n - 1)`.
    pub dc_mean: f64,
    pub dc_std: f64,
}

/// Degree statistics with the top-10 block taken from the ten highest
/// degrees of this graph (all nodes when fewer than ten).
pub fn degree_stats(g: &SimpleGraph) -> Result<DegreeStats> {
    let mut degrees: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    degrees.sort_by(|a, b| b.total_cmp(a));
    let top: Vec<f64> = degrees.iter().take(10).copied().collect();
    degree_stats_with_top(g, &top)
}

/// Degree statistics with an externally chosen top block, e.g. the day's
/// degrees of addresses that rank highest over a whole period.
pub fn degree_stats_with_top(g: &SimpleGraph, top_degrees: &[f64]) -> Result<DegreeStats> {
    let n = g.n();
    if n < 2 {
        return Err(GraphError::DegenerateGraph { nodes: n });
    }
    let degrees: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let scale = (n - 1) as f64;
    let dc: Vec<f64> = degrees.iter().map(|d| d / scale).collect();
    let degree_mean = mean(&degrees);
    let (top10_degree_mean, top10_degree_std) = if top_degrees.is_empty() {
        (0.0, 0.0)
    } else {
        (mean(top_degrees), pop_std(top_degrees))
    };
    Ok(DegreeStats {
        degree_mean,
        degree_std: pop_std(&degrees),
        top10_degree_mean,
        top10_degree_std,
        top10_degree_mean_ratio: top10_degree_mean / degree_mean,
        relative_degree: 2.0 * g.m() as f64 / (n as f64 * scale),
        dc_mean: mean(&dc),
        dc_std: pop_std(&dc),
    })
}
