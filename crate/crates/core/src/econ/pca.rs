use nalgebra::DMatrix;

use super::{EconError, Result};
use crate::stats::pearson;

/// Principal components of standardized columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    /// `n_components x n_features`; row `i` is the unit-norm loading vector
    /// of component `i`, signed so its largest-magnitude entry is positive.
    pub loadings: DMatrix<f64>,
    pub explained_variance_ratio: Vec<f64>,
    pub n_components: usize,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl PcaResult {
    /// Columns of `data` standardized with the fitted means and population
    /// standard deviations.
    pub fn standardize(&self, data: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(data.nrows(), data.ncols(), |i, j| (data[(i, j)] - self.means[j]) / self.stds[j])
    }

    /// Component scores, `n_rows x n_components`.
    pub fn scores(&self, data: &DMatrix<f64>) -> DMatrix<f64> {
        self.standardize(data) * self.loadings.transpose()
    }
}

/// PCA of `data` (rows are observations) through the eigen-decomposition of
/// its correlation matrix, keeping the `k` largest components.
pub fn pca(data: &DMatrix<f64>, k: usize) -> Result<PcaResult> {
    let (n, p) = data.shape();
    if n <= k || k == 0 || k > p {
        return Err(EconError::InsufficientObservations { n, needed: k });
    }
    let means: Vec<f64> = (0..p).map(|j| data.column(j).mean()).collect();
    let stds: Vec<f64> = (0..p)
        .map(|j| (data.column(j).iter().map(|v| (v - means[j]).powi(2)).sum::<f64>() / n as f64).sqrt())
        .collect();
    if let Some(j) = stds.iter().position(|&s| s == 0.0 || !s.is_finite()) {
        return Err(EconError::DegenerateColumn(j));
    }
    let z = DMatrix::from_fn(n, p, |i, j| (data[(i, j)] - means[j]) / stds[j]);
    let corr = (z.transpose() * &z) / n as f64;
    let corr = (&corr + corr.transpose()) * 0.5;
    let eig = corr.symmetric_eigen();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let total: f64 = eig.eigenvalues.iter().map(|v| v.max(0.0)).sum();
    let mut loadings = DMatrix::zeros(k, p);
    let mut ratios = Vec::with_capacity(k);
    for (row, &c) in order.iter().take(k).enumerate() {
        let mut v = eig.eigenvectors.column(c).into_owned();
        v /= v.norm();
        let lead = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if lead < 0.0 {
            v = -v;
        }
        loadings.row_mut(row).copy_from(&v.transpose());
        ratios.push((eig.eigenvalues[c].max(0.0) / total).min(1.0));
    }
    Ok(PcaResult { loadings, explained_variance_ratio: ratios, n_components: k, means, stds })
}

/// Pearson correlations between the columns of `data`, with a unit
/// diagonal.
pub fn correlation_matrix(columns: &[Vec<f64>]) -> DMatrix<f64> {
    let p = columns.len();
    DMatrix::from_fn(p, p, |i, j| if i == j { 1.0 } else { pearson(&columns[i], &columns[j]) })
}
