use nalgebra::{DMatrix, DVector};

use super::{EconError, Result};

/// Columns whose scaled Cholesky pivot falls below this are treated as
/// collinear.
const PIVOT_TOL: f64 = 1e-7;

/// Ordinary least squares solution with the pieces needed for inference.
#[derive(Debug, Clone)]
pub struct LsFit {
    pub beta: DVector<f64>,
    pub resid: DVector<f64>,
    pub xtx_inv: DMatrix<f64>,
    pub ssr: f64,
}

pub fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<LsFit> {
    let k = x.ncols();
    if x.nrows() < k || k == 0 {
        return Err(EconError::SingularDesign);
    }
    // equilibrate columns so the pivot check does not depend on units
    let norms: Vec<f64> = (0..k).map(|j| x.column(j).norm()).collect();
    if norms.iter().any(|&s| s == 0.0 || !s.is_finite()) {
        return Err(EconError::SingularDesign);
    }
    let d_inv = DMatrix::from_diagonal(&DVector::from_iterator(k, norms.iter().map(|s| 1.0 / s)));
    let xs = x * &d_inv;
    let gram = xs.transpose() * &xs;
    let chol = gram.cholesky().ok_or(EconError::SingularDesign)?;
    if chol.l_dirty().diagonal().iter().any(|&p| p < PIVOT_TOL) {
        return Err(EconError::SingularDesign);
    }
    let gram_inv = chol.inverse();
    let beta = &d_inv * (&gram_inv * (xs.transpose() * y));
    let resid = y - x * &beta;
    let ssr = resid.norm_squared();
    Ok(LsFit { beta, resid, xtx_inv: &d_inv * gram_inv * &d_inv, ssr })
}

/// Newey-West covariance of the OLS coefficients with Bartlett weights
/// `1 - l/(lag+1)` and no small-sample correction.
pub fn hac_covariance(x: &DMatrix<f64>, resid: &DVector<f64>, xtx_inv: &DMatrix<f64>, lag: usize) -> DMatrix<f64> {
    let n = x.nrows();
    let mut scores = x.clone();
    for (t, mut row) in scores.row_iter_mut().enumerate() {
        row *= resid[t];
    }
    let mut meat = scores.transpose() * &scores;
    for l in 1..=lag.min(n.saturating_sub(1)) {
        let w = 1.0 - l as f64 / (lag as f64 + 1.0);
        let lead = scores.rows(l, n - l);
        let lagged = scores.rows(0, n - l);
        let gamma = lead.transpose() * lagged;
        meat += (&gamma + gamma.transpose()) * w;
    }
    let v = xtx_inv * meat * xtx_inv;
    (&v + v.transpose()) * 0.5
}

/// Heteroskedasticity-robust (HC0) covariance, summed observation by
/// observation.
pub fn white_covariance(x: &DMatrix<f64>, resid: &DVector<f64>, xtx_inv: &DMatrix<f64>) -> DMatrix<f64> {
    let k = x.ncols();
    let mut meat = DMatrix::zeros(k, k);
    for t in 0..x.nrows() {
        let row = x.row(t).transpose();
        meat += &row * row.transpose() * (resid[t] * resid[t]);
    }
    xtx_inv * meat * xtx_inv
}

/// Plug-in lag `floor(4 (n/100)^(2/9))`.
pub fn default_hac_lag(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Two-sided significance marks at 10%, 5% and 1% using normal critical
/// values.
pub fn stars(t: f64) -> &'static str {
    let a = t.abs();
    if a >= 2.576 {
        "***"
    } else if a >= 1.96 {
        "**"
    } else if a >= 1.645 {
        "*"
    } else {
        ""
    }
}

/// OLS with an intercept and Newey-West standard errors. `coef[0]` is the
/// intercept; the rest follow `regressors`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiFit {
    pub coef: Vec<f64>,
    pub se: Vec<f64>,
    pub t: Vec<f64>,
    pub r_squared: f64,
    pub residual_std_error: f64,
    pub n_obs: usize,
    pub lag: usize,
}

pub fn ols_newey_west_multi(y: &[f64], regressors: &[&[f64]], lag: Option<usize>) -> Result<MultiFit> {
    let n = y.len();
    let k = regressors.len() + 1;
    assert!(regressors.iter().all(|r| r.len() == n), "regressor length mismatch");
    let lag = lag.unwrap_or_else(|| default_hac_lag(n));
    if n <= k + lag {
        return Err(EconError::InsufficientObservations { n, needed: k + lag });
    }
    let x = DMatrix::from_fn(n, k, |t, j| if j == 0 { 1.0 } else { regressors[j - 1][t] });
    let yv = DVector::from_column_slice(y);
    let fit = least_squares(&x, &yv)?;
    let v = hac_covariance(&x, &fit.resid, &fit.xtx_inv, lag);
    let coef: Vec<f64> = fit.beta.iter().copied().collect();
    let se: Vec<f64> = (0..k).map(|j| v[(j, j)].max(0.0).sqrt()).collect();
    let t = coef
        .iter()
        .zip(&se)
        .map(|(&c, &s)| {
            if s > 0.0 {
                c / s
            } else if c == 0.0 {
                0.0
            } else {
                c.signum() * f64::INFINITY
            }
        })
        .collect();
    let mean = yv.mean();
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r_squared = if tss > 0.0 { (1.0 - fit.ssr / tss).clamp(0.0, 1.0) } else { 0.0 };
    Ok(MultiFit {
        coef,
        se,
        t,
        r_squared,
        residual_std_error: (fit.ssr / (n - k) as f64).sqrt(),
        n_obs: n,
        lag,
    })
}

/// One univariate regression cell of a horizon table.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub horizon: usize,
    pub coefficient: f64,
    pub hac_se: f64,
    pub t_stat: f64,
    pub stars: &'static str,
    pub r_squared: f64,
    pub residual_std_error: f64,
    pub n_obs: usize,
}

impl RegressionResult {
    pub(crate) fn from_fit(fit: &MultiFit, j: usize, horizon: usize) -> Self {
        Self {
            horizon,
            coefficient: fit.coef[j],
            hac_se: fit.se[j],
            t_stat: fit.t[j],
            stars: stars(fit.t[j]),
            r_squared: fit.r_squared,
            residual_std_error: fit.residual_std_error,
            n_obs: fit.n_obs,
        }
    }
}

/// Slope of `y` on `x` (with intercept) and its Newey-West inference.
pub fn ols_newey_west(y: &[f64], x: &[f64], lag: Option<usize>, horizon: usize) -> Result<RegressionResult> {
    let fit = ols_newey_west_multi(y, &[x], lag)?;
    Ok(RegressionResult::from_fit(&fit, 1, horizon))
}
