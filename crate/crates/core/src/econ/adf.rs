//! Augmented Dickey-Fuller test with a constant.
//!
//! `dx_t = a + g x_{t-1} + sum_{i=1..p} d_i dx_{t-i} + e_t`; the statistic
//! is the OLS t-ratio of `g`. The lag order `p` minimizes AIC over a common
//! sample, then the chosen model is refit on all usable observations.

use nalgebra::{DMatrix, DVector};

use super::{least_squares, EconError, Result};

pub const MIN_ADF_LEN: usize = 20;

/// Relative spread below which a series counts as constant.
const CONSTANT_RTOL: f64 = 1e-12;
/// Residual energy below this share of the target energy is an exact fit.
const PERFECT_FIT_RTOL: f64 = 1e-20;

/// MacKinnon (2010) response-surface coefficients, constant-only case.
const CRIT_1: [f64; 4] = [-3.43035, -6.5393, -16.786, -79.433];
const CRIT_5: [f64; 4] = [-2.86154, -2.8903, -4.234, -40.040];
const CRIT_10: [f64; 4] = [-2.56677, -1.5384, -2.809, 0.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdfDecision {
    Stationary,
    NonStationary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfResult {
    pub stat: f64,
    pub lags: usize,
    pub n_obs: usize,
    pub critical_5: f64,
    pub decision: AdfDecision,
    /// The input was constant; it is reported stationary without a test.
    pub trivial: bool,
}

/// Finite-sample critical value at `level` (0.01, 0.05 or 0.10) for a
/// regression with `n_obs` observations.
pub fn mackinnon_critical_value(level: f64, n_obs: usize) -> f64 {
    let b = if level <= 0.01 {
        CRIT_1
    } else if level <= 0.05 {
        CRIT_5
    } else {
        CRIT_10
    };
    let t = n_obs as f64;
    b[0] + b[1] / t + b[2] / (t * t) + b[3] / (t * t * t)
}

/// Schwert's rule `floor(12 (n/100)^(1/4))`.
pub fn default_adf_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

struct LagFit {
    stat: f64,
    ssr: f64,
    n_obs: usize,
    k: usize,
}

/// Fit lag order `p` using targets `dx[start..]` where `dx[i] = x[i+1] - x[i]`.
fn fit_lag(x: &[f64], dx: &[f64], p: usize, start: usize) -> Result<LagFit> {
    let rows: Vec<usize> = (start..dx.len()).collect();
    let n = rows.len();
    let k = 2 + p;
    if n <= k {
        return Err(EconError::InsufficientObservations { n, needed: k });
    }
    let design = DMatrix::from_fn(n, k, |r, j| {
        let i = rows[r];
        match j {
            0 => 1.0,
            1 => x[i],
            _ => dx[i - (j - 1)],
        }
    });
    let y = DVector::from_iterator(n, rows.iter().map(|&i| dx[i]));
    let fit = least_squares(&design, &y)?;
    let gamma = fit.beta[1];
    let y_energy = y.norm_squared();
    let stat = if fit.ssr <= PERFECT_FIT_RTOL * y_energy {
        // exact fit: the t-ratio is meaningless, only the sign of a
        // non-negligible level effect matters
        let level_sd = crate::stats::pop_std(&rows.iter().map(|&i| x[i]).collect::<Vec<_>>());
        let rms = (y_energy / n as f64).sqrt();
        if (gamma * level_sd).abs() <= 1e-9 * rms {
            0.0
        } else {
            gamma.signum() * f64::INFINITY
        }
    } else {
        let sigma2 = fit.ssr / (n - k) as f64;
        gamma / (sigma2 * fit.xtx_inv[(1, 1)]).sqrt()
    };
    Ok(LagFit { stat, ssr: fit.ssr, n_obs: n, k })
}

/// ADF test; `max_lag` defaults to Schwert's rule, capped so the largest
/// model still has residual degrees of freedom.
pub fn adf_test(series: &[f64], max_lag: Option<usize>) -> Result<AdfResult> {
    let n = series.len();
    if n < MIN_ADF_LEN {
        return Err(EconError::SeriesTooShort { len: n, min: MIN_ADF_LEN });
    }
    let (lo, hi) = series.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let scale = lo.abs().max(hi.abs()).max(1.0);
    if hi - lo <= CONSTANT_RTOL * scale {
        return Ok(AdfResult {
            stat: f64::NEG_INFINITY,
            lags: 0,
            n_obs: n - 1,
            critical_5: mackinnon_critical_value(0.05, n - 1),
            decision: AdfDecision::Stationary,
            trivial: true,
        });
    }
    let dx: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    let cap = (n / 2).saturating_sub(2);
    let max_lag = max_lag.unwrap_or_else(|| default_adf_lag(n)).min(cap);
    // common sample for the AIC search
    let mut best: Option<(f64, usize)> = None;
    for p in 0..=max_lag {
        let Ok(f) = fit_lag(series, &dx, p, max_lag) else { continue };
        let aic = f.n_obs as f64 * (f.ssr / f.n_obs as f64).ln() + 2.0 * f.k as f64;
        if best.map_or(true, |(b, _)| aic < b) {
            best = Some((aic, p));
        }
    }
    let p = best.ok_or(EconError::SingularDesign)?.1;
    let f = fit_lag(series, &dx, p, p)?;
    let critical_5 = mackinnon_critical_value(0.05, f.n_obs);
    Ok(AdfResult {
        stat: f.stat,
        lags: p,
        n_obs: f.n_obs,
        critical_5,
        decision: if f.stat < critical_5 { AdfDecision::Stationary } else { AdfDecision::NonStationary },
        trivial: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    #[test]
    fn critical_values_approach_asymptote() {
        assert!((mackinnon_critical_value(0.05, 100_000) + 2.86154).abs() < 1e-4);
        let c = mackinnon_critical_value(0.05, 100);
        assert!((c - (-2.86154 - 0.028903 - 0.0004234 - 0.00004004)).abs() < 1e-12);
        assert!(mackinnon_critical_value(0.01, 250) < c);
        assert!(mackinnon_critical_value(0.10, 250) > c);
    }

    #[test]
    fn white_noise_mostly_stationary() {
        let ok = (0..100)
            .filter(|&s| adf_test(&noise(300, s), None).unwrap().decision == AdfDecision::Stationary)
            .count();
        assert!(ok >= 90, "{ok}");
    }

    #[test]
    fn random_walk_mostly_non_stationary() {
        let bad = (0..100)
            .filter(|&s| {
                let walk: Vec<f64> = noise(300, 1000 + s)
                    .iter()
                    .scan(0.0, |acc, e| {
                        *acc += e;
                        Some(*acc)
                    })
                    .collect();
                adf_test(&walk, None).unwrap().decision == AdfDecision::NonStationary
            })
            .count();
        assert!(bad >= 90, "{bad}");
    }

    #[test]
    fn constant_is_trivially_stationary() {
        let r = adf_test(&[3.5; 40], None).unwrap();
        assert!(r.trivial);
        assert_eq!(r.decision, AdfDecision::Stationary);
    }

    #[test]
    fn too_short() {
        assert_eq!(adf_test(&[1.0; 5], None), Err(EconError::SeriesTooShort { len: 5, min: MIN_ADF_LEN }));
    }

    #[test]
    fn statistic_matches_direct_regression_at_fixed_lag() {
        // with max_lag 0 the test is the plain DF regression
        let x = noise(80, 5);
        let r = adf_test(&x, Some(0)).unwrap();
        let n = x.len() - 1;
        let ylag = &x[..n];
        let dy: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let my = dy.iter().sum::<f64>() / n as f64;
        let mx = ylag.iter().sum::<f64>() / n as f64;
        let sxy: f64 = ylag.iter().zip(&dy).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = ylag.iter().map(|a| (a - mx).powi(2)).sum();
        let g = sxy / sxx;
        let a = my - g * mx;
        let ssr: f64 = ylag.iter().zip(&dy).map(|(xv, yv)| (yv - a - g * xv).powi(2)).sum();
        let se = (ssr / (n - 2) as f64 / sxx).sqrt();
        assert!((r.stat - g / se).abs() < 1e-9);
        assert_eq!(r.n_obs, n);
    }
}
