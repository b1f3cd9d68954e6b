//! Multi-horizon regressions of economic growth on network features.

use std::collections::HashMap;

use chrono::{Duration, NaiveDate};
use nalgebra::DMatrix;
use rayon::prelude::*;

use super::ols::RegressionResult;
use super::transform::prepare_with;
use super::{min_max, moving_average, ols_newey_west_multi, pca, EconError, PcaResult, PreparedSeries, Result, Transform};
use crate::features::{Feature, FeatureRow};
use crate::ingest::EconSeries;

pub const DEFAULT_HORIZONS: [usize; 10] = [1, 7, 14, 21, 28, 35, 42, 49, 56, 90];
pub const PCA_COMPONENTS: usize = 3;
const MA_WINDOW: usize = 7;

/// How one feature enters the regressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegressorSpec {
    pub label: &'static str,
    pub feature: Feature,
    pub transform: Transform,
    /// Apply the trailing 7-day mean before transforming.
    pub smooth: bool,
}

pub const REGRESSORS: [RegressorSpec; 5] = [
    RegressorSpec { label: "d_components_cnt", feature: Feature::ComponentsCnt, transform: Transform::Diff, smooth: true },
    RegressorSpec { label: "d_giant_com_ratio", feature: Feature::GiantComRatio, transform: Transform::Diff, smooth: true },
    RegressorSpec { label: "dlog_modularity", feature: Feature::Modularity, transform: Transform::LogDiff, smooth: true },
    RegressorSpec { label: "dlog_dc_std", feature: Feature::DcStd, transform: Transform::LogDiff, smooth: true },
    RegressorSpec { label: "cp_significance", feature: Feature::CpSignificance, transform: Transform::None, smooth: false },
];

impl RegressorSpec {
    pub fn by_label(label: &str) -> Option<&'static RegressorSpec> {
        REGRESSORS.iter().find(|r| r.label == label)
    }
}

/// Smooth, transform and scale one calendar-aligned feature series. The
/// generator of coupled fixtures uses the same path.
///
/// The unit-root test runs on the unsmoothed transformed series: a
/// trailing mean of a stationary series is stationary, while the mean's
/// lag polynomial has roots on the unit circle that the autoregressive
/// approximation inside the test handles badly.
pub fn build_regressor(values: &[Option<f64>], spec: &RegressorSpec) -> Result<PreparedSeries> {
    if !spec.smooth {
        return prepare_with(spec.label, values, spec.transform);
    }
    let screened = prepare_with(spec.label, values, spec.transform)?;
    let smoothed = prepare_with(spec.label, &moving_average(values, MA_WINDOW), spec.transform)?;
    Ok(PreparedSeries { adf: screened.adf, ..smoothed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dependent {
    Return,
    Volatility,
    Tvl,
}

impl Dependent {
    pub const ALL: [Dependent; 3] = [Self::Return, Self::Volatility, Self::Tvl];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Return => "return",
            Self::Volatility => "volatility",
            Self::Tvl => "tvl",
        }
    }

    /// Log growth for prices, relative change otherwise.
    pub fn log_growth(&self) -> bool {
        *self == Self::Return
    }
}

/// Future growth over `h` days: `ln x_{t+h} - ln x_t` when `log`, else
/// `(x_{t+h} - x_t) / x_t`. The last `h` entries have no target.
pub fn horizon_target(levels: &[Option<f64>], h: usize, log: bool) -> Result<Vec<Option<f64>>> {
    if h == 0 {
        return Err(EconError::InvalidHorizon);
    }
    Ok((0..levels.len())
        .map(|t| {
            let (a, b) = (levels[t]?, (*levels.get(t + h)?)?);
            if log {
                (a > 0.0 && b > 0.0).then(|| b.ln() - a.ln())
            } else {
                (a != 0.0).then(|| (b - a) / a)
            }
        })
        .collect())
}

/// Dense run of days shared by the feature table and the economic series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Calendar {
    pub start: NaiveDate,
    pub len: usize,
}

impl Calendar {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Self {
        let len = if end < start { 0 } else { (end - start).num_days() as usize + 1 };
        Self { start, len }
    }

    pub fn date(&self, i: usize) -> NaiveDate {
        self.start + Duration::days(i as i64)
    }

    pub fn index(&self, d: NaiveDate) -> Option<usize> {
        let i = (d - self.start).num_days();
        (i >= 0 && (i as usize) < self.len).then_some(i as usize)
    }

    pub fn align<T: Copy>(&self, points: impl IntoIterator<Item = (NaiveDate, Option<T>)>) -> Vec<Option<T>> {
        let mut out = vec![None; self.len];
        for (d, v) in points {
            if let Some(i) = self.index(d) {
                out[i] = v;
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub horizons: Vec<usize>,
    pub hac_lag: Option<usize>,
    /// Min-max scale the dependent series as well as the regressors.
    pub scale_dependent: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { horizons: DEFAULT_HORIZONS.to_vec(), hac_lag: None, scale_dependent: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionRow {
    pub dependent: String,
    pub regressor: String,
    pub result: RegressionResult,
}

#[derive(Debug, Clone)]
pub struct SuiteOutput {
    pub calendar: Calendar,
    pub rows: Vec<RegressionRow>,
    /// Regressors that entered the suite.
    pub prepared: Vec<PreparedSeries>,
    /// Regressors, dependents or cells left out, with the reason.
    pub skipped: Vec<(String, String)>,
    pub pca: Option<PcaResult>,
}

enum Design {
    Single(usize),
    Pca,
}

struct Cell {
    dependent: usize,
    design: Design,
    label: String,
    horizon: usize,
}

/// Every dependent x regressor x horizon regression. Regressors are
/// smoothed, transformed and scaled as in [`REGRESSORS`]; the first three
/// principal components of the five prepared regressors enter jointly.
pub fn run_horizon_suite(features: &[FeatureRow], econ: &EconSeries, opts: &SuiteOptions) -> Result<SuiteOutput> {
    let (Some(f0), Some(f1), Some(e0), Some(e1)) = (features.first(), features.last(), econ.rows.first(), econ.rows.last())
    else {
        return Err(EconError::InsufficientObservations { n: 0, needed: 1 });
    };
    let calendar = Calendar::new(f0.date.max(e0.date), f1.date.min(e1.date));
    let mut skipped = Vec::new();

    let mut prepared = Vec::new();
    for spec in &REGRESSORS {
        let raw = calendar.align(features.iter().map(|r| (r.date, r.get(spec.feature))));
        if raw.iter().all(Option::is_none) {
            skipped.push((spec.label.to_string(), "feature not available".to_string()));
            continue;
        }
        match build_regressor(&raw, spec) {
            Ok(p) if p.is_constant() => skipped.push((spec.label.to_string(), "constant after transform".into())),
            Ok(p) if !p.is_stationary() => skipped.push((
                spec.label.to_string(),
                format!("unit root not rejected (ADF {:.3} vs {:.3})", p.adf.stat, p.adf.critical_5),
            )),
            Ok(p) => prepared.push(p),
            Err(e) => skipped.push((spec.label.to_string(), e.to_string())),
        }
    }

    let mut pc_scores: Option<Vec<Option<[f64; PCA_COMPONENTS]>>> = None;
    let mut pca_fit = None;
    if prepared.len() == REGRESSORS.len() {
        let complete: Vec<usize> =
            (0..calendar.len).filter(|&t| prepared.iter().all(|p| p.values[t].is_some())).collect();
        let data = DMatrix::from_fn(complete.len(), prepared.len(), |i, j| prepared[j].values[complete[i]].unwrap());
        match pca(&data, PCA_COMPONENTS) {
            Ok(fit) => {
                let s = fit.scores(&data);
                let mut series = vec![None; calendar.len];
                for (i, &t) in complete.iter().enumerate() {
                    series[t] = Some([s[(i, 0)], s[(i, 1)], s[(i, 2)]]);
                }
                pc_scores = Some(series);
                pca_fit = Some(fit);
            }
            Err(e) => skipped.push(("pca".into(), e.to_string())),
        }
    } else {
        skipped.push(("pca".into(), "needs all five regressors".into()));
    }

    let mut dependents = Vec::new();
    for dep in Dependent::ALL {
        if dep == Dependent::Tvl && !econ.has_tvl {
            skipped.push((dep.name().into(), "no tvlUSD column".into()));
            continue;
        }
        let levels = calendar.align(econ.rows.iter().map(|r| {
            let v = match dep {
                Dependent::Return => Some(r.price_usd),
                Dependent::Volatility => Some(r.vty_day_ret_30d),
                Dependent::Tvl => r.tvl_usd,
            };
            (r.date, v)
        }));
        let mut targets = HashMap::new();
        for &h in &opts.horizons {
            let t = horizon_target(&levels, h, dep.log_growth())?;
            targets.insert(h, if opts.scale_dependent { min_max(&t) } else { t });
        }
        dependents.push((dep, targets));
    }

    let mut cells = Vec::new();
    for (di, _) in dependents.iter().enumerate() {
        for (pi, p) in prepared.iter().enumerate() {
            for &h in &opts.horizons {
                cells.push(Cell { dependent: di, design: Design::Single(pi), label: p.name.clone(), horizon: h });
            }
        }
        if pc_scores.is_some() {
            for &h in &opts.horizons {
                cells.push(Cell { dependent: di, design: Design::Pca, label: "pca".into(), horizon: h });
            }
        }
    }

    let outcomes: Vec<Result<Vec<RegressionRow>>> = cells
        .par_iter()
        .map(|cell| {
            let (dep, targets) = &dependents[cell.dependent];
            let y_all = &targets[&cell.horizon];
            let mut y = Vec::new();
            let mut cols: Vec<Vec<f64>> = Vec::new();
            let names: Vec<String> = match cell.design {
                Design::Single(pi) => {
                    cols.push(Vec::new());
                    for t in 0..calendar.len {
                        if let (Some(yv), Some(xv)) = (y_all[t], prepared[pi].values[t]) {
                            y.push(yv);
                            cols[0].push(xv);
                        }
                    }
                    vec![cell.label.clone()]
                }
                Design::Pca => {
                    let scores = pc_scores.as_ref().expect("pca cells only exist with scores");
                    cols = vec![Vec::new(); PCA_COMPONENTS];
                    for t in 0..calendar.len {
                        if let (Some(yv), Some(s)) = (y_all[t], scores[t]) {
                            y.push(yv);
                            for c in 0..PCA_COMPONENTS {
                                cols[c].push(s[c]);
                            }
                        }
                    }
                    (1..=PCA_COMPONENTS).map(|c| format!("pc{c}")).collect()
                }
            };
            let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
            let fit = ols_newey_west_multi(&y, &refs, opts.hac_lag).map_err(|e| EconError::Cell {
                dependent: dep.name().into(),
                regressor: cell.label.clone(),
                horizon: cell.horizon,
                source: Box::new(e),
            })?;
            Ok(names
                .into_iter()
                .enumerate()
                .map(|(j, regressor)| RegressionRow {
                    dependent: dep.name().into(),
                    regressor,
                    result: RegressionResult::from_fit(&fit, j + 1, cell.horizon),
                })
                .collect())
        })
        .collect();

    let mut rows = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => rows.extend(r),
            Err(EconError::Cell { dependent, regressor, horizon, source })
                if matches!(*source, EconError::InsufficientObservations { .. }) =>
            {
                skipped.push((format!("{dependent}~{regressor}@{horizon}"), source.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    for (what, why) in &skipped {
        log::warn!("skipping {what}: {why}");
    }
    Ok(SuiteOutput { calendar, rows, prepared, skipped, pca: pca_fit })
}
