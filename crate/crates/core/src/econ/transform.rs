//! Daily series transforms. Series are calendar-aligned `Option<f64>`
//! vectors; `None` marks a missing day and propagates through every
//! transform that touches it.

use std::fmt;
use std::str::FromStr;

use super::{adf_test, AdfDecision, AdfResult, EconError, Result};

pub const MIN_PREPARE_LEN: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    None,
    Diff,
    LogDiff,
    PctChange,
}

impl Transform {
    /// Candidates in the order they are tried.
    pub const ORDER: [Transform; 4] = [Self::None, Self::Diff, Self::LogDiff, Self::PctChange];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Diff => "diff",
            Self::LogDiff => "log_diff",
            Self::PctChange => "pct_change",
        }
    }

    pub fn apply(&self, xs: &[Option<f64>]) -> Vec<Option<f64>> {
        if *self == Self::None {
            return xs.to_vec();
        }
        let step = |prev: f64, cur: f64| -> Option<f64> {
            match self {
                Self::Diff => Some(cur - prev),
                Self::LogDiff => (prev > 0.0 && cur > 0.0).then(|| cur.ln() - prev.ln()),
                Self::PctChange => (prev != 0.0).then(|| (cur - prev) / prev),
                Self::None => unreachable!(),
            }
        };
        std::iter::once(None)
            .chain(xs.windows(2).map(|w| match (w[0], w[1]) {
                (Some(a), Some(b)) => step(a, b),
                _ => None,
            }))
            .take(xs.len())
            .collect()
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Transform {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ORDER.into_iter().find(|t| t.as_str() == s).ok_or_else(|| format!("unknown transform `{s}`"))
    }
}

/// Trailing mean over `window` days; `None` until a full window of present
/// values is available.
pub fn moving_average(xs: &[Option<f64>], window: usize) -> Vec<Option<f64>> {
    assert!(window >= 1, "window must be positive");
    (0..xs.len())
        .map(|i| {
            if i + 1 < window {
                return None;
            }
            let w = &xs[i + 1 - window..=i];
            let mut sum = 0.0;
            for v in w {
                sum += (*v)?;
            }
            Some(sum / window as f64)
        })
        .collect()
}

/// Rescale present values to `[0, 1]`; a constant series maps to 0.5.
pub fn min_max(xs: &[Option<f64>]) -> Vec<Option<f64>> {
    let present = xs.iter().flatten();
    let (lo, hi) = present.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    xs.iter()
        .map(|v| {
            v.map(|v| {
                if hi > lo {
                    ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
                } else {
                    0.5
                }
            })
        })
        .collect()
}

/// A transformed, stationarity-checked and min-max scaled series.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedSeries {
    pub name: String,
    pub transform: Transform,
    pub values: Vec<Option<f64>>,
    pub adf: AdfResult,
}

impl PreparedSeries {
    pub fn is_stationary(&self) -> bool {
        self.adf.decision == AdfDecision::Stationary
    }

    /// Scaled series had only one distinct value.
    pub fn is_constant(&self) -> bool {
        self.adf.trivial
    }
}

/// Apply `transform`, test the present values for a unit root and scale.
pub(crate) fn prepare_with(name: &str, xs: &[Option<f64>], transform: Transform) -> Result<PreparedSeries> {
    let t = transform.apply(xs);
    let present: Vec<f64> = t.iter().flatten().copied().collect();
    let adf = adf_test(&present, None)?;
    Ok(PreparedSeries { name: name.to_string(), transform, values: min_max(&t), adf })
}

/// Try `candidates` in order and keep the first that passes the unit-root
/// test. When none does, the error carries the last attempt.
pub fn prepare(name: &str, xs: &[Option<f64>], candidates: &[Transform]) -> Result<PreparedSeries> {
    let len = xs.iter().flatten().count();
    if len < MIN_PREPARE_LEN {
        return Err(EconError::SeriesTooShort { len, min: MIN_PREPARE_LEN });
    }
    let mut last = None;
    for &tr in candidates {
        match prepare_with(name, xs, tr) {
            Ok(p) if p.is_stationary() => return Ok(p),
            Ok(p) => last = Some(p),
            Err(EconError::SeriesTooShort { .. } | EconError::SingularDesign) => continue,
            Err(e) => return Err(e),
        }
    }
    match last {
        Some(p) => Err(EconError::NoStationaryTransform(Box::new(p))),
        None => Err(EconError::SeriesTooShort { len, min: MIN_PREPARE_LEN }),
    }
}
