//! End-to-end orchestration: transfers to daily graphs, daily graphs to the
//! feature table, core removal, and the regression suite.
//!
//! Every day draws its randomness from `derive(seed, [day ordinal])`, so
//! results do not depend on which days are processed together or on the
//! number of worker threads.

use std::collections::{BTreeMap, HashMap};

use chrono::{Duration, NaiveDate};
use rayon::prelude::*;

use crate::cp::{qs_significance_for, remove_cores, CpAssignment, CpError, CpTestResult, Detector, NullModel};
use crate::features::{compute_row, core_day_counts, CoreDayRecord, DayContext, Feature, FeatureRow};
use crate::graph::{build_daily_graph, BuildOptions, DailyGraph, GraphError};
use crate::ingest::{bucket_by_day, LabelMap, TransferRecord};
use crate::seed;

const DETECT_STREAM: u64 = 0;
const MODULARITY_STREAM: u64 = 3;
const COUNTERFACTUAL_STREAM: u64 = 0xC0;
const TOP_N: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub seed: u64,
    pub n_rand: usize,
    pub detector: Detector,
    pub null_model: NullModel,
    pub build: BuildOptions,
    /// Take the top-10 degree block from the ten addresses with the largest
    /// total degree over the whole period instead of each day's ten largest.
    pub global_top10: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_rand: crate::cp::DEFAULT_N_RAND,
            detector: Detector::default(),
            null_model: NullModel::default(),
            build: BuildOptions::default(),
            global_top10: false,
        }
    }
}

/// Everything computed for one calendar day.
#[derive(Debug, Clone)]
pub struct DayResult {
    pub date: NaiveDate,
    pub graph: Option<DailyGraph>,
    pub assignment: Option<CpAssignment>,
    pub test: Option<CpTestResult>,
    pub row: FeatureRow,
    /// Why some features are missing, if they are.
    pub notes: Vec<String>,
}

/// Daily graphs over the dense calendar spanned by the records. Days with no
/// usable transfer map to `None`.
pub fn build_graphs(records: &[TransferRecord], opts: BuildOptions) -> Vec<(NaiveDate, Option<DailyGraph>)> {
    let buckets = bucket_by_day(records);
    let (Some(&first), Some(&last)) = (buckets.keys().next(), buckets.keys().next_back()) else {
        return Vec::new();
    };
    let days: Vec<NaiveDate> = (0..=(last - first).num_days()).map(|i| first + Duration::days(i)).collect();
    days.into_par_iter()
        .map(|d| {
            let g = buckets.get(&d).and_then(|batch| match build_daily_graph(batch, d, opts) {
                Ok(g) => Some(g),
                Err(GraphError::EmptyDay(_)) => None,
                Err(e) => unreachable!("bucketed records belong to their day: {e}"),
            });
            (d, g)
        })
        .collect()
}

fn day_seed(seed: u64, stream: u64, day: NaiveDate) -> u64 {
    seed::derive(seed, &[stream, seed::day_key(day)])
}

/// Detection, significance and all features of one graph.
fn analyse(g: &DailyGraph, cfg: &PipelineConfig, stream: u64, top: Option<&[f64]>) -> DayResult {
    let s = day_seed(cfg.seed, stream, g.day);
    let mut notes = Vec::new();
    let assignment = match cfg.detector.detect(&g.topology, seed::derive(s, &[DETECT_STREAM])) {
        Ok(a) => Some(a),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let test = assignment.as_ref().and_then(|a| {
        match qs_significance_for(&g.topology, a, &cfg.detector, cfg.null_model, cfg.n_rand, s) {
            Ok(t) => Some(t),
            Err(e) => {
                notes.push(e.to_string());
                None
            }
        }
    });
    let ctx = DayContext { cp: test.as_ref(), assignment: assignment.as_ref(), top_degrees: top };
    let row = compute_row(g, ctx, seed::derive(s, &[MODULARITY_STREAM]));
    if row.get(Feature::EigMean).is_none() {
        notes.push("eigenvector centrality did not converge".into());
    }
    DayResult { date: g.day, graph: Some(g.clone()), assignment, test, row, notes }
}

fn empty_day(date: NaiveDate, why: &str) -> DayResult {
    DayResult { date, graph: None, assignment: None, test: None, row: FeatureRow::empty(date), notes: vec![why.into()] }
}

/// Degrees per day of the ten addresses with the largest total degree.
fn global_top_degrees(graphs: &[(NaiveDate, Option<DailyGraph>)]) -> HashMap<NaiveDate, Vec<f64>> {
    let mut totals: HashMap<&str, usize> = HashMap::new();
    for g in graphs.iter().filter_map(|(_, g)| g.as_ref()) {
        for (u, a) in g.nodes.iter().enumerate() {
            *totals.entry(a.as_str()).or_default() += g.topology.degree(u);
        }
    }
    let mut ranked: Vec<(&str, usize)> = totals.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let top: Vec<&str> = ranked.into_iter().take(TOP_N).map(|(a, _)| a).collect();
    graphs
        .iter()
        .filter_map(|(d, g)| g.as_ref().map(|g| (d, g)))
        .map(|(d, g)| {
            let degrees = top.iter().map(|a| g.index_of(a).map_or(0.0, |u| g.topology.degree(u) as f64)).collect();
            (*d, degrees)
        })
        .collect()
}

/// The feature table, one row per calendar day.
pub fn run_features(graphs: &[(NaiveDate, Option<DailyGraph>)], cfg: &PipelineConfig) -> Vec<DayResult> {
    let top = cfg.global_top10.then(|| global_top_degrees(graphs));
    graphs
        .par_iter()
        .map(|(d, g)| match g {
            Some(g) => analyse(g, cfg, DETECT_STREAM, top.as_ref().map(|t| t[d].as_slice())),
            None => empty_day(*d, "no transfers"),
        })
        .collect()
}

/// Recompute every feature after deleting each day's detected core.
pub fn run_counterfactual(days: &[DayResult], cfg: &PipelineConfig) -> Vec<DayResult> {
    days.par_iter()
        .map(|day| {
            let (Some(g), Some(a)) = (&day.graph, &day.assignment) else {
                return empty_day(day.date, "no baseline assignment");
            };
            match remove_cores(g, a) {
                Ok(h) => analyse(&h, cfg, COUNTERFACTUAL_STREAM, None),
                Err(CpError::EmptyCounterfactual) => empty_day(day.date, "no edges left after core removal"),
                Err(e) => empty_day(day.date, &e.to_string()),
            }
        })
        .collect()
}

/// Core-day counts over a feature run.
pub fn core_records(days: &[DayResult], labels: &LabelMap) -> Vec<CoreDayRecord> {
    core_day_counts(
        days.iter().filter_map(|d| Some((d.graph.as_ref()?, d.assignment.as_ref()?))),
        labels,
    )
}

/// Core addresses per day.
pub fn core_sets(days: &[DayResult]) -> BTreeMap<NaiveDate, Vec<String>> {
    days.iter()
        .filter_map(|d| {
            let (g, a) = (d.graph.as_ref()?, d.assignment.as_ref()?);
            Some((d.date, a.core_nodes().map(|u| g.nodes[u].clone()).collect()))
        })
        .collect()
}
