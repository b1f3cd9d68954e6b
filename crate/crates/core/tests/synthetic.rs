//! Properties of the full pipeline on generated data with known structure.

use chrono::Duration;
use tokennet::cp::Detector;
use tokennet::econ::{run_horizon_suite, SuiteOptions};
use tokennet::features::{boxplot_outliers, compute_row, DayContext, Feature, FeatureRow};
use tokennet::graph::BuildOptions;
use tokennet::ingest::LabelMap;
use tokennet::pipeline::{build_graphs, core_records, run_counterfactual, run_features, PipelineConfig};
use tokennet::synth::{gen_planted_cp, gen_trajectory, TrajectorySpec};

// below 20 replicates the add-one p-value cannot drop under 0.05
fn cfg(n_rand: usize) -> PipelineConfig {
    PipelineConfig { seed: 3, n_rand, detector: Detector::Be { restarts: 5 }, ..PipelineConfig::default() }
}

fn pearson(rows: &[FeatureRow], a: Feature, b: Feature) -> f64 {
    let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter_map(|r| Some((r.get(a)?, r.get(b)?))).unzip();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(p, q)| (p - mx) * (q - my)).sum();
    let sxx: f64 = x.iter().map(|p| (p - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|q| (q - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

#[test]
fn decentralizing_sequence_correlation_signs() {
    let tr = gen_trajectory(&TrajectorySpec { days: 120, ..TrajectorySpec::default() }, 8).unwrap();
    // the first half moves monotonically away from the centralized end
    let graphs: Vec<_> = build_graphs(&tr.transfers, BuildOptions::default()).into_iter().take(60).collect();
    let rows: Vec<FeatureRow> = run_features(&graphs, &cfg(99)).into_iter().map(|d| d.row).collect();
    use Feature::*;
    assert!(pearson(&rows, ComponentsCnt, Modularity) > 0.0);
    assert!(pearson(&rows, ComponentsCnt, GiantComRatio) < 0.0);
    assert!(pearson(&rows, DcStd, GiantComRatio) > 0.0);
    assert!(pearson(&rows, CpSignificance, Modularity) < 0.0);
}

#[test]
fn persistent_hubs_are_core_day_outliers() {
    let tr = gen_trajectory(&TrajectorySpec { days: 90, ..TrajectorySpec::default() }, 4).unwrap();
    let days = run_features(&build_graphs(&tr.transfers, BuildOptions::default()), &cfg(19));
    let records = core_records(&days, &LabelMap::new());
    let outliers: Vec<String> = boxplot_outliers(&records, true).into_iter().map(|r| r.address).collect();
    for h in &tr.persistent_hubs {
        assert!(outliers.contains(h), "{h} missing from {outliers:?}");
    }
}

#[test]
fn removing_planted_cores_splits_the_graph() {
    let graphs: Vec<_> = (0..40u64)
        .map(|s| {
            let mut g = gen_planted_cp(12, 88, 0.9, 0.6, 0.01, s).unwrap().graph;
            g.day += Duration::days(s as i64);
            (g.day, Some(g))
        })
        .collect();
    let base = run_features(&graphs, &cfg(19));
    let cf = run_counterfactual(&base, &cfg(19));
    let increased = base
        .iter()
        .zip(&cf)
        .filter(|(b, c)| {
            let before = b.row.get(Feature::ComponentsCnt).unwrap();
            c.row.get(Feature::ComponentsCnt).is_some_and(|after| after > before)
        })
        .count();
    assert!(increased * 10 >= base.len() * 9, "{increased}/{}", base.len());
}

#[test]
fn uncoupled_prices_rarely_look_predictable() {
    let spec = TrajectorySpec { days: 365, coupling: None, ..TrajectorySpec::default() };
    let opts = SuiteOptions { horizons: vec![1], ..SuiteOptions::default() };
    let seeds = 60;
    let mut quiet = 0;
    for s in 0..seeds {
        let tr = gen_trajectory(&spec, s).unwrap();
        let rows: Vec<FeatureRow> = tr
            .graphs
            .iter()
            .map(|g| compute_row(g, DayContext { cp: None, assignment: None, top_degrees: None }, s))
            .collect();
        let out = run_horizon_suite(&rows, &tr.econ, &opts).unwrap();
        let starred = out
            .rows
            .iter()
            .any(|r| r.dependent == "return" && r.regressor == "d_components_cnt" && !r.result.stars.is_empty());
        quiet += (!starred) as u64;
    }
    assert!(quiet * 100 >= seeds * 85, "{quiet}/{seeds} without stars");
}
