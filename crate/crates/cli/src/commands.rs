use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use log::{info, warn};
use tokennet::econ::{run_horizon_suite, REGRESSORS};
use tokennet::features::{boxplot_outliers, CoreKind, Feature, FeatureRow};
use tokennet::ingest::{parse_econ_series, parse_labels, parse_transfers, write_transfers_csv, LabelMap, TransferFormat};
use tokennet::pipeline::{build_graphs, core_records, run_counterfactual, run_features, DayResult};
use tokennet::report::{self, BoxGroup};
use tokennet::synth::{self, Archetype, CouplingTarget};

use crate::config::{required, RunConfig, UsageError};
use crate::GenArgs;

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn write_out<E>(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::result::Result<(), E>) -> Result<()>
where
    E: std::error::Error + Send + Sync + 'static,
{
    let mut w = create(path)?;
    f(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush()?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    write_out(path, |w| w.write_all(text.as_bytes()))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn synth_usage(e: synth::SynthError) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

pub fn gen(a: &GenArgs) -> Result<()> {
    let transfers = a.out.join("transfers.csv");
    if let Some(kind) = &a.archetype {
        let arch = match kind.as_str() {
            "centralized" => Archetype::Centralized { n: a.n },
            "decentralized" => Archetype::Decentralized { n_hubs: a.hubs, per_hub: a.per_hub },
            "distributed" => Archetype::Distributed { n: a.n, degree: a.degree },
            other => bail!(UsageError(format!("unknown archetype `{other}`"))),
        };
        let g = synth::gen_archetype(arch, a.seed).map_err(synth_usage)?;
        write_out(&transfers, |w| write_transfers_csv(&synth::graph_transfers(&g), w))?;
    } else if a.planted {
        let p = synth::gen_planted_cp(a.n_core, a.n_periph, a.p_cc, a.p_cp, a.p_pp, a.seed).map_err(synth_usage)?;
        write_out(&transfers, |w| write_transfers_csv(&synth::graph_transfers(&p.graph), w))?;
        write_out(&a.out.join("truth.csv"), |w| -> csv::Result<()> {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["address", "core"])?;
            for (addr, core) in p.graph.nodes.iter().zip(&p.truth) {
                c.write_record([addr.as_str(), if *core { "1" } else { "0" }])?;
            }
            c.flush()?;
            Ok(())
        })?;
    } else {
        let mut spec = synth::bundled_trajectory_spec();
        if let Some(days) = a.days {
            spec.days = days;
        }
        if a.no_coupling {
            spec.coupling = None;
        } else if let Some(beta) = a.beta {
            let regressor = spec.coupling.map_or_else(|| "d_components_cnt".to_string(), |c| c.regressor);
            spec.coupling = Some(CouplingTarget { regressor, beta });
        }
        let t = synth::gen_trajectory(&spec, a.seed).map_err(synth_usage)?;
        write_out(&transfers, |w| t.write_transfers(w))?;
        write_out(&a.out.join("econ.csv"), |w| t.write_econ(w))?;
    }
    info!("wrote fixture to {}", a.out.display());
    Ok(())
}

fn transfer_format(path: &Path) -> TransferFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") | Some("ndjson") => TransferFormat::Jsonl,
        _ => TransferFormat::Csv,
    }
}

fn load_labels(c: &RunConfig) -> Result<LabelMap> {
    match &c.labels {
        Some(p) => Ok(parse_labels(open(p)?).with_context(|| format!("parsing {}", p.display()))?),
        None => Ok(LabelMap::new()),
    }
}

fn baseline(c: &RunConfig) -> Result<Vec<DayResult>> {
    let path = required(&c.transfers, "--transfers")?;
    let text = fs::read(path).with_context(|| format!("opening {}", path.display()))?;
    if text.iter().all(u8::is_ascii_whitespace) {
        bail!("no days: {} is empty", path.display());
    }
    let records = parse_transfers(&text[..], transfer_format(path)).with_context(|| format!("parsing {}", path.display()))?;
    let graphs = build_graphs(&records, c.pipeline.build);
    if graphs.is_empty() {
        bail!("no days: {} has no usable transfers", path.display());
    }
    info!("{} days from {} transfers", graphs.len(), records.len());
    Ok(run_features(&graphs, &c.pipeline))
}

fn rows(days: &[DayResult]) -> Vec<FeatureRow> {
    days.iter().map(|d| d.row.clone()).collect()
}

fn report_notes(days: &[DayResult]) {
    for d in days.iter().filter(|d| !d.notes.is_empty()) {
        info!("{}: {}", d.date, d.notes.join("; "));
    }
}

pub fn features(c: &RunConfig) -> Result<()> {
    let labels = load_labels(c)?;
    let days = baseline(c)?;
    report_notes(&days);
    write_out(&c.out.join("features.csv"), |w| report::write_features_csv(&rows(&days), w))?;
    write_out(&c.out.join("cores.csv"), |w| report::write_cores_csv(&core_records(&days, &labels), w))?;
    write_out(&c.out.join("cp_tests.csv"), |w| report::write_cp_tests_csv(&days, w))?;
    for d in days.iter().filter(|d| d.assignment.is_some()) {
        let path = c.out.join("assignments").join(format!("{}.csv", d.date));
        write_out(&path, |w| report::write_assignment_csv(d, w))?;
    }
    Ok(())
}

pub fn counterfactual(c: &RunConfig) -> Result<()> {
    let days = baseline(c)?;
    let cf = run_counterfactual(&days, &c.pipeline);
    report_notes(&cf);
    write_out(&c.out.join("counterfactual_features.csv"), |w| report::write_features_csv(&rows(&cf), w))?;
    write_out(&c.out.join("counterfactual_cp_tests.csv"), |w| report::write_cp_tests_csv(&cf, w))?;
    Ok(())
}

fn features_path(c: &RunConfig) -> PathBuf {
    c.features.clone().unwrap_or_else(|| c.out.join("features.csv"))
}

fn load_features(c: &RunConfig) -> Result<Vec<FeatureRow>> {
    let path = features_path(c);
    let rows = report::read_features_csv(open(&path)?).with_context(|| format!("parsing {}", path.display()))?;
    if rows.is_empty() {
        bail!("no days in {}", path.display());
    }
    Ok(rows)
}

fn write_correlations(c: &RunConfig, rows: &[FeatureRow]) -> Result<(Vec<&'static str>, nalgebra::DMatrix<f64>)> {
    let (features, m) = report::feature_correlations(rows);
    let names: Vec<&str> = features.iter().map(|f| f.name()).collect();
    write_out(&c.out.join("correlations.csv"), |w| report::write_matrix_csv(&names, &m, w))?;
    Ok((names, m))
}

pub fn regress(c: &RunConfig) -> Result<()> {
    let rows = load_features(c)?;
    let econ_path = required(&c.econ, "--econ")?;
    let econ = parse_econ_series(open(econ_path)?).with_context(|| format!("parsing {}", econ_path.display()))?;
    if !econ.has_tvl {
        warn!("{} has no tvlUSD column; the tvl block is skipped", econ_path.display());
    }
    let out = run_horizon_suite(&rows, &econ, &c.suite)?;
    info!(
        "{} regressions over {} to {}",
        out.rows.len(),
        out.calendar.date(0),
        out.calendar.date(out.calendar.len.saturating_sub(1))
    );
    write_out(&c.out.join("regressions.csv"), |w| report::write_regressions_csv(&out.rows, w))?;
    write_text(&c.out.join("regressions.md"), &report::regression_tables_markdown(&out.rows, &c.suite.horizons))?;
    if let Some(p) = &out.pca {
        let names: Vec<&str> = REGRESSORS.iter().map(|r| r.label).collect();
        write_out(&c.out.join("pca.csv"), |w| report::write_pca_csv(p, &names, w))?;
    }
    write_correlations(c, &rows)?;
    Ok(())
}

fn significance_groups(rows: &[FeatureRow], f: Feature) -> Vec<BoxGroup> {
    let pick = |sig: f64| -> Vec<f64> {
        rows.iter()
            .filter(|r| r.get(Feature::CpSignificance) == Some(sig))
            .filter_map(|r| r.get(f))
            .collect()
    };
    vec![
        BoxGroup { label: "significant".into(), values: pick(1.0) },
        BoxGroup { label: "insignificant".into(), values: pick(0.0) },
    ]
}

pub fn plot(c: &RunConfig) -> Result<()> {
    let rows = load_features(c)?;
    write_text(&c.out.join("time_series.svg"), &report::time_series_svg(&rows, &report::TIME_SERIES_PANELS))?;
    let (names, m) = write_correlations(c, &rows)?;
    write_text(&c.out.join("correlation_heatmap.svg"), &report::heatmap_svg(&names, &m))?;
    for (f, stem, y) in [
        (Feature::CoreCnt, "core_count_boxplot", "core nodes"),
        (Feature::AvgCoreNeighbor, "core_degree_boxplot", "average core degree"),
    ] {
        let groups = significance_groups(&rows, f);
        write_text(&c.out.join(format!("{stem}.svg")), &report::boxplot_svg(f.name(), y, &groups))?;
        write_out(&c.out.join(format!("{stem}.csv")), |w| report::box_groups_csv(&groups, w))?;
    }
    let cores_path = c.out.join("cores.csv");
    if cores_path.exists() {
        let records = report::read_cores_csv(open(&cores_path)?).with_context(|| format!("parsing {}", cores_path.display()))?;
        let groups: Vec<BoxGroup> = [CoreKind::Eoa, CoreKind::Ca, CoreKind::Unknown]
            .into_iter()
            .map(|k| BoxGroup {
                label: k.as_str().into(),
                values: records.iter().filter(|r| r.kind == k).map(|r| r.core_day_count as f64).collect(),
            })
            .filter(|g| !g.values.is_empty())
            .collect();
        write_text(&c.out.join("core_days_boxplot.svg"), &report::boxplot_svg("core days", "days in core", &groups))?;
        write_out(&c.out.join("core_days_boxplot.csv"), |w| report::box_groups_csv(&groups, w))?;
        write_out(&c.out.join("core_day_outliers.csv"), |w| {
            report::write_cores_csv(&boxplot_outliers(&records, true), w)
        })?;
    } else {
        info!("no {}; core-day box plot skipped", cores_path.display());
    }
    Ok(())
}
