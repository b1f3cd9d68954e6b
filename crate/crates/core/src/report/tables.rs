use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::NaiveDate;
use nalgebra::DMatrix;

use crate::econ::{PcaResult, RegressionRow, REGRESSORS};
use crate::features::{CoreDayRecord, CoreKind, Feature, FeatureRow};
use crate::pipeline::DayResult;

use super::{ReportError, Result};

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_features_csv(rows: &[FeatureRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["date"];
    header.extend(Feature::ALL.iter().map(|f| f.name()));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.date.format("%Y-%m-%d").to_string()];
        rec.extend(r.values.iter().map(|v| fmt_opt(*v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a feature table; columns are matched by name, unknown columns are
/// ignored and absent ones stay empty.
pub fn read_features_csv(input: impl Read) -> Result<Vec<FeatureRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let date_col = headers.iter().position(|h| h == "date").ok_or(ReportError::MissingColumn("date".into()))?;
    let cols: Vec<(usize, Feature)> =
        headers.iter().enumerate().filter_map(|(i, h)| Feature::from_name(h).map(|f| (i, f))).collect();
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| ReportError::Malformed { line: line as u64 + 2, reason: what.to_string() };
        let date = NaiveDate::parse_from_str(&rec[date_col], "%Y-%m-%d").map_err(|_| bad("bad date"))?;
        let mut row = FeatureRow::empty(date);
        for &(i, f) in &cols {
            let cell = rec.get(i).unwrap_or("").trim();
            if !cell.is_empty() {
                row.set(f, cell.parse().map_err(|_| bad(&format!("bad number in {}", f.name())))?);
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_cores_csv(records: &[CoreDayRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["address", "kind", "core_day_count"])?;
    for r in records {
        w.write_record([r.address.as_str(), r.kind.as_str(), &r.core_day_count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_cores_csv(input: impl Read) -> Result<Vec<CoreDayRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| ReportError::Malformed { line: line as u64 + 2, reason: what.to_string() };
        let kind = match rec.get(1) {
            Some("EOA") => CoreKind::Eoa,
            Some("CA") => CoreKind::Ca,
            Some("unknown") => CoreKind::Unknown,
            _ => return Err(bad("bad kind")),
        };
        out.push(CoreDayRecord {
            address: rec.get(0).ok_or_else(|| bad("missing address"))?.to_string(),
            kind,
            core_day_count: rec.get(2).and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad count"))?,
        });
    }
    Ok(out)
}

/// Per-day detection and test summary.
pub fn write_cp_tests_csv(days: &[DayResult], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "observed_quality", "p_value", "n_randomizations", "core_cnt", "num_pairs", "note"])?;
    for d in days {
        let a = d.assignment.as_ref();
        w.write_record([
            d.date.format("%Y-%m-%d").to_string(),
            fmt_opt(d.test.as_ref().map(|t| t.observed_quality).or(a.map(|a| a.quality))),
            fmt_opt(d.test.as_ref().map(|t| t.p_value)),
            d.test.as_ref().map(|t| t.n_randomizations.to_string()).unwrap_or_default(),
            a.map(|a| a.core_count().to_string()).unwrap_or_default(),
            a.map(|a| a.num_pairs().to_string()).unwrap_or_default(),
            d.notes.join("; "),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Node labels of one day: `address,pair_id,label`.
pub fn write_assignment_csv(day: &DayResult, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["address", "pair_id", "label"])?;
    if let (Some(g), Some(a)) = (&day.graph, &day.assignment) {
        for (u, name) in g.nodes.iter().enumerate() {
            let label = if a.core[u] { "core" } else { "periphery" };
            w.write_record([name.as_str(), &a.pair_id[u].to_string(), label])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_regressions_csv(rows: &[RegressionRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["dependent", "regressor", "horizon", "coef", "hac_se", "t", "stars", "r2", "resid_se", "n"])?;
    for r in rows {
        let x = &r.result;
        w.write_record([
            r.dependent.clone(),
            r.regressor.clone(),
            x.horizon.to_string(),
            x.coefficient.to_string(),
            x.hac_se.to_string(),
            x.t_stat.to_string(),
            x.stars.to_string(),
            x.r_squared.to_string(),
            x.residual_std_error.to_string(),
            x.n_obs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Loadings with one row per component followed by the explained ratio.
pub fn write_pca_csv(p: &PcaResult, feature_names: &[&str], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["component"];
    header.extend_from_slice(feature_names);
    header.push("explained_variance_ratio");
    w.write_record(&header)?;
    for c in 0..p.n_components {
        let mut rec = vec![format!("pc{}", c + 1)];
        rec.extend(p.loadings.row(c).iter().map(|v| v.to_string()));
        rec.push(p.explained_variance_ratio[c].to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Square matrix with row and column labels.
pub fn write_matrix_csv(names: &[&str], m: &DMatrix<f64>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![""];
    header.extend_from_slice(names);
    w.write_record(&header)?;
    for (i, name) in names.iter().enumerate() {
        let mut rec = vec![name.to_string()];
        rec.extend(m.row(i).iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix_csv(input: impl Read) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut r = csv::Reader::from_reader(input);
    let names: Vec<String> = r.headers()?.iter().skip(1).map(str::to_string).collect();
    let p = names.len();
    let mut m = DMatrix::zeros(p, p);
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = || ReportError::Malformed { line: i as u64 + 2, reason: "bad matrix cell".into() };
        if i >= p {
            return Err(bad());
        }
        for j in 0..p {
            m[(i, j)] = rec.get(j + 1).and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        }
    }
    Ok((names, m))
}

fn display_label(regressor: &str) -> String {
    match regressor {
        "d_components_cnt" => "Δcomponent_cnt".into(),
        "d_giant_com_ratio" => "Δgiant_com_ratio".into(),
        "dlog_modularity" => "Δlog(modularity)".into(),
        "dlog_dc_std" => "Δlog(DCstd)".into(),
        other => other.into(),
    }
}

/// One markdown table per dependent: a column per horizon, each regressor
/// as a coefficient line and a standard-error line, then R² and residual
/// standard error per regression.
pub fn regression_tables_markdown(rows: &[RegressionRow], horizons: &[usize]) -> String {
    let mut out = String::new();
    let mut by_dep: BTreeMap<&str, Vec<&RegressionRow>> = BTreeMap::new();
    let order = ["return", "volatility", "tvl"];
    for r in rows {
        by_dep.entry(r.dependent.as_str()).or_default().push(r);
    }
    for dep in order.iter().filter(|d| by_dep.contains_key(*d)) {
        let cells = &by_dep[dep];
        out.push_str(&format!("### {dep}\n\n| |"));
        for h in horizons {
            out.push_str(&format!(" t,t+{h} |"));
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(horizons.len()));
        out.push('\n');
        let mut regressors: Vec<&str> = REGRESSORS.iter().map(|r| r.label).collect();
        regressors.extend(["pc1", "pc2", "pc3"]);
        for reg in regressors {
            let line: Vec<Option<&&RegressionRow>> = horizons
                .iter()
                .map(|h| cells.iter().find(|c| c.regressor == reg && c.result.horizon == *h))
                .collect();
            if line.iter().all(Option::is_none) {
                continue;
            }
            let fmt = |f: &dyn Fn(&RegressionRow) -> String| -> String {
                line.iter().map(|c| format!(" {} |", c.map(|c| f(c)).unwrap_or_default())).collect()
            };
            out.push_str(&format!("| {} |{}\n", display_label(reg), fmt(&|c| format!("{:.3}{}", c.result.coefficient, c.result.stars))));
            out.push_str(&format!("| |{}\n", fmt(&|c| format!("({:.3})", c.result.hac_se))));
            out.push_str(&format!("| R² |{}\n", fmt(&|c| format!("{:.3}", c.result.r_squared))));
            out.push_str(&format!("| Residual Std. Error |{}\n", fmt(&|c| format!("{:.3}", c.result.residual_std_error))));
        }
        out.push('\n');
    }
    out
}

/// Rows with every listed feature present, as columns.
pub fn complete_columns(rows: &[FeatureRow], features: &[Feature]) -> Vec<Vec<f64>> {
    let keep: Vec<&FeatureRow> = rows.iter().filter(|r| features.iter().all(|f| r.get(*f).is_some())).collect();
    features.iter().map(|f| keep.iter().map(|r| r.get(*f).unwrap()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econ::RegressionResult;

    #[test]
    fn features_round_trip_with_nulls() {
        let d = NaiveDate::from_ymd_opt(2021, 2, 3).unwrap();
        let mut a = FeatureRow::empty(d);
        a.set(Feature::Modularity, 0.1 + 0.2);
        a.set(Feature::NumNodes, 12.0);
        a.set(Feature::EigStd, 1e-300);
        let mut b = FeatureRow::empty(d.succ_opt().unwrap());
        for (i, f) in Feature::ALL.iter().enumerate() {
            b.set(*f, i as f64 / 7.0);
        }
        let mut buf = Vec::new();
        write_features_csv(&[a.clone(), b.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap().split(',').count(), 25);
        assert!(text.lines().nth(1).unwrap().starts_with("2021-02-03,12,,"));
        assert_eq!(read_features_csv(&buf[..]).unwrap(), vec![a, b]);
    }

    #[test]
    fn cores_and_matrix_round_trip() {
        let recs = vec![
            CoreDayRecord { address: "0xa".into(), kind: CoreKind::Ca, core_day_count: 9 },
            CoreDayRecord { address: "0xb".into(), kind: CoreKind::Unknown, core_day_count: 1 },
        ];
        let mut buf = Vec::new();
        write_cores_csv(&recs, &mut buf).unwrap();
        assert_eq!(read_cores_csv(&buf[..]).unwrap(), recs);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -0.3, -0.3, 1.0]);
        let mut buf = Vec::new();
        write_matrix_csv(&["x", "y"], &m, &mut buf).unwrap();
        let (names, back) = read_matrix_csv(&buf[..]).unwrap();
        assert_eq!(names, vec!["x", "y"]);
        assert_eq!(back, m);
    }

    #[test]
    fn markdown_layout() {
        let row = |reg: &str, h: usize| RegressionRow {
            dependent: "return".into(),
            regressor: reg.into(),
            result: RegressionResult {
                horizon: h,
                coefficient: 0.4231,
                hac_se: 0.1,
                t_stat: 4.2,
                stars: "***",
                r_squared: 0.047,
                residual_std_error: 0.2,
                n_obs: 300,
            },
        };
        let md = regression_tables_markdown(&[row("d_components_cnt", 1), row("d_components_cnt", 7)], &[1, 7]);
        assert!(md.contains("| Δcomponent_cnt | 0.423*** | 0.423*** |"));
        assert!(md.contains("| | (0.100) | (0.100) |"));
        assert!(md.contains("t,t+7"));
    }
}
