//! Dated sequences of transfer graphs that decentralize and recentralize,
//! with a price series that can depend on one of the daily features.
//!
//! Day `t` of a `D`-day run has decentralization level
//! `s_t = 1 - |2t/(D-1) - 1|`. At level `s` the day splits into about
//! `1 + s (max_clusters - 1)` disconnected clusters. Cluster 0 always holds
//! the persistent hubs and starts out with almost every account; leaves
//! attach to hubs with probability `1 - 0.8 s` and otherwise to a random
//! earlier member, so hub dominance fades as `s` grows. Apart from the
//! persistent hubs every account is active on a single day.
//!
//! Prices follow `ln p_{t+1} = ln p_t + beta x_t + sigma e_t` where `x` is
//! the coupled regressor built exactly as the regression suite builds it
//! (zero while undefined) and `e_t` is standard normal. Volatility is the
//! trailing 30-day sample standard deviation of daily log returns, with a
//! 30-day uncoupled burn-in; TVL is an independent log random walk.

use std::collections::BTreeSet;
use std::io::Write;

use chrono::{Duration, NaiveDate, TimeZone, Utc};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{invalid, Result};
use crate::econ::{build_regressor, RegressorSpec};
use crate::features::Feature;
use crate::graph::{build_daily_graph, connected_components, degree_stats, BuildOptions, DailyGraph};
use crate::ingest::{self, EconRow, EconSeries, TransferRecord};
use crate::seed;

const VOL_WINDOW: usize = 30;
const MIN_DAYS: usize = 2;

/// Price coupling: `beta` times the named regressor drives daily log returns.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTarget {
    pub regressor: String,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySpec {
    pub start: NaiveDate,
    pub days: usize,
    /// Mean number of accounts active per day.
    pub nodes_per_day: usize,
    pub max_clusters: usize,
    /// Hubs present in cluster 0 every day.
    pub persistent_hubs: usize,
    /// Rotating hubs added to cluster 0 each day.
    pub extra_core_hubs: usize,
    pub coupling: Option<CouplingTarget>,
    /// Standard deviation of the daily log-return noise.
    pub noise_sd: f64,
    pub initial_price: f64,
    pub with_tvl: bool,
}

impl Default for TrajectorySpec {
    fn default() -> Self {
        Self {
            start: NaiveDate::from_ymd_opt(2020, 10, 1).expect("valid date"),
            days: 365,
            nodes_per_day: 120,
            max_clusters: 12,
            persistent_hubs: 2,
            extra_core_hubs: 4,
            coupling: None,
            noise_sd: 0.02,
            initial_price: 100.0,
            with_tvl: true,
        }
    }
}

/// The fixture used by the end-to-end tests: one year, price coupled to
/// the change in component count with coefficient 0.4.
pub fn bundled_trajectory_spec() -> TrajectorySpec {
    TrajectorySpec {
        coupling: Some(CouplingTarget { regressor: "d_components_cnt".into(), beta: 0.4 }),
        ..TrajectorySpec::default()
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub graphs: Vec<DailyGraph>,
    pub transfers: Vec<TransferRecord>,
    pub econ: EconSeries,
    pub persistent_hubs: Vec<String>,
    /// Decentralization level per day.
    pub levels: Vec<f64>,
    /// The regressor that drove prices, when coupled.
    pub coupled_regressor: Option<Vec<Option<f64>>>,
}

impl Trajectory {
    pub fn write_transfers(&self, out: impl Write) -> ingest::Result<()> {
        ingest::write_transfers_csv(&self.transfers, out)
    }

    pub fn write_econ(&self, out: impl Write) -> ingest::Result<()> {
        ingest::write_econ_csv(&self.econ, out)
    }
}

/// Address of persistent hub `i`.
pub fn persistent_hub_address(i: usize) -> String {
    format!("0x{:040x}", (1u64 << 40) + i as u64)
}

/// Every other account exists for one day only.
fn daily_address(kind: u64, day: usize, i: usize) -> String {
    format!("0x{:040x}", (kind << 40) + ((day as u64) << 20) + i as u64)
}

/// Feature values that the coupling may use; they do not depend on a seed.
fn seedless_feature(g: &DailyGraph, f: Feature) -> Option<f64> {
    match f {
        Feature::ComponentsCnt => Some(connected_components(&g.topology).count() as f64),
        Feature::GiantComRatio => {
            let c = connected_components(&g.topology);
            Some(c.largest() as f64 / g.num_nodes() as f64)
        }
        Feature::DcStd => degree_stats(&g.topology).ok().map(|d| d.dc_std),
        _ => None,
    }
}

fn validate(spec: &TrajectorySpec) -> Result<Option<&'static RegressorSpec>> {
    if spec.days < MIN_DAYS {
        return Err(invalid(format!("trajectory needs at least {MIN_DAYS} days")));
    }
    if spec.max_clusters < 1 || spec.persistent_hubs < 1 {
        return Err(invalid("need at least one cluster and one persistent hub"));
    }
    // the daily node count may dip 10% below the mean
    let min_nodes = (5 * spec.max_clusters + spec.persistent_hubs + spec.extra_core_hubs) * 10 / 9 + 1;
    if spec.nodes_per_day < min_nodes {
        return Err(invalid(format!("nodes_per_day must be at least {min_nodes}")));
    }
    if !(spec.noise_sd >= 0.0 && spec.initial_price > 0.0) {
        return Err(invalid("noise must be non-negative and the initial price positive"));
    }
    let Some(c) = &spec.coupling else { return Ok(None) };
    let r = RegressorSpec::by_label(&c.regressor)
        .ok_or_else(|| invalid(format!("unknown regressor `{}`", c.regressor)))?;
    if !matches!(r.feature, Feature::ComponentsCnt | Feature::GiantComRatio | Feature::DcStd) {
        return Err(invalid(format!("cannot couple to `{}`", c.regressor)));
    }
    Ok(Some(r))
}

fn level(t: usize, days: usize) -> f64 {
    1.0 - (2.0 * t as f64 / (days - 1) as f64 - 1.0).abs()
}

/// Transfers of one day at decentralization level `s`.
fn day_transfers<R: Rng>(spec: &TrajectorySpec, t: usize, day: NaiveDate, s: f64, rng: &mut R) -> Vec<TransferRecord> {
    let jitter = |rng: &mut R| rng.gen_range(-1i64..=1);
    let base_clusters = 1 + (s * (spec.max_clusters - 1) as f64).round() as i64;
    let clusters = (base_clusters + if rng.gen_bool(0.3) { jitter(rng) } else { 0 }).clamp(1, spec.max_clusters as i64) as usize;
    let spread = spec.nodes_per_day / 10;
    let n = spec.nodes_per_day - spread + rng.gen_range(0..=2 * spread);

    // hubs: persistent ones plus rotating extras in cluster 0, one or two
    // rotating hubs in every other cluster
    let other_hubs: Vec<usize> = (1..clusters).map(|_| rng.gen_range(1..=2)).collect();
    let mut pool = (0..).map(|i| daily_address(2, t, i));
    let mut members: Vec<Vec<String>> = Vec::with_capacity(clusters);
    let mut hub_counts = Vec::with_capacity(clusters);
    let mut c0: Vec<String> = (0..spec.persistent_hubs).map(persistent_hub_address).collect();
    c0.extend(pool.by_ref().take(spec.extra_core_hubs));
    hub_counts.push(c0.len());
    members.push(c0);
    for &h in &other_hubs {
        members.push(pool.by_ref().take(h).collect());
        hub_counts.push(h);
    }

    // leaves: cluster 0 keeps a share that shrinks with s, the rest split
    // evenly; every cluster gets at least three
    let hubs_total: usize = hub_counts.iter().sum();
    let n_leaves = n - hubs_total;
    let share0 = (1.0 - s) * 0.9 + s / clusters as f64;
    let mut assigned = vec![3usize; clusters];
    for _ in 0..n_leaves - 3 * clusters {
        let c = if clusters == 1 || rng.gen_bool(share0.clamp(0.0, 1.0)) { 0 } else { rng.gen_range(1..clusters) };
        assigned[c] += 1;
    }
    let mut leaves = (0..).map(|i| daily_address(3, t, i));
    for (c, &k) in assigned.iter().enumerate() {
        members[c].extend(leaves.by_ref().take(k));
    }

    let q_hub = 1.0 - 0.8 * s;
    let mut edges: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut add = |c: usize, a: usize, b: usize| {
        if a != b {
            edges.insert((c, a.min(b), a.max(b)));
        }
    };
    for (c, m) in members.iter().enumerate() {
        let h = hub_counts[c];
        for i in 0..h {
            if i + 1 < h {
                add(c, i, i + 1);
            }
            for j in i + 2..h {
                if rng.gen_bool(0.9) {
                    add(c, i, j);
                }
            }
        }
        for i in h..m.len() {
            let pick = |rng: &mut R| if rng.gen_bool(q_hub) { rng.gen_range(0..h) } else { rng.gen_range(0..i) };
            let first = pick(rng);
            add(c, i, first);
            if rng.gen_bool(0.5) {
                let second = pick(rng);
                add(c, i, second);
            }
        }
        let extra = ((m.len() - h) as f64 * 0.05).round() as usize;
        for _ in 0..extra {
            let (a, b) = (rng.gen_range(h..m.len()), rng.gen_range(h..m.len()));
            add(c, a, b);
        }
    }

    let midnight = Utc.from_utc_datetime(&day.and_hms_opt(0, 0, 0).expect("valid time"));
    edges
        .into_iter()
        .map(|(c, a, b)| {
            let (from, to) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            let value = (3.0 + rng.sample::<f64, _>(StandardNormal)).exp();
            TransferRecord {
                from_address: members[c][from].clone(),
                to_address: members[c][to].clone(),
                value: (value * 1e6).round() / 1e6,
                timestamp: midnight + Duration::seconds(rng.gen_range(0..86_400)),
            }
        })
        .collect()
}

fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

pub fn gen_trajectory(spec: &TrajectorySpec, seed: u64) -> Result<Trajectory> {
    let coupled_spec = validate(spec)?;
    let mut graphs = Vec::with_capacity(spec.days);
    let mut transfers = Vec::new();
    let mut levels = Vec::with_capacity(spec.days);
    for t in 0..spec.days {
        let day = spec.start + Duration::days(t as i64);
        let s = level(t, spec.days);
        let mut rng = seed::rng(seed, &[1, t as u64]);
        let mut batch = day_transfers(spec, t, day, s, &mut rng);
        batch.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.from_address.cmp(&b.from_address)));
        graphs.push(build_daily_graph(&batch, day, BuildOptions::default())?);
        transfers.extend(batch);
        levels.push(s);
    }

    let coupled = match coupled_spec {
        Some(r) => {
            let raw: Vec<Option<f64>> = graphs.iter().map(|g| seedless_feature(g, r.feature)).collect();
            let prepared = build_regressor(&raw, r).map_err(|e| invalid(format!("coupled regressor: {e}")))?;
            Some(prepared.values)
        }
        None => None,
    };
    let beta = spec.coupling.as_ref().map_or(0.0, |c| c.beta);

    let mut rng = seed::rng(seed, &[2]);
    let noise = |rng: &mut rand_chacha::ChaCha8Rng| spec.noise_sd * rng.sample::<f64, _>(StandardNormal);
    let mut returns: Vec<f64> = (0..VOL_WINDOW).map(|_| noise(&mut rng)).collect();
    let mut log_price = spec.initial_price.ln();
    let mut log_tvl = 1e9f64.ln();
    let mut rows = Vec::with_capacity(spec.days);
    for t in 0..spec.days {
        let vol = sample_sd(&returns[returns.len() - VOL_WINDOW..]);
        rows.push(EconRow {
            date: spec.start + Duration::days(t as i64),
            price_usd: log_price.exp(),
            vty_day_ret_30d: vol,
            tvl_usd: spec.with_tvl.then(|| log_tvl.exp()),
        });
        let x = coupled.as_ref().and_then(|c| c[t]).unwrap_or(0.0);
        let r = beta * x + noise(&mut rng);
        log_price += r;
        returns.push(r);
        log_tvl += 0.03 * rng.sample::<f64, _>(StandardNormal);
    }

    let persistent_hubs = (0..spec.persistent_hubs).map(persistent_hub_address).collect();
    Ok(Trajectory {
        graphs,
        transfers,
        econ: EconSeries { rows, has_tvl: spec.with_tvl },
        persistent_hubs,
        levels,
        coupled_regressor: coupled,
    })
}
