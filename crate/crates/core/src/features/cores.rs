use std::collections::{BTreeMap, HashMap};

use chrono::NaiveDate;

use crate::cp::CpAssignment;
use crate::graph::DailyGraph;
use crate::ingest::{AccountKind, LabelMap};
use crate::stats::BoxSummary;

/// Account type of a core address; `Unknown` when no label was supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoreKind {
    Eoa,
    Ca,
    Unknown,
}

impl CoreKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Eoa => "EOA",
            Self::Ca => "CA",
            Self::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreDayRecord {
    pub address: String,
    pub kind: CoreKind,
    pub core_day_count: usize,
}

/// How many days each address was labelled core. `days` pairs every graph
/// with its assignment; addresses that were never core are absent. Sorted
/// by count descending, then address.
pub fn core_day_counts<'a>(
    days: impl IntoIterator<Item = (&'a DailyGraph, &'a CpAssignment)>,
    labels: &LabelMap,
) -> Vec<CoreDayRecord> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for (g, a) in days {
        for u in a.core_nodes() {
            *counts.entry(g.nodes[u].as_str()).or_default() += 1;
        }
    }
    to_records(counts, labels)
}

/// Same counts from a per-day map of core address sets.
pub fn core_day_counts_from_sets(cores: &BTreeMap<NaiveDate, Vec<String>>, labels: &LabelMap) -> Vec<CoreDayRecord> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for addrs in cores.values() {
        for a in addrs {
            *counts.entry(a.as_str()).or_default() += 1;
        }
    }
    to_records(counts, labels)
}

fn to_records(counts: HashMap<&str, usize>, labels: &LabelMap) -> Vec<CoreDayRecord> {
    let mut out: Vec<CoreDayRecord> = counts
        .into_iter()
        .map(|(address, core_day_count)| CoreDayRecord {
            address: address.to_string(),
            kind: match labels.get(address).map(|l| l.kind) {
                Some(AccountKind::Eoa) => CoreKind::Eoa,
                Some(AccountKind::Ca) => CoreKind::Ca,
                None => CoreKind::Unknown,
            },
            core_day_count,
        })
        .collect();
    out.sort_by(|a, b| b.core_day_count.cmp(&a.core_day_count).then_with(|| a.address.cmp(&b.address)));
    out
}

/// Tukey upper outliers (`count > Q3 + 1.5 IQR`), computed within each
/// kind when `by_kind`, else over all records. Output keeps input order.
pub fn boxplot_outliers(records: &[CoreDayRecord], by_kind: bool) -> Vec<CoreDayRecord> {
    let key = |r: &CoreDayRecord| if by_kind { Some(r.kind) } else { None };
    let mut groups: BTreeMap<Option<CoreKind>, Vec<f64>> = BTreeMap::new();
    for r in records {
        groups.entry(key(r)).or_default().push(r.core_day_count as f64);
    }
    let fences: BTreeMap<Option<CoreKind>, f64> = groups
        .into_iter()
        .filter_map(|(k, v)| BoxSummary::from_values(&v).map(|b| (k, b.upper_fence())))
        .collect();
    records
        .iter()
        .filter(|r| (r.core_day_count as f64) > fences[&key(r)])
        .cloned()
        .collect()
}
