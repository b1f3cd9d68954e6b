//! The daily feature table: 24 network features per day.

mod cores;
mod modularity;

use chrono::NaiveDate;

use crate::cp::{core_stats, CpAssignment, CpTestResult, ALPHA};
use crate::graph::{
    clustering_stats, closeness_centrality_stats, connected_components, degree_stats, degree_stats_with_top,
    eigenvector_centrality_stats, DailyGraph, GraphError,
};

pub use cores::{boxplot_outliers, core_day_counts, core_day_counts_from_sets, CoreDayRecord, CoreKind};
pub use modularity::{modularity, modularity_of, modularity_partition, EXACT_MAX_NODES};

/// Number of features per day.
pub const N_FEATURES: usize = 24;

/// Column of the feature table, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    NumNodes,
    NumEdges,
    DegreeMean,
    DegreeStd,
    Top10DegreeMean,
    Top10DegreeStd,
    Top10DegreeMeanRatio,
    RelativeDegree,
    DcMean,
    DcStd,
    ClusterMean,
    ClusterStd,
    Modularity,
    Transitivity,
    EigMean,
    EigStd,
    ClosenessMean,
    ClosenessStd,
    GiantComRatio,
    ComponentsCnt,
    CpTestPvalue,
    CpSignificance,
    CoreCnt,
    AvgCoreNeighbor,
}

impl Feature {
    pub const ALL: [Feature; N_FEATURES] = [
        Self::NumNodes,
        Self::NumEdges,
        Self::DegreeMean,
        Self::DegreeStd,
        Self::Top10DegreeMean,
        Self::Top10DegreeStd,
        Self::Top10DegreeMeanRatio,
        Self::RelativeDegree,
        Self::DcMean,
        Self::DcStd,
        Self::ClusterMean,
        Self::ClusterStd,
        Self::Modularity,
        Self::Transitivity,
        Self::EigMean,
        Self::EigStd,
        Self::ClosenessMean,
        Self::ClosenessStd,
        Self::GiantComRatio,
        Self::ComponentsCnt,
        Self::CpTestPvalue,
        Self::CpSignificance,
        Self::CoreCnt,
        Self::AvgCoreNeighbor,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::NumNodes => "num_nodes",
            Self::NumEdges => "num_edges",
            Self::DegreeMean => "degree_mean",
            Self::DegreeStd => "degree_std",
            Self::Top10DegreeMean => "top10_degree_mean",
            Self::Top10DegreeStd => "top10_degree_std",
            Self::Top10DegreeMeanRatio => "top10_degree_mean_ratio",
            Self::RelativeDegree => "relative_degree",
            Self::DcMean => "dc_mean",
            Self::DcStd => "dc_std",
            Self::ClusterMean => "cluster_mean",
            Self::ClusterStd => "cluster_std",
            Self::Modularity => "modularity",
            Self::Transitivity => "transitivity",
            Self::EigMean => "eig_mean",
            Self::EigStd => "eig_std",
            Self::ClosenessMean => "closeness_mean",
            Self::ClosenessStd => "closeness_std",
            Self::GiantComRatio => "giant_com_ratio",
            Self::ComponentsCnt => "components_cnt",
            Self::CpTestPvalue => "cp_test_pvalue",
            Self::CpSignificance => "cp_significance",
            Self::CoreCnt => "core_cnt",
            Self::AvgCoreNeighbor => "avg_core_neighbor",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn index(&self) -> usize {
        *self as usize
    }
}

/// One day of the feature table. A `None` marks a feature that is
/// undefined for that day (too few nodes, no convergence, no test).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub date: NaiveDate,
    pub values: [Option<f64>; N_FEATURES],
}

impl FeatureRow {
    pub fn empty(date: NaiveDate) -> Self {
        Self { date, values: [None; N_FEATURES] }
    }

    pub fn get(&self, f: Feature) -> Option<f64> {
        self.values[f.index()]
    }

    pub fn set(&mut self, f: Feature, v: f64) {
        self.values[f.index()] = Some(v);
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }
}

/// Inputs for one day beyond the graph itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct DayContext<'a> {
    pub cp: Option<&'a CpTestResult>,
    pub assignment: Option<&'a CpAssignment>,
    /// Degrees for the top-10 block when it is fixed across the period
    /// rather than taken from this day's ten largest.
    pub top_degrees: Option<&'a [f64]>,
}

/// Every feature of `g` that can be computed. Fields whose inputs are
/// missing or undefined stay `None`; eigenvector non-convergence only
/// nulls the two eigenvector fields.
pub fn compute_row(g: &DailyGraph, ctx: DayContext<'_>, seed: u64) -> FeatureRow {
    use Feature::*;
    let t = &g.topology;
    let mut row = FeatureRow::empty(g.day);
    row.set(NumNodes, g.num_nodes() as f64);
    row.set(NumEdges, g.num_edges() as f64);
    let comps = connected_components(t);
    row.set(ComponentsCnt, comps.count() as f64);
    row.set(GiantComRatio, comps.largest() as f64 / t.n() as f64);
    let degree = match ctx.top_degrees {
        Some(top) => degree_stats_with_top(t, top),
        None => degree_stats(t),
    };
    if let Ok(d) = degree {
        row.set(DegreeMean, d.degree_mean);
        row.set(DegreeStd, d.degree_std);
        row.set(Top10DegreeMean, d.top10_degree_mean);
        row.set(Top10DegreeStd, d.top10_degree_std);
        row.set(Top10DegreeMeanRatio, d.top10_degree_mean_ratio);
        row.set(RelativeDegree, d.relative_degree);
        row.set(DcMean, d.dc_mean);
        row.set(DcStd, d.dc_std);
    }
    let c = clustering_stats(t);
    row.set(ClusterMean, c.cluster_mean);
    row.set(ClusterStd, c.cluster_std);
    row.set(Transitivity, c.transitivity);
    row.set(Modularity, modularity(t, seed));
    if let Ok((m, s)) = eigenvector_centrality_stats(t) {
        row.set(EigMean, m);
        row.set(EigStd, s);
    }
    let (cm, cs) = closeness_centrality_stats(t);
    row.set(ClosenessMean, cm);
    row.set(ClosenessStd, cs);
    if let Some(cp) = ctx.cp {
        row.set(CpTestPvalue, cp.p_value);
        row.set(CpSignificance, if cp.p_value < ALPHA { 1.0 } else { 0.0 });
    }
    if let Some(a) = ctx.assignment {
        let s = core_stats(t, a);
        row.set(CoreCnt, s.core_cnt as f64);
        row.set(AvgCoreNeighbor, s.avg_core_neighbor);
    }
    row
}

/// All 24 features for one day from its graph, significance test and
/// assignment. Fails where a feature is undefined.
pub fn feature_row(g: &DailyGraph, cp: &CpTestResult, a: &CpAssignment, seed: u64) -> Result<FeatureRow, GraphError> {
    degree_stats(&g.topology)?;
    eigenvector_centrality_stats(&g.topology)?;
    Ok(compute_row(g, DayContext { cp: Some(cp), assignment: Some(a), top_degrees: None }, seed))
}
