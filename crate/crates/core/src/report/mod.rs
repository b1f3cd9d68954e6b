//! Output tables (csv and markdown) and static SVG figures.

mod svg;
mod tables;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::econ::correlation_matrix;
use crate::features::{Feature, FeatureRow};
use crate::stats::pop_std;

pub use svg::{boxplot_svg, box_groups_csv, heatmap_svg, time_series_svg, BoxGroup, TIME_SERIES_PANELS};
pub use tables::{
    complete_columns, read_cores_csv, read_features_csv, read_matrix_csv, regression_tables_markdown,
    write_assignment_csv, write_cores_csv, write_cp_tests_csv, write_features_csv, write_matrix_csv, write_pca_csv,
    write_regressions_csv,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("missing column {0}")]
    MissingColumn(String),
    #[error("line {line}: {reason}")]
    Malformed { line: u64, reason: String },
}

pub type Result<T> = std::result::Result<T, ReportError>;

/// Pairwise correlations of the features over days where all of them are
/// present. Features that are constant over those days are left out.
pub fn feature_correlations(rows: &[FeatureRow]) -> (Vec<Feature>, DMatrix<f64>) {
    let all = complete_columns(rows, &Feature::ALL);
    let (names, cols): (Vec<Feature>, Vec<Vec<f64>>) = Feature::ALL
        .iter()
        .copied()
        .zip(all)
        .filter(|(_, c)| c.len() >= 2 && pop_std(c) > 0.0)
        .unzip();
    (names, correlation_matrix(&cols))
}
