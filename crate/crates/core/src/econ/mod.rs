//! Economic time series: stationarity, scaling, horizon targets, HAC
//! regressions, principal components and correlations.

mod adf;
mod ols;
mod pca;
mod suite;
mod transform;

use thiserror::Error;

pub use adf::{adf_test, default_adf_lag, mackinnon_critical_value, AdfDecision, AdfResult, MIN_ADF_LEN};
pub use ols::{
    default_hac_lag, hac_covariance, least_squares, ols_newey_west, ols_newey_west_multi, stars, white_covariance,
    LsFit, MultiFit, RegressionResult,
};
pub use pca::{correlation_matrix, pca, PcaResult};
pub use suite::{
    build_regressor, horizon_target, run_horizon_suite, Calendar, Dependent, RegressionRow, RegressorSpec,
    SuiteOptions, SuiteOutput, DEFAULT_HORIZONS, PCA_COMPONENTS, REGRESSORS,
};
pub use transform::{min_max, moving_average, prepare, PreparedSeries, Transform, MIN_PREPARE_LEN};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EconError {
    #[error("series of length {len} is too short, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },
    #[error("no candidate transform makes `{}` stationary", .0.name)]
    NoStationaryTransform(Box<PreparedSeries>),
    #[error("design matrix is singular")]
    SingularDesign,
    #[error("{n} observations are not enough, need more than {needed}")]
    InsufficientObservations { n: usize, needed: usize },
    #[error("column {0} has zero variance")]
    DegenerateColumn(usize),
    #[error("horizon must be positive")]
    InvalidHorizon,
    #[error("regression {dependent} ~ {regressor} at h={horizon}: {source}")]
    Cell { dependent: String, regressor: String, horizon: usize, source: Box<EconError> },
}

pub type Result<T> = std::result::Result<T, EconError>;
