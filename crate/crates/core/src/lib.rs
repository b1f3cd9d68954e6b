//! Decentralization analytics for token-transfer networks.
//!
//! The crate turns raw transfer logs into daily undirected transaction
//! graphs, measures their structure (components, degree dispersion,
//! clustering, centralities, modularity, core-periphery structure with a
//! degree-preserving significance test) and links those measurements to
//! economic outcomes through multi-horizon Newey-West regressions.
//!
//! Module map:
//!
//! - [`ingest`]: transfer, economic series and label file parsing.
//! - [`graph`]: daily graph construction and structural statistics.
//! - [`cp`]: core-periphery detection, null-model significance, core removal.
//! - [`features`]: the 24-column daily feature row, modularity, core-day counts.
//! - [`econ`]: stationarity, scaling, horizon targets, HAC OLS, PCA.
//! - [`synth`]: synthetic graphs and fixtures with known ground truth.
//! - [`pipeline`]: end-to-end orchestration used by the CLI.
//! - [`report`]: csv tables and SVG figures.

pub mod cp;
pub mod econ;
pub mod features;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod report;
pub mod seed;
pub mod stats;
pub mod synth;

pub use cp::{CpAssignment, CpTestResult, Detector};
pub use features::FeatureRow;
pub use graph::DailyGraph;
pub use ingest::TransferRecord;
