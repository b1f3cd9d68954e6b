//! Run settings from flags and an optional TOML file. Flags win.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use serde::Deserialize;
use tokennet::cp::{Detector, NullModel, DEFAULT_N_RAND, DEFAULT_RESTARTS};
use tokennet::econ::{SuiteOptions, DEFAULT_HORIZONS};
use tokennet::graph::BuildOptions;
use tokennet::pipeline::PipelineConfig;

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Transfer log (csv, or jsonl by extension).
    #[arg(long)]
    pub transfers: Option<PathBuf>,
    /// Daily economic series: date, PriceUSD, VtyDayRet30d, optional tvlUSD.
    #[arg(long)]
    pub econ: Option<PathBuf>,
    /// Address labels: address, kind (EOA or CA), optional tag.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Feature table to read; defaults to <out>/features.csv.
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Null-model replicates per day.
    #[arg(long)]
    pub n_rand: Option<usize>,
    /// Random restarts of the core-periphery search.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Core-periphery detector: be or km-config.
    #[arg(long)]
    pub detector: Option<String>,
    /// Null model: degree-preserving or expected-degree.
    #[arg(long)]
    pub null_model: Option<String>,
    /// Newey-West lag; defaults to floor(4 (n/100)^(2/9)).
    #[arg(long)]
    pub hac_lag: Option<usize>,
    /// Comma-separated ascending horizons in days.
    #[arg(long, value_delimiter = ',')]
    pub horizons: Option<Vec<usize>>,
    /// Keep pairs whose transfers all had zero value.
    #[arg(long)]
    pub keep_zero_edges: bool,
    /// Use the ten addresses with the largest total degree for the top-10 block.
    #[arg(long)]
    pub global_top10: bool,
    /// Min-max scale the dependent variables too.
    #[arg(long)]
    pub scale_dependent: bool,
    /// TOML file with any of the above keys (snake_case).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    transfers: Option<PathBuf>,
    econ: Option<PathBuf>,
    labels: Option<PathBuf>,
    features: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    n_rand: Option<usize>,
    restarts: Option<usize>,
    detector: Option<String>,
    null_model: Option<String>,
    hac_lag: Option<usize>,
    horizons: Option<Vec<usize>>,
    keep_zero_edges: Option<bool>,
    global_top10: Option<bool>,
    scale_dependent: Option<bool>,
}

/// Fully resolved settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub transfers: Option<PathBuf>,
    pub econ: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub out: PathBuf,
    pub pipeline: PipelineConfig,
    pub suite: SuiteOptions,
}

/// A problem with the invocation rather than with the data.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl RunArgs {
    pub fn resolve(self) -> anyhow::Result<RunConfig> {
        let file = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        let restarts = self.restarts.or(file.restarts).unwrap_or(DEFAULT_RESTARTS);
        if restarts == 0 {
            return Err(usage("--restarts must be at least 1"));
        }
        let detector = match self.detector.or(file.detector).as_deref() {
            None | Some("be") => Detector::Be { restarts },
            Some("km-config") | Some("km_config") => Detector::KmConfig { restarts },
            Some(other) => return Err(usage(format!("unknown detector `{other}`"))),
        };
        let null_model: NullModel = match self.null_model.or(file.null_model) {
            Some(s) => s.parse().map_err(|e: String| usage(e))?,
            None => NullModel::default(),
        };
        let horizons = self.horizons.or(file.horizons).unwrap_or_else(|| DEFAULT_HORIZONS.to_vec());
        check_horizons(&horizons)?;
        let pipeline = PipelineConfig {
            seed: self.seed.or(file.seed).unwrap_or(0),
            n_rand: self.n_rand.or(file.n_rand).unwrap_or(DEFAULT_N_RAND),
            detector,
            null_model,
            build: BuildOptions { keep_zero_edges: self.keep_zero_edges || file.keep_zero_edges.unwrap_or(false) },
            global_top10: self.global_top10 || file.global_top10.unwrap_or(false),
        };
        let suite = SuiteOptions {
            horizons,
            hac_lag: self.hac_lag.or(file.hac_lag),
            scale_dependent: self.scale_dependent || file.scale_dependent.unwrap_or(false),
        };
        Ok(RunConfig {
            transfers: self.transfers.or(file.transfers),
            econ: self.econ.or(file.econ),
            labels: self.labels.or(file.labels),
            features: self.features.or(file.features),
            out: self.out.or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            pipeline,
            suite,
        })
    }
}

fn check_horizons(h: &[usize]) -> anyhow::Result<()> {
    if h.is_empty() || h.contains(&0) || h.windows(2).any(|w| w[0] >= w[1]) {
        bail!(UsageError("--horizons must be a non-empty strictly ascending list of positive days".into()));
    }
    Ok(())
}

pub fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> anyhow::Result<&'a Path> {
    p.as_deref().ok_or_else(|| usage(format!("{flag} is required")))
}
