use rayon::prelude::*;

use super::{CpAssignment, CpError, CpTestResult, Detector, NullModel, Result};
use crate::graph::SimpleGraph;
use crate::seed;

pub const ALPHA: f64 = 0.05;
pub const DEFAULT_N_RAND: usize = 100;
pub const MIN_N_RAND: usize = 19;

/// Detect on `g` and test the result against `n_rand` degree-preserving
/// randomizations of `g`.
pub fn qs_significance(g: &SimpleGraph, detector: &Detector, n_rand: usize, seed: u64) -> Result<CpTestResult> {
    let observed = detector.detect(g, seed::derive(seed, &[0]))?;
    qs_significance_for(g, &observed, detector, NullModel::DegreePreserving, n_rand, seed)
}

/// Significance of an already detected assignment.
///
/// Replicate `r` draws its null graph and its detection seed from
/// `(seed, r)` only, so the result does not depend on how replicates are
/// scheduled across threads. The p-value uses the add-one estimator
/// `(1 + #{null >= observed}) / (1 + n_rand)`.
pub fn qs_significance_for(
    g: &SimpleGraph,
    observed: &CpAssignment,
    detector: &Detector,
    null_model: NullModel,
    n_rand: usize,
    seed: u64,
) -> Result<CpTestResult> {
    if n_rand < MIN_N_RAND {
        return Err(CpError::TooFewRandomizations(n_rand));
    }
    let null_qualities: Vec<f64> = (0..n_rand)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed::rng(seed, &[1, r as u64]);
            let null = null_model.sample(g, &mut rng)?;
            Ok(detector.detect(&null, seed::derive(seed, &[2, r as u64]))?.quality)
        })
        .collect::<Result<_>>()?;
    let exceed = null_qualities.iter().filter(|&&q| q >= observed.quality).count();
    let p_value = (1 + exceed) as f64 / (1 + n_rand) as f64;
    Ok(CpTestResult {
        p_value,
        significant: p_value < ALPHA,
        n_randomizations: n_rand,
        observed_quality: observed.quality,
        null_qualities,
    })
}
