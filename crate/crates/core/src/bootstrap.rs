//! Percentile confidence intervals by resampling subjects.
//!
//! A replicate draws `I` subject indices with replacement and recomputes the
//! statistic on those subjects (each keeps all of its raters and
//! selections). Replicate `b` uses its own ChaCha8 stream `b` under the
//! configured seed, so results are identical whether replicates run in
//! parallel or not, and in whatever order they finish.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

/// Fewer replicates than this cannot resolve the tails of a 95% interval.
pub const MIN_REPLICATES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    pub confidence: f64,
    pub parallel: bool,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            replicates: 1000,
            seed: 0,
            confidence: 0.95,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapResult {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub confidence: f64,
    pub seed: u64,
    pub replicates_requested: usize,
    pub replicates_used: usize,
    /// Replicates whose statistic was undefined; they are left out of the
    /// interval rather than counted as any particular value.
    pub replicates_degenerate: usize,
}

/// Subject indices for replicate `replicate`.
pub fn resample_indices(n_subjects: usize, seed: u64, replicate: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    (0..n_subjects)
        .map(|_| rng.gen_range(0..n_subjects))
        .collect()
}

/// Linear-interpolation quantile of sorted data (`(n − 1)·p` positions).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Bootstraps `statistic`, which maps a list of subject indices (with
/// repeats) to a value. The point estimate is the statistic on `0..I`.
pub fn bootstrap_ci<F>(
    n_subjects: usize,
    statistic: F,
    config: &BootstrapConfig,
) -> Result<BootstrapResult>
where
    F: Fn(&[usize]) -> Result<f64> + Sync,
{
    if !(config.confidence > 0.0 && config.confidence < 1.0) {
        return Err(Error::InvalidConfidence(config.confidence));
    }
    if config.replicates < MIN_REPLICATES {
        return Err(Error::TooFewReplicates(config.replicates));
    }
    let identity: Vec<usize> = (0..n_subjects).collect();
    let point = statistic(&identity)?;

    let run = |b: usize| -> Option<f64> {
        let indices = resample_indices(n_subjects, config.seed, b as u64);
        statistic(&indices).ok().filter(|v| v.is_finite())
    };
    let values: Vec<Option<f64>> = if config.parallel {
        (0..config.replicates).into_par_iter().map(run).collect()
    } else {
        (0..config.replicates).map(run).collect()
    };
    let mut used: Vec<f64> = values.into_iter().flatten().collect();
    let degenerate = config.replicates - used.len();
    if used.is_empty() {
        return Err(Error::AllReplicatesDegenerate);
    }
    used.sort_by(f64::total_cmp);
    let alpha = 1.0 - config.confidence;
    Ok(BootstrapResult {
        point,
        lower: quantile(&used, alpha / 2.0),
        upper: quantile(&used, 1.0 - alpha / 2.0),
        confidence: config.confidence,
        seed: config.seed,
        replicates_requested: config.replicates,
        replicates_used: used.len(),
        replicates_degenerate: degenerate,
    })
}
