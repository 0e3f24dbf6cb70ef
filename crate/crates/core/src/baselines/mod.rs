//! Earlier multi-label agreement measures, kept for comparison.
//!
//! Each returns observed agreement, chance agreement and the kappa built
//! from them. None of them supports category weights or hierarchies, and
//! apart from the two-rater Cohen variants they all ignore agreement on
//! *not* selecting a category.

mod cohen;
mod icc;
mod overlap;
mod rank;

use serde::Serialize;

pub use cohen::{averaged_cohen, cohen_kappa, pooled_cohen};
pub use icc::{icc_kappa, icc_subject};
pub use overlap::{cell_to_subject_rater, jaccard_overlap, mezzich_kappa};
pub use rank::{
    build_rankings, parse_rankings, rank_kappa, rank_vector, spearman_tied, RankVector,
    RankingRecord, RankingSet,
};

use crate::{Error, Result};

/// Observed agreement, chance agreement and `(po − pe) / (1 − pe)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChanceCorrected {
    pub po: f64,
    pub pe: f64,
    /// NaN when `pe = 1`.
    pub kappa: f64,
}

impl ChanceCorrected {
    pub fn new(po: f64, pe: f64) -> Self {
        let kappa = if pe == 1.0 {
            f64::NAN
        } else {
            (po - pe) / (1.0 - pe)
        };
        Self { po, pe, kappa }
    }
}

/// Pairwise agreement over an `I × J` grid of cells (`None` = rater did not
/// rate the subject).
///
/// `Po` averages, over subjects, the mean agreement of that subject's rater
/// pairs. `Pe` averages the agreement of every unordered pair of distinct
/// cells in the grid. Pairs for which `agree` returns `None` are left out of
/// both the sum and the count; subjects left with no pair are skipped.
pub(crate) fn grid_agreement<T>(
    grid: &[Vec<Option<T>>],
    agree: impl Fn(&T, &T) -> Option<f64>,
) -> Result<ChanceCorrected> {
    let mut subject_means = Vec::with_capacity(grid.len());
    for row in grid {
        let cells: Vec<&T> = row.iter().flatten().collect();
        let (mut sum, mut n) = (0.0, 0usize);
        for a in 0..cells.len() {
            for b in a + 1..cells.len() {
                if let Some(v) = agree(cells[a], cells[b]) {
                    sum += v;
                    n += 1;
                }
            }
        }
        if n > 0 {
            subject_means.push(sum / n as f64);
        }
    }
    if subject_means.is_empty() {
        return Err(Error::NoValidPairs);
    }
    let po = subject_means.iter().sum::<f64>() / subject_means.len() as f64;

    let n_raters = grid.first().map_or(0, Vec::len);
    let complete = grid
        .iter()
        .all(|row| row.len() == n_raters && row.iter().all(Option::is_some));
    let (mut sum, mut n) = (0.0, 0usize);
    if complete {
        // Number the cells row by row and walk every pair x < y.
        let total = grid.len() * n_raters;
        let cell = |x: usize| {
            let (i, j) = cell_to_subject_rater(x, grid.len(), n_raters).expect("x within grid");
            grid[i - 1][j - 1].as_ref().unwrap()
        };
        for x in 1..=total {
            for y in x + 1..=total {
                if let Some(v) = agree(cell(x), cell(y)) {
                    sum += v;
                    n += 1;
                }
            }
        }
    } else {
        let cells: Vec<&T> = grid.iter().flatten().flatten().collect();
        for a in 0..cells.len() {
            for b in a + 1..cells.len() {
                if let Some(v) = agree(cells[a], cells[b]) {
                    sum += v;
                    n += 1;
                }
            }
        }
    }
    if n == 0 {
        return Err(Error::NoValidPairs);
    }
    Ok(ChanceCorrected::new(po, sum / n as f64))
}
