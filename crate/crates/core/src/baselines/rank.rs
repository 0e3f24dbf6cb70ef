use std::collections::{BTreeMap, HashMap, HashSet};

use super::{grid_agreement, ChanceCorrected};
use crate::data::{build_tensor, read_rows, ClassificationTensor, RatingRecord, RosterPair};
use crate::{Error, Result};

/// Ranks of all `C` categories for one (subject, rater) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector(pub Vec<f64>);

/// Turns an ordered selection into ranks over all categories.
///
/// `ordered` lists tie groups of category indices, most important first.
/// The `k` selected categories take ranks `1..=k` (a tie group shares the mean
/// of the positions it spans) and every unselected category shares the mean
/// unused rank `(C + k + 1) / 2`.
pub fn rank_vector(ordered: &[Vec<usize>], n_categories: usize) -> Result<RankVector> {
    let k: usize = ordered.iter().map(Vec::len).sum();
    let mut ranks = vec![(n_categories + k + 1) as f64 / 2.0; n_categories];
    let mut seen = HashSet::new();
    let mut next = 1usize;
    for group in ordered {
        let shared = next as f64 + (group.len() as f64 - 1.0) / 2.0;
        for &c in group {
            if c >= n_categories {
                return Err(Error::UnknownCategory(c.to_string()));
            }
            if !seen.insert(c) {
                return Err(Error::DuplicateCategory(c.to_string()));
            }
            ranks[c] = shared;
        }
        next += group.len();
    }
    Ok(RankVector(ranks))
}

/// Spearman correlation with tie correction, i.e. Pearson correlation of the
/// rank vectors. `None` when either vector is constant.
pub fn spearman_tied(a: &RankVector, b: &RankVector) -> Option<f64> {
    let (a, b) = (&a.0, &b.0);
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    (saa > 0.0 && sbb > 0.0).then(|| sab / (saa * sbb).sqrt())
}

/// One line of a rankings file: `rater` put `category` in position group
/// `rank_group` (1 = most important; equal groups are ties) for `subject`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingRecord {
    pub subject: String,
    pub rater: String,
    pub category: String,
    pub rank_group: u32,
}

/// Parses `subject,rater,category,rank_group`.
pub fn parse_rankings(text: &str) -> Result<Vec<RankingRecord>> {
    let rows = read_rows(text, &["subject", "rater", "category", "rank_group"])?;
    rows.into_iter()
        .map(|(line, f)| {
            let rank_group = f[3]
                .parse::<u32>()
                .ok()
                .filter(|&g| g >= 1)
                .ok_or_else(|| Error::MalformedRow {
                    line,
                    message: format!("rank_group `{}` is not a positive integer", f[3]),
                })?;
            let [subject, rater, category, _] = <[String; 4]>::try_from(f).unwrap();
            Ok(RankingRecord {
                subject,
                rater,
                category,
                rank_group,
            })
        })
        .collect()
}

/// Ordered selections on top of the usual participation structure.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingSet {
    tensor: ClassificationTensor,
    vectors: Vec<Option<RankVector>>,
}

impl RankingSet {
    /// Treats every cell's selection as one tie group.
    pub fn from_tensor(tensor: &ClassificationTensor) -> Self {
        let nc = tensor.n_categories();
        let vectors = (0..tensor.n_subjects())
            .flat_map(|i| (0..tensor.n_raters()).map(move |j| (i, j)))
            .map(|(i, j)| {
                tensor.participates(i, j).then(|| {
                    let group: Vec<usize> =
                        (0..nc).filter(|&c| tensor.is_selected(i, j, c)).collect();
                    rank_vector(&[group], nc).expect("indices in range")
                })
            })
            .collect();
        Self {
            tensor: tensor.clone(),
            vectors,
        }
    }

    /// The unordered selections behind the rankings.
    pub fn tensor(&self) -> &ClassificationTensor {
        &self.tensor
    }

    pub fn vector(&self, subject: usize, rater: usize) -> Option<&RankVector> {
        self.vectors[subject * self.tensor.n_raters() + rater].as_ref()
    }

    /// The rankings of the given subjects, in that order, see
    /// [`ClassificationTensor::resample`].
    pub fn resample(&self, indices: &[usize]) -> RankingSet {
        let nj = self.tensor.n_raters();
        RankingSet {
            tensor: self.tensor.resample(indices),
            vectors: indices
                .iter()
                .flat_map(|&i| self.vectors[i * nj..(i + 1) * nj].iter().cloned())
                .collect(),
        }
    }
}

/// Assembles rankings with the same subject, rater, category and roster rules
/// as [`build_tensor`].
pub fn build_rankings(
    records: &[RankingRecord],
    roster: Option<&[RosterPair]>,
    categories: Option<&[String]>,
) -> Result<RankingSet> {
    let plain: Vec<RatingRecord> = records
        .iter()
        .map(|r| RatingRecord::new(&r.subject, &r.rater, &r.category))
        .collect();
    let tensor = build_tensor(&plain, roster, categories)?;
    let index = |ids: &[String]| -> HashMap<String, usize> {
        ids.iter()
            .enumerate()
            .map(|(k, id)| (id.clone(), k))
            .collect()
    };
    let (si, ri, ci) = (
        index(tensor.subjects()),
        index(tensor.raters()),
        index(tensor.categories()),
    );
    let nj = tensor.n_raters();
    let mut groups: Vec<BTreeMap<u32, Vec<usize>>> =
        vec![BTreeMap::new(); tensor.n_subjects() * nj];
    for r in records {
        groups[si[&r.subject] * nj + ri[&r.rater]]
            .entry(r.rank_group)
            .or_default()
            .push(ci[&r.category]);
    }
    let vectors = groups
        .into_iter()
        .enumerate()
        .map(|(cell, g)| {
            let (i, j) = (cell / nj, cell % nj);
            tensor
                .participates(i, j)
                .then(|| rank_vector(&g.into_values().collect::<Vec<_>>(), tensor.n_categories()))
                .transpose()
        })
        .collect::<Result<_>>()?;
    Ok(RankingSet { tensor, vectors })
}

/// Spearman agreement between raters of the same subject against Spearman
/// agreement between arbitrary ranked cells. Pairs involving a constant rank
/// vector (nothing or everything selected) are not scored.
pub fn rank_kappa(rankings: &RankingSet) -> Result<ChanceCorrected> {
    let t = &rankings.tensor;
    let grid: Vec<Vec<Option<&RankVector>>> = (0..t.n_subjects())
        .map(|i| (0..t.n_raters()).map(|j| rankings.vector(i, j)).collect())
        .collect();
    grid_agreement(&grid, |a, b| spearman_tied(a, b))
}
