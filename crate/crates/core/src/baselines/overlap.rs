use std::collections::BTreeSet;

use super::{grid_agreement, ChanceCorrected};
use crate::data::ClassificationTensor;
use crate::{Error, Result};

/// `|A ∩ B| / |A ∪ B|`. Two empty sets have no defined overlap; an empty set
/// against a nonempty one overlaps 0.
pub fn jaccard_overlap<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> Option<f64> {
    let union = a.union(b).count();
    (union > 0).then(|| a.intersection(b).count() as f64 / union as f64)
}

fn jaccard_bits(a: &[bool], b: &[bool]) -> Option<f64> {
    let (mut both, mut either) = (0usize, 0usize);
    for (&x, &y) in a.iter().zip(b) {
        both += usize::from(x && y);
        either += usize::from(x || y);
    }
    (either > 0).then(|| both as f64 / either as f64)
}

/// Maps a 1-based cell number `n` of an `I × J` grid, numbered row by row,
/// to its 1-based `(subject, rater)`.
pub fn cell_to_subject_rater(
    n: usize,
    n_subjects: usize,
    n_raters: usize,
) -> Result<(usize, usize)> {
    let max = n_subjects * n_raters;
    if n == 0 || n > max {
        return Err(Error::OutOfRange { index: n, max });
    }
    Ok((n.div_ceil(n_raters), (n - 1) % n_raters + 1))
}

/// Proportional-overlap kappa: Jaccard agreement between rater pairs on the
/// same subject, against Jaccard agreement between arbitrary rated cells.
///
/// A pair in which either rater selected nothing is not scored.
pub fn mezzich_kappa(tensor: &ClassificationTensor) -> Result<ChanceCorrected> {
    let grid: Vec<Vec<Option<&[bool]>>> = (0..tensor.n_subjects())
        .map(|i| {
            (0..tensor.n_raters())
                .map(|j| tensor.participates(i, j).then(|| tensor.selection(i, j)))
                .collect()
        })
        .collect();
    grid_agreement(&grid, |a, b| {
        if a.contains(&true) && b.contains(&true) {
            jaccard_bits(a, b)
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{build_tensor, parse_category_list, parse_ratings, parse_roster};
    use crate::fixtures;
    use proptest::prelude::*;

    fn set(items: &[u8]) -> BTreeSet<u8> {
        items.iter().copied().collect()
    }

    #[test]
    fn jaccard_examples() {
        let a: BTreeSet<&str> = ["blue", "yellow", "brown"].into();
        let b: BTreeSet<&str> = ["blue", "green"].into();
        assert_eq!(jaccard_overlap(&a, &b), Some(0.25));
        assert_eq!(
            jaccard_overlap(&set(&[1, 2]), &set(&[2, 3])),
            Some(1.0 / 3.0)
        );
        assert_eq!(jaccard_overlap(&set(&[1]), &set(&[1])), Some(1.0));
        assert_eq!(jaccard_overlap(&set(&[1]), &set(&[])), Some(0.0));
        assert_eq!(jaccard_overlap(&set(&[]), &set(&[])), None);
    }

    #[test]
    fn cell_numbering() {
        assert_eq!(cell_to_subject_rater(1, 6, 3).unwrap(), (1, 1));
        assert_eq!(cell_to_subject_rater(3, 6, 3).unwrap(), (1, 3));
        assert_eq!(cell_to_subject_rater(4, 6, 3).unwrap(), (2, 1));
        assert_eq!(cell_to_subject_rater(18, 6, 3).unwrap(), (6, 3));
        assert_eq!(
            cell_to_subject_rater(19, 6, 3),
            Err(Error::OutOfRange { index: 19, max: 18 })
        );
        assert!(cell_to_subject_rater(0, 6, 3).is_err());
    }

    /// Chance agreement straight from the definition: every unordered pair
    /// of distinct participating cells, no index arithmetic.
    fn pe_by_enumeration(t: &ClassificationTensor) -> f64 {
        let mut cells = Vec::new();
        for i in 0..t.n_subjects() {
            for j in 0..t.n_raters() {
                if t.participates(i, j) {
                    let s: BTreeSet<usize> = (0..t.n_categories())
                        .filter(|&c| t.is_selected(i, j, c))
                        .collect();
                    cells.push(s);
                }
            }
        }
        let (mut sum, mut n) = (0.0, 0);
        for a in 0..cells.len() {
            for b in a + 1..cells.len() {
                if cells[a].is_empty() || cells[b].is_empty() {
                    continue;
                }
                sum += jaccard_overlap(&cells[a], &cells[b]).unwrap();
                n += 1;
            }
        }
        sum / n as f64
    }

    #[test]
    fn exam_overlap() {
        let cats = parse_category_list(fixtures::EXAM_CATEGORIES);
        let t = build_tensor(
            &parse_ratings(fixtures::EXAM_RATINGS).unwrap(),
            None,
            Some(&cats),
        )
        .unwrap();
        let r = mezzich_kappa(&t).unwrap();
        assert!((r.pe - pe_by_enumeration(&t)).abs() < 1e-12);
        assert!((r.kappa - 0.602).abs() < 5e-4, "{}", r.kappa);
    }

    #[test]
    fn incomplete_grid_matches_enumeration() {
        let cats = parse_category_list(fixtures::DSM_CATEGORIES);
        let roster = parse_roster(fixtures::DSM_ROSTER).unwrap();
        let t = build_tensor(
            &parse_ratings(fixtures::DSM_RATINGS).unwrap(),
            Some(&roster),
            Some(&cats),
        )
        .unwrap();
        let r = mezzich_kappa(&t).unwrap();
        assert!((r.pe - pe_by_enumeration(&t)).abs() < 1e-12);
    }

    #[test]
    fn nothing_to_compare() {
        let t = build_tensor(
            &parse_ratings("subject,rater,category\ns1,A,x\n").unwrap(),
            Some(&[("s1".into(), "A".into()), ("s1".into(), "B".into())]),
            None,
        )
        .unwrap();
        assert_eq!(mezzich_kappa(&t), Err(Error::NoValidPairs));
    }

    proptest! {
        #[test]
        fn bit_and_set_forms_agree(a in proptest::collection::vec(any::<bool>(), 6),
                                   b in proptest::collection::vec(any::<bool>(), 6)) {
            let to_set = |v: &[bool]| v.iter().enumerate().filter(|(_, &x)| x).map(|(k, _)| k).collect::<BTreeSet<_>>();
            prop_assert_eq!(jaccard_bits(&a, &b), jaccard_overlap(&to_set(&a), &to_set(&b)));
        }
    }
}
