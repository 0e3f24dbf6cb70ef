#![allow(dead_code)]

use kappax::baselines::{build_rankings, parse_rankings, RankingSet};
use kappax::data::{
    build_tensor, parse_category_list, parse_ratings, parse_roster, ClassificationTensor,
};
use kappax::fixtures;
use kappax::hierarchy::{parse_hierarchy, validate_rules, Hierarchy};
use kappax::kappa::{parse_weights, CategoryConfig};
use proptest::prelude::*;

pub fn exam() -> (ClassificationTensor, Hierarchy, CategoryConfig) {
    let categories = parse_category_list(fixtures::EXAM_CATEGORIES);
    let tensor = build_tensor(
        &parse_ratings(fixtures::EXAM_RATINGS).unwrap(),
        None,
        Some(&categories),
    )
    .unwrap();
    let rules = parse_hierarchy(fixtures::EXAM_HIERARCHY).unwrap();
    let hierarchy = validate_rules(&rules, tensor.categories()).unwrap();
    let weights = parse_weights(fixtures::EXAM_WEIGHTS, tensor.categories()).unwrap();
    (tensor, hierarchy, weights)
}

pub fn psychiatric() -> ClassificationTensor {
    let categories = parse_category_list(fixtures::DSM_CATEGORIES);
    let roster = parse_roster(fixtures::DSM_ROSTER).unwrap();
    build_tensor(
        &parse_ratings(fixtures::DSM_RATINGS).unwrap(),
        Some(&roster),
        Some(&categories),
    )
    .unwrap()
}

pub fn psychiatric_rankings() -> RankingSet {
    let categories = parse_category_list(fixtures::DSM_CATEGORIES);
    let roster = parse_roster(fixtures::DSM_ROSTER).unwrap();
    build_rankings(
        &parse_rankings(fixtures::DSM_RANKINGS).unwrap(),
        Some(&roster),
        Some(&categories),
    )
    .unwrap()
}

/// `|actual − expected| ≤ tol`, allowing only for the representation error of
/// the decimal literals involved.
pub fn close(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol + 1e-12
}

fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k:02}")).collect()
}

pub fn tensor_from_parts(
    ni: usize,
    nj: usize,
    nc: usize,
    selections: Vec<bool>,
    participation: Vec<bool>,
) -> ClassificationTensor {
    ClassificationTensor::new(
        ids("s", ni),
        ids("r", nj),
        ids("c", nc),
        selections,
        participation,
    )
    .unwrap()
}

/// Every rater rates every subject and picks exactly one category.
pub fn exclusive_tensor() -> impl Strategy<Value = ClassificationTensor> {
    (1usize..=20, 2usize..=6, 2usize..=8).prop_flat_map(|(ni, nj, nc)| {
        proptest::collection::vec(0..nc, ni * nj).prop_map(move |choices| {
            let mut selections = vec![false; ni * nj * nc];
            for (cell, &c) in choices.iter().enumerate() {
                selections[cell * nc + c] = true;
            }
            tensor_from_parts(ni, nj, nc, selections, vec![true; ni * nj])
        })
    })
}

/// Arbitrary multi-label data; with `partial`, some raters skip some
/// subjects.
pub fn multilabel_tensor(partial: bool) -> impl Strategy<Value = ClassificationTensor> {
    (1usize..=12, 2usize..=5, 1usize..=6).prop_flat_map(move |(ni, nj, nc)| {
        (
            proptest::collection::vec(any::<bool>(), ni * nj * nc),
            proptest::collection::vec(
                proptest::bool::weighted(if partial { 0.8 } else { 1.0 }),
                ni * nj,
            ),
        )
            .prop_map(move |(mut selections, participation)| {
                for (cell, &p) in participation.iter().enumerate() {
                    if !p {
                        selections[cell * nc..(cell + 1) * nc].fill(false);
                    }
                }
                tensor_from_parts(ni, nj, nc, selections, participation)
            })
    })
}

/// Agreement on category `c` by listing every ordered pair of distinct
/// available raters and checking whether they made the same decision.
pub fn po_by_pairs(decisions: &[Vec<bool>]) -> Option<f64> {
    let (mut agree, mut pairs) = (0u64, 0u64);
    for subject in decisions {
        for a in 0..subject.len() {
            for b in 0..subject.len() {
                if a != b {
                    pairs += 1;
                    agree += u64::from(subject[a] == subject[b]);
                }
            }
        }
    }
    (pairs > 0).then(|| agree as f64 / pairs as f64)
}

/// Mean Jaccard overlap of all unordered pairs of distinct rated cells,
/// skipping pairs where either cell is empty.
pub fn mezzich_pe_by_pairs(t: &ClassificationTensor) -> Option<f64> {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in 0..t.n_subjects() {
        for j in 0..t.n_raters() {
            if t.participates(i, j) {
                cells.push(
                    (0..t.n_categories())
                        .filter(|&c| t.is_selected(i, j, c))
                        .collect(),
                );
            }
        }
    }
    let (mut sum, mut n) = (0.0, 0u64);
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let (x, y) = (&cells[a], &cells[b]);
            if x.is_empty() || y.is_empty() {
                continue;
            }
            let both = x.iter().filter(|c| y.contains(c)).count();
            sum += both as f64 / (x.len() + y.len() - both) as f64;
            n += 1;
        }
    }
    (n > 0).then(|| sum / n as f64)
}
