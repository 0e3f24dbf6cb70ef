//! The generalized kappa.
//!
//! For one category, every pair of raters who could have selected it for a
//! subject either agrees (both selected, or both did not) or disagrees. With
//! `x_i` raters selecting and `s_i` raters able to select:
//!
//! ```text
//! Po_c = Σ_i [x_i(x_i−1) + (s_i−x_i)(s_i−x_i−1)] / Σ_i s_i(s_i−1)
//! Pe_c = p² + (1−p)²,   p = Σ_i x_i / Σ_i s_i
//! ```
//!
//! The same kernel covers a fixed panel (`s_i = J`), a varying panel
//! (`s_i = j_i` or `j_ic`) and hierarchical availability (`s_i = s_ic`).
//! Categories are pooled as
//!
//! ```text
//! κ = Σ_c w_c φ_c (Po_c − Pe_c) / Σ_c w_c φ_c (1 − Pe_c),   φ_c = Σ_i s_ic / Σ_i j_ic
//! ```
//!
//! so a category nobody selected (`Po_c = Pe_c = 1`) contributes nothing, and
//! a category that was rarely available is down-weighted by `φ_c`.

mod weights;

use std::fmt;

use serde::Serialize;

pub use weights::{parse_weights, score_weights, CategoryConfig};

use crate::data::{tally, AgreementTable, ClassificationTensor, RaterCounts};
use crate::hierarchy::{compute_possible, Hierarchy, PossibleMatrix};
use crate::{Error, Result};

fn check_counts(x: &[u32], s: &[u32]) -> Result<()> {
    assert_eq!(x.len(), s.len(), "count columns differ in length");
    match x.iter().zip(s).find(|(x, s)| x > s) {
        Some((&selected, &possible)) => Err(Error::InvalidCounts { selected, possible }),
        None => Ok(()),
    }
}

/// Observed agreement for one category: agreeing rater pairs over all rater
/// pairs, pooled across subjects. `None` when no subject has two raters who
/// could select the category.
pub fn po_per_category(x: &[u32], s: &[u32]) -> Result<Option<f64>> {
    check_counts(x, s)?;
    let (mut agree, mut pairs) = (0u64, 0u64);
    for (&x, &s) in x.iter().zip(s) {
        let (x, s) = (u64::from(x), u64::from(s));
        agree += x * x.saturating_sub(1) + (s - x) * (s - x).saturating_sub(1);
        pairs += s * s.saturating_sub(1);
    }
    Ok((pairs > 0).then(|| agree as f64 / pairs as f64))
}

/// Chance agreement for one category. `None` when `Σ s_i = 0`.
pub fn pe_per_category(x: &[u32], s: &[u32]) -> Result<Option<f64>> {
    check_counts(x, s)?;
    let selected: u64 = x.iter().map(|&v| u64::from(v)).sum();
    let total: u64 = s.iter().map(|&v| u64::from(v)).sum();
    if total == 0 {
        return Ok(None);
    }
    let (a, b, n) = (selected as u128, (total - selected) as u128, total as u128);
    Ok(Some((a * a + b * b) as f64 / (n * n) as f64))
}

/// `φ_c = Σ_i s_ic / Σ_i j_ic` for every category.
pub fn scale_factors(possible: &PossibleMatrix) -> Result<Vec<f64>> {
    (0..possible.n_categories())
        .map(|c| {
            let s: u64 = possible
                .possible_column(c)
                .iter()
                .map(|&v| u64::from(v))
                .sum();
            let j: u64 = possible
                .opportunity_column(c)
                .iter()
                .map(|&v| u64::from(v))
                .sum();
            if j == 0 {
                Err(Error::ZeroOpportunity(c))
            } else {
                Ok(s as f64 / j as f64)
            }
        })
        .collect()
}

/// `(Po − Pe) / (1 − Pe)`; NaN when either side is undefined or `Pe = 1`.
pub fn kappa_per_category(po: Option<f64>, pe: Option<f64>) -> f64 {
    match (po, pe) {
        (Some(po), Some(pe)) if pe != 1.0 => (po - pe) / (1.0 - pe),
        _ => f64::NAN,
    }
}

/// [`kappa_per_category`] straight from the counts: `Po` and `Pe` are ratios
/// of integers, so the partial kappa is one too and only the final division
/// rounds (`7/16` comes out as exactly 0.4375, not 0.43749999999999967).
pub fn kappa_from_counts(x: &[u32], s: &[u32]) -> Result<f64> {
    check_counts(x, s)?;
    let (mut agree, mut pairs, mut selected, mut total) = (0i128, 0i128, 0i128, 0i128);
    for (&x, &s) in x.iter().zip(s) {
        let (x, s) = (i128::from(x), i128::from(s));
        agree += x * (x - 1).max(0) + (s - x) * (s - x - 1).max(0);
        pairs += s * (s - 1).max(0);
        selected += x;
        total += s;
    }
    let squares = selected * selected + (total - selected) * (total - selected);
    let n2 = total * total;
    if pairs == 0 || n2 == squares {
        return Ok(f64::NAN);
    }
    // Po = agree/pairs, Pe = squares/n2.
    let exact = || {
        let num = agree
            .checked_mul(n2)?
            .checked_sub(pairs.checked_mul(squares)?)?;
        let den = pairs.checked_mul(n2 - squares)?;
        Some(num as f64 / den as f64)
    };
    Ok(exact().unwrap_or_else(|| {
        let (po, pe) = (agree as f64 / pairs as f64, squares as f64 / n2 as f64);
        (po - pe) / (1.0 - pe)
    }))
}

/// One category's inputs to [`aggregate_kappa`].
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryInput {
    pub category: String,
    pub weight: f64,
    pub phi: f64,
    pub po: Option<f64>,
    pub pe: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryAgreement {
    pub category: String,
    pub po: Option<f64>,
    pub pe: Option<f64>,
    /// NaN when undefined.
    pub kappa: f64,
    pub phi: f64,
    pub weight: f64,
    /// `w φ (Po − Pe)`, zero when the category is undefined.
    pub num_contrib: f64,
    /// `w φ (1 − Pe)`, zero when the category is undefined.
    pub den_contrib: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaReport {
    pub per_category: Vec<CategoryAgreement>,
    pub numerator: f64,
    pub denominator: f64,
    pub overall: Option<f64>,
    pub interpretation: Option<Interpretation>,
}

/// Pools per-category agreement into the overall kappa. Categories with an
/// undefined `Po_c` or `Pe_c` add nothing to either sum.
pub fn aggregate_kappa(categories: &[CategoryInput]) -> Result<KappaReport> {
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    let per_category: Vec<CategoryAgreement> = categories
        .iter()
        .map(|input| {
            let kappa = kappa_per_category(input.po, input.pe);
            let (num_contrib, den_contrib) = match (input.po, input.pe) {
                (Some(po), Some(pe)) => {
                    let scale = input.weight * input.phi;
                    (scale * (po - pe), scale * (1.0 - pe))
                }
                _ => (0.0, 0.0),
            };
            numerator += num_contrib;
            denominator += den_contrib;
            CategoryAgreement {
                category: input.category.clone(),
                po: input.po,
                pe: input.pe,
                kappa,
                phi: input.phi,
                weight: input.weight,
                num_contrib,
                den_contrib,
            }
        })
        .collect();
    // Also catches a NaN sum.
    if denominator.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::UndefinedKappa);
    }
    let overall = numerator / denominator;
    Ok(KappaReport {
        per_category,
        numerator,
        denominator,
        overall: Some(overall),
        interpretation: interpret_kappa(overall),
    })
}

/// The generalized kappa of a dataset: optional availability rules and
/// per-category weights. Without rules every category is available to every
/// participating rater, so `s_ic = j_i` and `φ_c = 1`.
pub fn generalized_kappa(
    tensor: &ClassificationTensor,
    hierarchy: Option<&Hierarchy>,
    weights: &CategoryConfig,
) -> Result<KappaReport> {
    if weights.len() != tensor.n_categories() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} categories",
            weights.len(),
            tensor.n_categories()
        )));
    }
    let table = tally(tensor);
    let flat;
    let hierarchy = match hierarchy {
        Some(h) => h,
        None => {
            flat = Hierarchy::flat(tensor.categories());
            &flat
        }
    };
    let possible = compute_possible(tensor, hierarchy)?;
    let phi = scale_factors(&possible)?;
    let inputs = (0..tensor.n_categories())
        .map(|c| {
            let x = table.column(c);
            let s = possible.possible_column(c);
            Ok(CategoryInput {
                category: tensor.categories()[c].clone(),
                weight: weights.weight(c),
                phi: phi[c],
                po: po_per_category(&x, &s)?,
                pe: pe_per_category(&x, &s)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = aggregate_kappa(&inputs)?;
    for (c, row) in report.per_category.iter_mut().enumerate() {
        row.kappa = kappa_from_counts(&table.column(c), &possible.possible_column(c))?;
    }
    Ok(report)
}

/// Fleiss' kappa for a fixed panel choosing exactly one category per subject.
pub fn fleiss_kappa(table: &AgreementTable) -> Result<f64> {
    let raters = match table.rater_counts() {
        RaterCounts::Fixed(j) => u64::from(*j),
        _ => return Err(Error::VaryingRaters),
    };
    if raters < 2 {
        return Err(Error::InvalidTensor(
            "Fleiss' kappa needs at least two raters".into(),
        ));
    }
    let ni = table.n_subjects() as u64;
    let mut sum_sq = 0u64;
    for i in 0..table.n_subjects() {
        let row = table.row(i);
        if row.iter().map(|&x| u64::from(x)).sum::<u64>() != raters {
            return Err(Error::NotMutuallyExclusive(format!("#{}", i + 1)));
        }
        sum_sq += row
            .iter()
            .map(|&x| u64::from(x) * u64::from(x))
            .sum::<u64>();
    }
    let total = (ni * raters) as f64;
    let po = (sum_sq as f64 - total) / (total * (raters - 1) as f64);
    let pe: f64 = (0..table.n_categories())
        .map(|c| {
            let p = table.column(c).iter().map(|&x| u64::from(x)).sum::<u64>() as f64 / total;
            p * p
        })
        .sum();
    if pe >= 1.0 {
        return Err(Error::UndefinedKappa);
    }
    Ok((po - pe) / (1.0 - pe))
}

/// Landis and Koch's verbal scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Interpretation {
    Poor,
    Slight,
    Fair,
    Moderate,
    Substantial,
    AlmostPerfect,
}

impl Interpretation {
    pub fn label(self) -> &'static str {
        match self {
            Interpretation::Poor => "Poor",
            Interpretation::Slight => "Slight",
            Interpretation::Fair => "Fair",
            Interpretation::Moderate => "Moderate",
            Interpretation::Substantial => "Substantial",
            Interpretation::AlmostPerfect => "Almost Perfect",
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `None` for NaN.
pub fn interpret_kappa(value: f64) -> Option<Interpretation> {
    if value.is_nan() {
        return None;
    }
    Some(if value < 0.0 {
        Interpretation::Poor
    } else if value <= 0.20 {
        Interpretation::Slight
    } else if value <= 0.40 {
        Interpretation::Fair
    } else if value <= 0.60 {
        Interpretation::Moderate
    } else if value <= 0.80 {
        Interpretation::Substantial
    } else {
        Interpretation::AlmostPerfect
    })
}
