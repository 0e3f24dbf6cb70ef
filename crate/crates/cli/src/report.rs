//! The report every method produces, and its two renderings.
//!
//! JSON carries full double precision and is versioned by `schema`; NaN and
//! undefined values become `null`. The table rounds to three decimals and
//! prints undefined values as `NaN`.

use std::fmt::Write;

use kappax::bootstrap::BootstrapResult;
use kappax::kappa::KappaReport;
use serde::{Deserialize, Serialize};

use crate::input::InputFile;
use crate::Method;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub method: Method,
    pub inputs: Inputs,
    pub options: Options,
    pub result: Outcome,
    pub bootstrap: Option<Interval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub ratings: InputFile,
    pub roster: Option<InputFile>,
    pub hierarchy: Option<InputFile>,
    pub weights: Option<InputFile>,
    pub categories: Option<InputFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Options {
    pub bootstrap: Option<usize>,
    pub seed: u64,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub subjects: usize,
    pub raters: usize,
    pub categories: usize,
    pub kappa: Option<f64>,
    pub interpretation: Option<String>,
    /// Observed and chance agreement, for methods that have a single pair.
    pub po: Option<f64>,
    pub pe: Option<f64>,
    pub numerator: Option<f64>,
    pub denominator: Option<f64>,
    pub per_category: Vec<CategoryRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryRow {
    pub category: String,
    pub po: Option<f64>,
    pub pe: Option<f64>,
    pub po_minus_pe: Option<f64>,
    pub one_minus_pe: Option<f64>,
    pub phi: f64,
    pub weight: f64,
    pub kappa: Option<f64>,
    pub num_contrib: f64,
    pub den_contrib: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub confidence: f64,
    pub seed: u64,
    pub replicates_requested: usize,
    pub replicates_used: usize,
    pub replicates_degenerate: usize,
}

impl From<BootstrapResult> for Interval {
    fn from(r: BootstrapResult) -> Self {
        Interval {
            point: r.point,
            lower: r.lower,
            upper: r.upper,
            confidence: r.confidence,
            seed: r.seed,
            replicates_requested: r.replicates_requested,
            replicates_used: r.replicates_used,
            replicates_degenerate: r.replicates_degenerate,
        }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn category_rows(report: &KappaReport) -> Vec<CategoryRow> {
    report
        .per_category
        .iter()
        .map(|row| CategoryRow {
            category: row.category.clone(),
            po: row.po,
            pe: row.pe,
            po_minus_pe: row.po.zip(row.pe).map(|(po, pe)| po - pe),
            one_minus_pe: row.pe.map(|pe| 1.0 - pe),
            phi: row.phi,
            weight: row.weight,
            kappa: finite(row.kappa),
            num_contrib: row.num_contrib,
            den_contrib: row.den_contrib,
        })
        .collect()
}

impl Outcome {
    /// An outcome carrying only the overall value; callers fill in the rest.
    pub fn bare(subjects: usize, raters: usize, categories: usize, kappa: f64) -> Self {
        let kappa = finite(kappa);
        Outcome {
            subjects,
            raters,
            categories,
            kappa,
            interpretation: kappa
                .and_then(kappax::kappa::interpret_kappa)
                .map(|i| i.label().to_owned()),
            po: None,
            pe: None,
            numerator: None,
            denominator: None,
            per_category: Vec::new(),
        }
    }
}

pub fn to_json(report: &Report) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

/// Three decimals, `NaN` for undefined values, and no negative zero.
pub fn fmt3(value: Option<f64>) -> String {
    match value.filter(|v| v.is_finite()) {
        None => "NaN".to_owned(),
        Some(v) => {
            let s = format!("{v:.3}");
            if s == "-0.000" {
                "0.000".to_owned()
            } else {
                s
            }
        }
    }
}

const COLUMNS: [&str; 7] = ["Po_c", "Pe_c", "Po-Pe", "1-Pe", "phi_c", "w_c", "kappa_c"];

/// The per-category table; only the header when there are no rows.
pub fn category_table(rows: &[CategoryRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.category.chars().count())
        .chain(["category".len()])
        .max()
        .unwrap();
    let mut out = format!("{:<width$}", "category");
    for col in COLUMNS {
        let _ = write!(out, "  {col:>8}");
    }
    out.push('\n');
    for row in rows {
        let cells = [
            row.po,
            row.pe,
            row.po_minus_pe,
            row.one_minus_pe,
            Some(row.phi),
            Some(row.weight),
            row.kappa,
        ];
        let _ = write!(out, "{:<width$}", row.category);
        for cell in cells {
            let _ = write!(out, "  {:>8}", fmt3(cell));
        }
        out.push('\n');
    }
    out
}

pub fn to_table(report: &Report) -> String {
    let r = &report.result;
    let mut out = format!(
        "method: {}\nratings: {} ({} subjects, {} raters, {} categories)\n\n",
        report.method.name(),
        report.inputs.ratings.path,
        r.subjects,
        r.raters,
        r.categories
    );
    if report.method == Method::Generalized {
        out.push_str(&category_table(&r.per_category));
        out.push('\n');
    }
    if r.po.is_some() || r.pe.is_some() {
        let _ = writeln!(out, "Po: {}", fmt3(r.po));
        let _ = writeln!(out, "Pe: {}", fmt3(r.pe));
    }
    match (r.kappa, &r.interpretation) {
        (Some(k), Some(label)) => {
            let _ = writeln!(out, "kappa: {} ({label})", fmt3(Some(k)));
        }
        _ => out.push_str("kappa: undefined\n"),
    }
    if let Some(b) = &report.bootstrap {
        let _ = writeln!(
            out,
            "{:.0}% interval: [{}, {}] ({} of {} replicates, {} undefined, seed {})",
            b.confidence * 100.0,
            fmt3(Some(b.lower)),
            fmt3(Some(b.upper)),
            b.replicates_used,
            b.replicates_requested,
            b.replicates_degenerate,
            b.seed
        );
    }
    out
}
