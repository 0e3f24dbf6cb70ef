use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde_json::Value;

use crate::input::{load, InputFile};
use crate::report::{Report, SCHEMA};
use crate::run::{evaluate, Request};

/// Recorded paths are tried as written, then relative to the report.
fn locate(file: &InputFile, report_dir: &Path) -> Result<PathBuf> {
    let as_written = PathBuf::from(&file.path);
    let path = if as_written.exists() || as_written.is_absolute() {
        as_written
    } else {
        report_dir.join(&as_written)
    };
    let digest = load(&path)?.record.sha256;
    if digest != file.sha256 {
        bail!(
            "{} has changed since the report was written",
            path.display()
        );
    }
    Ok(path)
}

/// Walks two JSON values in parallel, recording every differing leaf.
fn compare(
    path: &str,
    recorded: &Value,
    recomputed: &Value,
    leaves: &mut usize,
    out: &mut Vec<String>,
) {
    match (recorded, recomputed) {
        (Value::Object(a), Value::Object(b)) => {
            for (key, av) in a {
                let bv = b.get(key).unwrap_or(&Value::Null);
                compare(&format!("{path}.{key}"), av, bv, leaves, out);
            }
            for key in b.keys().filter(|k| !a.contains_key(*k)) {
                out.push(format!("{path}.{key}: missing from the report"));
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (k, (av, bv)) in a.iter().zip(b).enumerate() {
                compare(&format!("{path}[{k}]"), av, bv, leaves, out);
            }
        }
        _ => {
            *leaves += 1;
            if recorded != recomputed {
                out.push(format!(
                    "{path}: report has {recorded}, recomputed {recomputed}"
                ));
            }
        }
    }
}

/// The per-category contributions must add up to the reported sums, and the
/// sums must give the reported kappa.
fn check_sums(report: &Report, out: &mut Vec<String>) {
    let r = &report.result;
    let (Some(num), Some(den)) = (r.numerator, r.denominator) else {
        return;
    };
    let sum_num: f64 = r.per_category.iter().map(|c| c.num_contrib).sum();
    let sum_den: f64 = r.per_category.iter().map(|c| c.den_contrib).sum();
    if (sum_num - num).abs() > 1e-12 {
        out.push(format!(
            "num_contrib values add up to {sum_num}, numerator is {num}"
        ));
    }
    if (sum_den - den).abs() > 1e-12 {
        out.push(format!(
            "den_contrib values add up to {sum_den}, denominator is {den}"
        ));
    }
    if let Some(kappa) = r.kappa {
        if (num / den - kappa).abs() > 1e-12 {
            out.push(format!(
                "numerator / denominator = {}, kappa is {kappa}",
                num / den
            ));
        }
    }
}

pub fn verify(path: &Path) -> Result<ExitCode> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let raw: Value =
        serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    if raw.get("schema") != Some(&Value::from(SCHEMA)) {
        bail!("{} is not a schema {SCHEMA} kappax report", path.display());
    }
    let recorded: Report = serde_json::from_value(raw.clone())
        .with_context(|| format!("{} is not a kappax report", path.display()))?;

    let dir = path.parent().unwrap_or(Path::new("."));
    let optional = |f: &Option<InputFile>| f.as_ref().map(|f| locate(f, dir)).transpose();
    let request = Request {
        method: recorded.method,
        ratings: locate(&recorded.inputs.ratings, dir)?,
        roster: optional(&recorded.inputs.roster)?,
        hierarchy: optional(&recorded.inputs.hierarchy)?,
        weights: optional(&recorded.inputs.weights)?,
        categories: optional(&recorded.inputs.categories)?,
        bootstrap: recorded.options.bootstrap,
        seed: recorded.options.seed,
        confidence: recorded.options.confidence,
    };
    let recomputed = serde_json::to_value(evaluate(&request, false)?)?;

    let mut problems = Vec::new();
    let mut leaves = 0;
    for key in ["method", "options", "result", "bootstrap"] {
        let recorded_part = raw.get(key).unwrap_or(&Value::Null);
        compare(
            key,
            recorded_part,
            &recomputed[key],
            &mut leaves,
            &mut problems,
        );
    }
    check_sums(&recorded, &mut problems);

    if problems.is_empty() {
        println!("verified: all {leaves} values match");
        Ok(ExitCode::SUCCESS)
    } else {
        for p in &problems {
            println!("mismatch: {p}");
        }
        println!("{} of {leaves} values differ", problems.len());
        Ok(ExitCode::from(2))
    }
}
