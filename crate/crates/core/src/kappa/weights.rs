use std::collections::HashMap;

use serde_json::Value;

use crate::{Error, Result};

/// Per-category importance weights `w_c`, in tensor category order.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryConfig {
    weights: Vec<f64>,
    scores: Option<Vec<f64>>,
}

impl CategoryConfig {
    /// Weights must be finite and nonnegative with at least one positive.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight {w} is not a nonnegative number"
            )));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidWeights("no positive weight".into()));
        }
        Ok(Self {
            weights,
            scores: None,
        })
    }

    /// Every category weighs 1.
    pub fn uniform(n_categories: usize) -> Self {
        Self {
            weights: vec![1.0; n_categories],
            scores: None,
        }
    }

    /// Weights derived from partial scores, see [`score_weights`].
    pub fn from_scores(scores: Vec<f64>) -> Result<Self> {
        let weights = score_weights(&scores)?;
        Ok(Self {
            weights,
            scores: Some(scores),
        })
    }

    pub fn weight(&self, category: usize) -> f64 {
        self.weights[category]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scores(&self) -> Option<&[f64]> {
        self.scores.as_deref()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// `w_c = (|score_c| + m) / 2m` with `m = max_k |score_k|`: a category that
/// does not move the score weighs 0.5, the highest-scoring one weighs 1.
pub fn score_weights(scores: &[f64]) -> Result<Vec<f64>> {
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::InvalidWeights(format!("score {s} is not finite")));
    }
    let max = scores.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    if max == 0.0 {
        return Err(Error::AllZeroScores);
    }
    Ok(scores
        .iter()
        .map(|s| (s.abs() + max) / (2.0 * max))
        .collect())
}

fn number_map(value: &Value, what: &str) -> Result<Vec<(String, f64)>> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidWeights(format!("{what} must be an object")))?;
    obj.iter()
        .map(|(k, v)| {
            v.as_f64()
                .map(|n| (k.clone(), n))
                .ok_or_else(|| Error::InvalidWeights(format!("{what} for {k:?} is not a number")))
        })
        .collect()
}

/// Parses `weights.json`: either `{"<category>": weight, ...}` or
/// `{"scores": {"<category>": score, ...}}`. Unlisted categories weigh 1.
pub fn parse_weights(text: &str, categories: &[String]) -> Result<CategoryConfig> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidWeights(e.to_string()))?;
    let index: HashMap<&str, usize> = categories
        .iter()
        .enumerate()
        .map(|(k, c)| (c.as_str(), k))
        .collect();
    let resolve = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownCategory(id.to_owned()))
    };

    let scores = root
        .as_object()
        .and_then(|o| match (o.len(), o.get("scores")) {
            (1, Some(v)) if v.is_object() => Some(v),
            _ => None,
        });
    let mut weights = vec![1.0; categories.len()];
    match scores {
        Some(scores) => {
            let listed = number_map(scores, "score")?;
            let derived = score_weights(&listed.iter().map(|(_, s)| *s).collect::<Vec<_>>())?;
            let mut full_scores = vec![None; categories.len()];
            for ((id, score), w) in listed.iter().zip(derived) {
                let c = resolve(id)?;
                weights[c] = w;
                full_scores[c] = Some(*score);
            }
            let mut config = CategoryConfig::new(weights)?;
            config.scores = full_scores.into_iter().collect();
            Ok(config)
        }
        None => {
            for (id, w) in number_map(&root, "weight")? {
                weights[resolve(&id)?] = w;
            }
            CategoryConfig::new(weights)
        }
    }
}
