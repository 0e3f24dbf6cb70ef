//! Category availability rules and the possible-classification matrix.
//!
//! A rule gates one category on the *same* rater's selections for the *same*
//! subject, e.g. "item 5 can only be ticked when item 4 was". Rules are
//! evaluated against a rater's final selection vector. For each
//! (subject, category), `s_ic` counts the participating raters for whom the
//! category was available and `j_ic` counts the participating raters
//! regardless of rules.
//!
//! The JSON syntax is a top-level array of
//! `{"category": id, "requires": <pred>}` where `<pred>` is one of `true`,
//! `{"selected": id}`, `{"all": [..]}`, `{"any": [..]}` or `{"not": <pred>}`.
//! Categories without an entry are always available.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde_json::Value;

use crate::data::{AgreementTable, ClassificationTensor, RaterCounts};
use crate::{Error, Result};

/// Boolean condition over one rater's selections. `K` names a category:
/// `String` ids as parsed, `usize` indices once validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate<K = String> {
    Always,
    Selected(K),
    All(Vec<Predicate<K>>),
    Any(Vec<Predicate<K>>),
    Not(Box<Predicate<K>>),
}

impl<K> Predicate<K> {
    pub fn eval(&self, selected: &impl Fn(&K) -> bool) -> bool {
        match self {
            Predicate::Always => true,
            Predicate::Selected(k) => selected(k),
            Predicate::All(ps) => ps.iter().all(|p| p.eval(selected)),
            Predicate::Any(ps) => ps.iter().any(|p| p.eval(selected)),
            Predicate::Not(p) => !p.eval(selected),
        }
    }

    /// Every category the predicate mentions.
    pub fn references(&self) -> Vec<&K> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a K>) {
        match self {
            Predicate::Always => {}
            Predicate::Selected(k) => out.push(k),
            Predicate::All(ps) | Predicate::Any(ps) => ps.iter().for_each(|p| p.collect_refs(out)),
            Predicate::Not(p) => p.collect_refs(out),
        }
    }

    fn try_map<L>(&self, f: &mut impl FnMut(&K) -> Result<L>) -> Result<Predicate<L>> {
        Ok(match self {
            Predicate::Always => Predicate::Always,
            Predicate::Selected(k) => Predicate::Selected(f(k)?),
            Predicate::All(ps) => {
                Predicate::All(ps.iter().map(|p| p.try_map(f)).collect::<Result<_>>()?)
            }
            Predicate::Any(ps) => {
                Predicate::Any(ps.iter().map(|p| p.try_map(f)).collect::<Result<_>>()?)
            }
            Predicate::Not(p) => Predicate::Not(Box::new(p.try_map(f)?)),
        })
    }
}

impl<K: fmt::Display> fmt::Display for Predicate<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, ps: &[Predicate<K>]| {
            write!(f, "{name}(")?;
            for (k, p) in ps.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")
        };
        match self {
            Predicate::Always => write!(f, "ALWAYS"),
            Predicate::Selected(k) => write!(f, "SELECTED({k})"),
            Predicate::All(ps) => list(f, "ALL", ps),
            Predicate::Any(ps) => list(f, "ANY", ps),
            Predicate::Not(p) => write!(f, "NOT({p})"),
        }
    }
}

/// Evaluates a validated predicate on one rater's selection vector.
pub fn eval_availability(predicate: &Predicate<usize>, selection: &[bool]) -> bool {
    predicate.eval(&|&c| selection[c])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityRule {
    pub category: String,
    pub requires: Predicate<String>,
}

fn parse_predicate(value: &Value, path: &str) -> Result<Predicate<String>> {
    let malformed = |message: String| Error::MalformedPredicate {
        path: path.to_owned(),
        message,
    };
    match value {
        Value::Bool(true) => Ok(Predicate::Always),
        Value::Object(map) if map.len() == 1 => {
            let (key, inner) = map.iter().next().unwrap();
            let child = format!("{path}.{key}");
            match key.as_str() {
                "selected" => match inner {
                    Value::String(id) if !id.is_empty() => Ok(Predicate::Selected(id.clone())),
                    _ => Err(malformed("`selected` takes a category id".into())),
                },
                "all" | "any" => {
                    let items = inner
                        .as_array()
                        .ok_or_else(|| malformed(format!("`{key}` takes an array")))?;
                    let ps = items
                        .iter()
                        .enumerate()
                        .map(|(k, v)| parse_predicate(v, &format!("{child}[{k}]")))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(if key == "all" {
                        Predicate::All(ps)
                    } else {
                        Predicate::Any(ps)
                    })
                }
                "not" => Ok(Predicate::Not(Box::new(parse_predicate(inner, &child)?))),
                other => Err(malformed(format!("unknown operator `{other}`"))),
            }
        }
        other => Err(malformed(format!(
            "expected `true` or a one-key object, found {other}"
        ))),
    }
}

/// Parses `hierarchy.json`. References are resolved by [`validate_rules`].
pub fn parse_hierarchy(text: &str) -> Result<Vec<AvailabilityRule>> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::MalformedPredicate {
        path: "$".into(),
        message: e.to_string(),
    })?;
    let items = root.as_array().ok_or_else(|| Error::MalformedPredicate {
        path: "$".into(),
        message: "expected a top-level array".into(),
    })?;
    let mut seen = HashSet::new();
    let mut rules = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        let path = format!("$[{k}]");
        let malformed = |message: &str| Error::MalformedPredicate {
            path: path.clone(),
            message: message.into(),
        };
        let obj = item
            .as_object()
            .ok_or_else(|| malformed("expected an object"))?;
        if let Some(extra) = obj.keys().find(|k| *k != "category" && *k != "requires") {
            return Err(malformed(&format!("unexpected key `{extra}`")));
        }
        let category = obj
            .get("category")
            .and_then(Value::as_str)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| malformed("missing `category`"))?;
        if !seen.insert(category.to_owned()) {
            return Err(malformed(&format!("second rule for {category:?}")));
        }
        let requires = obj
            .get("requires")
            .ok_or_else(|| malformed("missing `requires`"))?;
        rules.push(AvailabilityRule {
            category: category.to_owned(),
            requires: parse_predicate(requires, &format!("{path}.requires"))?,
        });
    }
    Ok(rules)
}

/// Validated rules, one predicate per category in tensor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    categories: Vec<String>,
    predicates: Vec<Predicate<usize>>,
}

impl Hierarchy {
    /// Every category always available.
    pub fn flat(categories: &[String]) -> Self {
        Self {
            categories: categories.to_vec(),
            predicates: vec![Predicate::Always; categories.len()],
        }
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn predicate(&self, category: usize) -> &Predicate<usize> {
        &self.predicates[category]
    }
}

/// Resolves rule references against `categories` and rejects cycles in the
/// reference graph (including a rule that mentions its own category).
pub fn validate_rules(rules: &[AvailabilityRule], categories: &[String]) -> Result<Hierarchy> {
    let index: HashMap<&str, usize> = categories
        .iter()
        .enumerate()
        .map(|(k, c)| (c.as_str(), k))
        .collect();
    let mut predicates = vec![Predicate::Always; categories.len()];
    for rule in rules {
        let &c = index
            .get(rule.category.as_str())
            .ok_or_else(|| Error::UnknownCategory(rule.category.clone()))?;
        predicates[c] = rule.requires.try_map(&mut |id: &String| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownCategoryReference {
                    category: rule.category.clone(),
                    reference: id.clone(),
                })
        })?;
    }

    // Depth-first search for a back edge; the grey stack gives the cycle.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let edges: Vec<Vec<usize>> = predicates
        .iter()
        .map(|p| p.references().into_iter().copied().collect())
        .collect();
    let mut marks = vec![Mark::White; categories.len()];
    for root in 0..categories.len() {
        if marks[root] != Mark::White {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        marks[root] = Mark::Grey;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&child) = edges[node].get(*next) {
                *next += 1;
                match marks[child] {
                    Mark::White => {
                        marks[child] = Mark::Grey;
                        stack.push((child, 0));
                    }
                    Mark::Grey => {
                        let start = stack.iter().position(|&(n, _)| n == child).unwrap();
                        let mut cycle: Vec<String> = stack[start..]
                            .iter()
                            .map(|&(n, _)| categories[n].clone())
                            .collect();
                        cycle.push(categories[child].clone());
                        return Err(Error::CyclicDependency(cycle));
                    }
                    Mark::Black => {}
                }
            } else {
                marks[node] = Mark::Black;
                stack.pop();
            }
        }
    }

    Ok(Hierarchy {
        categories: categories.to_vec(),
        predicates,
    })
}

/// `s_ic` (raters for whom `c` was available) and `j_ic` (raters who rated
/// subject `i` at all), subject-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibleMatrix {
    n_subjects: usize,
    n_categories: usize,
    possible: Vec<u32>,
    opportunities: Vec<u32>,
}

impl PossibleMatrix {
    pub fn new(
        n_subjects: usize,
        n_categories: usize,
        possible: Vec<u32>,
        opportunities: Vec<u32>,
    ) -> Result<Self> {
        if possible.len() != n_subjects * n_categories || opportunities.len() != possible.len() {
            return Err(Error::InvalidTensor(
                "possible matrix has the wrong size".into(),
            ));
        }
        if let Some((&s, &j)) = possible.iter().zip(&opportunities).find(|(s, j)| s > j) {
            return Err(Error::InvalidCounts {
                selected: s,
                possible: j,
            });
        }
        Ok(Self {
            n_subjects,
            n_categories,
            possible,
            opportunities,
        })
    }

    pub fn n_subjects(&self) -> usize {
        self.n_subjects
    }

    pub fn n_categories(&self) -> usize {
        self.n_categories
    }

    pub fn possible(&self, subject: usize, category: usize) -> u32 {
        self.possible[subject * self.n_categories + category]
    }

    pub fn opportunities(&self, subject: usize, category: usize) -> u32 {
        self.opportunities[subject * self.n_categories + category]
    }

    /// `s_·c`
    pub fn possible_column(&self, category: usize) -> Vec<u32> {
        (0..self.n_subjects)
            .map(|i| self.possible(i, category))
            .collect()
    }

    /// `j_·c`
    pub fn opportunity_column(&self, category: usize) -> Vec<u32> {
        (0..self.n_subjects)
            .map(|i| self.opportunities(i, category))
            .collect()
    }

    /// Combines with a tally into a table whose rater counts are `j_ic`.
    pub fn merge(&self, table: &AgreementTable) -> Result<AgreementTable> {
        let counts = (0..table.n_subjects())
            .flat_map(|i| table.row(i).to_vec())
            .collect();
        AgreementTable::new(
            self.n_subjects,
            self.n_categories,
            counts,
            RaterCounts::PerCell(self.opportunities.clone()),
        )
    }
}

/// Counts available raters per (subject, category). Fails when a rater
/// selected a category its own other selections made unavailable.
pub fn compute_possible(
    tensor: &ClassificationTensor,
    hierarchy: &Hierarchy,
) -> Result<PossibleMatrix> {
    let nc = tensor.n_categories();
    if hierarchy.categories() != tensor.categories() {
        return Err(Error::InvalidTensor(
            "hierarchy was validated against a different category list".into(),
        ));
    }
    let ni = tensor.n_subjects();
    let mut possible = vec![0u32; ni * nc];
    let mut opportunities = vec![0u32; ni * nc];
    for i in 0..ni {
        for j in tensor.participating_raters(i) {
            let selection = tensor.selection(i, j);
            for c in 0..nc {
                opportunities[i * nc + c] += 1;
                if eval_availability(hierarchy.predicate(c), selection) {
                    possible[i * nc + c] += 1;
                } else if selection[c] {
                    return Err(Error::HierarchyViolation {
                        subject: tensor.subjects()[i].clone(),
                        rater: tensor.raters()[j].clone(),
                        category: tensor.categories()[c].clone(),
                    });
                }
            }
        }
    }
    PossibleMatrix::new(ni, nc, possible, opportunities)
}
