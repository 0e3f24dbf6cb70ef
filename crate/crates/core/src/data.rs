//! Rating data: long-format ingestion, the classification tensor, and the
//! per-(subject, category) agreement table every statistic consumes.
//!
//! A rating file lists selection events only. Whether a missing row means
//! "looked at the subject and did not tick the category" or "never saw the
//! subject" is decided by the roster: a roster pair marks participation, and
//! without a roster every observed rater is assumed to have rated every
//! observed subject.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::{Error, Result};

/// One selection event: `rater` put `subject` into `category`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatingRecord {
    pub subject: String,
    pub rater: String,
    pub category: String,
}

impl RatingRecord {
    pub fn new(
        subject: impl Into<String>,
        rater: impl Into<String>,
        category: impl Into<String>,
    ) -> Self {
        Self {
            subject: subject.into(),
            rater: rater.into(),
            category: category.into(),
        }
    }
}

/// A roster entry: `rater` rated `subject` (possibly selecting nothing).
pub type RosterPair = (String, String);

/// Reads a CSV body with an exact header, returning `(line, fields)` rows.
pub(crate) fn read_rows(text: &str, header: &[&str]) -> Result<Vec<(u64, Vec<String>)>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    if text.trim().is_empty() {
        return Err(Error::EmptyFile);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut rows = Vec::new();
    let mut seen_header = false;
    for result in reader.records() {
        let record = result.map_err(|e| Error::MalformedRow {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if !seen_header {
            let found: Vec<&str> = record.iter().collect();
            if found != header {
                return Err(Error::MalformedRow {
                    line,
                    message: format!(
                        "expected header `{}`, found `{}`",
                        header.join(","),
                        found.join(",")
                    ),
                });
            }
            seen_header = true;
            continue;
        }
        if record.len() != header.len() {
            return Err(Error::MalformedRow {
                line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        if let Some(pos) = record.iter().position(str::is_empty) {
            return Err(Error::MalformedRow {
                line,
                message: format!("empty `{}`", header[pos]),
            });
        }
        rows.push((line, record.iter().map(str::to_owned).collect()));
    }
    Ok(rows)
}

/// Parses `subject,rater,category` selection events. Duplicate triples are
/// rejected rather than merged.
pub fn parse_ratings(text: &str) -> Result<Vec<RatingRecord>> {
    let rows = read_rows(text, &["subject", "rater", "category"])?;
    let mut seen = HashSet::with_capacity(rows.len());
    let mut records = Vec::with_capacity(rows.len());
    for (line, mut fields) in rows {
        let category = fields.pop().unwrap();
        let rater = fields.pop().unwrap();
        let subject = fields.pop().unwrap();
        let record = RatingRecord {
            subject,
            rater,
            category,
        };
        if !seen.insert(record.clone()) {
            return Err(Error::DuplicateRecord {
                line,
                subject: record.subject,
                rater: record.rater,
                category: record.category,
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Parses a `subject,rater` participation roster.
pub fn parse_roster(text: &str) -> Result<Vec<RosterPair>> {
    let rows = read_rows(text, &["subject", "rater"])?;
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }
    let mut seen = HashSet::with_capacity(rows.len());
    let mut pairs = Vec::with_capacity(rows.len());
    for (line, mut fields) in rows {
        let rater = fields.pop().unwrap();
        let subject = fields.pop().unwrap();
        if !seen.insert((subject.clone(), rater.clone())) {
            return Err(Error::DuplicatePair {
                line,
                subject,
                rater,
            });
        }
        pairs.push((subject, rater));
    }
    Ok(pairs)
}

/// One category id per non-blank line, in declaration order.
pub fn parse_category_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

/// Binary selections `x[i][j][c]` plus the participation mask `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationTensor {
    subjects: Vec<String>,
    raters: Vec<String>,
    categories: Vec<String>,
    selections: Vec<bool>,
    participation: Vec<bool>,
}

impl ClassificationTensor {
    /// `selections` is subject-major (`i * J * C + j * C + c`); `participation`
    /// is `i * J + j`.
    pub fn new(
        subjects: Vec<String>,
        raters: Vec<String>,
        categories: Vec<String>,
        selections: Vec<bool>,
        participation: Vec<bool>,
    ) -> Result<Self> {
        let (ni, nj, nc) = (subjects.len(), raters.len(), categories.len());
        if ni == 0 {
            return Err(Error::InvalidTensor("no subjects".into()));
        }
        if nj < 2 {
            return Err(Error::InvalidTensor(format!(
                "at least two raters are required, found {nj}"
            )));
        }
        if nc == 0 {
            return Err(Error::InvalidTensor("no categories".into()));
        }
        if selections.len() != ni * nj * nc || participation.len() != ni * nj {
            return Err(Error::InvalidTensor("dimension mismatch".into()));
        }
        for i in 0..ni {
            for j in 0..nj {
                let cell = &selections[(i * nj + j) * nc..(i * nj + j + 1) * nc];
                if !participation[i * nj + j] && cell.iter().any(|&x| x) {
                    return Err(Error::InvalidTensor(format!(
                        "rater {:?} has selections for subject {:?} without participating",
                        raters[j], subjects[i]
                    )));
                }
            }
        }
        Ok(Self {
            subjects,
            raters,
            categories,
            selections,
            participation,
        })
    }

    pub fn subjects(&self) -> &[String] {
        &self.subjects
    }

    pub fn raters(&self) -> &[String] {
        &self.raters
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn n_subjects(&self) -> usize {
        self.subjects.len()
    }

    pub fn n_raters(&self) -> usize {
        self.raters.len()
    }

    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn participates(&self, subject: usize, rater: usize) -> bool {
        self.participation[subject * self.raters.len() + rater]
    }

    pub fn is_selected(&self, subject: usize, rater: usize, category: usize) -> bool {
        self.selection(subject, rater)[category]
    }

    /// The rater's selection vector for one subject.
    pub fn selection(&self, subject: usize, rater: usize) -> &[bool] {
        let nc = self.categories.len();
        let start = (subject * self.raters.len() + rater) * nc;
        &self.selections[start..start + nc]
    }

    pub fn participating_raters(&self, subject: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.raters.len()).filter(move |&j| self.participates(subject, j))
    }

    /// Number of raters who rated `subject`.
    pub fn raters_for(&self, subject: usize) -> usize {
        self.participating_raters(subject).count()
    }

    pub fn is_complete(&self) -> bool {
        self.participation.iter().all(|&p| p)
    }

    /// A new tensor whose subjects are `indices` drawn from this one, in order
    /// and with repetition. Repeated subjects get a `#k` suffix so ids stay
    /// distinct.
    pub fn resample(&self, indices: &[usize]) -> ClassificationTensor {
        let (nj, nc) = (self.raters.len(), self.categories.len());
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut subjects = Vec::with_capacity(indices.len());
        let mut selections = Vec::with_capacity(indices.len() * nj * nc);
        let mut participation = Vec::with_capacity(indices.len() * nj);
        for &i in indices {
            let k = seen.entry(i).or_insert(0);
            subjects.push(if *k == 0 {
                self.subjects[i].clone()
            } else {
                format!("{}#{}", self.subjects[i], k)
            });
            *k += 1;
            selections.extend_from_slice(&self.selections[i * nj * nc..(i + 1) * nj * nc]);
            participation.extend_from_slice(&self.participation[i * nj..(i + 1) * nj]);
        }
        ClassificationTensor {
            subjects,
            raters: self.raters.clone(),
            categories: self.categories.clone(),
            selections,
            participation,
        }
    }
}

/// Assembles a tensor from selection events.
///
/// Subjects and raters are ordered lexicographically. Categories follow
/// `categories` when given (unused ones are kept as all-zero columns),
/// otherwise lexicographic order. With a roster, participation is exactly the
/// roster; without one, every observed rater rated every observed subject.
pub fn build_tensor(
    records: &[RatingRecord],
    roster: Option<&[RosterPair]>,
    categories: Option<&[String]>,
) -> Result<ClassificationTensor> {
    let category_ids: Vec<String> = match categories {
        Some(declared) => {
            let mut seen = HashSet::new();
            for c in declared {
                if !seen.insert(c.as_str()) {
                    return Err(Error::DuplicateCategory(c.clone()));
                }
            }
            declared.to_vec()
        }
        None => records
            .iter()
            .map(|r| r.category.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    };

    let mut subject_set: BTreeSet<&str> = records.iter().map(|r| r.subject.as_str()).collect();
    let mut rater_set: BTreeSet<&str> = records.iter().map(|r| r.rater.as_str()).collect();
    if let Some(roster) = roster {
        subject_set.extend(roster.iter().map(|(s, _)| s.as_str()));
        rater_set.extend(roster.iter().map(|(_, r)| r.as_str()));
    }
    let subjects: Vec<String> = subject_set.into_iter().map(str::to_owned).collect();
    let raters: Vec<String> = rater_set.into_iter().map(str::to_owned).collect();

    let index = |ids: &[String]| -> HashMap<String, usize> {
        ids.iter()
            .enumerate()
            .map(|(k, id)| (id.clone(), k))
            .collect()
    };
    let (subject_ix, rater_ix, category_ix) =
        (index(&subjects), index(&raters), index(&category_ids));
    let (ni, nj, nc) = (subjects.len(), raters.len(), category_ids.len());

    let participation = match roster {
        Some(roster) => {
            let mut mask = vec![false; ni * nj];
            for (line, (s, r)) in roster.iter().enumerate() {
                let cell = &mut mask[subject_ix[s] * nj + rater_ix[r]];
                if *cell {
                    return Err(Error::DuplicatePair {
                        line: line as u64 + 2,
                        subject: s.clone(),
                        rater: r.clone(),
                    });
                }
                *cell = true;
            }
            mask
        }
        None => vec![true; ni * nj],
    };

    let mut selections = vec![false; ni * nj * nc];
    for (line, record) in records.iter().enumerate() {
        let (i, j) = (subject_ix[&record.subject], rater_ix[&record.rater]);
        if !participation[i * nj + j] {
            return Err(Error::RecordOutsideRoster {
                subject: record.subject.clone(),
                rater: record.rater.clone(),
            });
        }
        let c = *category_ix
            .get(&record.category)
            .ok_or_else(|| Error::UnknownCategory(record.category.clone()))?;
        let cell = &mut selections[(i * nj + j) * nc + c];
        if *cell {
            return Err(Error::DuplicateRecord {
                line: line as u64 + 2,
                subject: record.subject.clone(),
                rater: record.rater.clone(),
                category: record.category.clone(),
            });
        }
        *cell = true;
    }

    ClassificationTensor::new(subjects, raters, category_ids, selections, participation)
}

/// How many raters had the opportunity to select each (subject, category).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RaterCounts {
    /// Every subject was rated by the same number of raters.
    Fixed(u32),
    /// `j_i`: raters per subject.
    PerSubject(Vec<u32>),
    /// `j_ic`, subject-major.
    PerCell(Vec<u32>),
}

/// Counts `x_ic` of raters selecting category `c` for subject `i`, with the
/// matching rater-opportunity counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementTable {
    n_subjects: usize,
    n_categories: usize,
    counts: Vec<u32>,
    rater_counts: RaterCounts,
}

impl AgreementTable {
    /// `counts` is subject-major (`i * C + c`).
    pub fn new(
        n_subjects: usize,
        n_categories: usize,
        counts: Vec<u32>,
        rater_counts: RaterCounts,
    ) -> Result<Self> {
        if counts.len() != n_subjects * n_categories {
            return Err(Error::InvalidTensor(
                "count matrix has the wrong size".into(),
            ));
        }
        match &rater_counts {
            RaterCounts::PerSubject(v) if v.len() != n_subjects => {
                return Err(Error::InvalidTensor(
                    "rater count vector has the wrong size".into(),
                ))
            }
            RaterCounts::PerCell(v) if v.len() != counts.len() => {
                return Err(Error::InvalidTensor(
                    "rater count matrix has the wrong size".into(),
                ))
            }
            _ => {}
        }
        let table = Self {
            n_subjects,
            n_categories,
            counts,
            rater_counts,
        };
        for i in 0..n_subjects {
            for c in 0..n_categories {
                let (x, j) = (table.count(i, c), table.opportunities(i, c));
                if x > j {
                    return Err(Error::InvalidCounts {
                        selected: x,
                        possible: j,
                    });
                }
            }
        }
        Ok(table)
    }

    pub fn n_subjects(&self) -> usize {
        self.n_subjects
    }

    pub fn n_categories(&self) -> usize {
        self.n_categories
    }

    pub fn rater_counts(&self) -> &RaterCounts {
        &self.rater_counts
    }

    pub fn count(&self, subject: usize, category: usize) -> u32 {
        self.counts[subject * self.n_categories + category]
    }

    pub fn opportunities(&self, subject: usize, category: usize) -> u32 {
        match &self.rater_counts {
            RaterCounts::Fixed(j) => *j,
            RaterCounts::PerSubject(v) => v[subject],
            RaterCounts::PerCell(v) => v[subject * self.n_categories + category],
        }
    }

    /// `x_·c`
    pub fn column(&self, category: usize) -> Vec<u32> {
        (0..self.n_subjects)
            .map(|i| self.count(i, category))
            .collect()
    }

    /// `j_·c`
    pub fn opportunity_column(&self, category: usize) -> Vec<u32> {
        (0..self.n_subjects)
            .map(|i| self.opportunities(i, category))
            .collect()
    }

    pub fn row(&self, subject: usize) -> &[u32] {
        &self.counts[subject * self.n_categories..(subject + 1) * self.n_categories]
    }
}

/// Sums selections into `x_ic`. Rater counts are [`RaterCounts::Fixed`] when
/// every subject has the same number of raters, else per subject.
pub fn tally(tensor: &ClassificationTensor) -> AgreementTable {
    let (ni, nj, nc) = (
        tensor.n_subjects(),
        tensor.n_raters(),
        tensor.n_categories(),
    );
    let mut counts = vec![0u32; ni * nc];
    for i in 0..ni {
        for j in 0..nj {
            for (c, &x) in tensor.selection(i, j).iter().enumerate() {
                counts[i * nc + c] += u32::from(x);
            }
        }
    }
    let per_subject: Vec<u32> = (0..ni).map(|i| tensor.raters_for(i) as u32).collect();
    let rater_counts = if per_subject.iter().all(|&j| j == per_subject[0]) {
        RaterCounts::Fixed(per_subject[0])
    } else {
        RaterCounts::PerSubject(per_subject)
    };
    AgreementTable {
        n_subjects: ni,
        n_categories: nc,
        counts,
        rater_counts,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    /// No rater ever selected the category; its partial kappa is NaN.
    NeverSelected {
        category: String,
    },
    /// Fewer than two raters: the subject contributes no rater pairs.
    NoRaterPairs {
        subject: String,
        raters: usize,
    },
    RaterWithoutParticipation {
        rater: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NeverSelected { category } => {
                write!(f, "category {category:?} was never selected")
            }
            Diagnostic::NoRaterPairs { subject, raters } => {
                write!(
                    f,
                    "subject {subject:?} has {raters} rater(s): no rater pairs"
                )
            }
            Diagnostic::RaterWithoutParticipation { rater } => {
                write!(f, "rater {rater:?} rated no subjects")
            }
        }
    }
}

pub fn validate(tensor: &ClassificationTensor, table: &AgreementTable) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (c, id) in tensor.categories().iter().enumerate() {
        if table.column(c).iter().all(|&x| x == 0) {
            out.push(Diagnostic::NeverSelected {
                category: id.clone(),
            });
        }
    }
    for (i, id) in tensor.subjects().iter().enumerate() {
        let raters = tensor.raters_for(i);
        if raters < 2 {
            out.push(Diagnostic::NoRaterPairs {
                subject: id.clone(),
                raters,
            });
        }
    }
    for (j, id) in tensor.raters().iter().enumerate() {
        if !(0..tensor.n_subjects()).any(|i| tensor.participates(i, j)) {
            out.push(Diagnostic::RaterWithoutParticipation { rater: id.clone() });
        }
    }
    out
}

fn write_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("write to Vec");
    for row in rows {
        writer.write_record(&row).expect("write to Vec");
    }
    String::from_utf8(writer.into_inner().expect("flush Vec")).expect("csv output is UTF-8")
}

/// Writes the selection events of `tensor` as `ratings.csv`.
pub fn render_ratings(tensor: &ClassificationTensor) -> String {
    let rows = (0..tensor.n_subjects()).flat_map(move |i| {
        (0..tensor.n_raters()).flat_map(move |j| {
            (0..tensor.n_categories())
                .filter(move |&c| tensor.is_selected(i, j, c))
                .map(move |c| {
                    vec![
                        tensor.subjects()[i].clone(),
                        tensor.raters()[j].clone(),
                        tensor.categories()[c].clone(),
                    ]
                })
        })
    });
    write_csv(&["subject", "rater", "category"], rows)
}

/// Writes the participation mask of `tensor` as `roster.csv`.
pub fn render_roster(tensor: &ClassificationTensor) -> String {
    let rows = (0..tensor.n_subjects()).flat_map(move |i| {
        tensor
            .participating_raters(i)
            .map(move |j| vec![tensor.subjects()[i].clone(), tensor.raters()[j].clone()])
    });
    write_csv(&["subject", "rater"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn exam() -> ClassificationTensor {
        let records = parse_ratings(fixtures::EXAM_RATINGS).unwrap();
        let cats = parse_category_list(fixtures::EXAM_CATEGORIES);
        build_tensor(&records, None, Some(&cats)).unwrap()
    }

    fn dsm() -> ClassificationTensor {
        let records = parse_ratings(fixtures::DSM_RATINGS).unwrap();
        let roster = parse_roster(fixtures::DSM_ROSTER).unwrap();
        let cats = parse_category_list(fixtures::DSM_CATEGORIES);
        build_tensor(&records, Some(&roster), Some(&cats)).unwrap()
    }

    #[test]
    fn single_row() {
        let records = parse_ratings("subject,rater,category\nS1,T1,item1\n").unwrap();
        assert_eq!(records, vec![RatingRecord::new("S1", "T1", "item1")]);
    }

    #[test]
    fn exam_has_one_record_per_tick() {
        // Row totals of the teachers' tick table: 16 + 11 + 10 + 9 + 3.
        assert_eq!(parse_ratings(fixtures::EXAM_RATINGS).unwrap().len(), 49);
    }

    #[test]
    fn duplicate_record_is_rejected() {
        let err = parse_ratings("subject,rater,category\nS1,T1,a\nS1,T1,a\n").unwrap_err();
        assert!(
            matches!(err, Error::DuplicateRecord { line: 3, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn malformed_rows() {
        assert!(matches!(
            parse_ratings("subject,rater,category\nS1,T1\n"),
            Err(Error::MalformedRow { line: 2, .. })
        ));
        assert!(matches!(
            parse_ratings("subject,rater\nS1,T1\n"),
            Err(Error::MalformedRow { line: 1, .. })
        ));
        assert!(matches!(
            parse_ratings("subject,rater,category\nS1,,a\n"),
            Err(Error::MalformedRow { .. })
        ));
        assert_eq!(parse_ratings(""), Err(Error::EmptyFile));
    }

    #[test]
    fn quoted_ids() {
        let records =
            parse_ratings("subject,rater,category\n\"case 1, left\",T1,\"a \"\"b\"\"\"\n").unwrap();
        assert_eq!(records[0].subject, "case 1, left");
        assert_eq!(records[0].category, "a \"b\"");
    }

    #[test]
    fn roster_errors() {
        assert_eq!(parse_roster(""), Err(Error::EmptyFile));
        assert_eq!(parse_roster("subject,rater\n"), Err(Error::EmptyFile));
        assert!(matches!(
            parse_roster("subject,rater\nS1,T1\nS1,T1\n"),
            Err(Error::DuplicatePair { line: 3, .. })
        ));
    }

    #[test]
    fn dsm_rater_counts_follow_roster() {
        let t = dsm();
        let counts: Vec<usize> = (0..t.n_subjects()).map(|i| t.raters_for(i)).collect();
        let mut expected = vec![4; 3];
        expected.extend(vec![3; 18]);
        expected.extend(vec![4; 6]);
        assert_eq!(counts, expected);
        assert_eq!((t.n_subjects(), t.n_categories()), (27, 20));
    }

    #[test]
    fn missing_roster_means_full_participation() {
        let t = exam();
        assert_eq!((t.n_subjects(), t.n_raters(), t.n_categories()), (6, 3, 5));
        assert!(t.is_complete());
        assert_eq!(tally(&t).rater_counts(), &RaterCounts::Fixed(3));
    }

    #[test]
    fn record_outside_roster() {
        let records = vec![RatingRecord::new("S1", "T9", "c1")];
        let roster = vec![
            ("S1".to_string(), "T1".to_string()),
            ("S1".to_string(), "T2".to_string()),
        ];
        assert!(matches!(
            build_tensor(&records, Some(&roster), None),
            Err(Error::RecordOutsideRoster { .. })
        ));
    }

    #[test]
    fn unknown_and_duplicate_declared_categories() {
        let records = vec![
            RatingRecord::new("S1", "T1", "c1"),
            RatingRecord::new("S1", "T2", "c2"),
        ];
        let cats = vec!["c1".to_string()];
        assert_eq!(
            build_tensor(&records, None, Some(&cats)),
            Err(Error::UnknownCategory("c2".into()))
        );
        let cats = vec!["c1".to_string(), "c2".into(), "c1".into()];
        assert_eq!(
            build_tensor(&records, None, Some(&cats)),
            Err(Error::DuplicateCategory("c1".into()))
        );
    }

    #[test]
    fn declared_unused_categories_are_kept() {
        let records = vec![
            RatingRecord::new("S1", "T1", "b"),
            RatingRecord::new("S1", "T2", "b"),
        ];
        let cats = vec!["z".to_string(), "b".into()];
        let t = build_tensor(&records, None, Some(&cats)).unwrap();
        assert_eq!(t.categories(), &["z".to_string(), "b".into()]);
        assert_eq!(tally(&t).column(0), vec![0]);
    }

    #[test]
    fn single_rater_is_rejected() {
        let records = vec![RatingRecord::new("S1", "T1", "a")];
        assert!(matches!(
            build_tensor(&records, None, None),
            Err(Error::InvalidTensor(_))
        ));
    }

    #[test]
    fn exam_item1_counts() {
        let table = tally(&exam());
        assert_eq!(table.column(0), vec![3, 1, 3, 3, 3, 3]);
    }

    #[test]
    fn dsm_category1_counts() {
        let table = tally(&dsm());
        let col = table.column(0);
        let nonzero: Vec<(usize, u32)> = col
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(i, &x)| (i + 1, x))
            .collect();
        assert_eq!(nonzero, vec![(8, 1), (12, 2)]);
        assert!(matches!(table.rater_counts(), RaterCounts::PerSubject(_)));
    }

    #[test]
    fn all_zero_tensor() {
        let t = ClassificationTensor::new(
            vec!["s".into()],
            vec!["a".into(), "b".into()],
            vec!["c".into(), "d".into()],
            vec![false; 4],
            vec![true; 2],
        )
        .unwrap();
        let table = tally(&t);
        assert!((0..2).all(|c| table.column(c) == vec![0]));
    }

    #[test]
    fn diagnostics() {
        let t = dsm();
        let diags = validate(&t, &tally(&t));
        let never: Vec<&str> = diags
            .iter()
            .filter_map(|d| match d {
                Diagnostic::NeverSelected { category } => Some(category.as_str()),
                _ => None,
            })
            .collect();
        assert_eq!(never, vec!["2", "4", "6", "19"]);
        assert_eq!(diags.len(), 4);

        let t = exam();
        assert!(validate(&t, &tally(&t)).is_empty());

        let records = vec![
            RatingRecord::new("S1", "T1", "a"),
            RatingRecord::new("S2", "T2", "a"),
        ];
        let roster: Vec<RosterPair> = vec![
            ("S1".into(), "T1".into()),
            ("S1".into(), "T2".into()),
            ("S2".into(), "T2".into()),
        ];
        let t = build_tensor(&records, Some(&roster), None).unwrap();
        assert_eq!(
            validate(&t, &tally(&t)),
            vec![Diagnostic::NoRaterPairs {
                subject: "S2".into(),
                raters: 1
            }]
        );
    }

    #[test]
    fn agreement_table_rejects_overfull_cells() {
        assert_eq!(
            AgreementTable::new(1, 1, vec![3], RaterCounts::Fixed(2)),
            Err(Error::InvalidCounts {
                selected: 3,
                possible: 2
            })
        );
    }

    #[test]
    fn fixture_round_trip() {
        let t = dsm();
        let records = parse_ratings(&render_ratings(&t)).unwrap();
        let roster = parse_roster(&render_roster(&t)).unwrap();
        let rebuilt = build_tensor(&records, Some(&roster), Some(t.categories())).unwrap();
        assert_eq!(rebuilt, t);
    }

    #[test]
    fn resample_repeats_subjects() {
        let t = exam();
        let r = t.resample(&[1, 1, 4]);
        assert_eq!(
            r.subjects(),
            &["S2".to_string(), "S2#1".into(), "S5".into()]
        );
        assert_eq!(r.selection(1, 0), t.selection(1, 0));
        assert_eq!(r.selection(2, 2), t.selection(4, 2));
    }
}
