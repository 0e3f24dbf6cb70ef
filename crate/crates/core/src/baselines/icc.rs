use super::ChanceCorrected;
use crate::data::ClassificationTensor;
use crate::{Error, Result};

/// One-way intraclass correlation of binary selection vectors.
///
/// Categories are the groups and the vectors are replicate measurements of
/// each group, so `ρ = (MSB − MSW) / (MSB + (k − 1)·MSW)` with `k` vectors.
/// When both mean squares vanish (every vector empty, or every vector
/// selecting every category) there is no variation to explain and the result
/// is 0. Fewer than two vectors or two categories also give 0.
pub fn icc_subject(vectors: &[&[bool]]) -> f64 {
    let k = vectors.len();
    let n = vectors.first().map_or(0, |v| v.len());
    if k < 2 || n < 2 {
        return 0.0;
    }
    let col_means: Vec<f64> = (0..n)
        .map(|c| vectors.iter().filter(|v| v[c]).count() as f64 / k as f64)
        .collect();
    let grand = col_means.iter().sum::<f64>() / n as f64;
    let ssb = k as f64 * col_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let ssw: f64 = vectors
        .iter()
        .map(|v| {
            v.iter()
                .zip(&col_means)
                .map(|(&x, m)| (f64::from(u8::from(x)) - m).powi(2))
                .sum::<f64>()
        })
        .sum();
    let msb = ssb / (n - 1) as f64;
    let msw = ssw / (n * (k - 1)) as f64;
    let den = msb + (k - 1) as f64 * msw;
    if den == 0.0 {
        0.0
    } else {
        (msb - msw) / den
    }
}

/// `Po` is the mean within-subject correlation over subjects with at least
/// two raters; `Pe` is the correlation of all rated vectors pooled together.
pub fn icc_kappa(tensor: &ClassificationTensor) -> Result<ChanceCorrected> {
    let mut per_subject = Vec::new();
    let mut pooled = Vec::new();
    for i in 0..tensor.n_subjects() {
        let vectors: Vec<&[bool]> = tensor
            .participating_raters(i)
            .map(|j| tensor.selection(i, j))
            .collect();
        if vectors.len() >= 2 {
            per_subject.push(icc_subject(&vectors));
        }
        pooled.extend(vectors);
    }
    if per_subject.is_empty() {
        return Err(Error::NoValidPairs);
    }
    let po = per_subject.iter().sum::<f64>() / per_subject.len() as f64;
    Ok(ChanceCorrected::new(po, icc_subject(&pooled)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{build_tensor, parse_category_list, parse_ratings, parse_roster};
    use crate::fixtures;

    fn bits(rows: &[&str]) -> Vec<Vec<bool>> {
        rows.iter()
            .map(|r| r.bytes().map(|b| b == b'1').collect())
            .collect()
    }

    fn icc(rows: &[&str]) -> f64 {
        let owned = bits(rows);
        let refs: Vec<&[bool]> = owned.iter().map(Vec::as_slice).collect();
        icc_subject(&refs)
    }

    #[test]
    fn identical_vectors_correlate_perfectly() {
        assert_eq!(icc(&["1010", "1010", "1010"]), 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(icc(&["000", "000"]), 0.0);
        assert_eq!(icc(&["111", "111"]), 0.0);
        assert_eq!(icc(&["1", "0"]), 0.0);
        assert_eq!(icc(&["101"]), 0.0);
    }

    #[test]
    fn hand_computed() {
        // Columns means (1, .5, 0), grand .5; SSB = 2·(.25+0+.25) = 1, MSB = .5.
        // SSW = 2·.25 = .5, MSW = .5/3. ρ = (.5 − 1/6) / (.5 + 1/6) = .5.
        assert!((icc(&["110", "100"]) - 0.5).abs() < 1e-15);
        // Disjoint singletons: means (.5,.5), MSB 0, MSW .5 → ρ = −1.
        assert!((icc(&["10", "01"]) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn exam_subjects() {
        let cats = parse_category_list(fixtures::EXAM_CATEGORIES);
        let t = build_tensor(
            &parse_ratings(fixtures::EXAM_RATINGS).unwrap(),
            None,
            Some(&cats),
        )
        .unwrap();
        let per: Vec<f64> = (0..6)
            .map(|i| {
                let v: Vec<&[bool]> = (0..3).map(|j| t.selection(i, j)).collect();
                icc_subject(&v)
            })
            .collect();
        for (got, want) in per.iter().zip([0.7778, 0.0, 0.75, 1.0, 0.0, 0.5385]) {
            assert!((got - want).abs() < 5e-5, "{per:?}");
        }
        let r = icc_kappa(&t).unwrap();
        assert!((r.pe - 0.21245).abs() < 5e-5);
        assert!((r.kappa - 0.38).abs() <= 0.01);
    }

    #[test]
    fn psychiatric() {
        let cats = parse_category_list(fixtures::DSM_CATEGORIES);
        let roster = parse_roster(fixtures::DSM_ROSTER).unwrap();
        let t = build_tensor(
            &parse_ratings(fixtures::DSM_RATINGS).unwrap(),
            Some(&roster),
            Some(&cats),
        )
        .unwrap();
        assert!((icc_kappa(&t).unwrap().kappa - 0.35).abs() <= 0.01);
    }
}
