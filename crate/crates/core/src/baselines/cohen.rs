use super::ChanceCorrected;
use crate::data::ClassificationTensor;
use crate::{Error, Result};

/// Cohen's kappa for one category: two raters' select/not-select decisions
/// over the same subjects.
pub fn cohen_kappa(a: &[bool], b: &[bool]) -> ChanceCorrected {
    assert_eq!(a.len(), b.len(), "raters must judge the same subjects");
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64;
    let pa = a.iter().filter(|&&x| x).count() as f64 / n;
    let pb = b.iter().filter(|&&x| x).count() as f64 / n;
    ChanceCorrected::new(agree / n, pa * pb + (1.0 - pa) * (1.0 - pb))
}

/// Per-category decision columns for the two raters, restricted to subjects
/// both of them rated.
fn columns(tensor: &ClassificationTensor) -> Result<Vec<(Vec<bool>, Vec<bool>)>> {
    if tensor.n_raters() != 2 {
        return Err(Error::NotTwoRaters(tensor.n_raters()));
    }
    let shared: Vec<usize> = (0..tensor.n_subjects())
        .filter(|&i| tensor.participates(i, 0) && tensor.participates(i, 1))
        .collect();
    if shared.is_empty() {
        return Err(Error::NoValidPairs);
    }
    Ok((0..tensor.n_categories())
        .map(|c| {
            let a = shared
                .iter()
                .map(|&i| tensor.is_selected(i, 0, c))
                .collect();
            let b = shared
                .iter()
                .map(|&i| tensor.is_selected(i, 1, c))
                .collect();
            (a, b)
        })
        .collect())
}

/// Unweighted mean of per-category Cohen's kappas; `None` as soon as one of
/// them is undefined.
pub fn averaged_cohen(tensor: &ClassificationTensor) -> Result<Option<f64>> {
    let kappas: Vec<f64> = columns(tensor)?
        .iter()
        .map(|(a, b)| cohen_kappa(a, b).kappa)
        .collect();
    if kappas.iter().any(|k| k.is_nan()) {
        return Ok(None);
    }
    Ok(Some(kappas.iter().sum::<f64>() / kappas.len() as f64))
}

/// Kappa from the mean per-category `Po` and `Pe`.
pub fn pooled_cohen(tensor: &ClassificationTensor) -> Result<ChanceCorrected> {
    let per_category: Vec<ChanceCorrected> = columns(tensor)?
        .iter()
        .map(|(a, b)| cohen_kappa(a, b))
        .collect();
    let n = per_category.len() as f64;
    let po = per_category.iter().map(|r| r.po).sum::<f64>() / n;
    let pe = per_category.iter().map(|r| r.pe).sum::<f64>() / n;
    if pe >= 1.0 {
        return Err(Error::UndefinedKappa);
    }
    Ok(ChanceCorrected::new(po, pe))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{build_tensor, RatingRecord};

    fn tensor(rows: &[(&str, &str, &str)], categories: &[&str]) -> ClassificationTensor {
        let records: Vec<RatingRecord> = rows
            .iter()
            .map(|(s, r, c)| RatingRecord::new(*s, *r, *c))
            .collect();
        let cats: Vec<String> = categories.iter().map(|c| c.to_string()).collect();
        build_tensor(&records, None, Some(&cats)).unwrap()
    }

    #[test]
    fn identical_raters() {
        let a = [true, false, true, false];
        assert_eq!(cohen_kappa(&a, &a).kappa, 1.0);
        let t = tensor(
            &[
                ("s1", "A", "x"),
                ("s1", "B", "x"),
                ("s2", "A", "y"),
                ("s2", "B", "y"),
            ],
            &["x", "y"],
        );
        assert_eq!(averaged_cohen(&t).unwrap(), Some(1.0));
        assert_eq!(pooled_cohen(&t).unwrap().kappa, 1.0);
    }

    #[test]
    fn never_selected_category() {
        let r = cohen_kappa(&[false; 3], &[false; 3]);
        assert!(r.kappa.is_nan());
        let t = tensor(
            &[
                ("s1", "A", "x"),
                ("s1", "B", "x"),
                ("s2", "A", "y"),
                ("s2", "B", "y"),
            ],
            &["x", "y", "unused"],
        );
        assert_eq!(averaged_cohen(&t).unwrap(), None);
        // Pooling stays defined: Po = 1, Pe = (0.5 + 0.5 + 1) / 3.
        let pooled = pooled_cohen(&t).unwrap();
        assert_eq!(pooled.kappa, 1.0);
        assert!((pooled.pe - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn chance_level_table() {
        // 2x2 counts [[1, 1], [1, 1]]: Po = 0.5 = pa*pb + (1-pa)(1-pb).
        let a = [true, true, false, false];
        let b = [true, false, true, false];
        assert_eq!(cohen_kappa(&a, &b).kappa, 0.0);
    }

    #[test]
    fn symmetric_disagreement() {
        // Category x: A=(1,1,0,0) B=(1,0,0,0): Po 3/4, Pe 1/2*1/4+1/2*3/4 = 1/2, kappa 1/2.
        // Category y: A=(0,0,1,1) B=(0,1,1,1): same table mirrored, kappa 1/2.
        let t = tensor(
            &[
                ("s1", "A", "x"),
                ("s1", "B", "x"),
                ("s2", "A", "x"),
                ("s2", "B", "y"),
                ("s3", "A", "y"),
                ("s3", "B", "y"),
                ("s4", "A", "y"),
                ("s4", "B", "y"),
            ],
            &["x", "y"],
        );
        let avg = averaged_cohen(&t).unwrap().unwrap();
        assert!((avg - 0.5).abs() < 1e-15);
        // Pooled: mean Po 3/4, mean Pe 1/2.
        let pooled = pooled_cohen(&t).unwrap();
        assert!((pooled.po - 0.75).abs() < 1e-15 && (pooled.pe - 0.5).abs() < 1e-15);
    }

    #[test]
    fn needs_two_raters() {
        let t = tensor(
            &[("s1", "A", "x"), ("s1", "B", "x"), ("s1", "C", "x")],
            &["x"],
        );
        assert_eq!(averaged_cohen(&t), Err(Error::NotTwoRaters(3)));
        assert_eq!(pooled_cohen(&t), Err(Error::NotTwoRaters(3)));
    }
}
