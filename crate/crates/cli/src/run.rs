use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use kappax::baselines::{
    averaged_cohen, build_rankings, icc_kappa, mezzich_kappa, parse_rankings, pooled_cohen,
    rank_kappa, ChanceCorrected, RankingSet,
};
use kappax::bootstrap::{bootstrap_ci, BootstrapConfig};
use kappax::data::{
    build_tensor, parse_category_list, parse_ratings, parse_roster, tally, validate,
    ClassificationTensor,
};
use kappax::hierarchy::{parse_hierarchy, validate_rules, Hierarchy};
use kappax::kappa::{fleiss_kappa, generalized_kappa, parse_weights, CategoryConfig};
use kappax::Error;

use crate::input::{in_file, load, load_optional};
use crate::report::{category_rows, to_json, to_table, Inputs, Options, Outcome, Report, SCHEMA};
use crate::{Format, Method, RunArgs};

/// Everything needed to (re)compute a report.
#[derive(Debug, Clone)]
pub struct Request {
    pub method: Method,
    pub ratings: PathBuf,
    pub roster: Option<PathBuf>,
    pub hierarchy: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub categories: Option<PathBuf>,
    pub bootstrap: Option<usize>,
    pub seed: u64,
    pub confidence: f64,
}

impl Request {
    fn from_args(method: Method, args: &RunArgs) -> Self {
        Request {
            method,
            ratings: args.ratings.clone(),
            roster: args.roster.clone(),
            hierarchy: args.hierarchy.clone(),
            weights: args.weights.clone(),
            categories: args.categories.clone(),
            bootstrap: args.bootstrap,
            seed: args.seed,
            confidence: args.confidence,
        }
    }
}

/// Exit status for a failed run: 3 when the overall kappa is undefined,
/// 2 for anything wrong with the inputs or options.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    let undefined = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<Error>(), Some(Error::UndefinedKappa)));
    if undefined {
        3
    } else {
        2
    }
}

pub fn run(method: Method, args: &RunArgs) -> Result<ExitCode> {
    let report = evaluate(&Request::from_args(method, args), true)?;
    match args.format {
        Format::Table => print!("{}", to_table(&report)),
        Format::Json => print!("{}", to_json(&report)),
    }
    Ok(if report.result.kappa.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

/// The data a method works on.
enum Data {
    Tensor(ClassificationTensor),
    Rankings(RankingSet),
}

impl Data {
    fn tensor(&self) -> &ClassificationTensor {
        match self {
            Data::Tensor(t) => t,
            Data::Rankings(r) => r.tensor(),
        }
    }
}

fn is_rankings_file(text: &str) -> bool {
    text.trim_start_matches('\u{feff}')
        .lines()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|header| header.split(',').any(|f| f.trim() == "rank_group"))
}

/// Fleiss' kappa needs exactly one selection per participating rater.
fn check_exclusive(t: &ClassificationTensor) -> Result<()> {
    for i in 0..t.n_subjects() {
        for j in t.participating_raters(i) {
            let picked = t.selection(i, j).iter().filter(|&&x| x).count();
            if picked != 1 {
                let err = Error::NotMutuallyExclusive(t.subjects()[i].clone());
                return Err(anyhow::Error::new(err).context(format!(
                    "fleiss needs one category per rater; rater {} selected {picked}",
                    t.raters()[j]
                )));
            }
        }
    }
    Ok(())
}

fn cc_outcome(t: &ClassificationTensor, r: ChanceCorrected) -> Outcome {
    let mut outcome = Outcome::bare(t.n_subjects(), t.n_raters(), t.n_categories(), r.kappa);
    outcome.po = Some(r.po);
    outcome.pe = Some(r.pe);
    outcome
}

/// The method's overall value on `data`.
fn scalar(
    method: Method,
    data: &Data,
    hierarchy: Option<&Hierarchy>,
    weights: &CategoryConfig,
) -> kappax::Result<f64> {
    let t = data.tensor();
    Ok(match method {
        Method::Generalized => generalized_kappa(t, hierarchy, weights)?
            .overall
            .ok_or(Error::UndefinedKappa)?,
        Method::Fleiss => fleiss_kappa(&tally(t))?,
        Method::CohenAveraged => averaged_cohen(t)?.ok_or(Error::UndefinedKappa)?,
        Method::CohenPooled => pooled_cohen(t)?.kappa,
        Method::Mezzich => mezzich_kappa(t)?.kappa,
        Method::Icc => icc_kappa(t)?.kappa,
        Method::Rank => match data {
            Data::Rankings(r) => rank_kappa(r)?.kappa,
            Data::Tensor(t) => rank_kappa(&RankingSet::from_tensor(t))?.kappa,
        },
    })
}

fn resample(data: &Data, indices: &[usize]) -> Data {
    match data {
        Data::Tensor(t) => Data::Tensor(t.resample(indices)),
        Data::Rankings(r) => Data::Rankings(r.resample(indices)),
    }
}

/// Loads the inputs of `req`, computes the method and, when asked, the
/// bootstrap interval. `warn` prints data diagnostics to stderr.
pub fn evaluate(req: &Request, warn: bool) -> Result<Report> {
    let method = req.method;
    if method != Method::Generalized {
        if req.hierarchy.is_some() {
            bail!("--hierarchy is only valid with the generalized method");
        }
        if req.weights.is_some() {
            bail!("--weights is only valid with the generalized method");
        }
    }

    let ratings = load(&req.ratings)?;
    let roster_file = load_optional(req.roster.as_ref())?;
    let hierarchy_file = load_optional(req.hierarchy.as_ref())?;
    let weights_file = load_optional(req.weights.as_ref())?;
    let categories_file = load_optional(req.categories.as_ref())?;

    let roster = match &roster_file {
        Some(f) => Some(in_file(f, parse_roster(&f.text))?),
        None => None,
    };
    let declared = categories_file
        .as_ref()
        .map(|f| parse_category_list(&f.text));
    let data = if method == Method::Rank && is_rankings_file(&ratings.text) {
        let records = in_file(&ratings, parse_rankings(&ratings.text))?;
        Data::Rankings(in_file(
            &ratings,
            build_rankings(&records, roster.as_deref(), declared.as_deref()),
        )?)
    } else {
        let records = in_file(&ratings, parse_ratings(&ratings.text))?;
        Data::Tensor(in_file(
            &ratings,
            build_tensor(&records, roster.as_deref(), declared.as_deref()),
        )?)
    };
    let t = data.tensor();

    let hierarchy = match &hierarchy_file {
        Some(f) => {
            let rules = in_file(f, parse_hierarchy(&f.text))?;
            Some(in_file(f, validate_rules(&rules, t.categories()))?)
        }
        None => None,
    };
    let weights = match &weights_file {
        Some(f) => in_file(f, parse_weights(&f.text, t.categories()))?,
        None => CategoryConfig::uniform(t.n_categories()),
    };

    if warn {
        for diagnostic in validate(t, &tally(t)) {
            eprintln!("warning: {diagnostic}");
        }
    }

    let (ni, nj, nc) = (t.n_subjects(), t.n_raters(), t.n_categories());
    let outcome = match method {
        Method::Generalized => {
            let report = generalized_kappa(t, hierarchy.as_ref(), &weights)?;
            let mut outcome = Outcome::bare(ni, nj, nc, report.overall.unwrap_or(f64::NAN));
            outcome.numerator = Some(report.numerator);
            outcome.denominator = Some(report.denominator);
            outcome.per_category = category_rows(&report);
            outcome
        }
        Method::Fleiss => {
            check_exclusive(t)?;
            Outcome::bare(ni, nj, nc, fleiss_kappa(&tally(t))?)
        }
        Method::CohenAveraged => Outcome::bare(ni, nj, nc, averaged_cohen(t)?.unwrap_or(f64::NAN)),
        Method::CohenPooled => cc_outcome(t, pooled_cohen(t)?),
        Method::Mezzich => cc_outcome(t, mezzich_kappa(t)?),
        Method::Icc => cc_outcome(t, icc_kappa(t)?),
        Method::Rank => {
            let r = match &data {
                Data::Rankings(r) => rank_kappa(r)?,
                Data::Tensor(t) => rank_kappa(&RankingSet::from_tensor(t))?,
            };
            cc_outcome(t, r)
        }
    };

    let bootstrap = match req.bootstrap {
        Some(replicates) if outcome.kappa.is_some() => {
            let config = BootstrapConfig {
                replicates,
                seed: req.seed,
                confidence: req.confidence,
                parallel: true,
            };
            let statistic = |indices: &[usize]| {
                scalar(
                    method,
                    &resample(&data, indices),
                    hierarchy.as_ref(),
                    &weights,
                )
            };
            Some(bootstrap_ci(ni, statistic, &config)?.into())
        }
        _ => None,
    };

    Ok(Report {
        schema: SCHEMA,
        method,
        inputs: Inputs {
            ratings: ratings.record,
            roster: roster_file.map(|f| f.record),
            hierarchy: hierarchy_file.map(|f| f.record),
            weights: weights_file.map(|f| f.record),
            categories: categories_file.map(|f| f.record),
        },
        options: Options {
            bootstrap: req.bootstrap,
            seed: req.seed,
            confidence: req.confidence,
        },
        result: outcome,
        bootstrap,
    })
}
