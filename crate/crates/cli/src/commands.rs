//! Subcommand implementations. Each returns a JSON report and an exit code.

use rayon::prelude::*;
use serde_json::{json, Value};
use singlocus::catalog::{crosscheck, predict, CrosscheckReport, Manifest, ScenarioConfig, Status};
use singlocus::divisors::{track_curve, CurveIdeal, DivisorError};
use singlocus::ideals::{intersect_bruteforce, intersect_cm, IdealError, LocalIdeal};
use singlocus::lattice::{picard_group, LatticeError, PicardProblem};
use singlocus::parse::{parse_series, ParseError};
use singlocus::recognizer::{recognize, tjurina, RecognizeError, TjurinaError};
use singlocus::{Series, SeriesError};

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::invalid(format!(
            "syntax error at offset {}: {}",
            e.offset, e.message
        ))
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<RecognizeError> for CliError {
    fn from(e: RecognizeError) -> Self {
        let code = if matches!(e, RecognizeError::Internal(_)) {
            EXIT_INTERNAL
        } else {
            EXIT_INVALID
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::invalid(e.to_string())
            }
        }
    )*};
}
invalid_from!(
    IdealError,
    DivisorError,
    LatticeError,
    TjurinaError,
    singlocus::catalog::CatalogError,
    serde_json::Error
);

pub type Outcome = Result<(Value, i32), CliError>;

pub fn recognize_cmd(expr: &str, order: u32) -> Outcome {
    let f = parse_series(expr, order)?;
    let r = recognize(&f)?;
    let mut v = r.to_json();
    v["input"] = json!(f.to_string());
    Ok((v, 0))
}

pub fn tjurina_cmd(expr: &str, order: u32, degree: u32) -> Outcome {
    let f = parse_series(expr, order)?;
    let t = tjurina(&f, degree)?;
    Ok((
        json!({ "tjurina": t.value, "stable_at_degree": t.degree, "degree_bound": degree }),
        0,
    ))
}

pub fn factor_xy_cmd(expr: &str, order: u32) -> Outcome {
    let f = parse_series(expr, order)?;
    let (x, y) = Series::factor_xy(&f)?;
    Ok((
        json!({ "X": x.to_string(), "Y": y.to_string(), "order": order }),
        0,
    ))
}

pub fn root_cmd(expr: &str, n: u32, order: u32) -> Outcome {
    if n == 0 {
        return Err(CliError::invalid("root index must be positive"));
    }
    let u = parse_series(expr, order)?;
    let r = u.nth_root_unit(n)?;
    Ok((json!({ "root": r.to_string(), "n": n, "order": order }), 0))
}

fn pair(text: &str, order: u32) -> Result<[Series; 2], CliError> {
    let i = LocalIdeal::parse(text, order)?;
    match i.gens() {
        [a, b] => Ok([a.clone(), b.clone()]),
        g => Err(CliError::invalid(format!(
            "{text}: expected two generators, found {}",
            g.len()
        ))),
    }
}

pub fn intersect_cmd(first: &str, second: &str, order: u32, degree: u32) -> Outcome {
    let [a, b] = pair(first, order)?;
    let [c, d] = pair(second, order)?;
    let i = intersect_cm(&a, &b, &c, &d, degree)?;
    let brute = intersect_bruteforce(
        &LocalIdeal::new(vec![a, b])?,
        &LocalIdeal::new(vec![c, d])?,
        degree,
    );
    let agrees = i.span(degree).equal_up_to(&brute, degree);
    let v = json!({
        "intersection": i.to_string(),
        "degree": degree,
        "bruteforce_agrees": agrees,
    });
    Ok((v, if agrees { 0 } else { EXIT_INTERNAL }))
}

fn config(text: &str) -> Result<ScenarioConfig, CliError> {
    let c: ScenarioConfig = serde_json::from_str(text)?;
    c.validate()?;
    Ok(c)
}

pub fn predict_cmd(text: &str) -> Outcome {
    let c = config(text)?;
    let p = predict(&c)?;
    Ok((json!({ "config": c, "prediction": p }), 0))
}

fn status_code(reports: &[CrosscheckReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Mismatch) {
        EXIT_MISMATCH
    } else {
        0
    }
}

pub fn crosscheck_cmd(text: &str, seed: u64, order: u32) -> Outcome {
    let c = config(text)?;
    let r = crosscheck(&c, seed, order)?;
    let code = status_code(std::slice::from_ref(&r));
    Ok((serde_json::to_value(&r)?, code))
}

/// Runs every `(config, seed)` job of a manifest in parallel; reports are
/// listed in job order.
pub fn crosscheck_manifest_cmd(source: &str) -> Outcome {
    let manifest = if source == "builtin" {
        Manifest::builtin()
    } else {
        let text = std::fs::read_to_string(source)
            .map_err(|e| CliError::invalid(format!("{source}: {e}")))?;
        Manifest::from_json(&text)?
    };
    let jobs = manifest.jobs();
    let reports = jobs
        .par_iter()
        .map(|(c, s)| crosscheck(c, *s, manifest.order))
        .collect::<Result<Vec<_>, _>>()?;
    let count = |st: Status| reports.iter().filter(|r| r.status == st).count();
    let v = json!({
        "jobs": reports.len(),
        "match": count(Status::Match),
        "partial": count(Status::Partial),
        "mismatch": count(Status::Mismatch),
        "not_applicable": count(Status::NotApplicable),
        "reports": reports,
    });
    Ok((v, status_code(&reports)))
}

pub fn curve_class_cmd(expr: &str, curve: &str, order: u32) -> Outcome {
    let f = parse_series(expr, order)?;
    let c = CurveIdeal::parse(curve, order)?;
    let r = recognize(&f)?;
    let cls = track_curve(&f, &c, &r)?;
    let v = json!({
        "verdict": r.verdict.to_string(),
        "class": cls.residue,
        "signed": cls.signed(),
        "group_order": cls.modulus,
    });
    Ok((v, 0))
}

pub fn picard_cmd(path: &str) -> Outcome {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{path}: {e}")))?;
    let p: PicardProblem = serde_json::from_str(&text)?;
    let pic = picard_group(&p)?;
    // Entries are numbers when they fit in an i64, strings otherwise.
    let entry = |a: &num_bigint::BigInt| {
        i64::try_from(a).map_or_else(|_| json!(a.to_string()), |v| json!(v))
    };
    let rows: Vec<Vec<Value>> = pic
        .hnf()
        .rows()
        .iter()
        .map(|r| r.iter().map(entry).collect())
        .collect();
    let v = json!({
        "basis": p.labels(),
        "hnf": rows,
        "group": pic.describe(&p.labels()),
    });
    Ok((v, 0))
}
