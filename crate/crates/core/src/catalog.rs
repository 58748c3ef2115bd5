//! Predictions for every configuration family (singularity type and local
//! class images of the incident curves), and a harness that checks them on
//! seeded generic surfaces through the recognizer and curve tracking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisors::{track_curve, CurveIdeal};
use crate::ideals::{
    corrected_base_locus_ideal, generic_surface_equation, mixed_case, IdealError, LocalIdeal,
    MixedCase, ScenarioIdealParams,
};
use crate::lattice::FixedPointSpec;
use crate::linalg::Echelon;
use crate::recognizer::quadratic::{normalize_quadratic, quadratic_matrix};
use crate::recognizer::{recognize, tjurina, QuadraticOutcome, Verdict};
use crate::series::{Monomial, Series, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("local class group is not cyclic")]
    NotCyclic,
    #[error("manifest: {0}")]
    Manifest(String),
}

/// A configuration of curves through a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum ScenarioConfig {
    NoTangency {
        m: u32,
        n: u32,
    },
    MixedTangency {
        m: u32,
        n: u32,
        q: u32,
    },
    Spine {
        m: u32,
        q: u32,
    },
    ThickSpineA {
        m: u32,
        q: u32,
        w: u32,
    },
    ThickSpineB {
        m: u32,
        q: u32,
        #[serde(default)]
        w: u32,
        #[serde(default)]
        f_zero: bool,
    },
    /// `r` lines through the point in general position.
    GeneralLines {
        r: u32,
    },
    /// `r` coplanar lines plus one line off the plane.
    Pinwheel {
        r: u32,
    },
}

impl ScenarioConfig {
    pub fn ideal_params(&self) -> Option<ScenarioIdealParams> {
        use ScenarioIdealParams as P;
        Some(match *self {
            Self::NoTangency { m, n } => P::NoTangency { m, n },
            Self::MixedTangency { m, n, q } => P::MixedTangency { m, n, q },
            Self::Spine { m, q } => P::Spine { m, q },
            Self::ThickSpineA { m, q, w } => P::ThickSpineA { m, q, w },
            Self::ThickSpineB { m, q, w, f_zero } => P::ThickSpineB { m, q, w, f_zero },
            Self::GeneralLines { .. } | Self::Pinwheel { .. } => return None,
        })
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        match (self, self.ideal_params()) {
            (_, Some(p)) => Ok(p.validate()?),
            (Self::GeneralLines { r } | Self::Pinwheel { r }, None) if *r < 2 => {
                Err(CatalogError::InvalidParameters("need r >= 2".into()))
            }
            _ => Ok(()),
        }
    }

    /// Incident curves as `(label, ideal)`; ideals are in the coordinates of
    /// [`config_ideal`], and `None` when no local ideal is modelled.
    pub fn curves(&self) -> Vec<(String, Option<String>)> {
        let c = |l: &str, i: &str| (l.to_string(), Some(i.to_string()));
        match *self {
            Self::NoTangency { .. } => vec![c("C1", "(x, z)"), c("C2", "(y, z)")],
            Self::MixedTangency { .. } => vec![c("C1", "(x, z)"), c("C2", "(x, y)")],
            Self::Spine { .. } | Self::ThickSpineA { .. } | Self::ThickSpineB { .. } => {
                vec![c("C", "(x, y)")]
            }
            Self::GeneralLines { r: 2 } => vec![c("L1", "(x, y)"), c("L2", "(x, z)")],
            Self::GeneralLines { r: 3 } => {
                vec![c("L1", "(y, z)"), c("L2", "(x, z)"), c("L3", "(x, y)")]
            }
            Self::GeneralLines { r } => (1..=r).map(|i| (format!("L{i}"), None)).collect(),
            Self::Pinwheel { r } => std::iter::once(c("L0", "(x, y)"))
                .chain((1..=r).map(|i| (format!("L{i}"), Some(format!("(z, x - {i}*y)")))))
                .collect(),
        }
    }
}

/// The local ideal of the configuration, when it is modelled.
pub fn config_ideal(c: &ScenarioConfig, order: u32) -> Result<Option<LocalIdeal>, CatalogError> {
    c.validate()?;
    if let Some(p) = c.ideal_params() {
        return Ok(Some(corrected_base_locus_ideal(&p, order)?));
    }
    let text = match *c {
        ScenarioConfig::GeneralLines { r: 2 } => "(x, y*z)".to_string(),
        ScenarioConfig::GeneralLines { r: 3 } => "(x*y, y*z, x*z)".to_string(),
        ScenarioConfig::Pinwheel { r } => {
            let p: Vec<String> = (1..=r).map(|i| format!("(x - {i}*y)")).collect();
            format!("(x*z, y*z, {})", p.join("*"))
        }
        _ => return Ok(None),
    };
    Ok(Some(LocalIdeal::parse(&text, order)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularityKind {
    Smooth,
    A(u32),
    E6,
    /// Not a rational double point.
    NotRdp,
}

impl SingularityKind {
    pub fn matches(&self, v: &Verdict) -> bool {
        match (self, v) {
            (SingularityKind::A(n), Verdict::A(k)) => n == k,
            (SingularityKind::E6, Verdict::E6) => true,
            (SingularityKind::NotRdp, Verdict::NotRdp) => true,
            _ => false,
        }
    }
}

impl std::fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularityKind::Smooth => write!(f, "smooth"),
            SingularityKind::A(n) => write!(f, "A_{n}"),
            SingularityKind::E6 => write!(f, "E_6"),
            SingularityKind::NotRdp => write!(f, "NotRDP"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveImage {
    pub label: String,
    /// Residue in the local class group, when stated.
    pub residue: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub kind: SingularityKind,
    /// Order of the local class group; `None` when it is not finite cyclic.
    pub group_order: Option<u32>,
    pub images: Vec<CurveImage>,
    /// Order of the single incident curve in the local class group.
    pub curve_order: Option<u32>,
    pub notes: Vec<String>,
}

fn prediction(
    kind: SingularityKind,
    group: Option<u32>,
    labels: &[(String, Option<String>)],
    res: &[Option<u32>],
) -> Prediction {
    let images = labels
        .iter()
        .zip(res)
        .map(|((l, _), r)| CurveImage {
            label: l.clone(),
            residue: match (r, group) {
                (Some(r), Some(g)) => Some(r % g),
                (r, _) => *r,
            },
        })
        .collect();
    Prediction {
        kind,
        group_order: group,
        images,
        curve_order: None,
        notes: Vec::new(),
    }
}

/// The stated singularity type and class images for a configuration.
pub fn predict(c: &ScenarioConfig) -> Result<Prediction, CatalogError> {
    c.validate()?;
    let labels = c.curves();
    let a = |n: u32| SingularityKind::A(n);
    let p = match *c {
        ScenarioConfig::NoTangency { n, .. } => {
            prediction(a(n - 1), Some(n), &labels, &[Some(1), Some(n - 1)])
        }
        ScenarioConfig::MixedTangency { m, n, q } => match mixed_case(m, n, q) {
            MixedCase::A => prediction(
                a(m * n - 1),
                Some(m * n),
                &labels,
                &[Some(1), Some(m * n - m)],
            ),
            MixedCase::B => {
                let mut p = prediction(
                    a(q * n - 1),
                    Some(q * n),
                    &labels,
                    &[Some(1), Some(q * n - q)],
                );
                p.notes.push(
                    "type A_(qn-1); the statement's A_qn disagrees with its own group Z/qn".into(),
                );
                p
            }
            MixedCase::C => {
                let mut p = prediction(a(m - 1), Some(m), &labels, &[Some(1), Some(m - q)]);
                if m > q * n {
                    p.notes.push("the stated ideal omits x^n (x - z^q) when m > qn; surfaces use the full intersection".into());
                }
                p
            }
        },
        ScenarioConfig::Spine { m, q } => {
            prediction(a((m - 1) * q - 1), Some((m - 1) * q), &labels, &[Some(q)])
        }
        ScenarioConfig::ThickSpineA { m, q, w } => {
            let g = (m - 2) * (q + w) + w;
            prediction(a(g - 1), Some(g), &labels, &[Some(q + w)])
        }
        ScenarioConfig::ThickSpineB { m, q, .. } => {
            let mut p = match (m, q) {
                (4, q) => prediction(a(2 * q - 1), Some(2 * q), &labels, &[Some(q)]),
                (m, 1) => prediction(a(m - 3), Some(m - 2), &labels, &[Some(1)]),
                (5, 2) => prediction(SingularityKind::E6, Some(3), &labels, &[Some(1)]),
                _ => prediction(SingularityKind::NotRdp, None, &labels, &[None]),
            };
            p.curve_order = Some(m - 2);
            p
        }
        ScenarioConfig::GeneralLines { r: 2 } => prediction(
            SingularityKind::Smooth,
            Some(1),
            &labels,
            &[Some(0), Some(0)],
        ),
        ScenarioConfig::GeneralLines { r } if r <= 5 => {
            prediction(a(1), Some(2), &labels, &vec![Some(1); r as usize])
        }
        ScenarioConfig::GeneralLines { r } => {
            let mut p = prediction(
                SingularityKind::NotRdp,
                None,
                &labels,
                &vec![None; r as usize],
            );
            p.notes
                .push("non-rational point; the line images satisfy no relation".into());
            p
        }
        ScenarioConfig::Pinwheel { r } => {
            let mut res = vec![Some(1)];
            res.extend(std::iter::repeat_n(Some(r - 1), r as usize));
            prediction(a(r - 1), Some(r), &labels, &res)
        }
    };
    Ok(p)
}

/// The local restriction map of a configuration, for the Picard formula.
pub fn kernel_for(c: &ScenarioConfig) -> Result<FixedPointSpec, CatalogError> {
    let p = predict(c)?;
    if matches!(c, ScenarioConfig::GeneralLines { r } if *r > 5) {
        return Ok(FixedPointSpec {
            modulus: None,
            free_image: true,
            images: p.images.iter().map(|i| (i.label.clone(), 1)).collect(),
        });
    }
    let g = p.group_order.ok_or(CatalogError::NotCyclic)?;
    let images = p
        .images
        .iter()
        .map(|i| {
            i.residue
                .map(|r| (i.label.clone(), i64::from(r)))
                .ok_or(CatalogError::NotCyclic)
        })
        .collect::<Result<_, _>>()?;
    Ok(FixedPointSpec {
        modulus: Some(i64::from(g)),
        free_image: false,
        images,
    })
}

/// Number of generators of the ideal `(x, y^d)` on `F = 0`, that is
/// `dim (x, y^d) / (m (x, y^d) + (F))`, for `d = 1, ..., m - 2`.
pub fn cartier_dimensions(f: &Series, m: u32) -> Vec<usize> {
    let order = f.order();
    let deg = m + 4;
    (1..=m.saturating_sub(2))
        .map(|d| {
            let x = Series::x(order);
            let yd = Series::monomial(Monomial::new(0, d, 0), crate::Rational::ONE, order);
            let j = LocalIdeal::new(vec![x.clone(), yd.clone()]).expect("nonzero");
            let mut small = vec![f.clone()];
            for v in Var::ALL {
                let t = Series::var(v, order);
                small.push(&t * &x);
                small.push(&t * &yd);
            }
            let mj = LocalIdeal::new(small).expect("nonzero");
            j.span(deg).dim() - mj.span(deg).dim()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Match,
    Mismatch,
    /// Kind agrees but some stated data could not be checked.
    Partial,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObservedImage {
    pub label: String,
    pub residue: Option<u32>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub config: ScenarioConfig,
    pub seed: u64,
    /// Seed actually used after skipping equations whose quadratic part
    /// splits only over an extension.
    pub seed_used: u64,
    pub order: u32,
    pub prediction: Prediction,
    pub equation: String,
    pub verdict: String,
    pub kind_match: bool,
    pub images: Vec<ObservedImage>,
    /// `Some(1)` if the images agree as stated, `Some(-1)` if they agree
    /// after the automorphism `u -> -u` of the cyclic group.
    pub orientation: Option<i8>,
    pub images_match: Option<bool>,
    pub tjurina: Option<u32>,
    pub tjurina_match: Option<bool>,
    pub cartier_match: Option<bool>,
    pub status: Status,
    pub notes: Vec<String>,
}

const RESAMPLE_LIMIT: u64 = 64;

fn resample(seed: u64, k: u64) -> u64 {
    if k == 0 {
        seed
    } else {
        seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

/// Generic equation with a quadratic part that is split over the rationals.
/// Rank of the quadratic part of `f`.
fn quadratic_rank(f: &Series) -> usize {
    let mut ech = Echelon::new();
    for row in quadratic_matrix(f) {
        ech.insert(
            row.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        );
    }
    ech.rank()
}

/// A seeded equation avoiding two non-generic events: a quadratic part of
/// lower rank than the family's generic rank (the maximum over a few
/// samples), and a quadratic part that splits only over an extension.
fn split_equation(ideal: &LocalIdeal, seed: u64) -> (Series, u64) {
    let generic_rank = (0..8)
        .map(|k| quadratic_rank(&generic_surface_equation(ideal, resample(seed, k))))
        .max()
        .unwrap_or(0);
    for k in 0..RESAMPLE_LIMIT {
        let s = resample(seed, k);
        let f = generic_surface_equation(ideal, s);
        if quadratic_rank(&f) < generic_rank {
            continue;
        }
        match normalize_quadratic(&f) {
            Ok(q) if q.outcome == QuadraticOutcome::NeedsExtension => continue,
            _ => return (f, s),
        }
    }
    (generic_surface_equation(ideal, seed), seed)
}

fn images_agree(pred: &[Option<u32>], obs: &[u32], g: u32) -> Option<i8> {
    let same = |sign: i64| {
        pred.iter().zip(obs).all(|(p, &o)| match p {
            Some(p) => (sign * i64::from(*p)).rem_euclid(i64::from(g)) == i64::from(o),
            None => true,
        })
    };
    if same(1) {
        Some(1)
    } else if same(-1) {
        Some(-1)
    } else {
        None
    }
}

/// Checks the prediction for `c` on the seeded generic surface through the
/// configuration, at truncation order `order`.
pub fn crosscheck(
    c: &ScenarioConfig,
    seed: u64,
    order: u32,
) -> Result<CrosscheckReport, CatalogError> {
    let prediction = predict(c)?;
    let mut report = CrosscheckReport {
        config: *c,
        seed,
        seed_used: seed,
        order,
        prediction: prediction.clone(),
        equation: String::new(),
        verdict: String::new(),
        kind_match: false,
        images: Vec::new(),
        orientation: None,
        images_match: None,
        tjurina: None,
        tjurina_match: None,
        cartier_match: None,
        status: Status::NotApplicable,
        notes: Vec::new(),
    };
    let Some(ideal) = config_ideal(c, order)? else {
        report
            .notes
            .push("no local ideal is modelled for this configuration".into());
        return Ok(report);
    };
    let (f, used) = split_equation(&ideal, seed);
    report.seed_used = used;
    report.equation = f.jet(6).to_string();

    if prediction.kind == SingularityKind::Smooth {
        let linear = Var::ALL
            .iter()
            .any(|v| !f.coeff(&Monomial::var(*v)).is_zero());
        report.verdict = if linear {
            "smooth".into()
        } else {
            "singular".into()
        };
        report.kind_match = linear;
        report.status = if linear {
            Status::Match
        } else {
            Status::Mismatch
        };
        return Ok(report);
    }

    let rep = match recognize(&f) {
        Ok(r) => r,
        Err(e) => {
            report.verdict = format!("error: {e}");
            report.status = Status::Mismatch;
            return Ok(report);
        }
    };
    report.verdict = rep.verdict.to_string();
    report.kind_match = prediction.kind.matches(&rep.verdict);

    if let (SingularityKind::A(n), true) = (prediction.kind, report.kind_match) {
        let curves = c.curves();
        let mut obs = Vec::new();
        for (label, text) in &curves {
            let text = text
                .as_deref()
                .expect("modelled configurations list curve ideals");
            let res = CurveIdeal::parse(text, order)
                .map_err(|e| e.to_string())
                .and_then(|ci| track_curve(&f, &ci, &rep).map_err(|e| e.to_string()));
            match res {
                Ok(cls) => {
                    obs.push(cls.residue);
                    report.images.push(ObservedImage {
                        label: label.clone(),
                        residue: Some(cls.residue),
                        error: None,
                    });
                }
                Err(e) => report.images.push(ObservedImage {
                    label: label.clone(),
                    residue: None,
                    error: Some(e),
                }),
            }
        }
        if obs.len() == curves.len() {
            let pred: Vec<Option<u32>> = prediction.images.iter().map(|i| i.residue).collect();
            report.orientation = images_agree(&pred, &obs, n + 1);
            report.images_match = Some(report.orientation.is_some());
        }
        report.tjurina = tjurina(&f, n + 1).ok().map(|t| t.value);
        report.tjurina_match = Some(report.tjurina == Some(n));
    }

    if let (ScenarioConfig::ThickSpineB { m, .. }, Some(ord)) = (c, prediction.curve_order) {
        let dims = cartier_dimensions(&f, *m);
        let ok = dims
            .iter()
            .enumerate()
            .all(|(i, &d)| d == if i + 1 == ord as usize { 1 } else { 2 });
        report.notes.push(format!(
            "generators of (x, y^d) for d = 1..{}: {:?}",
            m - 2,
            dims
        ));
        report.cartier_match = Some(ok);
    }

    let checks = [
        Some(report.kind_match),
        report.images_match,
        report.tjurina_match,
        report.cartier_match,
    ];
    report.status = if checks.contains(&Some(false)) {
        Status::Mismatch
    } else if prediction.images.iter().any(|i| i.residue.is_some()) && report.images_match.is_none()
    {
        Status::Partial
    } else {
        Status::Match
    };
    Ok(report)
}

/// A reproducible list of configurations and seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub order: u32,
    pub seeds: Vec<u64>,
    pub configs: Vec<ScenarioConfig>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        serde_json::from_str(text).map_err(|e| CatalogError::Manifest(e.to_string()))
    }

    /// The built-in parameter grid.
    pub fn builtin() -> Self {
        Manifest::from_json(include_str!("../data/manifest.json"))
            .expect("built-in manifest parses")
    }

    /// All `(config, seed)` jobs.
    pub fn jobs(&self) -> Vec<(ScenarioConfig, u64)> {
        self.configs
            .iter()
            .flat_map(|c| self.seeds.iter().map(move |s| (*c, *s)))
            .collect()
    }
}
