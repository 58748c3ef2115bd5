//! Recognition of `A_n` surface singularities from a truncated equation.
//!
//! The pipeline normalizes the quadratic part, clears mixed terms with a
//! unit, and then alternates the coordinate steps `Y = y + f_1(z)` and
//! `X = x + g_1(z)`. At each stage `mu = min(ord h, m)` with
//! `m = min_j ord(f_1^j g_j)`; a nonzero coefficient of `z^mu` in the
//! updated `h` proves an `A_(mu-1)` point.

pub mod corank2;
pub mod prepared;
pub mod quadratic;
pub mod tjurina;

use std::fmt;
use std::sync::OnceLock;

use serde_json::json;
use thiserror::Error;

use crate::rational::Rational;
use crate::series::{factor_hyperbolic, CoordChange, Monomial, Series, SeriesError, Var};
use crate::uni::Uni;

pub use corank2::corank2_classify;
pub use prepared::{induct_step, prepare, Frame, PreparedForm, StepInfo};
pub use quadratic::{normalize_quadratic, QuadraticNormalization, QuadraticOutcome};
pub use tjurina::{tjurina, tjurina_along_curve, tjurina_echelon, Tjurina, TjurinaError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("the zero series does not define a surface")]
    ZeroSeries,
    #[error("not a double point: {0}")]
    NotDoublePoint(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// An `A_n` point.
    A(u32),
    /// At least `A_n`: the equation is consistent with `A_k` for every
    /// `k >= n` up to the truncation, including the case that `F` factors.
    AAtLeast(u32),
    E6,
    /// Not a rational double point.
    NotRdp,
    /// The quadratic part splits only over a quadratic extension.
    NeedsExtension,
    /// Outside the scope of this tool (D types, E7, E8, ...).
    Undetermined(String),
}

impl Verdict {
    /// The index `n` of an `A_n` verdict.
    pub fn a_index(&self) -> Option<u32> {
        match self {
            Verdict::A(n) => Some(*n),
            _ => None,
        }
    }

    /// Order of the local class group, when the verdict determines it.
    pub fn class_group_order(&self) -> Option<u32> {
        match self {
            Verdict::A(n) => Some(n + 1),
            Verdict::E6 => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::A(n) => write!(f, "A_{n}"),
            Verdict::AAtLeast(n) => write!(f, "A_>={n}"),
            Verdict::E6 => write!(f, "E_6"),
            Verdict::NotRdp => write!(f, "NotRDP"),
            Verdict::NeedsExtension => write!(f, "NeedsExtension"),
            Verdict::Undetermined(why) => write!(f, "Undetermined ({why})"),
        }
    }
}

/// The change of coordinates found by recognition, kept in factored form.
///
/// Write `(x_L, y_L, z_L)` for the linear coordinates and `(u, v)` for the
/// form coordinates `x_L + A(z_L)`, `y_L + B(z_L)` (in swapped order when
/// the final step left them swapped). The remaining form
/// `uv + sum u^i f_i + sum v^j g_j` factors as `(u + a)(v + b)`, and the
/// normal coordinates are `X = u + a`, `Y = v + b`, `Z = z_L`. Then
/// `X Y + H(Z) = W * F`, where `W` is [`NormalizingChange::unit`].
#[derive(Debug, Clone)]
pub struct NormalizingChange {
    order: u32,
    linear: [[Rational; 3]; 3],
    unit_linear: Series,
    shift: [Uni; 2],
    swapped: bool,
    rest_u: Vec<Uni>,
    rest_v: Vec<Uni>,
    factors: OnceLock<Result<(Series, Series), SeriesError>>,
}

impl NormalizingChange {
    fn from_form(p: &PreparedForm) -> Self {
        NormalizingChange {
            order: p.order,
            linear: p.frame.linear.clone(),
            unit_linear: p.frame.unit.clone(),
            shift: p.frame.shift.clone(),
            swapped: p.frame.swapped,
            rest_u: p.f.clone(),
            rest_v: p.g.clone(),
            factors: OnceLock::new(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The linear coordinates as series in the input variables.
    fn linear_forms(&self) -> [Series; 3] {
        std::array::from_fn(|r| {
            Series::from_terms(
                Var::ALL
                    .iter()
                    .map(|v| (Monomial::var(*v), self.linear[r][v.index()].clone())),
                self.order,
            )
        })
    }

    /// `(u, v, z_L)` as series in the input variables.
    fn form_coords(&self) -> [Series; 3] {
        let [lx, ly, lz] = self.linear_forms();
        let n = self.order;
        let zero = Series::zero(n);
        let lift = |a: &Uni| Series::from_uni(a, Var::Z, n).compose(&zero, &zero, &lz);
        let xl = &lx + &lift(&self.shift[0]);
        let yl = &ly + &lift(&self.shift[1]);
        if self.swapped {
            [yl, xl, lz]
        } else {
            [xl, yl, lz]
        }
    }

    /// `uv + rest` modulo `m^order`.
    fn hyperbolic_part(&self, order: u32) -> Series {
        let mut p = Series::monomial(Monomial::new(1, 1, 0), Rational::ONE, order);
        for (i, c) in self.rest_u.iter().enumerate() {
            for (k, a) in c.coeffs().iter().enumerate() {
                p.add_term(Monomial::new(i as u32 + 1, 0, k as u32), a.clone());
            }
        }
        for (j, c) in self.rest_v.iter().enumerate() {
            for (k, a) in c.coeffs().iter().enumerate() {
                p.add_term(Monomial::new(0, j as u32 + 1, k as u32), a.clone());
            }
        }
        p
    }

    /// The corrections `(a, b)` with `uv + rest = (u + a)(v + b)`.
    pub fn factors(&self) -> Result<&(Series, Series), SeriesError> {
        self.factors
            .get_or_init(|| factor_hyperbolic(&self.hyperbolic_part(self.order)))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// The corrections modulo `m^order`.
    fn factors_to(&self, order: u32) -> Result<(Series, Series), SeriesError> {
        if order >= self.order || self.factors.get().is_some() {
            let (a, b) = self.factors()?;
            return Ok((
                a.with_order(order.min(self.order)),
                b.with_order(order.min(self.order)),
            ));
        }
        factor_hyperbolic(&self.hyperbolic_part(order))
    }

    /// The unit `W` with `X Y + H(Z) = W * F`, in the input variables.
    pub fn unit(&self) -> Series {
        let [lx, ly, lz] = self.linear_forms();
        self.unit_linear.compose(&lx, &ly, &lz)
    }

    /// The normal coordinates `(X, Y, Z)` as series in the input variables.
    pub fn to_coord_change(&self) -> Result<CoordChange, SeriesError> {
        let (a, b) = self.factors()?;
        let [u, v, z] = self.form_coords();
        let x = &u + &a.compose(&u, &v, &z);
        let y = &v + &b.compose(&u, &v, &z);
        CoordChange::new([x, y, z])
    }

    /// Pushes a parametrized curve `t -> (x(t), y(t), z(t))` into the
    /// normal coordinates.
    pub fn apply_to_curve(&self, param: &[Uni; 3]) -> Result<[Uni; 3], SeriesError> {
        let prec = param
            .iter()
            .map(Uni::prec)
            .min()
            .unwrap_or(0)
            .min(self.order as usize);
        let lin: [Uni; 3] = std::array::from_fn(|r| {
            let mut acc = Uni::zero(prec);
            for c in 0..3 {
                acc = &acc + &param[c].truncate(prec).scale(&self.linear[r][c]);
            }
            acc
        });
        let xl = &lin[0] + &self.shift[0].truncate(prec).compose(&lin[2]);
        let yl = &lin[1] + &self.shift[1].truncate(prec).compose(&lin[2]);
        let (u, v) = if self.swapped { (yl, xl) } else { (xl, yl) };
        let z = lin[2].clone();
        let (a, b) = self.factors_to(prec as u32)?;
        let pt = [u.clone(), v.clone(), z.clone()];
        let x = &u + &a.eval_uni(&pt);
        let y = &v + &b.eval_uni(&pt);
        Ok([x, y, z])
    }
}

/// The normal form `XY + H(Z)` together with the change producing it.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub normal_form: Series,
    pub change: NormalizingChange,
}

impl Normalization {
    /// Checks `normal_form(X, Y, Z) = W * F` modulo `m^k`, `k` the order of
    /// the change.
    pub fn verify(&self, f: &Series) -> Result<bool, SeriesError> {
        let phi = self.change.to_coord_change()?;
        let lhs = self.normal_form.substitute(&phi)?;
        let rhs = &self.change.unit() * &f.with_order(self.change.order());
        Ok(lhs == rhs)
    }
}

#[derive(Debug, Clone)]
pub struct SingularityReport {
    pub verdict: Verdict,
    /// Truncation order of the analysed equation.
    pub order: u32,
    pub mu: Option<u32>,
    pub delta_mu: Option<Rational>,
    /// Number of coordinate steps taken after preparation.
    pub steps: usize,
    /// Steps taken before `delta(mu)` was found nonzero.
    pub verdict_steps: usize,
    pub change_log: Vec<String>,
    pub normalization: Option<Normalization>,
}

impl SingularityReport {
    fn bare(verdict: Verdict, order: u32, log: Vec<String>) -> Self {
        SingularityReport {
            verdict,
            order,
            mu: None,
            delta_mu: None,
            steps: 0,
            verdict_steps: 0,
            change_log: log,
            normalization: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "verdict": self.verdict.to_string(),
            "n": self.verdict.a_index(),
            "mu": self.mu,
            "delta_mu": self.delta_mu.as_ref().map(ToString::to_string),
            "normal_form": self.normalization.as_ref().map(|n| n.normal_form.to_string()),
            "change_log": self.change_log,
            "order": self.order,
            "steps": self.steps,
            "verdict_steps": self.verdict_steps,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict);
        if let Some(mu) = self.mu {
            out.push_str(&format!("mu: {mu}\n"));
        }
        if let Some(d) = &self.delta_mu {
            out.push_str(&format!("delta_mu: {d}\n"));
        }
        if let Some(n) = &self.normalization {
            out.push_str(&format!("normal_form: {}\n", n.normal_form));
        }
        out.push_str(&format!(
            "order: {}\nsteps: {} (verdict after {})\n",
            self.order, self.steps, self.verdict_steps
        ));
        for line in &self.change_log {
            out.push_str(&format!("change: {line}\n"));
        }
        out
    }
}

/// Recognizes the singularity of `F` at the origin.
pub fn recognize(f: &Series) -> Result<SingularityReport, RecognizeError> {
    let n = f.order();
    let qn = normalize_quadratic(f)?;
    match qn.outcome {
        QuadraticOutcome::RankThree => {
            let mut r =
                SingularityReport::bare(Verdict::A(1), n, vec!["quadratic part has rank 3".into()]);
            r.mu = Some(2);
            Ok(r)
        }
        QuadraticOutcome::NeedsExtension => Ok(SingularityReport::bare(
            Verdict::NeedsExtension,
            n,
            vec!["quadratic part splits only over a quadratic extension".into()],
        )),
        QuadraticOutcome::Corank2 => corank2_classify(f),
        QuadraticOutcome::XYForm => {
            // An A_n verdict found modulo m^k is exact, so try small
            // truncations first.
            let mut k = FIRST_ORDER.min(n);
            loop {
                let images = qn.change.images().clone().map(|s| s.with_order(k));
                let mut r = recognize_xy(&f.with_order(k), &CoordChange::new(images)?)?;
                if k == n || matches!(r.verdict, Verdict::A(_)) {
                    r.order = n;
                    return Ok(r);
                }
                k = (2 * k).min(n);
            }
        }
    }
}

/// First truncation order tried on the xy route.
const FIRST_ORDER: u32 = 8;

fn recognize_xy(f: &Series, linear: &CoordChange) -> Result<SingularityReport, RecognizeError> {
    let n = f.order();
    let nn = n as usize;
    let g = f.substitute(linear)?;
    let mut frame = Frame::identity(n);
    let m = linear.linear_part();
    frame.linear = quadratic::inverse3(&m)
        .ok_or_else(|| RecognizeError::Internal("singular linear change".into()))?;
    if *linear != CoordChange::identity(n) {
        let names = ["x", "y", "z"];
        let desc: Vec<String> = (0..3)
            .map(|r| format!("{} -> {}", names[r], linear.images()[r]))
            .collect();
        frame.log.push(format!("linear: {}", desc.join(", ")));
    }
    let mut p = prepared::prepare_in_frame(&g, frame)?;
    let mut verdict: Option<Verdict> = None;
    let (mut mu, mut delta) = (None, None);
    let mut steps = 0;
    let mut verdict_steps = 0;
    let max_steps = 2 * nn + 8;
    let finished = loop {
        if verdict.is_none() {
            let terms = p.step_terms();
            let mut big_h = p.h.clone();
            for t in &terms {
                big_h = big_h.add_capped(t, nn);
            }
            let prec = big_h.prec();
            let cand = p.h.ord_bound().min(prepared::min_order_bound(&terms));
            if cand >= prec {
                verdict = Some(Verdict::AAtLeast(prec.saturating_sub(1) as u32));
            } else if !big_h.coeff(cand).is_zero() {
                if cand < 2 {
                    return Err(RecognizeError::Internal(format!("mu = {cand} below 2")));
                }
                verdict = Some(Verdict::A(cand as u32 - 1));
                verdict_steps = steps;
                mu = Some(cand as u32);
                delta = Some(big_h.coeff(cand));
                // A_n is (n+1)-determined; the rest of the normalization
                // only needs to see z^(mu+1).
                p = p.truncated(cand as u32 + 2);
            }
        }
        if p.f1().is_zero() {
            break true;
        }
        if steps >= max_steps {
            break false;
        }
        p = induct_step(&p)?.0;
        steps += 1;
    };
    let verdict = verdict
        .ok_or_else(|| RecognizeError::Internal("no verdict within the step limit".into()))?;
    let normalization = finished.then(|| {
        let mut nf = Series::monomial(Monomial::new(1, 1, 0), Rational::ONE, p.order);
        for (k, c) in p.h.coeffs().iter().enumerate() {
            nf.add_term(Monomial::new(0, 0, k as u32), c.clone());
        }
        Normalization {
            normal_form: nf,
            change: NormalizingChange::from_form(&p),
        }
    });
    Ok(SingularityReport {
        verdict,
        order: n,
        mu,
        delta_mu: delta,
        steps,
        verdict_steps,
        change_log: p.frame.log.clone(),
        normalization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn verdict(text: &str) -> Verdict {
        recognize(&parse_series(text, 32).unwrap()).unwrap().verdict
    }

    #[test]
    fn worked_examples() {
        assert_eq!(verdict("x*y + x*z^2 + y^2*z - z^6"), Verdict::A(4));
        assert_eq!(
            verdict("x*y + x*z^4 + y^2*z^6 + y^3*z^2 + y^4*z^25 + x^2*z"),
            Verdict::A(20)
        );
        assert_eq!(verdict("x*y - z^3"), Verdict::A(2));
        assert_eq!(verdict("x*y - y*z^2 - x^3"), Verdict::A(5));
    }

    #[test]
    fn a4_example_witnesses() {
        let r = recognize(&parse_series("x*y + x*z^2 + y^2*z - z^6", 32).unwrap()).unwrap();
        assert_eq!(r.mu, Some(5));
        assert_eq!(r.delta_mu, Some(Rational::ONE));
    }

    #[test]
    fn other_routes() {
        assert_eq!(verdict("x^2 + y^2 + z^2"), Verdict::A(1));
        assert_eq!(verdict("x^2 + y^2 + z^7"), Verdict::NeedsExtension);
        assert_eq!(verdict("x*y"), Verdict::AAtLeast(31));
        assert!(matches!(
            recognize(&parse_series("x", 8).unwrap()),
            Err(RecognizeError::NotDoublePoint(_))
        ));
    }

    #[test]
    fn certificate_holds() {
        for text in [
            "x*y + x*z^2 + y^2*z - z^6",
            "x*y - y*z^2 - x^3",
            "x*y + x^2*y + x*z^3 - z^5",
            "x^2 - y^2 + x*z^2 + z^5",
        ] {
            let f = parse_series(text, 12).unwrap();
            let r = recognize(&f).unwrap();
            let nf = r.normalization.as_ref().expect("normal form");
            assert!(nf.verify(&f).unwrap(), "{text}");
        }
    }
}
