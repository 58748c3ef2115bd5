//! Ideals of space curve germs: the intersection lemma
//! `(a, b) ∩ (c, d) = (ac, bc, d)` with its hypotheses checked, the
//! base-locus ideals of the multiplicity-structure families, a linear
//! algebra intersection oracle, and seeded generic surface equations.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Echelon, SparseVec};
use crate::parse::{parse_tuple, ParseError};
use crate::rational::Rational;
use crate::recognizer::tjurina::{colengths, to_sparse};
use crate::series::{Monomial, Series};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdealError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("ideal has a zero generator")]
    ZeroGenerator,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An ideal of `k[[x,y,z]]` given by generators known modulo `m^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalIdeal {
    gens: Vec<Series>,
    order: u32,
}

impl LocalIdeal {
    pub fn new(gens: Vec<Series>) -> Result<Self, IdealError> {
        if gens.iter().any(Series::is_zero) {
            return Err(IdealError::ZeroGenerator);
        }
        let order = gens
            .iter()
            .map(Series::order)
            .min()
            .unwrap_or(crate::series::DEFAULT_ORDER);
        Ok(LocalIdeal { gens, order })
    }

    /// Parses `"(e1, e2, ...)"`.
    pub fn parse(text: &str, order: u32) -> Result<Self, IdealError> {
        LocalIdeal::new(parse_tuple(text)?.iter().map(|e| e.lower(order)).collect())
    }

    pub fn gens(&self) -> &[Series] {
        &self.gens
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree bound used by default for hypothesis checks.
    pub fn default_degree(&self) -> u32 {
        2 * self
            .gens
            .iter()
            .filter_map(Series::max_degree)
            .max()
            .unwrap_or(0)
            + 4
    }

    /// The span of `I + m^(D+1)` inside polynomials of degree `<= D`.
    pub fn span(&self, max_degree: u32) -> TruncatedSpan {
        let d = max_degree.min(self.order.saturating_sub(1));
        let mut ech = Echelon::new();
        for g in &self.gens {
            let Some(o) = g.ord() else { continue };
            if o > d {
                continue;
            }
            for mono in Monomial::up_to_degree(d - o) {
                ech.insert(to_sparse(&g.mul_monomial(&mono).with_order(d + 1), d));
            }
        }
        TruncatedSpan { max_degree: d, ech }
    }
}

impl fmt::Display for LocalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A subspace of `k[[x,y,z]] / m^(D+1)` in echelon form.
#[derive(Debug, Clone)]
pub struct TruncatedSpan {
    max_degree: u32,
    ech: Echelon,
}

impl TruncatedSpan {
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn contains(&self, f: &Series) -> bool {
        self.ech.contains(&to_sparse(f, self.max_degree))
    }

    /// Image modulo `m^(d+1)`.
    pub fn project(&self, d: u32) -> TruncatedSpan {
        let d = d.min(self.max_degree);
        let cut = Monomial::count_below(d + 1);
        let mut ech = Echelon::new();
        for row in self.ech.rows() {
            ech.insert(row.range(..cut).map(|(k, v)| (*k, v.clone())).collect());
        }
        TruncatedSpan { max_degree: d, ech }
    }

    /// Intersection by the Zassenhaus construction.
    pub fn intersect(&self, other: &TruncatedSpan) -> TruncatedSpan {
        let d = self.max_degree.min(other.max_degree);
        let (a, b) = (self.project(d), other.project(d));
        let offset = Monomial::count_below(d + 1);
        let mut ech = Echelon::new();
        for row in a.ech.rows() {
            let mut v: SparseVec = row.clone();
            v.extend(row.iter().map(|(k, c)| (k + offset, c.clone())));
            ech.insert(v);
        }
        for row in b.ech.rows() {
            ech.insert(row.clone());
        }
        let mut out = Echelon::new();
        for row in ech.rows() {
            if row.keys().next().is_some_and(|&k| k >= offset) {
                out.insert(row.iter().map(|(k, c)| (k - offset, c.clone())).collect());
            }
        }
        TruncatedSpan {
            max_degree: d,
            ech: out,
        }
    }

    /// Equality of the images modulo `m^(d+1)`.
    pub fn equal_up_to(&self, other: &TruncatedSpan, d: u32) -> bool {
        let (a, b) = (self.project(d), other.project(d));
        a.dim() == b.dim() && b.ech.rows().all(|r| a.ech.contains(r))
    }

    /// Basis vectors as polynomials.
    pub fn basis(&self) -> Vec<Series> {
        self.ech
            .rows()
            .map(|r| {
                Series::from_terms(
                    r.iter()
                        .map(|(k, c)| (monomial_of_index(*k, self.max_degree), c.clone())),
                    self.max_degree + 1,
                )
            })
            .collect()
    }
}

fn monomial_of_index(idx: usize, max_degree: u32) -> Monomial {
    Monomial::up_to_degree(max_degree)
        .find(|m| m.index() == idx)
        .expect("index within degree bound")
}

/// `f ∈ I + m^(D+1)`.
pub fn membership(f: &Series, ideal: &LocalIdeal, max_degree: u32) -> bool {
    ideal.span(max_degree).contains(f)
}

/// `(I + m^(D+1)) ∩ (J + m^(D+1))` modulo `m^(D+1)`.
pub fn intersect_bruteforce(i: &LocalIdeal, j: &LocalIdeal, max_degree: u32) -> TruncatedSpan {
    i.span(max_degree).intersect(&j.span(max_degree))
}

/// Whether `(gens)` has finite colength, decided by a colength plateau up to
/// degree `D`. In the regular ring `k[[x,y,z]]`, three elements form a
/// regular sequence exactly when they generate an ideal of finite colength.
pub fn has_finite_colength(gens: &[Series], max_degree: u32) -> bool {
    let order = gens.iter().map(Series::order).min().unwrap_or(0);
    let d = max_degree.min(order.saturating_sub(1));
    let tau = colengths(gens, d);
    tau.windows(2).any(|w| w[0] == w[1])
}

/// `(a, b) ∩ (c, d) = (ac, bc, d)`, after checking `d ∈ (a, b)` up to degree
/// `D` and that `a, c, d` is a regular sequence, up to degree
/// `max(D, 2 * maxdeg + 4)`.
pub fn intersect_cm(
    a: &Series,
    b: &Series,
    c: &Series,
    d: &Series,
    max_degree: u32,
) -> Result<LocalIdeal, IdealError> {
    let ab = LocalIdeal::new(vec![a.clone(), b.clone()])?;
    if !membership(d, &ab, max_degree) {
        return Err(IdealError::HypothesisViolated("d is not in (a, b)".into()));
    }
    let acd = [a.clone(), c.clone(), d.clone()];
    let top = acd.iter().filter_map(Series::max_degree).max().unwrap_or(0);
    if !has_finite_colength(&acd, max_degree.max(2 * top + 4)) {
        return Err(IdealError::HypothesisViolated(
            "a, c, d is not a regular sequence".into(),
        ));
    }
    LocalIdeal::new(vec![a * c, b * c, d.clone()])
}

/// Parameters of the base-locus families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum ScenarioIdealParams {
    /// Two multiple curves in transverse smooth surfaces, multiplicities `m <= n`.
    NoTangency { m: u32, n: u32 },
    /// The second curve is tangent to the first surface to order `q > 1`.
    MixedTangency { m: u32, n: u32, q: u32 },
    /// Multiplicity `m` structure whose `Z_(m-1)` has embedding dimension two.
    Spine { m: u32, q: u32 },
    /// `Z_(m-2)` of embedding dimension two, first normal form.
    ThickSpineA { m: u32, q: u32, w: u32 },
    /// `Z_(m-2)` of embedding dimension two, second normal form; `f = z^w`
    /// or `f = 0`.
    ThickSpineB {
        m: u32,
        q: u32,
        #[serde(default)]
        w: u32,
        #[serde(default)]
        f_zero: bool,
    },
}

/// Which of the three mixed tangency ideals applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MixedCase {
    /// `m <= q`
    A,
    /// `q < m < qn`
    B,
    /// `m >= qn`
    C,
}

pub fn mixed_case(m: u32, n: u32, q: u32) -> MixedCase {
    if m <= q {
        MixedCase::A
    } else if m < q * n {
        MixedCase::B
    } else {
        MixedCase::C
    }
}

impl ScenarioIdealParams {
    pub fn validate(&self) -> Result<(), IdealError> {
        let bad = |s: &str| Err(IdealError::InvalidParameters(s.into()));
        match *self {
            Self::NoTangency { m, n } if m == 0 || m > n => bad("need 1 <= m <= n"),
            Self::MixedTangency { m, n, q } if m == 0 || n == 0 || q < 2 => {
                bad("need m, n >= 1 and q >= 2")
            }
            Self::Spine { m, q } if m < 3 || q == 0 => bad("need m >= 3 and q >= 1"),
            Self::ThickSpineA { m, q, .. } if m < 4 || q == 0 => bad("need m >= 4 and q >= 1"),
            Self::ThickSpineB { m, q, w, f_zero } if m < 4 || q == 0 || (!f_zero && w == 0) => {
                bad("need m >= 4, q >= 1 and w >= 1 unless f = 0")
            }
            _ => Ok(()),
        }
    }
}

fn mono(i: u32, j: u32, k: u32, order: u32) -> Series {
    Series::monomial(Monomial::new(i, j, k), Rational::ONE, order)
}

/// The constituent ideals `I_(Z_1)`, `I_(Z_2)` of the two-curve families.
pub fn constituent_ideals(p: &ScenarioIdealParams, order: u32) -> Option<(LocalIdeal, LocalIdeal)> {
    let mk = |g: Vec<Series>| LocalIdeal::new(g).expect("nonzero generators");
    match *p {
        ScenarioIdealParams::NoTangency { m, n } => Some((
            mk(vec![mono(1, 0, 0, order), mono(0, 0, m, order)]),
            mk(vec![mono(0, 1, 0, order), mono(0, 0, n, order)]),
        )),
        ScenarioIdealParams::MixedTangency { m, n, q } => Some((
            mk(vec![
                &mono(1, 0, 0, order) - &mono(0, 0, q, order),
                mono(0, 0, m, order),
            ]),
            mk(vec![mono(0, 1, 0, order), mono(n, 0, 0, order)]),
        )),
        _ => None,
    }
}

/// The local ideal of `Z` for each family.
pub fn base_locus_ideal(p: &ScenarioIdealParams, order: u32) -> Result<LocalIdeal, IdealError> {
    p.validate()?;
    let mo = |i, j, k| mono(i, j, k, order);
    let gens = match *p {
        ScenarioIdealParams::NoTangency { m, n } => vec![mo(1, 1, 0), mo(0, 1, m), mo(0, 0, n)],
        ScenarioIdealParams::MixedTangency { m, n, q } => {
            let xq = &mo(1, 0, 0) - &mo(0, 0, q);
            match mixed_case(m, n, q) {
                MixedCase::A => vec![mo(1, 1, 0), mo(0, 1, m), mo(n, 0, 0)],
                MixedCase::B => vec![&mo(0, 1, 0) * &xq, mo(0, 1, m), mo(n, 0, 0)],
                MixedCase::C => vec![&mo(0, 1, 0) * &xq, mo(0, 1, m), mo(n, 0, m - q * n)],
            }
        }
        ScenarioIdealParams::Spine { m, q } => {
            vec![mo(2, 0, 0), mo(1, 1, 0), &mo(1, 0, q) - &mo(0, m - 1, 0)]
        }
        ScenarioIdealParams::ThickSpineA { m, q, w } => {
            let inner = &mo(1, 0, q) - &mo(0, m - 2, 0);
            vec![
                mo(2, 0, 0),
                mo(1, 2, 0),
                &mo(1, 1, q) - &mo(0, m - 1, 0),
                &mo(1, 1, 0) - &(&mo(0, 0, w) * &inner),
            ]
        }
        ScenarioIdealParams::ThickSpineB { m, q, w, f_zero } => {
            let inner = &mo(1, 0, q) - &mo(0, m - 2, 0);
            let third = if f_zero {
                -&inner
            } else {
                &mo(1, 1, w) - &inner
            };
            vec![mo(2, 0, 0), mo(1, 2, 0), third]
        }
    };
    LocalIdeal::new(gens)
}

/// The ideal of `Z` itself. It differs from [`base_locus_ideal`] only in
/// the mixed tangency case `m > qn`, where `x^n (x - z^q)` lies in both
/// constituents but not in the three listed generators.
pub fn corrected_base_locus_ideal(
    p: &ScenarioIdealParams,
    order: u32,
) -> Result<LocalIdeal, IdealError> {
    let base = base_locus_ideal(p, order)?;
    match *p {
        ScenarioIdealParams::MixedTangency { m, n, q } if m > q * n => {
            let mut gens = base.gens().to_vec();
            gens.push(&mono(n, 0, 0, order) * &(&mono(1, 0, 0, order) - &mono(0, 0, q, order)));
            LocalIdeal::new(gens)
        }
        _ => Ok(base),
    }
}

/// `F = sum u_i g_i` with seeded units `u_i`: a constant in `[-9, 9] \ {0}`
/// plus a tail of degree at most two with coefficients in `[-9, 9]`.
pub fn generic_surface_equation(ideal: &LocalIdeal, seed: u64) -> Series {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = ideal.order();
    let mut f = Series::zero(order);
    for g in ideal.gens() {
        let mut c0 = 0;
        while c0 == 0 {
            c0 = rng.gen_range(-9..=9);
        }
        let mut unit = Series::constant(Rational::from_integer(c0), order);
        for m in Monomial::up_to_degree(2).skip(1) {
            unit.add_term(m, Rational::from_integer(rng.gen_range(-9..=9)));
        }
        f = &f + &(&unit * g);
    }
    f
}

/// `F = sum g_i`.
pub fn sum_of_generators(ideal: &LocalIdeal) -> Series {
    ideal
        .gens()
        .iter()
        .fold(Series::zero(ideal.order()), |acc, g| &acc + g)
}
