//! Truncated power series in `x, y, z` over the rationals.
//!
//! A [`Series`] represents an element of `k[[x,y,z]] / m^N` where `m` is the
//! maximal ideal and `N` is the series' truncation order. Every operation is
//! exact modulo `m^N`; no monomial of total degree `>= N` is ever stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::rational::Rational;
use crate::uni::Uni;

/// Default truncation order.
pub const DEFAULT_ORDER: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(u32, u32),
    #[error("series has zero constant term and is not a unit")]
    ZeroConstantTerm,
    #[error("constant term {0} has no rational {1}-th root")]
    NoRationalRoot(Rational, u32),
    #[error("invalid change of variables: {0}")]
    InvalidChange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// One of the three ambient variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

/// Exponent vector `x^i y^j z^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0, k: 0 };

    pub const fn new(i: u32, j: u32, k: u32) -> Self {
        Monomial { i, j, k }
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Monomial::new(1, 0, 0),
            Var::Y => Monomial::new(0, 1, 0),
            Var::Z => Monomial::new(0, 0, 1),
        }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j + self.k
    }

    pub fn exp(&self, v: Var) -> u32 {
        match v {
            Var::X => self.i,
            Var::Y => self.j,
            Var::Z => self.k,
        }
    }

    pub fn times(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.i + o.i, self.j + o.j, self.k + o.k)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.i <= o.i && self.j <= o.j && self.k <= o.k
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        debug_assert!(o.divides(self));
        Monomial::new(self.i - o.i, self.j - o.j, self.k - o.k)
    }

    /// Position in the graded enumeration of all monomials.
    pub fn index(&self) -> usize {
        let d = self.degree() as usize;
        let s = (self.j + self.k) as usize;
        d * (d + 1) * (d + 2) / 6 + s * (s + 1) / 2 + self.k as usize
    }

    /// Number of monomials of total degree `< n`.
    pub fn count_below(n: u32) -> usize {
        let n = n as usize;
        n * (n + 1) * (n + 2) / 6
    }

    /// All monomials of total degree exactly `d`, in display order.
    pub fn of_degree(d: u32) -> impl Iterator<Item = Monomial> {
        (0..=d).rev().flat_map(move |i| {
            (0..=d - i)
                .rev()
                .map(move |j| Monomial::new(i, j, d - i - j))
        })
    }

    /// All monomials of total degree `<= d`, graded.
    pub fn up_to_degree(d: u32) -> impl Iterator<Item = Monomial> {
        (0..=d).flat_map(Monomial::of_degree)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&o.degree())
            .then(o.i.cmp(&self.i))
            .then(o.j.cmp(&self.j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for v in Var::ALL {
            match self.exp(v) {
                0 => {}
                1 => parts.push(v.name().to_string()),
                e => parts.push(format!("{}^{}", v.name(), e)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A truncated power series modulo `m^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<Monomial, Rational>,
    order: u32,
}

impl Series {
    pub fn zero(order: u32) -> Self {
        assert!(order > 0, "truncation order must be positive");
        Series {
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn constant(c: Rational, order: u32) -> Self {
        Series::monomial(Monomial::ONE, c, order)
    }

    pub fn one(order: u32) -> Self {
        Series::constant(Rational::ONE, order)
    }

    pub fn var(v: Var, order: u32) -> Self {
        Series::monomial(Monomial::var(v), Rational::ONE, order)
    }

    pub fn x(order: u32) -> Self {
        Series::var(Var::X, order)
    }

    pub fn y(order: u32) -> Self {
        Series::var(Var::Y, order)
    }

    pub fn z(order: u32) -> Self {
        Series::var(Var::Z, order)
    }

    pub fn monomial(m: Monomial, c: Rational, order: u32) -> Self {
        let mut s = Series::zero(order);
        s.add_term(m, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I, order: u32) -> Self {
        let mut s = Series::zero(order);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Embeds a univariate series as a series in one variable.
    pub fn from_uni(u: &Uni, v: Var, order: u32) -> Self {
        let mut s = Series::zero(order);
        for (e, c) in u.coeffs().iter().enumerate() {
            let mut m = Monomial::ONE;
            match v {
                Var::X => m.i = e as u32,
                Var::Y => m.j = e as u32,
                Var::Z => m.k = e as u32,
            }
            s.add_term(m, c.clone());
        }
        s
    }

    /// Adds `c * m`, discarding it when beyond the truncation order.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.degree() >= self.order {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Least total degree of a nonzero term; `None` stands for `+inf`.
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// Largest total degree of a nonzero term.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Reinterprets the series modulo `m^order` (dropping or keeping terms).
    pub fn with_order(&self, order: u32) -> Series {
        Series::from_terms(self.terms.iter().map(|(m, c)| (*m, c.clone())), order)
    }

    pub fn homogeneous_part(&self, d: u32) -> Series {
        Series::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone())),
            self.order,
        )
    }

    /// Terms of total degree `< d`.
    pub fn jet(&self, d: u32) -> Series {
        Series::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() < d)
                .map(|(m, c)| (*m, c.clone())),
            self.order,
        )
    }

    pub fn filter<P: Fn(&Monomial) -> bool>(&self, keep: P) -> Series {
        Series::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone())),
            self.order,
        )
    }

    /// `true` when no term involves the variable `v`.
    pub fn free_of(&self, v: Var) -> bool {
        self.terms.keys().all(|m| m.exp(v) == 0)
    }

    /// Exact division by a monomial that divides every term.
    pub fn div_monomial(&self, d: &Monomial) -> Series {
        Series::from_terms(
            self.terms.iter().map(|(m, c)| {
                assert!(d.divides(m), "monomial {d} does not divide {m}");
                (m.div(d), c.clone())
            }),
            self.order,
        )
    }

    pub fn mul_monomial(&self, d: &Monomial) -> Series {
        Series::from_terms(
            self.terms.iter().map(|(m, c)| (m.times(d), c.clone())),
            self.order,
        )
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series::zero(self.order);
        }
        Series {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
            order: self.order,
        }
    }

    fn check(&self, o: &Series) -> Result<(), SeriesError> {
        if self.order != o.order {
            Err(SeriesError::OrderMismatch(self.order, o.order))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &Series) -> Series {
        let n = self.order;
        if self.is_zero() || o.is_zero() {
            return Series::zero(n);
        }
        let (a, b) = if self.len() <= o.len() {
            (self, o)
        } else {
            (o, self)
        };
        if a.len() == 1 {
            let (m, c) = a.terms.iter().next().unwrap();
            let mut out = Series::zero(n);
            for (mb, cb) in &b.terms {
                let p = m.times(mb);
                if p.degree() >= n {
                    break;
                }
                out.terms.insert(p, c * cb);
            }
            return out;
        }
        let bt: Vec<(&Monomial, &Rational)> = b.terms.iter().collect();
        let mut acc = vec![Rational::ZERO; Monomial::count_below(n)];
        let mut touched: Vec<Monomial> = Vec::new();
        let mut seen = vec![false; acc.len()];
        for (ma, ca) in &a.terms {
            let room = n - ma.degree();
            for (mb, cb) in &bt {
                if mb.degree() >= room {
                    break;
                }
                let p = ma.times(mb);
                let idx = p.index();
                if !seen[idx] {
                    seen[idx] = true;
                    touched.push(p);
                }
                acc[idx] += &(ca * *cb);
            }
        }
        let mut out = Series::zero(n);
        for p in touched {
            let c = std::mem::take(&mut acc[p.index()]);
            if !c.is_zero() {
                out.terms.insert(p, c);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut acc = Series::one(self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative. The result is exact modulo `m^(N-1)` and
    /// carries that order.
    pub fn derivative(&self, v: Var) -> Series {
        let order = self.order.saturating_sub(1).max(1);
        let mut out = Series::zero(order);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut d = *m;
            match v {
                Var::X => d.i -= 1,
                Var::Y => d.j -= 1,
                Var::Z => d.k -= 1,
            }
            out.add_term(d, c * &Rational::from_integer(e as i64));
        }
        out
    }

    /// Coefficients of `z^k` for a series in `z` alone.
    pub fn to_uni(&self, v: Var) -> Uni {
        let mut u = Uni::zero(self.order as usize);
        for (m, c) in &self.terms {
            assert!(
                m.degree() == m.exp(v),
                "series is not a function of {} alone",
                v.name()
            );
            u.set_coeff(m.exp(v) as usize, c.clone());
        }
        u
    }

    /// Multiplicative inverse of a unit modulo `m^N`.
    pub fn invert_unit(&self) -> Result<Series, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let n = self.order;
        // Newton iteration b <- b (2 - u b), doubling the correct order.
        let mut b = Series::constant(c0.recip(), n);
        let mut prec = 1u32;
        while prec < n {
            prec = (2 * prec).min(n);
            let u = self.with_order(prec);
            let bp = b.with_order(prec);
            let ub = &u * &bp;
            let two_minus = &Series::constant(Rational::from_integer(2), prec) - &ub;
            b = (&bp * &two_minus).with_order(n);
        }
        Ok(b)
    }

    /// A series `a` with `a^n = self` modulo `m^N`, whose constant term is
    /// the rational `n`-th root of the constant term of `self` (positive for
    /// even `n`).
    pub fn nth_root_unit(&self, n: u32) -> Result<Series, SeriesError> {
        if n == 0 {
            return Err(SeriesError::Precondition(
                "root index must be positive".into(),
            ));
        }
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let a0 = c0
            .nth_root(n)
            .ok_or_else(|| SeriesError::NoRationalRoot(c0.clone(), n))?;
        let order = self.order;
        let nr = Rational::from_integer(n as i64);
        // Newton: a <- a - (a^n - u) / (n a^(n-1)).
        let mut a = Series::constant(a0, order);
        let mut prec = 1u32;
        while prec < order {
            prec = (2 * prec).min(order);
            let ap = a.with_order(prec);
            let u = self.with_order(prec);
            let an1 = ap.pow(n - 1);
            let an = &an1 * &ap;
            let denom = an1.scale(&nr).invert_unit()?;
            a = (&ap - &(&(&an - &u) * &denom)).with_order(order);
        }
        Ok(a)
    }

    /// `self(phi_x, phi_y, phi_z)`, truncated at `m^N`.
    pub fn substitute(&self, phi: &CoordChange) -> Result<Series, SeriesError> {
        let [sx, sy, sz] = &phi.images;
        self.check(sx)?;
        Ok(self.compose(sx, sy, sz))
    }

    /// Plugs arbitrary series (with zero constant term) in for `x, y, z`.
    pub fn compose(&self, sx: &Series, sy: &Series, sz: &Series) -> Series {
        let n = self.order;
        let sx = sx.with_order(n);
        let sy = sy.with_order(n);
        let sz = sz.with_order(n);
        let mut px = PowerCache::new(sx);
        let mut py = PowerCache::new(sy);
        let mut pz = PowerCache::new(sz);
        // Group terms by (i, j) and evaluate the z-polynomial once per group.
        let mut groups: BTreeMap<(u32, u32), Vec<(u32, &Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups.entry((m.i, m.j)).or_default().push((m.k, c));
        }
        let mut out = Series::zero(n);
        for ((i, j), zs) in groups {
            let mut inner = Series::zero(n);
            for (k, c) in zs {
                let p = pz.get(k).scale(c);
                inner = &inner + &p;
            }
            if inner.is_zero() {
                continue;
            }
            let xy = &px.get(i).clone() * py.get(j);
            out = &out + &(&xy * &inner);
        }
        out
    }

    /// Evaluates along a parametrized curve `t -> (x(t), y(t), z(t))`.
    pub fn eval_uni(&self, param: &[Uni; 3]) -> Uni {
        let prec = param.iter().map(Uni::prec).min().unwrap_or(0);
        let mut pows: Vec<Vec<Uni>> = param
            .iter()
            .map(|p| vec![Uni::one(prec), p.truncate(prec)])
            .collect();
        let mut out = Uni::zero(prec);
        for (m, c) in &self.terms {
            let mut term = Uni::constant(c.clone(), prec);
            for (vi, e) in [m.i, m.j, m.k].into_iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[vi].len() <= e as usize {
                    let next = &pows[vi][pows[vi].len() - 1] * &pows[vi][1];
                    pows[vi].push(next);
                }
                term = &term * &pows[vi][e as usize];
            }
            out = &out + &term;
        }
        out
    }

    /// The xy-factorization `xy + f = X * Y` for `f` a series in `x, y`
    /// of order at least three, with `X = x` and `Y = y` modulo `m^2`.
    pub fn factor_xy(f: &Series) -> Result<(Series, Series), SeriesError> {
        if !f.free_of(Var::Z) {
            return Err(SeriesError::Precondition("f must not involve z".into()));
        }
        if f.ord().is_some_and(|o| o < 3) {
            return Err(SeriesError::Precondition("f must lie in m^3".into()));
        }
        let n = f.order;
        let p = &(&Series::x(n) * &Series::y(n)) + f;
        let (a, b) = factor_hyperbolic(&p)?;
        Ok((&Series::x(n) + &a, &Series::y(n) + &b))
    }
}

/// Splits `r` into `x * rx + y * ry`: terms divisible by `x` go to `rx`,
/// the remaining terms must be divisible by `y`.
fn split_xy(r: &Series) -> Result<(Series, Series), SeriesError> {
    let n = r.order();
    let mut rx = Series::zero(n);
    let mut ry = Series::zero(n);
    for (m, c) in r.terms() {
        if m.i > 0 {
            rx.add_term(Monomial::new(m.i - 1, m.j, m.k), c.clone());
        } else if m.j > 0 {
            ry.add_term(Monomial::new(m.i, m.j - 1, m.k), c.clone());
        } else {
            return Err(SeriesError::Precondition(format!(
                "term {m} is divisible by neither x nor y"
            )));
        }
    }
    Ok((rx, ry))
}

/// Factors `p = xy + r` with `r` in `(x, y)^2` and of total order at least
/// three as `(x + a)(y + b)`, returning the corrections `(a, b)`.
pub fn factor_hyperbolic(p: &Series) -> Result<(Series, Series), SeriesError> {
    let n = p.order();
    let xy = &Series::x(n) * &Series::y(n);
    let mut r = p - &xy;
    if r.terms().any(|(m, _)| m.i + m.j < 2 || m.degree() < 3) {
        return Err(SeriesError::Precondition(
            "p - xy must lie in (x,y)^2 and in m^3".into(),
        ));
    }
    let mut a = Series::zero(n);
    let mut b = Series::zero(n);
    let mut rounds = 0;
    while !r.is_zero() {
        rounds += 1;
        if rounds > n + 1 {
            return Err(SeriesError::Precondition(
                "factorization did not converge".into(),
            ));
        }
        let (rx, ry) = split_xy(&r)?;
        // (x + a + ry)(y + b + rx) = xy + a y + b x + ab + r + a rx + b ry + rx ry
        let next = -&(&(&(&a * &rx) + &(&b * &ry)) + &(&rx * &ry));
        a = &a + &ry;
        b = &b + &rx;
        r = next;
    }
    Ok((a, b))
}

struct PowerCache {
    pows: Vec<Series>,
}

impl PowerCache {
    fn new(s: Series) -> Self {
        PowerCache {
            pows: vec![Series::one(s.order()), s],
        }
    }

    fn get(&mut self, e: u32) -> &Series {
        while self.pows.len() <= e as usize {
            let next = &self.pows[self.pows.len() - 1] * &self.pows[1];
            self.pows.push(next);
        }
        &self.pows[e as usize]
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    /// Panics on mismatched truncation orders; see [`Series::try_add`].
    fn add(self, o: &Series) -> Series {
        self.try_add(o).expect("series addition")
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        self.try_sub(o).expect("series subtraction")
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        self.try_mul(o).expect("series multiplication")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Rational::ONE)
    }
}

impl fmt::Display for Series {
    /// Prints in the expression grammar accepted by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if *m == Monomial::ONE {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// A change of variables `x -> Sx, y -> Sy, z -> Sz`.
///
/// Substituting with a change evaluates a series at the three images. The
/// images have zero constant term and a nonsingular linear part, so the
/// assignment is an automorphism of `k[[x,y,z]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordChange {
    images: [Series; 3],
    log: Vec<String>,
}

impl CoordChange {
    pub fn identity(order: u32) -> Self {
        CoordChange {
            images: [Series::x(order), Series::y(order), Series::z(order)],
            log: Vec::new(),
        }
    }

    pub fn new(images: [Series; 3]) -> Result<Self, SeriesError> {
        let order = images[0].order();
        if images.iter().any(|s| s.order() != order) {
            return Err(SeriesError::OrderMismatch(order, images[1].order()));
        }
        if images.iter().any(|s| !s.constant_term().is_zero()) {
            return Err(SeriesError::InvalidChange("images must lie in m".into()));
        }
        let c = CoordChange {
            images,
            log: Vec::new(),
        };
        if order > 1 && crate::linalg::det3(&c.linear_part()).is_zero() {
            return Err(SeriesError::InvalidChange("linear part is singular".into()));
        }
        Ok(c)
    }

    /// Builds a change and attaches a log entry describing it.
    pub fn with_log(images: [Series; 3], entry: impl Into<String>) -> Result<Self, SeriesError> {
        let mut c = CoordChange::new(images)?;
        c.log.push(entry.into());
        Ok(c)
    }

    pub fn order(&self) -> u32 {
        self.images[0].order()
    }

    pub fn images(&self) -> &[Series; 3] {
        &self.images
    }

    pub fn image(&self, v: Var) -> &Series {
        &self.images[v.index()]
    }

    pub fn log(&self) -> &[String] {
        &self.log
    }

    /// Row `r` holds the linear coefficients of the image of variable `r`.
    pub fn linear_part(&self) -> [[Rational; 3]; 3] {
        let mut m: [[Rational; 3]; 3] = Default::default();
        for (r, s) in self.images.iter().enumerate() {
            for v in Var::ALL {
                m[r][v.index()] = s.coeff(&Monomial::var(v));
            }
        }
        m
    }

    /// `self` followed by `other`: substituting with the result equals
    /// substituting with `self` and then with `other`.
    pub fn then(&self, other: &CoordChange) -> Result<CoordChange, SeriesError> {
        let images = [
            self.images[0].substitute(other)?,
            self.images[1].substitute(other)?,
            self.images[2].substitute(other)?,
        ];
        let mut c = CoordChange::new(images)?;
        c.log = self.log.iter().chain(other.log.iter()).cloned().collect();
        Ok(c)
    }
}
