//! The prepared form `xy + h(z) + sum x^i f_i(z) + sum y^j g_j(z)` and the
//! step `Y = y + f_1(z)` that pushes the linear coefficients to higher order.

use std::collections::HashMap;

use crate::rational::{binomial, Rational};
use crate::series::{Monomial, Series};
use crate::uni::Uni;

use super::RecognizeError;

/// Bookkeeping that relates the current form coordinates to the input.
///
/// With `(x_L, y_L, z_L)` the coordinates after the linear normalization,
/// the current form coordinates are `x_L + shift[0](z_L)` and
/// `y_L + shift[1](z_L)`, listed in swapped order when `swapped` is set.
/// The current form equals `unit * F` expressed in these coordinates.
#[derive(Debug, Clone)]
pub struct Frame {
    /// Rows express the linear coordinates as linear forms in the input
    /// variables.
    pub linear: [[Rational; 3]; 3],
    /// Unit multiplier, as a series in the linear coordinates.
    pub unit: Series,
    pub shift: [Uni; 2],
    pub swapped: bool,
    pub log: Vec<String>,
}

impl Frame {
    pub(crate) fn identity(order: u32) -> Self {
        let linear = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                if r == c {
                    Rational::ONE
                } else {
                    Rational::ZERO
                }
            })
        });
        Frame {
            linear,
            unit: Series::one(order),
            shift: [Uni::zero(order as usize), Uni::zero(order as usize)],
            swapped: false,
            log: Vec::new(),
        }
    }

    /// Records the change `v -> v + c(z)` of the form variable `form_var`
    /// (0 for `x`, 1 for `y`).
    fn shift(&mut self, form_var: usize, c: &Uni) {
        let slot = form_var ^ usize::from(self.swapped);
        self.shift[slot] = &self.shift[slot] + &c.truncate(self.shift[slot].prec());
        let names = ["x", "y"];
        let poly = Series::from_uni(c, crate::series::Var::Z, c.prec().max(1) as u32);
        self.log.push(format!("{0} -> {0} + ({poly})", names[slot]));
    }
}

/// `F = xy + h(z) + sum_{i>=1} x^i f_i(z) + sum_{j>=1} y^j g_j(z)` modulo
/// `m^N`. The coefficient of `x^i` is known modulo `z^(N-i)`, and likewise
/// for `y^j`; `h` is known modulo `z^N`.
#[derive(Debug, Clone)]
pub struct PreparedForm {
    pub order: u32,
    pub h: Uni,
    /// `f[i - 1]` is the coefficient of `x^i`.
    pub f: Vec<Uni>,
    /// `g[j - 1]` is the coefficient of `y^j`; `g[0]` vanishes once prepared.
    pub g: Vec<Uni>,
    pub frame: Frame,
}

/// What a step observed, for the monotonicity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepInfo {
    /// `min_j ord(f_1^j g_j)` before the step, when determined.
    pub m: Option<usize>,
    /// The same quantity for the form after the step, when determined.
    pub next_m: Option<usize>,
    pub ord_f1: Option<usize>,
    /// Order of the new linear coefficient `G_1`.
    pub ord_g1: Option<usize>,
}

impl PreparedForm {
    pub fn f1(&self) -> &Uni {
        &self.f[0]
    }

    /// Linear coefficient of `y`.
    pub fn g1(&self) -> &Uni {
        &self.g[0]
    }

    /// The same form modulo `m^order`, for `order` at most the current one.
    pub fn truncated(&self, order: u32) -> PreparedForm {
        let n = order.min(self.order);
        let nn = n as usize;
        let cut = |v: &[Uni]| -> Vec<Uni> {
            let keep = nn.saturating_sub(1).max(1);
            v.iter()
                .take(keep)
                .enumerate()
                .map(|(i, c)| c.truncate(c.prec().min(nn.saturating_sub(i + 1))))
                .collect()
        };
        let mut frame = self.frame.clone();
        frame.unit = frame.unit.with_order(n);
        frame.shift = frame.shift.clone().map(|s| s.truncate(s.prec().min(nn)));
        PreparedForm {
            order: n,
            h: self.h.truncate(self.h.prec().min(nn)),
            f: cut(&self.f),
            g: cut(&self.g),
            frame,
        }
    }

    /// The form as a series in its own coordinates.
    pub fn to_series(&self) -> Series {
        let n = self.order;
        let mut s = Series::monomial(Monomial::new(1, 1, 0), Rational::ONE, n);
        for (k, c) in self.h.coeffs().iter().enumerate() {
            s.add_term(Monomial::new(0, 0, k as u32), c.clone());
        }
        for (i, fi) in self.f.iter().enumerate() {
            for (k, c) in fi.coeffs().iter().enumerate() {
                s.add_term(Monomial::new(i as u32 + 1, 0, k as u32), c.clone());
            }
        }
        for (j, gj) in self.g.iter().enumerate() {
            for (k, c) in gj.coeffs().iter().enumerate() {
                s.add_term(Monomial::new(0, j as u32 + 1, k as u32), c.clone());
            }
        }
        s
    }

    /// The terms `(-f_1)^j g_j` for `j >= 2`; their sum is the change of
    /// `h` under the next step.
    pub(crate) fn step_terms(&self) -> Vec<Uni> {
        let n = self.order as usize;
        let powers = neg_powers(self.f1(), self.g.len(), n);
        self.g
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, gj)| powers[j + 1].mul_tracked(gj, n))
            .collect()
    }
}

/// `(-c)^l` for `l = 0..=count`, each exact as far as `c` determines it.
fn neg_powers(c: &Uni, count: usize, cap: usize) -> Vec<Uni> {
    let neg = -c;
    let mut out = vec![Uni::one(cap)];
    for l in 1..=count {
        let next = out[l - 1].mul_tracked(&neg, cap);
        out.push(next);
    }
    out
}

/// Exact minimum of the orders of `terms`, when it is determined: every
/// term that vanishes to its known precision must have that precision at
/// least as large as the minimum over the nonzero ones.
pub(crate) fn determined_min_order(terms: &[Uni]) -> Option<usize> {
    let known = terms.iter().filter_map(Uni::ord).min()?;
    let unknown = terms
        .iter()
        .filter(|t| t.ord().is_none())
        .map(Uni::prec)
        .min();
    match unknown {
        Some(p) if p < known => None,
        _ => Some(known),
    }
}

/// Lower bound for the minimum order of `terms`.
pub(crate) fn min_order_bound(terms: &[Uni]) -> usize {
    terms.iter().map(Uni::ord_bound).min().unwrap_or(usize::MAX)
}

/// Substitution `s = S - c(z)` in `sum_{i>=1} s^i a_i(z)`. Returns the part
/// free of `S` and the new coefficients of `S^k`, `k >= 1`.
fn shift_coeffs(a: &[Uni], c: &Uni, order: usize) -> (Uni, Vec<Uni>) {
    let powers = neg_powers(c, a.len(), order);
    let mut free = Uni::zero(order);
    for (i, ai) in a.iter().enumerate() {
        let i = i + 1;
        free = free.add_capped(&powers[i].mul_tracked(ai, order), order);
    }
    let mut out = Vec::with_capacity(a.len());
    for k in 1..=a.len() {
        let cap = order - k;
        let mut acc = Uni::zero(cap);
        for i in k..=a.len() {
            let term = powers[i - k].mul_tracked(&a[i - 1], cap);
            let b = binomial(i as u32, k as u32);
            acc = acc.add_capped(&term.scale(&b), cap);
        }
        out.push(acc);
    }
    (free, out)
}

/// Multiplies `F` (quadratic part `xy`) by a unit `W` such that `W F` has no
/// monomial divisible by `xy` other than `xy` itself. Solved one degree at a
/// time: the degree-`d` part of `W` is fixed by the mixed terms of degree
/// `d + 2` in the product.
pub(crate) fn clear_mixed(f: &Series) -> (Series, Series) {
    let n = f.order();
    let mut fdeg: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); n as usize];
    for (m, c) in f.terms() {
        fdeg[m.degree() as usize].push((*m, c.clone()));
    }
    let mut wdeg: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); n as usize];
    wdeg[0].push((Monomial::ONE, Rational::ONE));
    let mut product = Series::monomial(Monomial::new(1, 1, 0), Rational::ONE, n);
    let xy = Monomial::new(1, 1, 0);
    for e in 3..n {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for d in 0..=(e - 3) {
            for (mw, cw) in &wdeg[d as usize] {
                for (mf, cf) in &fdeg[(e - d) as usize] {
                    *acc.entry(mw.times(mf)).or_insert(Rational::ZERO) += &(cw * cf);
                }
            }
        }
        let mut wnew = Vec::new();
        for (m, c) in acc {
            if c.is_zero() {
                continue;
            }
            if m.i >= 1 && m.j >= 1 {
                wnew.push((m.div(&xy), -c));
            } else {
                product.add_term(m, c);
            }
        }
        wnew.sort_by(|a, b| a.0.cmp(&b.0));
        wdeg[(e - 2) as usize] = wnew;
    }
    let unit = Series::from_terms(wdeg.into_iter().flatten(), n);
    (unit, product)
}

/// Builds the prepared form of `F`, whose quadratic part must be `xy`.
pub fn prepare(f: &Series) -> Result<PreparedForm, RecognizeError> {
    prepare_in_frame(f, Frame::identity(f.order()))
}

pub(crate) fn prepare_in_frame(
    f: &Series,
    mut frame: Frame,
) -> Result<PreparedForm, RecognizeError> {
    let n = f.order();
    if n < 3 {
        return Err(RecognizeError::Precondition(
            "truncation order must be at least 3".into(),
        ));
    }
    if f.jet(3) != Series::monomial(Monomial::new(1, 1, 0), Rational::ONE, n) {
        return Err(RecognizeError::Precondition(
            "quadratic part must be exactly xy".into(),
        ));
    }
    let (unit, g) = clear_mixed(f);
    if unit != Series::one(n) {
        frame.log.push(format!(
            "multiply by unit of order {}",
            (&unit - &Series::one(n)).ord().unwrap_or(n)
        ));
    }
    frame.unit = &frame.unit * &unit;
    let nn = n as usize;
    let mut h = Uni::zero(nn);
    let mut fs: Vec<Uni> = (1..nn).map(|i| Uni::zero(nn - i)).collect();
    let mut gs: Vec<Uni> = (1..nn).map(|j| Uni::zero(nn - j)).collect();
    for (m, c) in g.terms() {
        let (i, j, k) = (m.i as usize, m.j as usize, m.k as usize);
        match (i, j) {
            (0, 0) => h.set_coeff(k, c.clone()),
            (_, 0) => fs[i - 1].set_coeff(k, c.clone()),
            (0, _) => gs[j - 1].set_coeff(k, c.clone()),
            (1, 1) if k == 0 => {}
            _ => {
                return Err(RecognizeError::Internal(format!(
                    "mixed term {m} survived unit clearing"
                )))
            }
        }
    }
    let mut p = PreparedForm {
        order: n,
        h,
        f: fs,
        g: gs,
        frame,
    };
    if !p.g1().is_zero() {
        // X = x + g_1 absorbs y g_1 into XY.
        let c = p.g1().clone();
        let (free, fnew) = shift_coeffs(&p.f, &c, nn);
        p.h = p.h.add_capped(&free, nn);
        p.f = fnew;
        p.g[0] = Uni::zero(nn - 1);
        p.frame.shift(0, &c);
    }
    Ok(p)
}

/// One step `Y = y + f_1(z)`, followed by exchanging the roles of `x` and
/// `y` so that the new linear coefficient `G_1` sits on `x`.
pub fn induct_step(p: &PreparedForm) -> Result<(PreparedForm, StepInfo), RecognizeError> {
    if p.f1().is_zero() {
        return Err(RecognizeError::Precondition(
            "induct_step needs f_1 != 0".into(),
        ));
    }
    if !p.g1().is_zero() {
        return Err(RecognizeError::Precondition(
            "induct_step needs g_1 = 0".into(),
        ));
    }
    let nn = p.order as usize;
    let terms = p.step_terms();
    let m = determined_min_order(&terms);
    let c = p.f1().clone();
    let (free, gnew) = shift_coeffs(&p.g, &c, nn);
    let h = p.h.add_capped(&free, nn);
    let mut frame = p.frame.clone();
    frame.shift(1, &c);
    frame.swapped = !frame.swapped;
    let mut g = p.f.clone();
    g[0] = Uni::zero(nn - 1);
    let next = PreparedForm {
        order: p.order,
        h,
        f: gnew,
        g,
        frame,
    };
    let next_m = determined_min_order(&next.step_terms());
    let info = StepInfo {
        m,
        next_m,
        ord_f1: c.ord(),
        ord_g1: next.f1().ord(),
    };
    if let (Some(m), Some(big)) = (info.m, info.next_m) {
        if big <= m {
            return Err(RecognizeError::Internal(format!(
                "step did not increase m ({m} -> {big})"
            )));
        }
    }
    if let (Some(m), Some(r), Some(s)) = (info.m, info.ord_f1, info.ord_g1) {
        if s + r < m {
            return Err(RecognizeError::Internal(format!(
                "ord G_1 = {s} below m - ord f_1 = {}",
                m - r
            )));
        }
    }
    Ok((next, info))
}
