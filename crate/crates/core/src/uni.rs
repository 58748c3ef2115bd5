//! Dense univariate truncated power series `k[[t]] / (t^prec)`.
//!
//! Used for the `z`-coefficients of prepared forms and for curve
//! parametrizations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uni {
    coeffs: Vec<Rational>,
}

impl Uni {
    pub fn zero(prec: usize) -> Self {
        Uni {
            coeffs: vec![Rational::ZERO; prec],
        }
    }

    pub fn constant(c: Rational, prec: usize) -> Self {
        let mut u = Uni::zero(prec);
        if prec > 0 {
            u.coeffs[0] = c;
        }
        u
    }

    pub fn one(prec: usize) -> Self {
        Uni::constant(Rational::ONE, prec)
    }

    /// `c * t^k`.
    pub fn monomial(k: usize, c: Rational, prec: usize) -> Self {
        let mut u = Uni::zero(prec);
        if k < prec {
            u.coeffs[k] = c;
        }
        u
    }

    /// The variable `t` itself.
    pub fn var(prec: usize) -> Self {
        Uni::monomial(1, Rational::ONE, prec)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>, prec: usize) -> Self {
        coeffs.resize(prec, Rational::ZERO);
        Uni { coeffs }
    }

    /// Number of known coefficients: the series is exact modulo `t^prec`.
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn set_coeff(&mut self, k: usize, c: Rational) {
        if k < self.prec() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Least exponent with a nonzero coefficient; `None` for zero.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<(usize, Rational)> {
        self.ord().map(|k| (k, self.coeffs[k].clone()))
    }

    pub fn truncate(&self, prec: usize) -> Uni {
        let mut c = self.coeffs.clone();
        c.resize(prec, Rational::ZERO);
        Uni { coeffs: c }
    }

    pub fn scale(&self, c: &Rational) -> Uni {
        Uni {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `t^k`; the result keeps the same precision plus `k`.
    pub fn shift_up(&self, k: usize) -> Uni {
        let mut c = vec![Rational::ZERO; k];
        c.extend(self.coeffs.iter().cloned());
        Uni { coeffs: c }
    }

    /// Exact division by `t^k`; the low coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Uni {
        debug_assert!(self.coeffs.iter().take(k).all(Rational::is_zero));
        Uni {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Uni {
        let mut acc = Uni::one(self.prec());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a unit. Panics when the constant term vanishes.
    pub fn inverse(&self) -> Uni {
        let n = self.prec();
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "inverse of a non-unit");
        let inv0 = c0.recip();
        let mut out = vec![Rational::ZERO; n];
        for k in 0..n {
            let mut s = if k == 0 {
                Rational::ONE
            } else {
                Rational::ZERO
            };
            for i in 1..=k {
                if !self.coeffs[i].is_zero() && !out[k - i].is_zero() {
                    s -= &(&self.coeffs[i] * &out[k - i]);
                }
            }
            out[k] = &s * &inv0;
        }
        Uni { coeffs: out }
    }

    /// Lower bound for the order: the true order when a nonzero coefficient
    /// is known, the precision otherwise.
    pub fn ord_bound(&self) -> usize {
        self.ord().unwrap_or(self.prec())
    }

    /// Product whose precision is everything the factors determine: a
    /// series exact modulo `t^p` with order `v` times one exact modulo
    /// `t^q` with order `w` is exact modulo `t^min(p + w, q + v)`. The
    /// result is further capped at `cap`.
    pub fn mul_tracked(&self, rhs: &Uni, cap: usize) -> Uni {
        let (pa, pb) = (self.prec(), rhs.prec());
        let n = (pa + rhs.ord_bound()).min(pb + self.ord_bound()).min(cap);
        let mut out = vec![Rational::ZERO; n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Uni { coeffs: out }
    }

    /// Sum keeping the smaller precision, capped at `cap`.
    pub fn add_capped(&self, rhs: &Uni, cap: usize) -> Uni {
        (self + rhs).truncate(self.prec().min(rhs.prec()).min(cap))
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Uni) -> Uni {
        assert!(inner.coeff(0).is_zero(), "composition needs inner in (t)");
        let prec = inner.prec();
        let mut acc = Uni::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            acc.coeffs[0] += c;
        }
        acc
    }

    /// Compositional inverse of a series with a unit linear coefficient:
    /// returns `s` with `self(s(t)) = t`.
    pub fn reversion(&self) -> Option<Uni> {
        let prec = self.prec();
        if !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return None;
        }
        let c1 = self.coeff(1);
        let mut rest = self.clone();
        rest.coeffs[1] = Rational::ZERO;
        let t = Uni::var(prec);
        let mut s = t.scale(&c1.recip());
        for _ in 0..prec {
            let next = (&t - &rest.compose(&s)).scale(&c1.recip());
            if next == s {
                break;
            }
            s = next;
        }
        Some(s)
    }
}

impl<'a> Add<&'a Uni> for &'a Uni {
    type Output = Uni;
    fn add(self, rhs: &Uni) -> Uni {
        let n = self.prec().min(rhs.prec());
        Uni {
            coeffs: (0..n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Sub<&'a Uni> for &'a Uni {
    type Output = Uni;
    fn sub(self, rhs: &Uni) -> Uni {
        let n = self.prec().min(rhs.prec());
        Uni {
            coeffs: (0..n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Mul<&'a Uni> for &'a Uni {
    type Output = Uni;
    fn mul(self, rhs: &Uni) -> Uni {
        let n = self.prec().min(rhs.prec());
        let mut out = vec![Rational::ZERO; n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Uni { coeffs: out }
    }
}

impl Neg for &Uni {
    type Output = Uni;
    fn neg(self) -> Uni {
        Uni {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Uni {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, a) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "t^{k}")?,
                _ => write!(f, "{a}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.prec())
    }
}
