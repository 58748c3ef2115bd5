//! Local class groups of `A_n` points and the classes of smooth curves
//! through them.
//!
//! A curve is handled through a parametrization `t -> (x(t), y(t), z(t))`
//! obtained from its two generators by the implicit function theorem. In
//! normal coordinates `XY + H(Z)`, with `H` of order `n + 1`, the class is
//! read off from orders: a curve transverse to `Z = 0` has class `ord_t Y`
//! (so `(X - z^(n-r+1), Y - z^r)` has class `r`). A curve with `ord_t Z >= 2`
//! deforms within smooth curves to the axis it is tangent to, so it has
//! class 1 when `ord_t Y = 1`, like `(X, Z)`, and class `n` when
//! `ord_t X = 1`, like `(Y, Z)`. The class only depends on the
//! parametrization modulo `t^(n+2)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{snf, IntMatrix, Subgroup};
use crate::parse::{parse_tuple, ParseError};
use crate::rational::Rational;
use crate::recognizer::{SingularityReport, Verdict};
use crate::series::{Monomial, Series, SeriesError, Var};
use crate::uni::Uni;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DivisorError {
    #[error("curve does not match a canonical pattern: {0}")]
    PatternMismatch(String),
    #[error("curve does not lie on the surface (first nonzero term t^{0})")]
    NotOnSurface(usize),
    #[error("curve ideal is not a smooth curve: {0}")]
    NotSmooth(String),
    #[error("singularity is not of type A_n: {0}")]
    NotAn(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// An element of `Z/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CyclicClass {
    pub modulus: u32,
    pub residue: u32,
}

impl CyclicClass {
    pub fn new(modulus: u32, residue: i64) -> Self {
        assert!(modulus >= 1);
        CyclicClass {
            modulus,
            residue: residue.rem_euclid(i64::from(modulus)) as u32,
        }
    }

    /// Representative in `(-modulus/2, modulus/2]`.
    pub fn signed(&self) -> i64 {
        let (r, m) = (i64::from(self.residue), i64::from(self.modulus));
        if 2 * r > m {
            r - m
        } else {
            r
        }
    }
}

impl fmt::Display for CyclicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Z/{}", self.residue, self.modulus)?;
        if self.signed() < 0 {
            write!(f, " (= {})", self.signed())?;
        }
        Ok(())
    }
}

/// Class group of an `A_n` point from the exceptional chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainClassGroup {
    pub n: u32,
    /// Nonzero invariant factors of the relation matrix.
    pub invariants: Vec<BigInt>,
    /// `order` is `|Cl|`, the product of the invariant factors.
    pub order: BigInt,
    /// `u_j = multiples[j-1] * u_1` in the class group.
    pub multiples: Vec<u32>,
}

/// Rows `-2u_1 + u_2, u_1 - 2u_2 + u_3, ..., u_(n-1) - 2u_n`.
pub fn chain_relations(n: u32) -> IntMatrix {
    let n = n as usize;
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => BigInt::from(-2),
                    1 => BigInt::one(),
                    _ => BigInt::zero(),
                })
                .collect()
        })
        .collect();
    IntMatrix::new(n, rows)
}

/// Cokernel of the chain relations, with each `u_j` written as `j * u_1`
/// (checked by membership in the relation lattice).
pub fn chain_class_group(n: u32) -> ChainClassGroup {
    assert!(n >= 1, "chain length must be positive");
    let rel = chain_relations(n);
    let invariants: Vec<BigInt> = snf(&rel).into_iter().filter(|d| !d.is_one()).collect();
    let order = invariants.iter().fold(BigInt::one(), |a, d| a * d);
    let lattice = Subgroup::from_rows(n as usize, rel.rows().to_vec());
    let multiples = (1..=n)
        .map(|j| {
            let mut v = vec![BigInt::zero(); n as usize];
            v[0] -= BigInt::from(j);
            v[j as usize - 1] += BigInt::one();
            assert!(lattice.contains(&v), "u_{j} - {j} u_1 is not a relation");
            j
        })
        .collect();
    ChainClassGroup {
        n,
        invariants,
        order,
        multiples,
    }
}

/// A curve germ given by two generators.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveIdeal {
    pub gens: [Series; 2],
}

impl CurveIdeal {
    pub fn new(g1: Series, g2: Series) -> Self {
        CurveIdeal { gens: [g1, g2] }
    }

    /// Parses `"(e1, e2)"`.
    pub fn parse(text: &str, order: u32) -> Result<Self, DivisorError> {
        let parts = parse_tuple(text)?;
        if parts.len() != 2 {
            return Err(DivisorError::NotSmooth(format!(
                "expected two generators, got {}",
                parts.len()
            )));
        }
        Ok(CurveIdeal::new(
            parts[0].lower(order),
            parts[1].lower(order),
        ))
    }

    pub fn order(&self) -> u32 {
        self.gens[0].order().min(self.gens[1].order())
    }

    /// Parametrization by the implicit function theorem, using the first
    /// variable pair (in the order `{x,y}`, `{x,z}`, `{y,z}`) with an
    /// invertible Jacobian; the remaining variable is the parameter.
    pub fn parametrize(&self) -> Result<[Uni; 3], DivisorError> {
        let n = self.order();
        let prec = n as usize;
        let g = [self.gens[0].with_order(n), self.gens[1].with_order(n)];
        if g.iter().any(|s| !s.constant_term().is_zero()) {
            return Err(DivisorError::NotSmooth(
                "generator does not vanish at the origin".into(),
            ));
        }
        let lin = |s: &Series, v: Var| s.coeff(&Monomial::var(v));
        for (va, vb, vt) in [
            (Var::X, Var::Y, Var::Z),
            (Var::X, Var::Z, Var::Y),
            (Var::Y, Var::Z, Var::X),
        ] {
            let (a11, a12, a21, a22) = (
                lin(&g[0], va),
                lin(&g[0], vb),
                lin(&g[1], va),
                lin(&g[1], vb),
            );
            let det = &(&a11 * &a22) - &(&a12 * &a21);
            if det.is_zero() {
                continue;
            }
            let inv = [[&a22 / &det, -(&a12 / &det)], [-(&a21 / &det), &a11 / &det]];
            let mut param: [Uni; 3] = std::array::from_fn(|_| Uni::zero(prec));
            param[vt.index()] = Uni::var(prec);
            for _ in 0..=prec {
                let r = [g[0].eval_uni(&param), g[1].eval_uni(&param)];
                if r.iter().all(Uni::is_zero) {
                    return Ok(param);
                }
                let da = &r[0].scale(&inv[0][0]) + &r[1].scale(&inv[0][1]);
                let db = &r[0].scale(&inv[1][0]) + &r[1].scale(&inv[1][1]);
                param[va.index()] = &param[va.index()] - &da;
                param[vb.index()] = &param[vb.index()] - &db;
            }
            return Err(DivisorError::NotSmooth(
                "implicit function iteration did not converge".into(),
            ));
        }
        Err(DivisorError::NotSmooth(
            "generators have dependent linear parts".into(),
        ))
    }
}

/// Checks `F(param) = 0` to the available precision.
pub fn check_on_surface(f: &Series, param: &[Uni; 3]) -> Result<(), DivisorError> {
    let prec = (f.order() as usize).min(param.iter().map(Uni::prec).min().unwrap_or(0));
    let trunc: [Uni; 3] = std::array::from_fn(|i| param[i].truncate(prec));
    match f.eval_uni(&trunc).ord() {
        None => Ok(()),
        Some(k) => Err(DivisorError::NotOnSurface(k)),
    }
}

/// Class of a parametrized curve on `XY + H(Z) = 0`, `ord H = n + 1`.
pub fn classify_normal_param(n: u32, param: &[Uni; 3]) -> Result<CyclicClass, DivisorError> {
    let [x, y, z] = param;
    let modulus = n + 1;
    match z.ord() {
        Some(0) => Err(DivisorError::PatternMismatch(
            "curve does not pass through the point".into(),
        )),
        None | Some(2..) => match (x.ord(), y.ord()) {
            (Some(1), Some(1)) => Err(DivisorError::PatternMismatch(
                "X and Y both have order 1".into(),
            )),
            (_, Some(1)) => Ok(CyclicClass::new(modulus, 1)),
            (Some(1), _) => Ok(CyclicClass::new(modulus, i64::from(n))),
            _ => Err(DivisorError::PatternMismatch(
                "curve is tangent to Z = 0 but not smooth in X or Y".into(),
            )),
        },
        Some(_) => {
            let (Some(ox), Some(oy)) = (x.ord(), y.ord()) else {
                return Err(DivisorError::PatternMismatch(
                    "X or Y vanishes identically off Z = 0".into(),
                ));
            };
            if ox + oy != modulus as usize {
                return Err(DivisorError::PatternMismatch(format!(
                    "orders of X and Y are {ox} and {oy}, expected sum {modulus}"
                )));
            }
            if oy < 1 || oy > n as usize {
                return Err(DivisorError::PatternMismatch(format!(
                    "ord Y = {oy} outside 1..={n}"
                )));
            }
            Ok(CyclicClass::new(modulus, oy as i64))
        }
    }
}

/// Class of the curve `c` on the normal form `XY + H(Z)` itself.
pub fn curve_class(normal_form: &Series, c: &CurveIdeal) -> Result<CyclicClass, DivisorError> {
    let h = normal_form.filter(|m| m.i == 0 && m.j == 0);
    let rest = normal_form - &h;
    if rest != Series::monomial(Monomial::new(1, 1, 0), Rational::ONE, normal_form.order())
        || !h.free_of(Var::X)
    {
        return Err(DivisorError::PatternMismatch(
            "equation is not of the form XY + H(Z)".into(),
        ));
    }
    let Some(o) = h.ord() else {
        return Err(DivisorError::NotAn(
            "H vanishes to the working order".into(),
        ));
    };
    let param = c.parametrize()?;
    check_on_surface(normal_form, &param)?;
    classify_normal_param(o - 1, &param)
}

/// Class of the curve `c` on `F = 0` at an `A_n` point, using the
/// coordinate change recorded in `report`.
pub fn track_curve(
    f: &Series,
    c: &CurveIdeal,
    report: &SingularityReport,
) -> Result<CyclicClass, DivisorError> {
    let Verdict::A(n) = report.verdict else {
        return Err(DivisorError::NotAn(report.verdict.to_string()));
    };
    let param = c.parametrize()?;
    check_on_surface(f, &param)?;
    match &report.normalization {
        Some(norm) => {
            let prec = (n as usize + 2).min(param[0].prec());
            let short = param.clone().map(|u| u.truncate(prec));
            classify_normal_param(n, &norm.change.apply_to_curve(&short)?)
        }
        // A smooth curve through an A_1 point is never Cartier there.
        None if n == 1 => Ok(CyclicClass::new(2, 1)),
        None => Err(DivisorError::NotAn(
            "report carries no normalization".into(),
        )),
    }
}
