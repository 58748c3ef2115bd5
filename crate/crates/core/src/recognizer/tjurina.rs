//! Tjurina number, by exact linear algebra and along a smooth curve.
//!
//! With `I = (F, F_x, F_y, F_z)`, `tau_d = dim k[[x,y,z]] / (I + m^(d+1))`
//! is computed for all `d <= D` from one echelon form of the truncated span
//! of `I`. When `tau_d = tau_(d-1)` we have `m^d` in `I + m^(d+1)`, so by
//! Nakayama `m^d` lies in `I` and `tau = tau_(d-1)`.

use thiserror::Error;

use crate::divisors::CurveIdeal;
use crate::linalg::{Echelon, SparseVec};
use crate::series::{Monomial, Series, Var};
use crate::uni::Uni;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tjurina {
    pub value: u32,
    /// First degree at which the colength stopped growing.
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TjurinaError {
    #[error("colength still grows at degree {degree} (last value {last})")]
    NotStabilized { degree: u32, last: u32 },
}

/// Degree of the monomial with graded index `idx`.
pub(crate) fn degree_of_index(idx: usize) -> u32 {
    let mut d = 0;
    while Monomial::count_below(d + 1) <= idx {
        d += 1;
    }
    d
}

/// Sparse vector of the terms of `s` of degree `<= max_degree`.
pub(crate) fn to_sparse(s: &Series, max_degree: u32) -> SparseVec {
    s.terms()
        .filter(|(m, _)| m.degree() <= max_degree)
        .map(|(m, c)| (m.index(), c.clone()))
        .collect()
}

/// Colengths `tau_0, ..., tau_D` of `I + m^(d+1)` for the ideal generated by
/// `gens`; every generator must be known modulo `m^(D+1)`.
pub(crate) fn colengths(gens: &[Series], max_degree: u32) -> Vec<u32> {
    let mut ech = Echelon::new();
    for g in gens {
        let Some(o) = g.ord() else { continue };
        if o > max_degree {
            continue;
        }
        for mono in Monomial::up_to_degree(max_degree - o) {
            let row = to_sparse(
                &g.mul_monomial(&mono).with_order(max_degree + 1),
                max_degree,
            );
            ech.insert(row);
        }
    }
    let mut pivots_by_degree = vec![0u32; max_degree as usize + 1];
    for &p in ech.pivots() {
        pivots_by_degree[degree_of_index(p) as usize] += 1;
    }
    let mut out = Vec::new();
    let mut pivots = 0;
    for d in 0..=max_degree {
        pivots += pivots_by_degree[d as usize];
        out.push(Monomial::count_below(d + 1) as u32 - pivots);
    }
    out
}

/// Tjurina number of `F`, searching degrees up to `max_degree` (further
/// capped at `N - 2` so the partials are exact).
///
/// When two partials have independent linear parts the quotient by them is
/// `k[[t]]`, so `tau_d = min(tau, d + 1)` and the colengths follow from
/// [`tjurina_along_curve`]. Otherwise this is [`tjurina_echelon`].
pub fn tjurina(f: &Series, max_degree: u32) -> Result<Tjurina, TjurinaError> {
    let d = max_degree.min(f.order().saturating_sub(2)).max(1);
    match tjurina_along_curve(f) {
        Some(Ok(tau)) if tau.max(1) <= d => Ok(Tjurina {
            value: tau,
            degree: tau.max(1),
        }),
        Some(Ok(tau)) => Err(TjurinaError::NotStabilized {
            degree: d,
            last: tau.min(d + 1),
        }),
        _ => tjurina_echelon(f, max_degree),
    }
}

/// Tjurina number from one echelon form of the truncated span of
/// `(F, F_x, F_y, F_z)`; slow for dense equations beyond degree 12 or so.
pub fn tjurina_echelon(f: &Series, max_degree: u32) -> Result<Tjurina, TjurinaError> {
    let d = max_degree.min(f.order().saturating_sub(2)).max(1);
    let order = d + 1;
    let mut gens = vec![f.with_order(order)];
    for v in Var::ALL {
        gens.push(f.derivative(v).with_order(order));
    }
    let tau = colengths(&gens, d);
    for k in 1..tau.len() {
        if tau[k] == tau[k - 1] {
            return Ok(Tjurina {
                value: tau[k - 1],
                degree: k as u32,
            });
        }
    }
    Err(TjurinaError::NotStabilized {
        degree: d,
        last: *tau.last().expect("nonempty"),
    })
}

/// Tjurina number when two partials `F_a, F_b` have independent linear
/// parts: they cut out a smooth curve `t -> gamma(t)`, so
/// `k[[x,y,z]] / (F_a, F_b) = k[[t]]` and `tau` is the least order of `F`
/// and the remaining partial along `gamma`. Returns `None` when the Hessian
/// has rank below two.
///
/// Working at orders 8, 16, ... up to `N`, an order below the working
/// precision is already exact.
pub fn tjurina_along_curve(f: &Series) -> Option<Result<u32, TjurinaError>> {
    let full = f.order();
    let mut k = 8.min(full);
    loop {
        let tau = tjurina_along_curve_at(&f.with_order(k))?;
        if tau.is_ok() || k >= full {
            return Some(tau);
        }
        k = (2 * k).min(full);
    }
}

fn tjurina_along_curve_at(f: &Series) -> Option<Result<u32, TjurinaError>> {
    let n = f.order().saturating_sub(1);
    let d: Vec<Series> = Var::ALL
        .iter()
        .map(|v| f.derivative(*v).with_order(n))
        .collect();
    for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let Ok(gamma) = CurveIdeal::new(d[a].clone(), d[b].clone()).parametrize() else {
            continue;
        };
        let o = [f.with_order(n).eval_uni(&gamma), d[c].eval_uni(&gamma)]
            .iter()
            .filter_map(Uni::ord)
            .min();
        return Some(
            o.map(|o| o as u32)
                .ok_or(TjurinaError::NotStabilized { degree: n, last: n }),
        );
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn tau(text: &str, d: u32) -> Result<Tjurina, TjurinaError> {
        let f = parse_series(text, 32).unwrap();
        let t = tjurina(&f, d);
        assert_eq!(t, tjurina_echelon(&f, d), "{text}");
        t
    }

    #[test]
    fn small_cases() {
        assert_eq!(tau("x*y - z^5", 12).unwrap().value, 4);
        assert_eq!(tau("x", 5).unwrap().value, 0);
        assert_eq!(tau("x*y + x*z^2 + y^2*z - z^6", 16).unwrap().value, 4);
        assert_eq!(tau("x^2 + y^3 + z^4", 16).unwrap().value, 6);
    }

    #[test]
    fn needs_enough_degree() {
        assert!(matches!(
            tau("x*y - z^12", 8),
            Err(TjurinaError::NotStabilized { .. })
        ));
        assert_eq!(tau("x*y - z^12", 16).unwrap().value, 11);
    }

    #[test]
    fn curve_method_agrees() {
        for text in [
            "x*y - z^5",
            "x*y + x*z^2 + y^2*z - z^6",
            "(x + y + z^2)*(x - 2*y) + z^7",
            "x^2 + y^2 + z^2",
        ] {
            let f = parse_series(text, 24).unwrap();
            let along = tjurina_along_curve(&f).unwrap().unwrap();
            assert_eq!(along, tjurina_echelon(&f, 12).unwrap().value, "{text}");
        }
        assert!(tjurina_along_curve(&parse_series("x^2 + y^3 + z^4", 16).unwrap()).is_none());
    }

    #[test]
    fn index_degrees() {
        for m in Monomial::up_to_degree(6) {
            assert_eq!(degree_of_index(m.index()), m.degree());
        }
    }
}
