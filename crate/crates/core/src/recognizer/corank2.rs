//! Narrow classifier for double points whose quadratic part is a square.
//!
//! After the splitting lemma `F ~ x^2 + R(y, z)`, an order-four residual
//! means the point is not a rational double point. If the cubic part of `R`
//! is a cube `a * l^3`, the coefficient of `z^4` in coordinates with `y = l`
//! separates `E_6` from the remaining cases.

use crate::linalg::det3;
use crate::rational::Rational;
use crate::series::{Monomial, Series, Var};

use super::quadratic::{inverse3, linear_change, quadratic_matrix};
use super::{RecognizeError, SingularityReport, Verdict};

/// Highest degree read from the residual; `E_8` needs degree five.
const WORKING_ORDER: u32 = 7;

/// Solves `dF/dx = 0` for `x = xi(y, z)` when `F = x^2 + ...`, and returns
/// the residual `F(xi(y, z), y, z)`.
fn split_off_square(f: &Series) -> Series {
    let n = f.order();
    let dx = f.derivative(Var::X).with_order(n);
    // dF/dx = 2x + D(x, y, z) with D in m^2.
    let d = &dx - &Series::x(n).scale(&Rational::from_integer(2));
    let half = Rational::new(-1, 2);
    let (y, z) = (Series::y(n), Series::z(n));
    let mut xi = Series::zero(n);
    for _ in 0..n {
        let next = d.compose(&xi, &y, &z).scale(&half);
        if next == xi {
            break;
        }
        xi = next;
    }
    f.compose(&xi, &y, &z)
}

fn c2(r: &Series, j: u32, k: u32) -> Rational {
    r.coeff(&Monomial::new(0, j, k))
}

/// Classifies a double point with quadratic part of rank at most one.
pub fn corank2_classify(f: &Series) -> Result<SingularityReport, RecognizeError> {
    let order = f.order();
    let report = |v: Verdict, log: Vec<String>| Ok(SingularityReport::bare(v, order, log));
    if !f.constant_term().is_zero()
        || Var::ALL
            .iter()
            .any(|v| !f.coeff(&Monomial::var(*v)).is_zero())
    {
        return Err(RecognizeError::NotDoublePoint("not in m^2".into()));
    }
    let k = order.min(WORKING_ORDER);
    let fk = f.with_order(k);
    let q = quadratic_matrix(&fk);
    let Some(i) = (0..3).find(|&i| !q[i][i].is_zero()) else {
        if q.iter().flatten().all(Rational::is_zero) {
            return report(Verdict::NotRdp, vec!["multiplicity at least three".into()]);
        }
        return Err(RecognizeError::Precondition(
            "quadratic part is not a square".into(),
        ));
    };
    // Rows: new coordinates as linear forms in the old ones, x' = row i of Q.
    let basis = |c: usize| -> [Rational; 3] {
        std::array::from_fn(|r| {
            if r == c {
                Rational::ONE
            } else {
                Rational::ZERO
            }
        })
    };
    let mut t = None;
    for (a, b) in [(1, 2), (0, 2), (0, 1)] {
        let cand = [q[i].clone(), basis(a), basis(b)];
        if !det3(&cand).is_zero() {
            t = Some(cand);
            break;
        }
    }
    let t = t.expect("a nonzero row completes to a basis");
    let m = inverse3(&t).expect("nonsingular");
    let g = fk.substitute(&linear_change(&m, k)?)?.scale(&q[i][i]);
    let square = Series::x(k).pow(2);
    if g.homogeneous_part(2) != square {
        return Err(RecognizeError::Precondition(
            "quadratic part has rank above one".into(),
        ));
    }
    let r = split_off_square(&g);
    let mut log = vec![format!("residual after splitting off x^2: {r}")];
    match r.ord() {
        None => return report(Verdict::NotRdp, log),
        Some(o) if o >= 4 => {
            log.push("residual lies in m^4".into());
            return report(Verdict::NotRdp, log);
        }
        Some(o) if o < 3 => {
            return Err(RecognizeError::Internal(
                "residual has a quadratic part".into(),
            ))
        }
        _ => {}
    }
    let (a, b, c, d) = (c2(&r, 3, 0), c2(&r, 2, 1), c2(&r, 1, 2), c2(&r, 0, 3));
    let three = Rational::from_integer(3);
    let is_cube = &b * &b == &three * &(&a * &c)
        && &c * &c == &three * &(&b * &d)
        && &b * &c == &Rational::from_integer(9) * &(&a * &d);
    if !is_cube {
        log.push("cubic part is not a cube".into());
        return report(Verdict::Undetermined("D type".into()), log);
    }
    // Coordinates in which the cubic part is a multiple of y^3.
    let (yk, zk) = (Series::y(k), Series::z(k));
    let r2 = if a.is_zero() {
        r.compose(&Series::x(k), &zk, &yk)
    } else {
        let shift = &b / &(&three * &a);
        r.compose(&Series::x(k), &(&yk - &zk.scale(&shift)), &zk)
    };
    let c04 = c2(&r2, 0, 4);
    if !c04.is_zero() {
        log.push(format!(
            "cubic part is a cube and the z^4 coefficient is {c04}"
        ));
        return report(Verdict::E6, log);
    }
    if k < 6 {
        return report(
            Verdict::Undetermined("truncation below degree 6".into()),
            log,
        );
    }
    if !c2(&r2, 1, 3).is_zero() {
        return report(Verdict::Undetermined("E7 type".into()), log);
    }
    if !c2(&r2, 0, 5).is_zero() {
        return report(Verdict::Undetermined("E8 type".into()), log);
    }
    log.push("weighted principal part is degenerate".into());
    report(Verdict::NotRdp, log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn classify(text: &str) -> Verdict {
        corank2_classify(&parse_series(text, 32).unwrap())
            .unwrap()
            .verdict
    }

    #[test]
    fn normal_forms() {
        assert_eq!(classify("x^2 + y^3 + z^4"), Verdict::E6);
        assert_eq!(classify("x^2 + y^3*z + y*z^3 + z^4"), Verdict::NotRdp);
        assert_eq!(
            classify("x^2 + y^3 + y*z^3"),
            Verdict::Undetermined("E7 type".into())
        );
        assert_eq!(
            classify("x^2 + y^3 + z^5"),
            Verdict::Undetermined("E8 type".into())
        );
        assert_eq!(classify("x^2 + y^3 + z^6"), Verdict::NotRdp);
        assert_eq!(
            classify("x^2 + y^2*z + z^4"),
            Verdict::Undetermined("D type".into())
        );
        assert_eq!(classify("x^3 + y^3 + z^3"), Verdict::NotRdp);
    }

    #[test]
    fn disguised_e6() {
        // Square, cube and quartic in skew coordinates, plus a term the splitting absorbs.
        assert_eq!(
            classify("(x + y)^2 + (y + 2*z)^3 + z^4 + x*z^3"),
            Verdict::E6
        );
        assert_eq!(
            classify("3*(x - z)^2 + (x - z)*y^2 + y^3 + z^4"),
            Verdict::E6
        );
    }
}
