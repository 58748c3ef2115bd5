//! Rank of the quadratic part and a rational change making it `xy`.

use crate::linalg::det3;
use crate::rational::Rational;
use crate::series::{CoordChange, Monomial, Series, Var};

use super::RecognizeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum QuadraticOutcome {
    /// The change makes the quadratic part exactly `xy`.
    XYForm,
    /// Nondegenerate quadratic part: an `A_1` point.
    RankThree,
    /// Rank at most one: routed to the corank-two classifier.
    Corank2,
    /// Rank two, but the binary form does not split over the rationals.
    NeedsExtension,
}

#[derive(Debug, Clone)]
pub struct QuadraticNormalization {
    pub outcome: QuadraticOutcome,
    pub rank: usize,
    /// Substituting with this change brings `F` to the stated shape. It is
    /// the identity unless the outcome is `XYForm` or `NeedsExtension`.
    pub change: CoordChange,
}

/// Symmetric matrix `Q` with `q(v) = v^T Q v` for the quadratic part.
pub fn quadratic_matrix(f: &Series) -> [[Rational; 3]; 3] {
    let mut q: [[Rational; 3]; 3] = Default::default();
    let half = Rational::new(1, 2);
    for a in Var::ALL {
        for b in Var::ALL {
            let m = Monomial::var(a).times(&Monomial::var(b));
            let c = f.coeff(&m);
            q[a.index()][b.index()] = if a == b { c } else { &c * &half };
        }
    }
    q
}

fn rank3(m: &[[Rational; 3]; 3]) -> usize {
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..3 {
        let Some(p) = (rank..3).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..3 {
            if r != rank && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[rank][col];
                for c in 0..3 {
                    let d = &f * &a[rank][c];
                    a[r][c] -= &d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// Change whose images are the linear forms `sum_c m[r][c] * var_c`.
pub(crate) fn linear_change(
    m: &[[Rational; 3]; 3],
    order: u32,
) -> Result<CoordChange, RecognizeError> {
    let images = std::array::from_fn(|r| {
        Series::from_terms(
            Var::ALL
                .iter()
                .map(|v| (Monomial::var(*v), m[r][v.index()].clone())),
            order,
        )
    });
    Ok(CoordChange::new(images)?)
}

pub(crate) fn inverse3(m: &[[Rational; 3]; 3]) -> Option<[[Rational; 3]; 3]> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&i| i != c).collect();
        let minor = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]])
            - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    Some(std::array::from_fn(|r| {
        std::array::from_fn(|c| &cof(c, r) / &d)
    }))
}

/// Checks that `F` is a double point and brings a split rank-two quadratic
/// part to `xy` by a rational linear change.
pub fn normalize_quadratic(f: &Series) -> Result<QuadraticNormalization, RecognizeError> {
    if f.is_zero() {
        return Err(RecognizeError::ZeroSeries);
    }
    if !f.constant_term().is_zero() {
        return Err(RecognizeError::NotDoublePoint(
            "nonzero constant term: the point is not on the surface".into(),
        ));
    }
    if Var::ALL
        .iter()
        .any(|v| !f.coeff(&Monomial::var(*v)).is_zero())
    {
        return Err(RecognizeError::NotDoublePoint(
            "linear term present: the point is smooth".into(),
        ));
    }
    let order = f.order();
    let identity = CoordChange::identity(order);
    let q = quadratic_matrix(f);
    let rank = rank3(&q);
    let outcome = |outcome, change| {
        Ok(QuadraticNormalization {
            outcome,
            rank,
            change,
        })
    };
    match rank {
        3 => return outcome(QuadraticOutcome::RankThree, identity),
        0 | 1 => return outcome(QuadraticOutcome::Corank2, identity),
        _ => {}
    }
    // Kernel direction of the rank-two form becomes the z-axis.
    let kernel = (0..3)
        .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
        .map(|(a, b)| cross(&q[a], &q[b]))
        .find(|k| k.iter().any(|c| !c.is_zero()))
        .expect("rank two has two independent rows");
    let lead = kernel
        .iter()
        .find(|c| !c.is_zero())
        .expect("nonzero kernel")
        .clone();
    let kernel: [Rational; 3] = std::array::from_fn(|r| &kernel[r] / &lead);
    let basis = |i: usize| -> [Rational; 3] {
        std::array::from_fn(|r| {
            if r == i {
                Rational::ONE
            } else {
                Rational::ZERO
            }
        })
    };
    let mut m1 = None;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let (ea, eb) = (basis(a), basis(b));
        let cand: [[Rational; 3]; 3] =
            std::array::from_fn(|r| [ea[r].clone(), eb[r].clone(), kernel[r].clone()]);
        if !det3(&cand).is_zero() {
            m1 = Some(cand);
            break;
        }
    }
    let m1 = m1.expect("kernel vector completes to a basis");
    let phi1 = linear_change(&m1, order)?;
    let q2 = f
        .homogeneous_part(2)
        .with_order(3)
        .substitute(&linear_change(&m1, 3)?)?;
    let a = q2.coeff(&Monomial::new(2, 0, 0));
    let b = q2.coeff(&Monomial::new(1, 1, 0));
    let c = q2.coeff(&Monomial::new(0, 2, 0));
    let disc = &(&b * &b) - &(&Rational::from_integer(4) * &(&a * &c));
    let Some(s) = disc.nth_root(2) else {
        return outcome(QuadraticOutcome::NeedsExtension, phi1);
    };
    // q2 = X * Y with X = p00 x + p01 y and Y = p10 x + p11 y.
    let p = if a.is_zero() {
        [[b.clone(), c.clone()], [Rational::ZERO, Rational::ONE]]
    } else {
        let two_a = &Rational::from_integer(2) * &a;
        let r1 = &(&-&b + &s) / &two_a;
        let r2 = &(&-&b - &s) / &two_a;
        [[a.clone(), &-&r1 * &a], [Rational::ONE, -r2]]
    };
    let det = &(&p[0][0] * &p[1][1]) - &(&p[0][1] * &p[1][0]);
    let z = Rational::ZERO;
    let m2 = [
        [&p[1][1] / &det, &-&p[0][1] / &det, z.clone()],
        [&-&p[1][0] / &det, &p[0][0] / &det, z.clone()],
        [z.clone(), z.clone(), Rational::ONE],
    ];
    let phi2 = linear_change(&m2, order)?;
    let change = phi1.then(&phi2)?;
    outcome(QuadraticOutcome::XYForm, change)
}
