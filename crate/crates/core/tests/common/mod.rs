//! Strategies shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use singlocus::{CoordChange, Monomial, Rational, Series};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

/// A sparse series with up to `terms` terms of degree `< order`.
pub fn series(order: u32, min_degree: u32, terms: usize) -> impl Strategy<Value = Series> {
    let monos: Vec<Monomial> = Monomial::up_to_degree(order - 1)
        .filter(|m| m.degree() >= min_degree)
        .collect();
    proptest::collection::vec(
        (proptest::sample::select(monos), small_rational()),
        0..=terms,
    )
    .prop_map(move |t| Series::from_terms(t, order))
}

/// A unit: nonzero constant plus a random tail.
pub fn unit(order: u32, terms: usize) -> impl Strategy<Value = Series> {
    ((1i64..=9), any::<bool>(), series(order, 1, terms)).prop_map(move |(c, neg, tail)| {
        let c = if neg { -c } else { c };
        &Series::constant(Rational::from_integer(c), order) + &tail
    })
}

/// A change of coordinates: an invertible integer linear part plus
/// higher-order terms.
pub fn change(order: u32, terms: usize) -> impl Strategy<Value = CoordChange> {
    let lin = proptest::collection::vec(-2i64..=2, 9);
    (
        lin,
        series(order, 2, terms),
        series(order, 2, terms),
        series(order, 2, terms),
    )
        .prop_filter_map("singular linear part", move |(l, a, b, c)| {
            let vars = [Series::x(order), Series::y(order), Series::z(order)];
            let row = |r: usize, tail: Series| {
                (0..3).fold(tail, |acc, k| {
                    &acc + &vars[k].scale(&Rational::from_integer(l[3 * r + k]))
                })
            };
            CoordChange::new([row(0, a), row(1, b), row(2, c)]).ok()
        })
}

/// A nonsingular linear change with small integer entries.
pub fn linear_change(order: u32) -> impl Strategy<Value = CoordChange> {
    change(order, 0)
}
