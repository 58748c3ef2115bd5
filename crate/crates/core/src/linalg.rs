//! Exact linear algebra over the rationals.

use std::collections::BTreeMap;

use crate::rational::Rational;

/// Determinant of a 3x3 matrix.
pub fn det3(m: &[[Rational; 3]; 3]) -> Rational {
    let minor =
        |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
    let t0 = &m[0][0] * &minor(1, 2, 2, 1);
    let t1 = &m[0][1] * &minor(0, 2, 2, 0);
    let t2 = &m[0][2] * &minor(0, 1, 1, 0);
    &(&t0 - &t1) + &t2
}

/// A sparse vector: column index to nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Rational>;

/// Incremental row echelon form of sparse vectors.
///
/// Each stored row is normalized to pivot coefficient one, where the pivot is
/// its smallest column index. Rows are fully reduced against earlier pivots
/// only at their own pivot column, which is enough for rank and membership.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Reduces `v` against the stored rows; the result has no entry at any
    /// pivot column reached in increasing order.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, a)| (*c, a.clone()));
            let Some((col, a)) = next else { break };
            let row = &self.rows[&col];
            for (c, b) in row {
                let e = v.entry(*c).or_insert(Rational::ZERO);
                *e -= &(&a * b);
                if e.is_zero() {
                    v.remove(c);
                }
            }
            cursor = col + 1;
        }
        v
    }

    /// Inserts `v`, returning `true` when it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        self.insert_reduced(v)
    }

    fn insert_reduced(&mut self, mut v: SparseVec) -> bool {
        let Some((&col, lead)) = v.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        for a in v.values_mut() {
            *a = &*a * &inv;
        }
        self.rows.insert(col, v);
        true
    }

    /// `true` when `v` lies in the span of the stored rows.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries
            .iter()
            .map(|&(c, a)| (c, Rational::from_integer(a)))
            .collect()
    }

    #[test]
    fn determinant() {
        let r = |a: i64| Rational::from_integer(a);
        let m = [[r(2), r(0), r(1)], [r(1), r(3), r(0)], [r(0), r(1), r(4)]];
        assert_eq!(det3(&m), r(25));
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(v(&[(0, 1), (2, 1)])));
        assert!(e.insert(v(&[(1, 1), (2, -1)])));
        assert!(!e.insert(v(&[(0, 2), (1, 3), (2, -1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 1), (1, 1)])));
        assert!(!e.contains(&v(&[(2, 1)])));
    }
}
