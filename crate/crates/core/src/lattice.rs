//! Integer lattices: Hermite and Smith normal forms, subgroups of `Z^k`,
//! kernels of maps to cyclic groups, and the Picard group formula
//! `Pic = (intersection of local kernels) ∩ <m_1 C_1, ..., m_r C_r, H>`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("ambient ranks differ ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("first lattice is not contained in the second")]
    NotASubgroup,
    #[error("invalid Picard problem: {0}")]
    InvalidProblem(String),
}

/// A dense matrix of arbitrary precision integers, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { cols, rows }
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Self {
        IntMatrix::new(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&a| BigInt::from(a)).collect())
                .collect(),
        )
    }

    pub fn identity(k: usize) -> Self {
        IntMatrix::new(
            k,
            (0..k)
                .map(|i| (0..k).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect(),
        )
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn sub_multiple(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Row-style Hermite normal form of the lattice spanned by the rows: zero
/// rows dropped, pivots strictly increasing to the right and positive,
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut a: Vec<Vec<BigInt>> = m
        .rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut r = 0;
    for col in 0..m.cols {
        if r == a.len() {
            break;
        }
        loop {
            let best = (r..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(p) = best else { break };
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                let (top, rest) = a.split_at_mut(r + 1);
                sub_multiple(&mut rest[i - r - 1], &q, &top[r]);
                if !a[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r == a.len() || a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][col].div_floor(&a[r][col]);
            let (top, rest) = a.split_at_mut(r);
            sub_multiple(&mut top[i], &q, &rest[0]);
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    IntMatrix::new(m.cols, a)
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of the Smith normal form.
pub fn snf(m: &IntMatrix) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.rows.clone();
    let (nr, nc) = (a.len(), m.cols);
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        let pick = |a: &Vec<Vec<BigInt>>| {
            let mut best: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((pi, pj)) = pick(&a) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (top, rest) = a.split_at_mut(t + 1);
                sub_multiple(&mut rest[i - t - 1], &q, &top[t]);
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let s = row[t].clone();
                    row[j] -= &q * &s;
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                // Divisibility: fold any offending row into row t.
                let piv = a[t][t].clone();
                let bad = (t + 1..nr).find(|&i| {
                    (t + 1..nc).any(|j| !a[i][j].is_zero() && !a[i][j].is_multiple_of(&piv))
                });
                match bad {
                    Some(i) => {
                        let src = a[i].clone();
                        for (d, s) in a[t].iter_mut().zip(src) {
                            *d += s;
                        }
                    }
                    None => break,
                }
            }
            let Some((pi, pj)) = pick_in_cross(&a, t) else {
                break;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// Smallest nonzero entry in row `t` or column `t` (from `t` on).
fn pick_in_cross(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best = (t, t);
    for i in t..a.len() {
        if !a[i][t].is_zero()
            && (a[best.0][best.1].is_zero() || a[i][t].abs() < a[best.0][best.1].abs())
        {
            best = (i, t);
        }
    }
    for j in t..a[t].len() {
        if !a[t][j].is_zero()
            && (a[best.0][best.1].is_zero() || a[t][j].abs() < a[best.0][best.1].abs())
        {
            best = (t, j);
        }
    }
    (!a[best.0][best.1].is_zero()).then_some(best)
}

/// Index of a sublattice: finite, or infinite when the ranks differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

/// A subgroup of `Z^k`, stored by its Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    basis: IntMatrix,
}

impl Subgroup {
    pub fn from_rows(k: usize, rows: Vec<Vec<BigInt>>) -> Self {
        Subgroup {
            basis: hnf(&IntMatrix::new(k, rows)),
        }
    }

    pub fn from_i64(k: usize, rows: &[Vec<i64>]) -> Self {
        Subgroup {
            basis: hnf(&IntMatrix::from_i64(k, rows)),
        }
    }

    pub fn full(k: usize) -> Self {
        Subgroup {
            basis: IntMatrix::identity(k),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.basis.cols
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// The canonical (HNF) basis.
    pub fn hnf(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the HNF basis, when `v` lies in the lattice.
    fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v: Vec<BigInt> = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for row in &self.basis.rows {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let (q, rem) = v[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            sub_multiple(&mut v, &q, row);
            coords.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient_rank() && self.coordinates(v).is_some()
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        self.contains(&v.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>())
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient_rank() == other.ambient_rank()
            && self.basis.rows.iter().all(|r| other.contains(r))
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup, LatticeError> {
        let k = self.ambient_rank();
        if other.ambient_rank() != k {
            return Err(LatticeError::RankMismatch(k, other.ambient_rank()));
        }
        let zero = vec![BigInt::zero(); k];
        let mut rows = Vec::new();
        for a in &self.basis.rows {
            rows.push(a.iter().chain(a.iter()).cloned().collect());
        }
        for b in &other.basis.rows {
            rows.push(b.iter().chain(zero.iter()).cloned().collect());
        }
        let h = hnf(&IntMatrix::new(2 * k, rows));
        let inter = h
            .rows
            .iter()
            .filter(|r| r[..k].iter().all(Zero::is_zero))
            .map(|r| r[k..].to_vec())
            .collect();
        Ok(Subgroup::from_rows(k, inter))
    }

    /// Index of `self` in `other`.
    pub fn index_in(&self, other: &Subgroup) -> Result<Index, LatticeError> {
        if self.ambient_rank() != other.ambient_rank() {
            return Err(LatticeError::RankMismatch(
                self.ambient_rank(),
                other.ambient_rank(),
            ));
        }
        if !self.is_subgroup_of(other) {
            return Err(LatticeError::NotASubgroup);
        }
        if self.rank() != other.rank() {
            return Ok(Index::Infinite);
        }
        let coords: Vec<Vec<BigInt>> = self
            .basis
            .rows
            .iter()
            .map(|r| other.coordinates(r).expect("contained"))
            .collect();
        let inv = snf(&IntMatrix::new(other.rank(), coords));
        Ok(Index::Finite(
            inv.iter().fold(BigInt::one(), |acc, d| acc * d),
        ))
    }

    /// Renders the HNF basis as `<2L1, L2 + L3, H>` with the given labels.
    pub fn describe(&self, labels: &[String]) -> String {
        let gens: Vec<String> = self
            .basis
            .rows
            .iter()
            .map(|r| combination(r, labels))
            .collect();
        format!("<{}>", gens.join(", "))
    }
}

fn combination(v: &[BigInt], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            out.push_str(&a.to_string());
        }
        out.push_str(l);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `A ∩ B` for subgroups of the same ambient rank.
pub fn intersect_subgroups(a: &Subgroup, b: &Subgroup) -> Result<Subgroup, LatticeError> {
    a.intersect(b)
}

/// Index of `a` in `b`, which must contain it.
pub fn subgroup_index(a: &Subgroup, b: &Subgroup) -> Result<Index, LatticeError> {
    a.index_in(b)
}

/// A homomorphism `Z^k -> Z/n` given by the images of the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicMapSpec {
    pub modulus: BigInt,
    pub images: Vec<BigInt>,
}

impl CyclicMapSpec {
    pub fn new(modulus: i64, images: &[i64]) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let n = BigInt::from(modulus);
        CyclicMapSpec {
            images: images
                .iter()
                .map(|&a| BigInt::from(a).mod_floor(&n))
                .collect(),
            modulus: n,
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> BigInt {
        v.iter()
            .zip(&self.images)
            .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            .mod_floor(&self.modulus)
    }
}

/// `{v : sum v_i a_i = 0 mod n}`.
pub fn kernel_of_cyclic_map(spec: &CyclicMapSpec) -> Subgroup {
    let k = spec.images.len();
    let mut rows = Vec::with_capacity(k + 1);
    for (i, a) in spec.images.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k + 1];
        r[0] = a.clone();
        r[i + 1] = BigInt::one();
        rows.push(r);
    }
    let mut last = vec![BigInt::zero(); k + 1];
    last[0] = spec.modulus.clone();
    rows.push(last);
    let h = hnf(&IntMatrix::new(k + 1, rows));
    let kernel = h
        .rows
        .iter()
        .filter(|r| r[0].is_zero())
        .map(|r| r[1..].to_vec())
        .collect();
    Subgroup::from_rows(k, kernel)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub label: String,
    #[serde(default = "one_u32")]
    pub multiplicity: u32,
}

fn one_u32() -> u32 {
    1
}

/// One fixed point: either a map to `Z/modulus`, or, with `free_image`, a
/// local class group in which the listed curves have independent images of
/// infinite order (their coefficients must vanish in the kernel).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointSpec {
    #[serde(default)]
    pub modulus: Option<i64>,
    #[serde(default)]
    pub free_image: bool,
    pub images: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardProblem {
    pub curves: Vec<CurveSpec>,
    #[serde(default)]
    pub fixed_points: Vec<FixedPointSpec>,
}

impl PicardProblem {
    /// Labels of the basis `C_1, ..., C_r, H`.
    pub fn labels(&self) -> Vec<String> {
        self.curves
            .iter()
            .map(|c| c.label.clone())
            .chain(std::iter::once("H".to_string()))
            .collect()
    }

    fn position(&self, label: &str) -> Result<usize, LatticeError> {
        self.curves
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| LatticeError::InvalidProblem(format!("unknown curve label {label:?}")))
    }

    /// Kernel of the local restriction map at one fixed point.
    pub fn kernel(&self, p: &FixedPointSpec) -> Result<Subgroup, LatticeError> {
        let k = self.curves.len() + 1;
        if p.images.contains_key("H") {
            return Err(LatticeError::InvalidProblem(
                "local maps send H to 0; do not list it".into(),
            ));
        }
        if p.free_image {
            let mut killed = vec![false; k];
            for label in p.images.keys() {
                killed[self.position(label)?] = true;
            }
            let rows = (0..k)
                .filter(|&i| !killed[i])
                .map(|i| (0..k).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect();
            return Ok(Subgroup::from_rows(k, rows));
        }
        let n = p.modulus.filter(|&n| n >= 1).ok_or_else(|| {
            LatticeError::InvalidProblem(
                "fixed point needs a positive modulus or free_image".into(),
            )
        })?;
        let mut images = vec![0i64; k];
        for (label, &a) in &p.images {
            images[self.position(label)?] = a;
        }
        Ok(kernel_of_cyclic_map(&CyclicMapSpec::new(n, &images)))
    }
}

/// `Pic S = (∩ local kernels) ∩ <m_1 C_1, ..., m_r C_r, H>`.
pub fn picard_group(p: &PicardProblem) -> Result<Subgroup, LatticeError> {
    let k = p.curves.len() + 1;
    if p.curves.iter().any(|c| c.multiplicity == 0) {
        return Err(LatticeError::InvalidProblem(
            "multiplicities must be positive".into(),
        ));
    }
    let rows = (0..k)
        .map(|i| {
            let m = if i + 1 == k {
                1
            } else {
                p.curves[i].multiplicity
            };
            (0..k)
                .map(|j| {
                    if i == j {
                        BigInt::from(m)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut acc = Subgroup::from_rows(k, rows);
    for fp in &p.fixed_points {
        acc = acc.intersect(&p.kernel(fp)?)?;
    }
    Ok(acc)
}

/// Kernel of `L_0 -> 1, L_i -> -1 (i = 1..r), H -> 0` into `Z/r`, in the
/// basis `L_0, ..., L_r, H`.
pub fn pinwheel_kernel(r: usize) -> Subgroup {
    assert!(r >= 2, "pinwheel needs r >= 2");
    let n = r as i64;
    let mut images = vec![1];
    images.extend(std::iter::repeat_n(n - 1, r));
    images.push(0);
    kernel_of_cyclic_map(&CyclicMapSpec::new(n, &images))
}
