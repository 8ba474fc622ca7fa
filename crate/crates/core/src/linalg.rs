//! Exact sparse linear algebra over the rationals.
//!
//! Matrices are stored column-major: every column is a sorted list of
//! `(row, value)` pairs with no stored zeros.  All elimination goes through
//! [`Echelon`], which pivots deterministically (columns left to right, pivot
//! on the lowest row index), so every basis produced here is reproducible.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{ParacycError, Result};

pub type Rational = num::BigRational;

/// A sparse vector: sorted `(index, value)` pairs, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || ParacycError::Parse(format!("not a rational: '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `a + c * b` for sparse vectors.
pub fn axpy(a: &[(usize, Rational)], c: &Rational, b: &[(usize, Rational)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(v: &[(usize, Rational)], c: &Rational) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn accumulate(acc: &mut BTreeMap<usize, Rational>, i: usize, c: Rational) {
    let e = acc.entry(i).or_insert_with(Rational::zero);
    *e += c;
}

fn from_acc(acc: BTreeMap<usize, Rational>) -> SparseVec {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Sparse matrix over ℚ in compressed-column form.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(12) {
            write!(f, "[")?;
            for c in 0..self.cols.min(12) {
                write!(f, "{} ", format_rational(&self.get(r, c)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Rational::one())
    }

    pub fn scalar(n: usize, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zeros(n, n);
        }
        RationalMatrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, c.clone())]).collect() }
    }

    /// Builds from sorted, zero-free columns.  Panics on malformed input.
    pub fn from_columns(rows: usize, data: Vec<SparseVec>) -> Self {
        for col in &data {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(col.iter().all(|(r, v)| *r < rows && !v.is_zero()));
        }
        RationalMatrix { rows, cols: data.len(), data }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Rational)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of bounds {rows}x{cols}");
            accumulate(&mut acc[c], r, v);
        }
        RationalMatrix { rows, cols, data: acc.into_iter().map(from_acc).collect() }
    }

    /// Builds from a dense row-major array.
    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        Self::from_triplets(
            nr,
            nc,
            rows.iter().enumerate().flat_map(|(i, row)| {
                assert_eq!(row.len(), nc, "ragged dense matrix");
                row.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    /// Permutation-like matrix sending basis vector `j` to `coef * e_{target}`.
    pub fn from_column_map(rows: usize, cols: usize, f: impl Fn(usize) -> Option<(usize, Rational)>) -> Self {
        let data = (0..cols)
            .map(|j| match f(j) {
                Some((r, v)) if !v.is_zero() => {
                    assert!(r < rows);
                    vec![(r, v)]
                }
                _ => Vec::new(),
            })
            .collect();
        RationalMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn col(&self, j: usize) -> &[(usize, Rational)] {
        &self.data[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(j, c)| c.len() == 1 && c[0].0 == j && c[0].1.is_one())
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.data[c][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (j, col) in self.data.iter().enumerate() {
            for (i, v) in col {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.data.iter().enumerate() {
            for (i, v) in col {
                data[*i].push((j, v.clone()));
            }
        }
        RationalMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul_vec(&self, v: &[(usize, Rational)]) -> SparseVec {
        assert!(v.last().is_none_or(|(i, _)| *i < self.cols), "vector length exceeds columns");
        match v.len() {
            0 => Vec::new(),
            1 => scale_vec(&self.data[v[0].0], &v[0].1),
            _ => {
                let mut acc = BTreeMap::new();
                for (j, c) in v {
                    for (i, x) in &self.data[*j] {
                        accumulate(&mut acc, *i, x * c);
                    }
                }
                from_acc(acc)
            }
        }
    }

    pub fn mul_dense_vec(&self, v: &[Rational]) -> Vec<Rational> {
        let sv = sparse_from_dense(v);
        let mut out = vec![Rational::zero(); self.rows];
        for (i, x) in self.mul_vec(&sv) {
            out[i] = x;
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product {:?} * {:?}", self.shape(), rhs.shape());
        let work: usize = rhs.data.iter().map(|c| c.iter().map(|(k, _)| self.data[*k].len()).sum::<usize>()).sum();
        let data = if work > 20_000 {
            rhs.data.par_iter().map(|c| self.mul_vec(c)).collect()
        } else {
            rhs.data.iter().map(|c| self.mul_vec(c)).collect()
        };
        RationalMatrix { rows: self.rows, cols: rhs.cols, data }
    }

    pub fn add(&self, rhs: &RationalMatrix) -> RationalMatrix {
        self.axpy(&Rational::one(), rhs)
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> RationalMatrix {
        self.axpy(&-Rational::one(), rhs)
    }

    /// `self + c * rhs`.
    pub fn axpy(&self, c: &Rational, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| axpy(a, c, b)).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Rational) -> RationalMatrix {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| scale_vec(v, c)).collect() }
    }

    pub fn neg(&self) -> RationalMatrix {
        self.scale(&-Rational::one())
    }

    /// Scales column `j` by `f(j)`.
    pub fn scale_columns(&self, f: impl Fn(usize) -> Rational) -> RationalMatrix {
        let data = self.data.iter().enumerate().map(|(j, v)| scale_vec(v, &f(j))).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        RationalMatrix { rows: self.rows, cols: self.cols + rhs.cols, data }
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.cols);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|(i, v)| (i + self.rows, v.clone())));
                c
            })
            .collect();
        RationalMatrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    /// Selects columns by index.
    pub fn select_columns(&self, idx: &[usize]) -> RationalMatrix {
        RationalMatrix { rows: self.rows, cols: idx.len(), data: idx.iter().map(|&j| self.data[j].clone()).collect() }
    }

    /// First entry where `self` and `other` differ, as `(row, col, self, other)`.
    pub fn first_difference(&self, other: &RationalMatrix) -> Option<(usize, usize, Rational, Rational)> {
        if self.shape() != other.shape() {
            return Some((usize::MAX, usize::MAX, Rational::zero(), Rational::zero()));
        }
        for j in 0..self.cols {
            if self.data[j] != other.data[j] {
                let d = axpy(&self.data[j], &-Rational::one(), &other.data[j]);
                let i = d[0].0;
                return Some((i, j, self.get(i, j), other.get(i, j)));
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Entries as `"p/q"` strings, row-major.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_dense().iter().map(|r| r.iter().map(format_rational).collect()).collect()
    }

    pub fn from_strings(rows: usize, cols: usize, s: &[Vec<String>]) -> Result<Self> {
        if s.len() != rows || s.iter().any(|r| r.len() != cols) {
            return Err(ParacycError::DimensionMismatch(format!("expected a {rows}x{cols} matrix")));
        }
        let mut trip = Vec::new();
        for (i, r) in s.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                let v = parse_rational(x)?;
                if !v.is_zero() {
                    trip.push((i, j, v));
                }
            }
        }
        Ok(Self::from_triplets(rows, cols, trip))
    }

    /// Largest absolute value of numerator or denominator, for diagnostics.
    pub fn height(&self) -> BigInt {
        self.data
            .iter()
            .flatten()
            .map(|(_, v)| v.numer().abs().max(v.denom().clone()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

/// Incremental column echelon form with deterministic pivoting.
///
/// Every stored vector is normalised so its leading (lowest-row) entry is 1,
/// and no two stored vectors share a leading row.  Optionally each stored
/// vector remembers which combination of inserted vectors produced it.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    pivot_of_row: BTreeMap<usize, usize>,
    basis: Vec<SparseVec>,
    combos: Option<Vec<SparseVec>>,
    pivot_inputs: Vec<usize>,
    kernel: Vec<SparseVec>,
    inserted: usize,
}

impl Echelon {
    pub fn new(dim: usize, track: bool) -> Self {
        Echelon {
            dim,
            pivot_of_row: BTreeMap::new(),
            basis: Vec::new(),
            combos: if track { Some(Vec::new()) } else { None },
            pivot_inputs: Vec::new(),
            kernel: Vec::new(),
            inserted: 0,
        }
    }

    pub fn from_columns(m: &RationalMatrix, track: bool) -> Self {
        let mut e = Echelon::new(m.rows(), track);
        for c in m.columns() {
            e.insert(c.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of_row.keys().copied()
    }

    pub fn is_pivot_row(&self, r: usize) -> bool {
        self.pivot_of_row.contains_key(&r)
    }

    /// Indices of inserted vectors that produced a pivot.
    pub fn pivot_inputs(&self) -> &[usize] {
        &self.pivot_inputs
    }

    /// Combinations of inserted vectors that vanish (requires tracking).
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Reduces `v` until its leading row is not a pivot.  Returns the residue
    /// and, if tracking, the combination `c` of inserted vectors such that
    /// `v = residue + sum c_k input_k`.
    fn reduce_leading(&self, mut v: SparseVec) -> (SparseVec, BTreeMap<usize, Rational>) {
        let mut used = BTreeMap::new();
        while let Some((r, x)) = v.first() {
            let Some(&k) = self.pivot_of_row.get(r) else { break };
            let c = x.clone();
            v = axpy(&v, &-c.clone(), &self.basis[k]);
            if let Some(combos) = &self.combos {
                for (i, y) in &combos[k] {
                    accumulate(&mut used, *i, &c * y);
                }
            }
        }
        (v, used)
    }

    /// Eliminates every pivot row from `v`; same return convention.
    pub fn reduce_full(&self, mut v: SparseVec) -> (SparseVec, BTreeMap<usize, Rational>) {
        let mut used = BTreeMap::new();
        let mut pos = 0;
        while pos < v.len() {
            let r = v[pos].0;
            if let Some(&k) = self.pivot_of_row.get(&r) {
                let c = v[pos].1.clone();
                v = axpy(&v, &-c.clone(), &self.basis[k]);
                if let Some(combos) = &self.combos {
                    for (i, y) in &combos[k] {
                        accumulate(&mut used, *i, &c * y);
                    }
                }
                // entries before `pos` are untouched since pivots lead their vectors
            } else {
                pos += 1;
            }
        }
        (v, used)
    }

    /// Inserts a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (res, used) = self.reduce_leading(v);
        match res.first() {
            None => {
                if self.combos.is_some() {
                    let mut acc = used;
                    for val in acc.values_mut() {
                        *val = -val.clone();
                    }
                    accumulate(&mut acc, idx, Rational::one());
                    self.kernel.push(from_acc(acc));
                }
                false
            }
            Some((r, lead)) => {
                let r = *r;
                let inv = lead.recip();
                let normalized = scale_vec(&res, &inv);
                if let Some(combos) = &mut self.combos {
                    // res = input_idx - sum used_k input_k
                    let mut acc: BTreeMap<usize, Rational> = used.into_iter().map(|(k, c)| (k, -c * &inv)).collect();
                    accumulate(&mut acc, idx, inv.clone());
                    combos.push(from_acc(acc));
                }
                self.pivot_of_row.insert(r, self.basis.len());
                self.basis.push(normalized);
                self.pivot_inputs.push(idx);
                true
            }
        }
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce_leading(v.to_vec()).0.is_empty()
    }

    /// Solves `sum c_k input_k = v`; requires tracking.
    pub fn express(&self, v: &[(usize, Rational)]) -> Option<SparseVec> {
        assert!(self.combos.is_some(), "express requires combination tracking");
        let (res, used) = self.reduce_leading(v.to_vec());
        if res.is_empty() {
            Some(from_acc(used))
        } else {
            None
        }
    }

    pub fn basis_vectors(&self) -> &[SparseVec] {
        &self.basis
    }
}

pub fn rank(m: &RationalMatrix) -> usize {
    // eliminate along the shorter side
    if m.rows() < m.cols() {
        Echelon::from_columns(&m.transpose(), false).rank()
    } else {
        Echelon::from_columns(m, false).rank()
    }
}

/// A subspace of ℚ^n given by linearly independent basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    /// Extracts an independent subset of the spanning vectors (deterministically).
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new(ambient_dim, false);
        let mut basis = Vec::new();
        for v in vectors {
            if e.insert(v.clone()) {
                basis.push(v);
            }
        }
        Subspace { ambient_dim, basis }
    }

    /// The column space of `m`.
    pub fn column_space(m: &RationalMatrix) -> Self {
        image_basis(m)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn as_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient_dim, self.basis.clone())
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        Echelon::from_columns(&self.as_matrix(), false).contains(v)
    }

    /// Intersection dimension with another subspace of the same ambient space.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        let joint = self.as_matrix().hstack(&other.as_matrix());
        self.dim() + other.dim() - rank(&joint)
    }
}

pub fn kernel_basis(m: &RationalMatrix) -> Subspace {
    let e = Echelon::from_columns(m, true);
    Subspace { ambient_dim: m.cols(), basis: e.kernel().to_vec() }
}

/// Pivot columns of `m` (leftmost first), as a basis of its column space.
pub fn image_basis(m: &RationalMatrix) -> Subspace {
    let e = Echelon::from_columns(m, false);
    Subspace { ambient_dim: m.rows(), basis: e.pivot_inputs().iter().map(|&j| m.col(j).to_vec()).collect() }
}

/// Solves `m x = rhs`; `None` when inconsistent.
pub fn solve(m: &RationalMatrix, rhs: &[(usize, Rational)]) -> Option<SparseVec> {
    Echelon::from_columns(m, true).express(rhs)
}

/// Solves `m X = rhs` column by column; `None` if any column is inconsistent.
pub fn solve_matrix(m: &RationalMatrix, rhs: &RationalMatrix) -> Option<RationalMatrix> {
    let e = Echelon::from_columns(m, true);
    let cols: Option<Vec<SparseVec>> = rhs.columns().par_iter().map(|c| e.express(c)).collect();
    cols.map(|c| RationalMatrix::from_columns(m.cols(), c))
}

pub fn invert(m: &RationalMatrix) -> Result<RationalMatrix> {
    assert_eq!(m.rows(), m.cols(), "invert needs a square matrix");
    let n = m.rows();
    let e = Echelon::from_columns(m, true);
    if e.rank() < n {
        return Err(ParacycError::SingularMatrix { size: n, rank: e.rank() });
    }
    let cols: Vec<SparseVec> = (0..n)
        .into_par_iter()
        .map(|i| e.express(&[(i, Rational::one())]).expect("full rank"))
        .collect();
    Ok(RationalMatrix::from_columns(n, cols))
}

/// Quotient `ℚ^n / sub` with canonical coordinates.
///
/// Representatives are the standard basis vectors on the non-pivot rows of
/// the subspace's echelon form; `projection` sends a vector to its
/// coordinates, `section` sends coordinates back to representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ambient_dim: usize,
    pub representatives: Vec<usize>,
    pub projection: RationalMatrix,
    pub section: RationalMatrix,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

pub fn quotient_basis(ambient_dim: usize, sub: &Subspace) -> Quotient {
    let mut e = Echelon::new(ambient_dim, false);
    for v in &sub.basis {
        e.insert(v.clone());
    }
    let representatives: Vec<usize> = (0..ambient_dim).filter(|r| !e.is_pivot_row(*r)).collect();
    let mut coord = vec![usize::MAX; ambient_dim];
    for (k, &r) in representatives.iter().enumerate() {
        coord[r] = k;
    }
    let cols: Vec<SparseVec> = (0..ambient_dim)
        .into_par_iter()
        .map(|i| {
            let (res, _) = e.reduce_full(vec![(i, Rational::one())]);
            res.into_iter().map(|(r, v)| (coord[r], v)).collect::<SparseVec>()
        })
        .collect();
    let projection = RationalMatrix::from_columns(representatives.len(), cols);
    let section = RationalMatrix::from_column_map(ambient_dim, representatives.len(), |k| Some((representatives[k], Rational::one())));
    Quotient { ambient_dim, representatives, projection, section }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(RationalMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(RationalMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&RationalMatrix::from_i64(&[&[1, -1]]));
        assert_eq!(k.basis, vec![vec![(0, qi(1)), (1, qi(1))]]);
        assert!(kernel_basis(&RationalMatrix::identity(5)).basis.is_empty());
        let m = RationalMatrix::from_i64(&[&[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.dim(), 1);
        assert!(m.mul_vec(&k.basis[0]).is_empty());
        // proportional to (2, -1)
        let v = &k.basis[0];
        assert_eq!(&v[0].1 / &v[1].1, qi(-2));
    }

    #[test]
    fn quotient_examples() {
        let sub = Subspace::span(2, [vec![(0, qi(1)), (1, qi(-1))]]);
        let qt = quotient_basis(2, &sub);
        assert_eq!(qt.dim(), 1);
        assert_eq!(qt.projection, RationalMatrix::from_i64(&[&[1, 1]]));
        let id = quotient_basis(3, &Subspace::zero(3));
        assert!(id.projection.is_identity());
        let full = quotient_basis(2, &Subspace::span(2, [vec![(0, qi(1))], vec![(1, qi(1))]]));
        assert_eq!(full.dim(), 0);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&RationalMatrix::from_i64(&[&[2]])).unwrap(), RationalMatrix::from_dense(&[vec![q(1, 2)]]));
        let swap = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(invert(&swap).unwrap(), swap);
        let u = RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(invert(&u).unwrap(), RationalMatrix::from_i64(&[&[1, -1], &[0, 1]]));
        assert!(matches!(invert(&RationalMatrix::zeros(2, 2)), Err(ParacycError::SingularMatrix { .. })));
    }

    #[test]
    fn solve_examples() {
        let m = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(solve(&m, &[(0, qi(1))]).is_none());
        let x = solve(&m, &[(0, qi(3)), (1, qi(6))]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![(0, qi(3)), (1, qi(6))]);
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3", "-1/2", "0", "7/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
