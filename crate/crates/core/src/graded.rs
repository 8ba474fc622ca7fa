//! Graded modules and homogeneous maps on a finite degree window.
//!
//! A [`GradedMap`] of shift `k` carries one block `C_m -> D_{m+k}` for every
//! source degree `m` in `0..=hi`.  Blocks landing in negative degrees are
//! zero-row matrices.  Degrees above `hi` are *undefined* (not zero), so a
//! composite only keeps degrees where both factors are known.

use rayon::prelude::*;

use crate::error::{ParacycError, Result};
use crate::linalg::{Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    ranks: Vec<usize>,
}

impl GradedModule {
    pub fn new(ranks: Vec<usize>) -> Self {
        assert!(!ranks.is_empty(), "a graded module needs degree 0");
        GradedModule { ranks }
    }

    /// Largest degree carried.
    pub fn max_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    /// Rank in degree `m`; zero for negative degrees and above the window.
    pub fn rank(&self, m: i64) -> usize {
        if m < 0 {
            0
        } else {
            self.ranks.get(m as usize).copied().unwrap_or(0)
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn truncate(&self, max_degree: usize) -> GradedModule {
        GradedModule { ranks: self.ranks[..=max_degree.min(self.max_degree())].to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedModule,
    target: GradedModule,
    shift: i32,
    blocks: Vec<RationalMatrix>,
}

impl GradedMap {
    /// Builds a map from explicit blocks for source degrees `0..blocks.len()`.
    pub fn new(source: GradedModule, target: GradedModule, shift: i32, blocks: Vec<RationalMatrix>) -> Result<Self> {
        for (m, b) in blocks.iter().enumerate() {
            let t = m as i64 + shift as i64;
            if t > target.max_degree() as i64 {
                return Err(ParacycError::DimensionMismatch(format!("degree {m} maps above the target window")));
            }
            let want = (target.rank(t), source.rank(m as i64));
            if b.shape() != want {
                return Err(ParacycError::DimensionMismatch(format!(
                    "block in degree {m} has shape {:?}, expected {want:?}",
                    b.shape()
                )));
            }
        }
        if blocks.len() > source.max_degree() + 1 {
            return Err(ParacycError::DimensionMismatch("more blocks than source degrees".into()));
        }
        Ok(GradedMap { source, target, shift, blocks })
    }

    /// Builds a map from a per-degree constructor on `0..=hi`, where `hi` is
    /// clipped to what source and target can carry.
    pub fn from_fn(
        source: &GradedModule,
        target: &GradedModule,
        shift: i32,
        hi: Option<usize>,
        f: impl Fn(usize) -> RationalMatrix + Sync,
    ) -> Self {
        let top = Self::max_window(source, target, shift);
        let hi = match (hi, top) {
            (Some(h), Some(t)) => Some(h.min(t)),
            (None, t) => t,
            (Some(_), None) => None,
        };
        let n = hi.map_or(0, |h| h + 1);
        let blocks: Vec<RationalMatrix> = (0..n).into_par_iter().map(&f).collect();
        GradedMap::new(source.clone(), target.clone(), shift, blocks).expect("constructor produced a block of the wrong shape")
    }

    fn max_window(source: &GradedModule, target: &GradedModule, shift: i32) -> Option<usize> {
        let t = target.max_degree() as i64 - shift as i64;
        let h = t.min(source.max_degree() as i64);
        (h >= 0).then_some(h as usize)
    }

    pub fn identity(module: &GradedModule) -> Self {
        Self::from_fn(module, module, 0, None, |m| RationalMatrix::identity(module.rank(m as i64)))
    }

    pub fn scalar(module: &GradedModule, c: &Rational) -> Self {
        Self::from_fn(module, module, 0, None, |m| RationalMatrix::scalar(module.rank(m as i64), c))
    }

    pub fn zero(source: &GradedModule, target: &GradedModule, shift: i32) -> Self {
        Self::from_fn(source, target, shift, None, |m| {
            RationalMatrix::zeros(target.rank(m as i64 + shift as i64), source.rank(m as i64))
        })
    }

    pub fn source(&self) -> &GradedModule {
        &self.source
    }

    pub fn target(&self) -> &GradedModule {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// Highest trusted source degree, if any.
    pub fn hi(&self) -> Option<usize> {
        self.blocks.len().checked_sub(1)
    }

    pub fn window_len(&self) -> usize {
        self.blocks.len()
    }

    pub fn defined_at(&self, m: i64) -> bool {
        m < 0 || (m as usize) < self.blocks.len()
    }

    /// Block in source degree `m`.  Negative source degrees give an empty
    /// block; panics above the window.
    pub fn block(&self, m: i64) -> RationalMatrix {
        if m < 0 {
            return RationalMatrix::zeros(self.target.rank(m + self.shift as i64), 0);
        }
        assert!(self.defined_at(m), "degree {m} outside valid window 0..{}", self.blocks.len());
        self.blocks[m as usize].clone()
    }

    pub fn block_ref(&self, m: usize) -> &RationalMatrix {
        &self.blocks[m]
    }

    pub fn blocks(&self) -> &[RationalMatrix] {
        &self.blocks
    }

    /// Restricts the window to `0..=hi`.
    pub fn restrict(&self, hi: usize) -> GradedMap {
        let mut g = self.clone();
        g.blocks.truncate(hi + 1);
        g
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap> {
        if self.source != g.target {
            return Err(ParacycError::DimensionMismatch("compose: source/target modules differ".into()));
        }
        // degree m survives if g is defined there and self is defined at m + shift(g)
        let mut n = 0;
        while n < g.blocks.len() && self.defined_at(n as i64 + g.shift as i64) {
            n += 1;
        }
        if n == 0 {
            return Err(ParacycError::WindowExhausted { context: "composition".into() });
        }
        let blocks: Vec<RationalMatrix> = (0..n)
            .into_par_iter()
            .map(|m| {
                let mid = m as i64 + g.shift as i64;
                if mid < 0 {
                    RationalMatrix::zeros(self.target.rank(mid + self.shift as i64), g.source.rank(m as i64))
                } else {
                    self.blocks[mid as usize].mul(&g.blocks[m])
                }
            })
            .collect();
        Ok(GradedMap { source: g.source.clone(), target: self.target.clone(), shift: self.shift + g.shift, blocks })
    }

    fn check_compatible(&self, other: &GradedMap) -> Result<usize> {
        if self.shift != other.shift {
            return Err(ParacycError::ShiftMismatch { left: self.shift, right: other.shift });
        }
        if self.source != other.source || self.target != other.target {
            return Err(ParacycError::DimensionMismatch("maps between different modules".into()));
        }
        let n = self.blocks.len().min(other.blocks.len());
        if n == 0 {
            return Err(ParacycError::WindowExhausted { context: "sum of maps".into() });
        }
        Ok(n)
    }

    /// `self + c * other` on the common window.
    pub fn axpy(&self, c: &Rational, other: &GradedMap) -> Result<GradedMap> {
        let n = self.check_compatible(other)?;
        let blocks = (0..n).into_par_iter().map(|m| self.blocks[m].axpy(c, &other.blocks[m])).collect();
        Ok(GradedMap { source: self.source.clone(), target: self.target.clone(), shift: self.shift, blocks })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.axpy(&Rational::from_integer(1.into()), other)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.axpy(&Rational::from_integer((-1).into()), other)
    }

    pub fn scale(&self, c: &Rational) -> GradedMap {
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            shift: self.shift,
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// `f∘g − g∘f`.
    pub fn commutator(&self, g: &GradedMap) -> Result<GradedMap> {
        self.compose(g)?.sub(&g.compose(self)?)
    }

    /// `f∘g + g∘f`.
    pub fn anticommutator(&self, g: &GradedMap) -> Result<GradedMap> {
        self.compose(g)?.add(&g.compose(self)?)
    }

    /// Per-degree comparison on the common window.  Each entry is
    /// `(degree, None)` on equality or `(degree, Some(witness))`.
    pub fn compare(&self, other: &GradedMap) -> Result<Vec<(usize, Option<String>)>> {
        let n = self.check_compatible(other)?;
        Ok((0..n)
            .into_par_iter()
            .map(|m| {
                let w = self.blocks[m].first_difference(&other.blocks[m]).map(|(i, j, a, b)| {
                    format!("entry ({i},{j}): {} vs {}", crate::linalg::format_rational(&a), crate::linalg::format_rational(&b))
                });
                (m, w)
            })
            .collect())
    }

    /// Exact equality on the common window; never vacuously true.
    pub fn equals(&self, other: &GradedMap) -> bool {
        self.compare(other).map(|v| v.iter().all(|(_, w)| w.is_none())).unwrap_or(false)
    }

    pub fn is_zero(&self) -> bool {
        !self.blocks.is_empty() && self.blocks.iter().all(RationalMatrix::is_zero)
    }

    /// Maximum block entry count, for diagnostics.
    pub fn nnz(&self) -> usize {
        self.blocks.iter().map(RationalMatrix::nnz).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qi;

    fn module() -> GradedModule {
        GradedModule::new(vec![1, 2, 2])
    }

    #[test]
    fn composition_shrinks_window() {
        let c = module();
        let d = GradedMap::from_fn(&c, &c, -1, None, |m| {
            RationalMatrix::from_triplets(c.rank(m as i64 - 1), c.rank(m as i64), std::iter::empty())
        });
        let up = GradedMap::zero(&c, &c, 1);
        assert_eq!(up.hi(), Some(1));
        let comp = up.compose(&d).unwrap();
        assert_eq!(comp.hi(), Some(2));
        let comp2 = d.compose(&up).unwrap();
        assert_eq!(comp2.hi(), Some(1));
    }

    #[test]
    fn identity_and_zero() {
        let c = module();
        let id = GradedMap::identity(&c);
        let t = GradedMap::scalar(&c, &qi(3));
        assert!(id.compose(&t).unwrap().equals(&t));
        assert!(t.commutator(&id).unwrap().is_zero());
        assert!(GradedMap::zero(&c, &c, 0).compose(&t).unwrap().is_zero());
        assert!(matches!(id.add(&GradedMap::zero(&c, &c, 1)), Err(ParacycError::ShiftMismatch { .. })));
    }

    #[test]
    fn empty_window_is_not_equal() {
        let c = GradedModule::new(vec![1]);
        let up = GradedMap::zero(&c, &c, 1);
        assert_eq!(up.hi(), None);
        assert!(!up.equals(&up));
    }
}
