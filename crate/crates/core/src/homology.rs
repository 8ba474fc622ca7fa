//! Homology and cohomology of honest complexes: ranks, deterministic bases,
//! induced maps, and rank agreement between the three cyclic models.

use serde::Serialize;

use crate::comparison::{ComparisonContext, LambdaRetract};
use crate::error::{ParacycError, Result};
use crate::graded::{GradedMap, GradedModule};
use crate::linalg::{kernel_basis, Echelon, RationalMatrix, SparseVec};
use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Differential of degree −1.
    Chain,
    /// Differential of degree +1.
    Cochain,
}

/// A graded module with a square-zero differential.
#[derive(Clone, Debug)]
pub struct ComplexHandle {
    pub name: String,
    pub direction: Direction,
    pub d: GradedMap,
}

impl ComplexHandle {
    /// Wraps a differential after certifying `d² = 0` on its window.
    pub fn new(name: impl Into<String>, d: &GradedMap) -> Result<Self> {
        let direction = match d.shift() {
            -1 => Direction::Chain,
            1 => Direction::Cochain,
            s => return Err(ParacycError::PreconditionFailed(format!("differential of degree {s}"))),
        };
        let dd = d.compose(d)?;
        if let Some(m) = (0..dd.window_len()).find(|&m| !dd.block_ref(m).is_zero()) {
            return Err(ParacycError::HypothesisFailed { name: "d^2 = 0".into(), degree: m });
        }
        Ok(ComplexHandle { name: name.into(), direction, d: d.clone() })
    }

    /// The dual cochain (resp. chain) complex: `Hom(X_m, ℚ)` with the
    /// transposed differential, in the dual coordinate bases.
    pub fn dual(&self) -> ComplexHandle {
        let module = self.module().clone();
        let n = self.d.window_len();
        let (shift, blocks): (i32, Vec<RationalMatrix>) = match self.direction {
            // δ^m = (d_{m+1})ᵀ : X^m -> X^{m+1}
            Direction::Chain => (1, (0..n.saturating_sub(1)).map(|m| self.d.block_ref(m + 1).transpose()).collect()),
            // d_m = (δ^{m-1})ᵀ : X_m -> X_{m-1}
            Direction::Cochain => (
                -1,
                (0..=n.min(module.max_degree())).map(|m| if m == 0 { RationalMatrix::zeros(0, module.rank(0)) } else { self.d.block_ref(m - 1).transpose() }).collect(),
            ),
        };
        let d = GradedMap::new(module.clone(), module, shift, blocks).expect("transposed blocks have matching shapes");
        ComplexHandle {
            name: format!("{}^*", self.name),
            direction: match self.direction {
                Direction::Chain => Direction::Cochain,
                Direction::Cochain => Direction::Chain,
            },
            d,
        }
    }

    pub fn module(&self) -> &GradedModule {
        self.d.source()
    }

    pub fn rank(&self, m: usize) -> usize {
        self.module().rank(m as i64)
    }

    /// The differential leaving degree `m`.
    pub fn outgoing(&self, m: usize) -> Option<RationalMatrix> {
        match self.direction {
            Direction::Chain if m == 0 => Some(RationalMatrix::zeros(0, self.rank(0))),
            _ => self.d.defined_at(m as i64).then(|| self.d.block_ref(m).clone()),
        }
    }

    /// The differential arriving in degree `m`.
    pub fn incoming(&self, m: usize) -> Option<RationalMatrix> {
        match self.direction {
            Direction::Chain => self.d.defined_at(m as i64 + 1).then(|| self.d.block_ref(m + 1).clone()),
            Direction::Cochain if m == 0 => Some(RationalMatrix::zeros(self.rank(0), 0)),
            Direction::Cochain => self.d.defined_at(m as i64 - 1).then(|| self.d.block_ref(m - 1).clone()),
        }
    }

    /// Highest degree whose (co)homology is determined by the window.
    pub fn top(&self) -> Option<usize> {
        (0..=self.module().max_degree()).rev().find(|&m| self.outgoing(m).is_some() && self.incoming(m).is_some())
    }

    fn both(&self, m: usize) -> Result<(RationalMatrix, RationalMatrix)> {
        match (self.outgoing(m), self.incoming(m)) {
            (Some(o), Some(i)) => Ok((o, i)),
            _ => Err(ParacycError::WindowExhausted { context: format!("homology of {} in degree {m}", self.name) }),
        }
    }
}

/// `dim ker(d_out) − rank(d_in)` in degree `m`.
pub fn homology_rank(h: &ComplexHandle, m: usize) -> Result<usize> {
    let (out, inc) = h.both(m)?;
    Ok(h.rank(m) - out.rank() - inc.rank())
}

/// Ranks in degrees `0..=top`.
pub fn homology_ranks(h: &ComplexHandle) -> Vec<usize> {
    match h.top() {
        Some(top) => (0..=top).map(|m| homology_rank(h, m).expect("degree below top")).collect(),
        None => Vec::new(),
    }
}

/// A basis of `H_m`: pivoted cycles independent modulo the pivoted
/// boundaries, with a coordinate map for arbitrary cycles.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: usize,
    /// Columns are representative cycles.
    pub representatives: RationalMatrix,
    echelon: Echelon,
    /// Insertion index of each representative inside `echelon`.
    rep_inputs: Vec<usize>,
    out: RationalMatrix,
}

impl HomologyBasis {
    pub fn dim(&self) -> usize {
        self.rep_inputs.len()
    }

    /// Coordinates of the class of `z`; `None` if `z` is not a cycle.
    pub fn coordinates(&self, z: &[(usize, crate::linalg::Rational)]) -> Option<SparseVec> {
        if !self.out.mul_vec(z).is_empty() {
            return None;
        }
        let combo = self.echelon.express(z).expect("cycles lie in boundaries + representatives");
        Some(
            combo
                .into_iter()
                .filter_map(|(i, c)| self.rep_inputs.iter().position(|&r| r == i).map(|k| (k, c)))
                .collect(),
        )
    }

    pub fn is_boundary(&self, z: &[(usize, crate::linalg::Rational)]) -> bool {
        self.coordinates(z).is_some_and(|c| c.is_empty())
    }
}

pub fn homology_basis(h: &ComplexHandle, m: usize) -> Result<HomologyBasis> {
    let (out, inc) = h.both(m)?;
    let mut echelon = Echelon::new(h.rank(m), true);
    for c in inc.columns() {
        echelon.insert(c.clone());
    }
    let mut rep_inputs = Vec::new();
    let mut reps = Vec::new();
    let first = inc.cols();
    for (k, z) in kernel_basis(&out).basis.into_iter().enumerate() {
        if echelon.insert(z.clone()) {
            rep_inputs.push(first + k);
            reps.push(z);
        }
    }
    Ok(HomologyBasis { degree: m, representatives: RationalMatrix::from_columns(h.rank(m), reps), echelon, rep_inputs, out })
}

/// Matrix of `f : H_m(src) -> H_{m+shift}(tgt)` in the deterministic bases.
/// Fails with `NotAChainMap` if `f` moves a cycle off the cycles or a
/// boundary off the boundaries.
pub fn induced_map_on_homology(f: &GradedMap, src: &ComplexHandle, tgt: &ComplexHandle, m: usize) -> Result<RationalMatrix> {
    let hs = homology_basis(src, m)?;
    let tm = m as i64 + f.shift() as i64;
    if tm < 0 {
        return Ok(RationalMatrix::zeros(0, hs.dim()));
    }
    let ht = homology_basis(tgt, tm as usize)?;
    if !f.defined_at(m as i64) {
        return Err(ParacycError::WindowExhausted { context: format!("induced map in degree {m}") });
    }
    let fm = f.block_ref(m);
    if let Some(inc) = src.incoming(m) {
        if inc.columns().iter().any(|c| !ht.is_boundary(&fm.mul_vec(c))) {
            return Err(ParacycError::NotAChainMap { degree: m });
        }
    }
    let cols = hs
        .representatives
        .columns()
        .iter()
        .map(|z| ht.coordinates(&fm.mul_vec(z)).ok_or(ParacycError::NotAChainMap { degree: m }))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalMatrix::from_columns(ht.dim(), cols))
}

/// The complexes a theory name refers to.  For non-precyclic structures the
/// cyclic models are taken on the coinvariants `C_T`, where `T = 1`.
pub fn theory_complex(ctx: &ComparisonContext, theory: &str) -> Result<ComplexHandle> {
    let pre = ctx.is_precyclic();
    match theory {
        "hochschild" => ComplexHandle::new("(C, b)", &ctx.ops.b),
        "lambda" => ComplexHandle::new("C^lambda", &ctx.lambda.b),
        "cyclic" if pre => ComplexHandle::new("C~", &ctx.nat()?.d),
        "cyclic" => ComplexHandle::new("C_T~", &ctx.coinv.nat.as_ref().ok_or(ParacycError::MissingHomotopy)?.d),
        "cc" if pre => ComplexHandle::new("C~~", &ctx.nn.d),
        "cc" => ComplexHandle::new("C_T~~", &ctx.coinv.nn.d),
        other => Err(ParacycError::PreconditionFailed(format!("unknown theory '{other}'"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgreementRow {
    pub degree: usize,
    pub lambda: usize,
    /// `C_T♮`; absent without a contracting homotopy.
    pub natural: Option<usize>,
    pub double_natural: usize,
    pub agree: bool,
}

/// Per-degree ranks of `C^λ`, `C_T♮` and `C_T♮♮` through degree `M − 2`.
pub fn agreement_report(ctx: &ComparisonContext) -> Result<Vec<AgreementRow>> {
    let lambda = ComplexHandle::new("C^lambda", &ctx.lambda.b)?;
    let nn = ComplexHandle::new("C_T~~", &ctx.coinv.nn.d)?;
    let nat = match &ctx.coinv.nat {
        Some(n) => Some(ComplexHandle::new("C_T~", &n.d)?),
        None => None,
    };
    let top = ctx.max_degree().saturating_sub(2);
    if ctx.max_degree() < 2 {
        return Ok(Vec::new());
    }
    (0..=top)
        .map(|m| {
            let l = homology_rank(&lambda, m)?;
            let n = nat.as_ref().map(|h| homology_rank(h, m)).transpose()?;
            let d = homology_rank(&nn, m)?;
            Ok(AgreementRow { degree: m, lambda: l, natural: n, double_natural: d, agree: l == d && n.is_none_or(|n| n == l) })
        })
        .collect()
}

/// The induced maps of `πν` and `νπ` are identities on homology in every
/// degree both complexes determine.
pub fn retract_homology_check(r: &LambdaRetract, x: &ComplexHandle, lambda: &ComplexHandle) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let top = match (x.top(), lambda.top()) {
        (Some(a), Some(b)) => a.min(b),
        _ => return rep,
    };
    for m in 0..=top {
        let pair = induced_map_on_homology(&r.pi, x, lambda, m).and_then(|p| Ok((p, induced_map_on_homology(&r.nu, lambda, x, m)?)));
        match pair {
            Ok((p, n)) => {
                let ok = p.mul(&n).is_identity() && n.mul(&p).is_identity();
                rep.check(format!("{}: pi, nu inverse on homology", r.label), Some(m), ok, || format!("ranks {} and {}", p.cols(), p.rows()));
            }
            Err(e) => rep.fail(format!("{}: pi, nu inverse on homology", r.label), Some(m), e.to_string()),
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qi};

    fn ctx(name: &str, m: usize) -> ComparisonContext {
        ComparisonContext::for_example(name, m).unwrap()
    }

    #[test]
    fn trivial_hochschild_and_cyclic_ranks() {
        let c = ctx("trivial-Q", 7);
        let hh = theory_complex(&c, "hochschild").unwrap();
        assert_eq!(homology_ranks(&hh), vec![1, 0, 0, 0, 0, 0, 0]);
        let hc = theory_complex(&c, "cyclic").unwrap();
        assert_eq!(homology_ranks(&hc), vec![1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn zero_complex_has_no_homology() {
        let m = GradedModule::new(vec![0, 0, 0]);
        let h = ComplexHandle::new("0", &GradedMap::zero(&m, &m, -1)).unwrap();
        assert_eq!(homology_ranks(&h), vec![0, 0]);
    }

    #[test]
    fn rejects_non_differential() {
        let m = GradedModule::new(vec![1, 1, 1]);
        let d = GradedMap::from_fn(&m, &m, -1, None, |k| if k == 0 { RationalMatrix::zeros(0, 1) } else { RationalMatrix::identity(1) });
        assert!(matches!(ComplexHandle::new("bad", &d), Err(ParacycError::HypothesisFailed { .. })));
    }

    #[test]
    fn identity_induces_identity() {
        let c = ctx("dual-numbers", 4);
        let h = theory_complex(&c, "lambda").unwrap();
        let id = GradedMap::identity(h.module());
        for m in 0..=h.top().unwrap() {
            assert!(induced_map_on_homology(&id, &h, &h, m).unwrap().is_identity());
        }
    }

    #[test]
    fn dual_complex_has_same_ranks() {
        let c = ctx("sign-twisted", 5);
        let h = theory_complex(&c, "lambda").unwrap();
        let d = h.dual();
        assert_eq!(d.direction, Direction::Cochain);
        let top = h.top().unwrap();
        for m in 0..=top {
            assert_eq!(homology_rank(&h, m).unwrap(), homology_rank(&d, m).unwrap());
        }
    }

    #[test]
    fn periodicity_on_trivial_hc2_is_minus_half() {
        let c = ctx("trivial-Q", 4);
        let pack = crate::comparison::ComparisonPack::build(&c).unwrap();
        let per = crate::comparison::periodicity_s(&c, &pack).unwrap();
        let h = theory_complex(&c, "lambda").unwrap();
        let s = induced_map_on_homology(&per.s, &h, &h, 2).unwrap();
        assert_eq!(s.shape(), (1, 1));
        // the canonical bases are the unit vectors in C^λ_2 ≅ C^λ_0 ≅ ℚ
        assert_eq!(s.get(0, 0), q(-1, 2));
        assert_ne!(s.get(0, 0), qi(0));
    }

    #[test]
    fn agreement_on_zoo() {
        for name in ["trivial-Q", "dual-numbers", "sign-twisted", "group-Z2-phi-g", "group-Z2-phi-e"] {
            let rows = agreement_report(&ctx(name, 5)).unwrap();
            assert_eq!(rows.len(), 4, "{name}");
            assert!(rows.iter().all(|r| r.agree), "{name}: {rows:?}");
        }
    }

    #[test]
    fn functoriality_of_induced_maps() {
        let c = ctx("group-Z2-phi-g", 4);
        let pack = crate::comparison::ComparisonPack::build(&c).unwrap();
        let r = &pack.lambda_nn.coinvariant;
        let x = ComplexHandle::new("C_T~~", &r.d).unwrap();
        let l = theory_complex(&c, "lambda").unwrap();
        for m in 0..=2 {
            let p = induced_map_on_homology(&r.pi, &x, &l, m).unwrap();
            let n = induced_map_on_homology(&r.nu, &l, &x, m).unwrap();
            let pn = induced_map_on_homology(&r.pi.compose(&r.nu).unwrap(), &l, &l, m).unwrap();
            assert_eq!(p.mul(&n), pn);
        }
    }
}
