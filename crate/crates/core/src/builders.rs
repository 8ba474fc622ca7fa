//! Total spaces and the derived complexes: `C♮` (slots `C_q u^p`,
//! `2p + q = m`), `C♮♮` (slots `C_q u^p`, `p + q = m`), Connes' quotient
//! `C^λ`, the coinvariants `C_T`, the invariants `C^T`, and the quasi-mixed
//! package (`β`, `h`, `B̃ = π^T B`, `Ñ = N π^T`).

use rayon::prelude::*;

use crate::cyclic::{check_parachain, derive_operators, CyclicStructure, DerivedOperators};
use crate::error::{ParacycError, Result};
use crate::graded::{GradedMap, GradedModule};
use crate::linalg::{image_basis, kernel_basis, quotient_basis, solve_matrix, Quotient, Rational, RationalMatrix, SparseVec};
use crate::para_s::{ParaSModule, QuasiSplitting};
use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// The base module itself (a single slot `p = 0`).
    Plain,
    /// `⊕_{2p+q=m} C_q u^p`.
    Natural,
    /// `⊕_{p+q=m} C_q u^p`.
    DoubleNatural,
}

impl Layout {
    /// Degree carried by one power of `u`.
    pub fn weight(self) -> usize {
        match self {
            Layout::Plain => 0,
            Layout::Natural => 2,
            Layout::DoubleNatural => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub p: usize,
    pub q: usize,
    pub offset: usize,
    pub dim: usize,
}

/// A direct sum of shifted copies of a base graded module, with explicit
/// slot bookkeeping so that powers of `u^{-1}` are pure index shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalSpace {
    pub layout: Layout,
    pub base: GradedModule,
    pub module: GradedModule,
    slots: Vec<Vec<Slot>>,
}

/// Output of a slot-level constructor: target slot `p` and the block
/// `C_q -> C_{q'}`; `None` marks the degree as outside the valid window.
pub type SlotTerms = Option<Vec<(usize, RationalMatrix)>>;

impl TotalSpace {
    pub fn new(layout: Layout, base: &GradedModule) -> Self {
        let mm = base.max_degree();
        let mut slots = Vec::new();
        let mut ranks = Vec::new();
        for m in 0..=mm {
            let mut list = Vec::new();
            let mut offset = 0;
            let mut p = 0;
            loop {
                let w = layout.weight() * p;
                if w > m || (layout == Layout::Plain && p > 0) {
                    break;
                }
                let q = m - w;
                let dim = base.rank(q as i64);
                list.push(Slot { p, q, offset, dim });
                offset += dim;
                p += 1;
            }
            ranks.push(offset);
            slots.push(list);
        }
        TotalSpace { layout, base: base.clone(), module: GradedModule::new(ranks), slots }
    }

    pub fn plain(base: &GradedModule) -> Self {
        Self::new(Layout::Plain, base)
    }

    pub fn max_degree(&self) -> usize {
        self.module.max_degree()
    }

    pub fn slots(&self, m: usize) -> &[Slot] {
        &self.slots[m]
    }

    pub fn slot(&self, m: i64, p: usize) -> Option<&Slot> {
        if m < 0 {
            return None;
        }
        self.slots.get(m as usize).and_then(|l| l.get(p))
    }

    /// Builds a map `self -> target` of the given shift slot by slot.
    /// The window ends before the first degree where the constructor
    /// reports an undefined slot.
    pub fn assemble(
        &self,
        target: &TotalSpace,
        shift: i32,
        f: impl Fn(usize, usize, usize) -> Result<SlotTerms> + Sync,
    ) -> Result<GradedMap> {
        let top = (target.max_degree() as i64 - shift as i64).min(self.max_degree() as i64);
        if top < 0 {
            return Err(ParacycError::WindowExhausted { context: "assemble".into() });
        }
        let blocks: Vec<Result<Option<RationalMatrix>>> =
            (0..=top as usize).into_par_iter().map(|m| self.assemble_block(target, shift, m, &f)).collect();
        let mut out = Vec::new();
        for b in blocks {
            match b? {
                Some(b) => out.push(b),
                None => break,
            }
        }
        GradedMap::new(self.module.clone(), target.module.clone(), shift, out)
    }

    fn assemble_block(
        &self,
        target: &TotalSpace,
        shift: i32,
        m: usize,
        f: &(impl Fn(usize, usize, usize) -> Result<SlotTerms> + Sync),
    ) -> Result<Option<RationalMatrix>> {
        let tm = m as i64 + shift as i64;
        let rows = target.module.rank(tm);
        let mut columns: Vec<SparseVec> = vec![Vec::new(); self.module.rank(m as i64)];
        for slot in self.slots(m) {
            let Some(terms) = f(m, slot.p, slot.q)? else { return Ok(None) };
            for (tp, blk) in terms {
                let Some(ts) = target.slot(tm, tp) else {
                    if blk.is_zero() {
                        continue;
                    }
                    return Err(ParacycError::DimensionMismatch(format!("no target slot p={tp} in degree {tm}")));
                };
                if blk.shape() != (ts.dim, slot.dim) {
                    return Err(ParacycError::DimensionMismatch(format!(
                        "slot block (p={}, q={}) -> p={tp}: shape {:?}, expected {:?}",
                        slot.p,
                        slot.q,
                        blk.shape(),
                        (ts.dim, slot.dim)
                    )));
                }
                for j in 0..slot.dim {
                    columns[slot.offset + j].extend(blk.col(j).iter().map(|(i, v)| (i + ts.offset, v.clone())));
                }
            }
        }
        let mut trip = Vec::new();
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col {
                trip.push((i, j, v));
            }
        }
        Ok(Some(RationalMatrix::from_triplets(rows, self.module.rank(m as i64), trip)))
    }

    /// Extends a base map diagonally (`x u^p ↦ k(x) u^p`).
    pub fn diagonal(&self, k: &GradedMap) -> Result<GradedMap> {
        self.diagonal_shifted(k, 0)
    }

    /// Extends a map `k : C_q -> C_{q+a}` diagonally to the total space with
    /// an additional slot shift `u^{dp}`.
    pub fn diagonal_shifted(&self, k: &GradedMap, dp: i64) -> Result<GradedMap> {
        let shift = k.shift() as i64 + self.layout.weight() as i64 * dp;
        self.assemble(self, shift as i32, |_, p, q| {
            let tp = p as i64 + dp;
            if tp < 0 {
                return Ok(Some(Vec::new()));
            }
            if !k.defined_at(q as i64) {
                return Ok(None);
            }
            Ok(Some(vec![(tp as usize, k.block(q as i64))]))
        })
    }

    /// Slot-wise lift `x u^p ↦ k(x) u^p` of a shift-0 map `k` between the
    /// base modules of two total spaces of the same layout.
    pub fn lift(&self, target: &TotalSpace, k: &GradedMap) -> Result<GradedMap> {
        self.assemble(target, 0, |_, p, q| Ok(if k.defined_at(q as i64) { Some(vec![(p, k.block(q as i64))]) } else { None }))
    }

    /// `u^{-k}`: drops the slots with `p < k` and lowers the rest.
    pub fn u_inverse(&self, k: usize) -> Result<GradedMap> {
        let shift = -((self.layout.weight() * k) as i32);
        self.assemble(self, shift, |_, p, q| {
            Ok(Some(if p >= k { vec![(p - k, RationalMatrix::identity(self.base.rank(q as i64)))] } else { Vec::new() }))
        })
    }

    /// Projection onto the `u^0` slot, as a map to the base module.
    pub fn pi0(&self) -> Result<GradedMap> {
        let plain = TotalSpace::plain(&self.base);
        self.assemble(&plain, 0, |_, p, q| Ok(Some(if p == 0 { vec![(0, RationalMatrix::identity(self.base.rank(q as i64)))] } else { Vec::new() })))
    }

    /// Inclusion of the base module as the `u^0` slot.
    pub fn iota0(&self) -> Result<GradedMap> {
        let plain = TotalSpace::plain(&self.base);
        plain.assemble(self, 0, |_, _, q| Ok(Some(vec![(0, RationalMatrix::identity(self.base.rank(q as i64)))])))
    }
}

/// `C♮` of a parachain complex `(C, b, B)`.
#[derive(Clone, Debug)]
pub struct NaturalComplex {
    pub space: TotalSpace,
    /// `b + B u^{-1}`.
    pub d: GradedMap,
    /// `u^{-1}`, shift −2.
    pub s: GradedMap,
    pub t: GradedMap,
    pub b: GradedMap,
    /// `B u^{-1}` alone.
    pub bu: GradedMap,
}

impl NaturalComplex {
    pub fn build(b: &GradedMap, big_b: &GradedMap, big_t: &GradedMap) -> Result<Self> {
        let space = TotalSpace::new(Layout::Natural, b.source());
        let bd = space.diagonal(b)?;
        let bu = space.diagonal_shifted(big_b, -1)?;
        let d = bd.add(&bu)?;
        let s = space.u_inverse(1)?;
        let t = space.diagonal(big_t)?;
        Ok(NaturalComplex { space, d, s, t, b: bd, bu })
    }

    pub fn psm(&self) -> ParaSModule {
        ParaSModule { module: self.space.module.clone(), d: self.d.clone(), s: self.s.clone(), t: self.t.clone() }
    }
}

/// Builds `C♮` after checking the parachain axioms.
pub fn build_natural(b: &GradedMap, big_b: &GradedMap, big_t: &GradedMap) -> Result<NaturalComplex> {
    let one = GradedMap::identity(b.source());
    let ops_t = one.sub(big_t)?;
    let bb = b.anticommutator(big_b)?;
    if !bb.equals(&ops_t.restrict(bb.hi().unwrap_or(0))) {
        return Err(ParacycError::NotParachain("bB + Bb != 1 - T".into()));
    }
    if !big_b.compose(big_b)?.is_zero() {
        return Err(ParacycError::NotParachain("B^2 != 0".into()));
    }
    if !b.compose(b)?.is_zero() {
        return Err(ParacycError::NotParachain("b^2 != 0".into()));
    }
    NaturalComplex::build(b, big_b, big_t)
}

/// `C♮♮` of a para-precyclic module with its operators `∂` and `δ`.
#[derive(Clone, Debug)]
pub struct DoubleNaturalComplex {
    pub space: TotalSpace,
    pub partial: GradedMap,
    pub delta: GradedMap,
    /// `∂ + δ`.
    pub d: GradedMap,
    /// `u^{-2}`, shift −2.
    pub s: GradedMap,
    pub t: GradedMap,
}

impl DoubleNaturalComplex {
    pub fn build(ops: &DerivedOperators) -> Result<Self> {
        Self::build_with_norm(ops, &ops.n)
    }

    /// Same complex with `N` replaced by another norm operator (e.g. `Ñ`).
    pub fn build_with_norm(ops: &DerivedOperators, norm: &GradedMap) -> Result<Self> {
        let space = TotalSpace::new(Layout::DoubleNatural, &ops.module);
        let partial = space.assemble(&space, -1, |_, p, q| {
            let qq = q as i64;
            Ok(Some(match p {
                0 => Vec::new(),
                p if p % 2 == 1 => vec![(p - 1, ops.one_minus_tau.block(qq))],
                p => vec![(p - 1, norm.block(qq))],
            }))
        })?;
        let delta = space.assemble(&space, -1, |_, p, q| {
            let qq = q as i64;
            Ok(Some(if p % 2 == 0 { vec![(p, ops.b.block(qq))] } else { vec![(p, ops.bp.block(qq).neg())] }))
        })?;
        let d = partial.add(&delta)?;
        let s = space.u_inverse(2)?;
        let t = space.diagonal(&ops.big_t)?;
        Ok(DoubleNaturalComplex { space, partial, delta, d, s, t })
    }

    pub fn psm(&self) -> ParaSModule {
        ParaSModule { module: self.space.module.clone(), d: self.d.clone(), s: self.s.clone(), t: self.t.clone() }
    }

    /// `∂² = (1-T)u^{-2}`, `δ² = 0`, `∂δ + δ∂ = 0`.
    pub fn check(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let one = GradedMap::identity(&self.space.module);
        rep.check_eq_result(
            "partial^2 = (1-T)u^-2",
            self.partial.compose(&self.partial).and_then(|l| Ok((l, one.sub(&self.t)?.compose(&self.s)?))),
        );
        rep.check_zero("delta^2 = 0", self.delta.compose(&self.delta));
        rep.check_zero("partial delta + delta partial = 0", self.partial.anticommutator(&self.delta));
        rep
    }
}

pub fn build_double_natural(cs: &CyclicStructure) -> Result<DoubleNaturalComplex> {
    DoubleNaturalComplex::build(&derive_operators(cs)?)
}

/// A degreewise quotient `C / V` with projection and section as graded maps.
#[derive(Clone, Debug)]
pub struct GradedQuotient {
    pub quotients: Vec<Quotient>,
    pub module: GradedModule,
    /// `C -> C/V`.
    pub pi: GradedMap,
    /// `C/V -> C` (chosen representatives).
    pub section: GradedMap,
}

impl GradedQuotient {
    /// Quotient of `source` by the image of the shift-0 map `a`.
    pub fn by_image(a: &GradedMap) -> Result<Self> {
        let source = a.source();
        let n = a.window_len();
        let quotients: Vec<Quotient> = (0..n)
            .into_par_iter()
            .map(|m| quotient_basis(source.rank(m as i64), &image_basis(a.block_ref(m))))
            .collect();
        if quotients.is_empty() {
            return Err(ParacycError::WindowExhausted { context: "quotient".into() });
        }
        let module = GradedModule::new(quotients.iter().map(Quotient::dim).collect());
        let src = source.truncate(n - 1);
        let pi = GradedMap::new(src.clone(), module.clone(), 0, quotients.iter().map(|q| q.projection.clone()).collect())?;
        let section = GradedMap::new(module.clone(), src, 0, quotients.iter().map(|q| q.section.clone()).collect())?;
        Ok(GradedQuotient { quotients, module, pi, section })
    }

    /// Induced map `π' A σ` from a map `A` between the underlying modules,
    /// after certifying that `π' A` kills the subspace (`killer` spans it).
    pub fn induced(&self, target: &GradedQuotient, a: &GradedMap, killer: &GradedMap) -> Result<GradedMap> {
        let cert = target.pi_for(a)?.compose(&a.compose(killer)?)?;
        certify_zero(&cert)?;
        target.pi_for(a)?.compose(&a.compose(&self.section_for(a)?)?)
    }

    /// Projection adapted to the target module of `a` (which may be truncated).
    fn pi_for(&self, a: &GradedMap) -> Result<GradedMap> {
        retarget_source(&self.pi, a.target())
    }

    fn section_for(&self, a: &GradedMap) -> Result<GradedMap> {
        retarget_target(&self.section, a.source())
    }
}

/// Re-labels the source of `m` with a module whose ranks agree on the window.
pub(crate) fn retarget_source(m: &GradedMap, source: &GradedModule) -> Result<GradedMap> {
    let n = m.window_len().min(source.max_degree() + 1);
    GradedMap::new(source.clone(), m.target().clone(), m.shift(), m.blocks()[..n].to_vec())
}

pub(crate) fn retarget_target(m: &GradedMap, target: &GradedModule) -> Result<GradedMap> {
    let top = target.max_degree() as i64 - m.shift() as i64;
    let n = (m.window_len() as i64).min(top + 1).max(0) as usize;
    GradedMap::new(m.source().clone(), target.clone(), m.shift(), m.blocks()[..n].to_vec())
}

/// Fails with a witness unless every block vanishes.
pub fn certify_zero(cert: &GradedMap) -> Result<()> {
    for (m, b) in cert.blocks().iter().enumerate() {
        if !b.is_zero() {
            let (i, j, x, _) = b.first_difference(&RationalMatrix::zeros(b.rows(), b.cols())).unwrap();
            return Err(ParacycError::DescentObstruction { degree: m, witness: format!("entry ({i},{j}) = {x}") });
        }
    }
    Ok(())
}

/// Connes' complex `C^λ = C / ran(1-τ)` with induced `b`.
#[derive(Clone, Debug)]
pub struct LambdaComplex {
    pub quotient: GradedQuotient,
    pub b: GradedMap,
}

impl LambdaComplex {
    pub fn module(&self) -> &GradedModule {
        &self.quotient.module
    }

    pub fn pi(&self) -> &GradedMap {
        &self.quotient.pi
    }

    pub fn section(&self) -> &GradedMap {
        &self.quotient.section
    }

    /// Descends a map `A : C -> C` (any shift) to `C^λ -> C^λ`, certifying
    /// that `π^λ A (1-τ) = 0`.
    pub fn descend(&self, a: &GradedMap, one_minus_tau: &GradedMap) -> Result<GradedMap> {
        self.quotient.induced(&self.quotient, a, one_minus_tau)
    }
}

pub fn build_lambda(ops: &DerivedOperators) -> Result<LambdaComplex> {
    let quotient = GradedQuotient::by_image(&ops.one_minus_tau)?;
    let b = quotient.induced(&quotient, &ops.b, &ops.one_minus_tau)?;
    Ok(LambdaComplex { quotient, b })
}

/// The coinvariant module `C_T = C / ran(1-T)` with its induced structure.
#[derive(Clone, Debug)]
pub struct CoinvariantStructure {
    pub structure: CyclicStructure,
    pub quotient: GradedQuotient,
}

pub fn build_quotient_t(cs: &CyclicStructure, ops: &DerivedOperators) -> Result<CoinvariantStructure> {
    let quotient = GradedQuotient::by_image(&ops.one_minus_t)?;
    let qs = &quotient.quotients;
    // every structural map commutes with T, hence descends; certify each
    let induce = |m_src: usize, m_tgt: usize, a: &RationalMatrix| -> Result<RationalMatrix> {
        let kill = qs[m_tgt].projection.mul(&a.mul(ops.one_minus_t.block_ref(m_src)));
        if !kill.is_zero() {
            return Err(ParacycError::DescentObstruction { degree: m_src, witness: "structure map does not preserve ran(1-T)".into() });
        }
        Ok(qs[m_tgt].projection.mul(&a.mul(&qs[m_src].section)))
    };
    let mm = cs.max_degree();
    let mut faces = vec![Vec::new()];
    for m in 1..=mm {
        faces.push(cs.faces[m].iter().map(|d| induce(m, m - 1, d)).collect::<Result<Vec<_>>>()?);
    }
    let t = (0..=mm).map(|m| induce(m, m, &cs.t[m])).collect::<Result<Vec<_>>>()?;
    let degeneracies = match &cs.degeneracies {
        Some(dg) => Some((0..mm).map(|m| dg[m].iter().map(|s| induce(m, m + 1, s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let homotopy_s = match (&cs.degeneracies, &cs.homotopy_s) {
        (None, Some(h)) => Some((0..mm).map(|m| induce(m, m + 1, &h[m])).collect::<Result<Vec<_>>>()?),
        _ => None,
    };
    let structure = CyclicStructure::new(format!("{}_T", cs.name), quotient.module.ranks().to_vec(), faces, t, degeneracies, homotopy_s)?;
    Ok(CoinvariantStructure { structure, quotient })
}

/// The invariant submodule `C^T = ker(1-T)` with its restricted structure.
#[derive(Clone, Debug)]
pub struct InvariantStructure {
    pub structure: CyclicStructure,
    /// Inclusion `C^T -> C` (basis of the kernel).
    pub inclusion: GradedMap,
}

pub fn build_invariants_t(cs: &CyclicStructure, ops: &DerivedOperators) -> Result<InvariantStructure> {
    let mm = cs.max_degree();
    let bases: Vec<RationalMatrix> = (0..=mm)
        .map(|m| kernel_basis(ops.one_minus_t.block_ref(m)).as_matrix())
        .collect();
    let restrict = |m_src: usize, m_tgt: usize, a: &RationalMatrix| -> Result<RationalMatrix> {
        solve_matrix(&bases[m_tgt], &a.mul(&bases[m_src]))
            .ok_or_else(|| ParacycError::DescentObstruction { degree: m_src, witness: "structure map leaves ker(1-T)".into() })
    };
    let mut faces = vec![Vec::new()];
    for m in 1..=mm {
        faces.push(cs.faces[m].iter().map(|d| restrict(m, m - 1, d)).collect::<Result<Vec<_>>>()?);
    }
    let t = (0..=mm).map(|m| restrict(m, m, &cs.t[m])).collect::<Result<Vec<_>>>()?;
    let degeneracies = match &cs.degeneracies {
        Some(dg) => Some((0..mm).map(|m| dg[m].iter().map(|s| restrict(m, m + 1, s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let ranks: Vec<usize> = bases.iter().map(RationalMatrix::cols).collect();
    let module = GradedModule::new(ranks.clone());
    let structure = CyclicStructure::new(format!("{}^T", cs.name), ranks, faces, t, degeneracies, None)?;
    let inclusion = GradedMap::new(module, cs.module.clone(), 0, bases)?;
    Ok(InvariantStructure { structure, inclusion })
}

/// `β = (1-T)^{-1} B`, `h = -β(1-π^T)`, `B̃ = π^T B`, `Ñ = N π^T`, and the
/// double-complex homotopy `h♮♮`, with their certificates.
pub struct QuasiMixedPack {
    pub beta: GradedMap,
    pub h: GradedMap,
    pub b_tilde: GradedMap,
    pub n_tilde: GradedMap,
    pub beta_nn: GradedMap,
    pub h_nn: GradedMap,
    pub report: ValidationReport,
}

pub fn quasi_mixed_pack(ops: &DerivedOperators, split: &QuasiSplitting, r_cyclic: Option<usize>) -> Result<QuasiMixedPack> {
    let big_b = ops.operator_b()?;
    let g = &split.restricted_inverse;
    let pit = &split.projector;
    let id = &ops.id;
    let one_minus_pit = id.sub(pit)?;
    let beta = g.compose(&big_b)?;
    let h = beta.compose(&one_minus_pit)?.neg();
    let b_tilde = pit.compose(&big_b)?;
    let n_tilde = ops.n.compose(pit)?;
    let mut rep = ValidationReport::new();
    // bβ + βb = 1 on R^T, i.e. (bβ + βb)(1 - π^T) = 1 - π^T
    rep.check_eq_result(
        "b beta + beta b = 1 on R^T",
        ops.b.anticommutator(&beta).and_then(|x| x.compose(&one_minus_pit)).map(|l| (l, one_minus_pit.clone())),
    );
    rep.check_eq_result("beta = B (1-T)^-1", big_b.compose(g).map(|r| (beta.clone(), r)));
    rep.check_zero("B beta = 0", big_b.compose(&beta));
    rep.check_zero("beta B = 0", beta.compose(&big_b));
    rep.check_zero("b B~ + B~ b = 0", ops.b.anticommutator(&b_tilde));
    rep.check_zero("B~^2 = 0", b_tilde.compose(&b_tilde));
    rep.check_eq_result("pi^T b = b pi^T", pit.compose(&ops.b).and_then(|l| Ok((l, ops.b.compose(pit)?))));
    rep.check_eq_result("pi^T B = B~ pi^T", pit.compose(&big_b).and_then(|l| Ok((l, b_tilde.compose(pit)?))));
    rep.check_zero("h^2 = 0", h.compose(&h));
    rep.check_eq_result(
        "1 + bh + hb = pi^T",
        ops.b.anticommutator(&h).and_then(|x| x.add(id)).map(|l| (l, pit.clone())),
    );
    // the Ñ bicomplex is an honest chain bicomplex
    let nn_tilde = DoubleNaturalComplex::build_with_norm(ops, &n_tilde)?;
    rep.check_zero("(partial~ + delta)^2 = 0", nn_tilde.d.compose(&nn_tilde.d));
    if let Some(r) = r_cyclic {
        // r Ñ = sum_{j < r(m+1)} τ^j
        let ft = GradedMap::from_fn(&ops.module, &ops.module, 0, None, |m| {
            let tau = ops.tau.block_ref(m);
            let mut pow = RationalMatrix::identity(ops.module.rank(m as i64));
            let mut acc = pow.clone();
            for _ in 1..r * (m + 1) {
                pow = tau.mul(&pow);
                acc = acc.add(&pow);
            }
            acc
        });
        rep.check_eq("r N~ = Feigin-Tsygan norm", &n_tilde.scale(&Rational::from_integer((r as i64).into())), &ft);
    }
    // β♮♮(x u^{2p}) = N (1-T)^{-1} x u^{2p+1}, zero on odd slots; h♮♮ = -β♮♮(1-π^T)
    let nn = DoubleNaturalComplex::build(ops)?;
    let ng = ops.n.compose(g)?;
    let beta_nn = nn.space.assemble(&nn.space, 1, |_, p, q| {
        if p % 2 == 1 {
            return Ok(Some(Vec::new()));
        }
        Ok(if ng.defined_at(q as i64) { Some(vec![(p + 1, ng.block(q as i64))]) } else { None })
    })?;
    let pit_nn = nn.space.diagonal(pit)?;
    let one_nn = GradedMap::identity(&nn.space.module);
    let one_minus_pit_nn = one_nn.sub(&pit_nn)?;
    let h_nn = beta_nn.compose(&one_minus_pit_nn)?.neg();
    rep.check_eq_result(
        "(partial + delta) beta~~ + beta~~ (partial + delta) = 1 on R^T",
        nn.d.anticommutator(&beta_nn).and_then(|x| x.compose(&one_minus_pit_nn)).map(|l| (l, one_minus_pit_nn.clone())),
    );
    rep.check_eq_result(
        "1 + (partial + delta) h~~ + h~~ (partial + delta) = pi^T",
        nn.d.anticommutator(&h_nn).and_then(|x| x.add(&one_nn)).map(|l| (l, pit_nn.clone())),
    );
    rep.check_zero("h~~^2 = 0", h_nn.compose(&h_nn));
    // range of h♮♮ inside R^T on odd slots
    rep.check_zero("pi^T h~~ = 0", pit_nn.compose(&h_nn));
    Ok(QuasiMixedPack { beta, h, b_tilde, n_tilde, beta_nn, h_nn, report: rep })
}

/// Parachain check for the canonical `B` of a structure.
pub fn parachain_report(ops: &DerivedOperators) -> Result<ValidationReport> {
    Ok(check_parachain(ops, &ops.operator_b()?))
}
