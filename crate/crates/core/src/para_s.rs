//! Para-S-modules `(C, d, S, T)`: axiom checks, S-maps, the quasi splitting
//! `C = ker(1-T) ⊕ ran(1-T)`, the resulting deformation retract onto `C_T`,
//! and truncated periodic para-complexes.

use rayon::prelude::*;

use crate::builders::{GradedQuotient, TotalSpace};
use crate::error::{ParacycError, Result};
use crate::graded::{GradedMap, GradedModule};
use crate::linalg::{image_basis, invert, kernel_basis, solve_matrix, Rational, RationalMatrix, Subspace};
use crate::report::ValidationReport;

#[derive(Clone, Debug)]
pub struct ParaSModule {
    pub module: GradedModule,
    /// Differential, shift −1.
    pub d: GradedMap,
    /// Periodicity operator, shift −2.
    pub s: GradedMap,
    /// Invertible, shift 0.
    pub t: GradedMap,
}

impl ParaSModule {
    pub fn one_minus_t(&self) -> Result<GradedMap> {
        GradedMap::identity(&self.module).sub(&self.t)
    }
}

/// `d² = S(1-T)` and `[d,S] = [d,T] = [S,T] = 0`.
pub fn check_para_s(psm: &ParaSModule) -> ValidationReport {
    let mut rep = ValidationReport::new();
    rep.check_eq_result(
        "d^2 = S(1-T)",
        psm.d.compose(&psm.d).and_then(|l| Ok((l, psm.s.compose(&psm.one_minus_t()?)?))),
    );
    rep.check_zero("[d,S] = 0", psm.d.commutator(&psm.s));
    rep.check_zero("[d,T] = 0", psm.d.commutator(&psm.t));
    rep.check_zero("[S,T] = 0", psm.s.commutator(&psm.t));
    rep
}

/// A graded map between para-S-modules with its compatibility flags.
#[derive(Clone, Debug)]
pub struct SMap {
    pub map: GradedMap,
    pub commutes_with_d: bool,
    pub commutes_with_s: bool,
    pub commutes_with_t: bool,
}

impl SMap {
    pub fn certify(map: GradedMap, source: &ParaSModule, target: &ParaSModule) -> Result<SMap> {
        let eq = |l: Result<GradedMap>, r: Result<GradedMap>| -> Result<bool> { Ok(l?.equals(&r?)) };
        let commutes_with_d = eq(map.compose(&source.d), target.d.compose(&map))?;
        let commutes_with_s = eq(map.compose(&source.s), target.s.compose(&map))?;
        let commutes_with_t = eq(map.compose(&source.t), target.t.compose(&map))?;
        Ok(SMap { map, commutes_with_d, commutes_with_s, commutes_with_t })
    }

    pub fn is_s_map(&self) -> bool {
        self.commutes_with_d && self.commutes_with_s && self.commutes_with_t
    }

    /// Composite `self ∘ other`, flags re-verified.
    pub fn then_after(&self, other: &SMap, source: &ParaSModule, target: &ParaSModule) -> Result<SMap> {
        SMap::certify(self.map.compose(&other.map)?, source, target)
    }
}

/// `C = C^T ⊕ R^T` per degree, the projector `π^T` onto `C^T` along `R^T`,
/// and `G`, the inverse of `1-T` on `R^T` extended by zero on `C^T`.
#[derive(Clone, Debug)]
pub struct QuasiSplitting {
    pub kernel: Vec<Subspace>,
    pub range: Vec<Subspace>,
    pub projector: GradedMap,
    pub restricted_inverse: GradedMap,
}

/// Evaluates a polynomial in a square matrix.
pub fn poly_eval(coeffs: &[Rational], a: &RationalMatrix) -> RationalMatrix {
    let n = a.rows();
    let mut acc = RationalMatrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = a.mul(&acc).add(&RationalMatrix::scalar(n, c));
    }
    acc
}

/// Splits `C` along `T`.  With `poly = Some(Q)` the projector is `Q(T)`,
/// after checking `Q(T)(T-1) = 0` and `Q(1) = 1`; it must then coincide with
/// the generic projector.
pub fn quasi_split(t: &GradedMap, poly: Option<&[Rational]>) -> Result<QuasiSplitting> {
    let module = t.source().clone();
    let n = t.window_len();
    let one = GradedMap::identity(&module);
    let omt = one.sub(t)?;
    let per_degree: Vec<Result<(Subspace, Subspace, RationalMatrix, RationalMatrix)>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let a = omt.block_ref(m);
            let dim = a.rows();
            let ker = kernel_basis(a);
            let ran = image_basis(a);
            if ker.dim() + ran.dim() != dim || ker.intersection_dim(&ran) != 0 {
                return Err(ParacycError::NotQuasi { degree: m, detail: format!("dim ker {} + dim ran {} vs {dim}", ker.dim(), ran.dim()) });
            }
            let k = ker.as_matrix();
            let r = ran.as_matrix();
            let p = k.hstack(&r);
            let pinv = invert(&p)?;
            let kd = ker.dim();
            let proj_diag = RationalMatrix::from_column_map(dim, dim, |j| (j < kd).then(|| (j, Rational::from_integer(1.into()))));
            let projector = p.mul(&proj_diag).mul(&pinv);
            // (1-T) restricted to R^T in range coordinates
            let a_r = solve_matrix(&r, &a.mul(&r)).ok_or(ParacycError::NotQuasi { degree: m, detail: "range not invariant".into() })?;
            let a_r_inv = invert(&a_r).map_err(|_| ParacycError::NotQuasi { degree: m, detail: "1-T not invertible on its range".into() })?;
            // G = P diag(0, A^{-1}) P^{-1}
            let mut trip = Vec::new();
            for (j, col) in a_r_inv.columns().iter().enumerate() {
                for (i, v) in col {
                    trip.push((kd + i, kd + j, v.clone()));
                }
            }
            let mid = RationalMatrix::from_triplets(dim, dim, trip);
            let g = p.mul(&mid).mul(&pinv);
            Ok((ker, ran, projector, g))
        })
        .collect();
    let mut kernel = Vec::new();
    let mut range = Vec::new();
    let mut proj = Vec::new();
    let mut inv = Vec::new();
    for r in per_degree {
        let (k, ra, p, g) = r?;
        kernel.push(k);
        range.push(ra);
        proj.push(p);
        inv.push(g);
    }
    let projector = GradedMap::new(module.clone(), module.clone(), 0, proj)?;
    let restricted_inverse = GradedMap::new(module.clone(), module.clone(), 0, inv)?;
    if let Some(q) = poly {
        let qt = GradedMap::from_fn(&module, &module, 0, Some(n - 1), |m| poly_eval(q, t.block_ref(m)));
        let annihil = qt.compose(&t.sub(&one)?)?;
        let q1: Rational = q.iter().sum();
        if !annihil.is_zero() || q1 != Rational::from_integer(1.into()) {
            return Err(ParacycError::PreconditionFailed("Q(T)(T-1) = 0 and Q(1) = 1 required".into()));
        }
        if !qt.equals(&projector) {
            return Err(ParacycError::NotQuasi { degree: 0, detail: "Q(T) differs from the generic projector".into() });
        }
    }
    Ok(QuasiSplitting { kernel, range, projector, restricted_inverse })
}

impl QuasiSplitting {
    /// Invariants of the splitting, checked exactly.
    pub fn check(&self, t: &GradedMap) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let one = GradedMap::identity(t.source());
        let omt = one.sub(t).expect("same module");
        let p = &self.projector;
        rep.check_eq_result("pi^T idempotent", p.compose(p).map(|l| (l, p.clone())));
        rep.check_zero("pi^T (1-T) = 0", p.compose(&omt));
        rep.check_zero("(1-T) pi^T = 0", omt.compose(p));
        rep.check_eq_result(
            "(1-T) G = 1 - pi^T",
            omt.compose(&self.restricted_inverse).and_then(|l| Ok((l, one.sub(p)?))),
        );
        for (m, (k, r)) in self.kernel.iter().zip(&self.range).enumerate() {
            let ok = k.dim() + r.dim() == k.ambient_dim && k.intersection_dim(r) == 0;
            rep.check("C = C^T + R^T direct", Some(m), ok, || format!("{} + {} in {}", k.dim(), r.dim(), k.ambient_dim));
        }
        rep
    }

    /// Lifts a base splitting diagonally to a total space.
    pub fn diagonal(&self, space: &TotalSpace) -> Result<(GradedMap, GradedMap)> {
        Ok((space.diagonal(&self.projector)?, space.diagonal(&self.restricted_inverse)?))
    }
}

/// The deformation retract of a quasi para-S-module onto `C_T`.
#[derive(Clone, Debug)]
pub struct RetractRecord {
    pub quotient: GradedQuotient,
    /// `π_T : C -> C_T`.
    pub pi_t: GradedMap,
    /// `ι_T : C_T -> C`, landing in `C^T`.
    pub iota_t: GradedMap,
    pub h: GradedMap,
    /// Induced `d` and `S` on `C_T`.
    pub d_t: GradedMap,
    pub s_t: GradedMap,
    pub report: ValidationReport,
}

/// Builds `(π_T, ι_T, h)` with `h = -β(1-π^T)` and certifies
/// `π_T ι_T = 1`, `ι_T π_T = π^T = 1 + dh + hd`, `π_T h = 0`, `h ι_T = 0`.
pub fn quasi_retract(psm: &ParaSModule, projector: &GradedMap, beta: &GradedMap) -> Result<RetractRecord> {
    let one = GradedMap::identity(&psm.module);
    let one_minus_pit = one.sub(projector)?;
    let contracting = psm.d.anticommutator(beta)?.compose(&one_minus_pit)?;
    if let Some((m, _)) = contracting.compare(&one_minus_pit)?.into_iter().find(|(_, w)| w.is_some()) {
        return Err(ParacycError::HomotopyNotContracting { degree: m });
    }
    let h = beta.compose(&one_minus_pit)?.neg();
    let quotient = GradedQuotient::by_image(&psm.one_minus_t()?)?;
    let omt = psm.one_minus_t()?;
    let pi_t = quotient.pi.clone();
    let iota_t = projector.compose(&quotient.section)?;
    let d_t = quotient.induced(&quotient, &psm.d, &omt)?;
    let s_t = quotient.induced(&quotient, &psm.s, &omt)?;
    let mut rep = ValidationReport::new();
    rep.check_eq_result(
        "pi_T iota_T = 1",
        pi_t.compose(&iota_t).map(|l| (l, GradedMap::identity(&quotient.module))),
    );
    rep.check_eq_result("iota_T pi_T = pi^T", iota_t.compose(&pi_t).map(|l| (l, projector.clone())));
    rep.check_eq_result(
        "pi^T = 1 + dh + hd",
        psm.d.anticommutator(&h).and_then(|x| x.add(&one)).map(|l| (l, projector.clone())),
    );
    rep.check_zero("pi_T h = 0", pi_t.compose(&h));
    rep.check_zero("h iota_T = 0", h.compose(&iota_t));
    rep.check_zero("h^2 = 0", h.compose(&h));
    rep.check_eq_result("d_T pi_T = pi_T d", d_t.compose(&pi_t).and_then(|l| Ok((l, pi_t.compose(&psm.d)?))));
    rep.check_eq_result("d iota_T = iota_T d_T", psm.d.compose(&iota_t).and_then(|l| Ok((l, iota_t.compose(&d_t)?))));
    rep.check_eq_result("S iota_T = iota_T S_T", psm.s.compose(&iota_t).and_then(|l| Ok((l, iota_t.compose(&s_t)?))));
    rep.check_zero("d_T^2 = 0", d_t.compose(&d_t));
    // property (DR): R^T is S-contractible via β and C^T ⊕ R^T is a splitting of sub-S-modules
    rep.check_zero("[S, pi^T] = 0", psm.s.commutator(projector));
    rep.check_zero("[d, pi^T] = 0", psm.d.commutator(projector));
    rep.check_zero("[S, beta] = 0", psm.s.commutator(beta));
    rep.check_zero("[T, beta] = 0", psm.t.commutator(beta));
    Ok(RetractRecord { quotient, pi_t, iota_t, h, d_t, s_t, report: rep })
}

/// Truncated periodic para-complex: for parity `i` the sequences
/// `(x_i, x_{i+2}, …, x_{i+2Q})` with `S x_{k+2} = x_k`, stored through
/// their top component.
#[derive(Clone, Debug)]
pub struct Z2ParaComplex {
    /// Top degree carried for parity 0 and 1.
    pub top: [usize; 2],
    /// Embedding of the top component into the product `Π_q C_{i+2q}`.
    pub embed: [RationalMatrix; 2],
    /// Component degrees of the product, ascending.
    pub components: [Vec<usize>; 2],
    /// The differential on top components: `C_{top_i} -> C_{top_i - 1}`.
    pub d: [RationalMatrix; 2],
    pub report: ValidationReport,
}

/// Builds the truncation with at most `q_max + 1` components per parity
/// and checks `d² = 1 - T` on every component except the discarded tail.
pub fn periodic_truncation(psm: &ParaSModule, q_max: usize) -> Result<Z2ParaComplex> {
    let mm = psm.module.max_degree();
    if mm < 2 {
        return Err(ParacycError::DegreeTooLow { degree: mm, min: 2 });
    }
    let omt = psm.one_minus_t()?;
    let mut report = ValidationReport::new();
    let mut tops = [0usize; 2];
    let mut embeds = Vec::new();
    let mut comps = Vec::new();
    let mut ds = Vec::new();
    for i in 0..2 {
        let q = q_max.min((mm - i) / 2);
        let top = i + 2 * q;
        tops[i] = top;
        // components S^{q-k} x for k = 0..=q, ascending degree
        let mut blocks = Vec::new();
        let mut cur = RationalMatrix::identity(psm.module.rank(top as i64));
        let mut degs = vec![top];
        blocks.push(cur.clone());
        let mut deg = top;
        while deg >= i + 2 {
            cur = psm.s.block_ref(deg).mul(&cur);
            deg -= 2;
            degs.push(deg);
            blocks.push(cur.clone());
        }
        blocks.reverse();
        degs.reverse();
        let mut embed = blocks[0].clone();
        for b in &blocks[1..] {
            embed = embed.vstack(b);
        }
        embeds.push(embed);
        comps.push(degs);
        ds.push(psm.d.block_ref(top).clone());
    }
    // d² = (1-T) S on the top component; it then holds on every lower
    // component because S commutes with d and T
    for i in 0..2 {
        let top = tops[i];
        if top < 2 {
            continue;
        }
        let dd = psm.d.block_ref(top - 1).mul(psm.d.block_ref(top));
        let rhs = psm.s.block_ref(top).mul(omt.block_ref(top));
        report.check("periodic d^2 = 1-T (tail excluded)", Some(top), dd == rhs, || "mismatch".into());
    }
    Ok(Z2ParaComplex {
        top: tops,
        embed: [embeds[0].clone(), embeds[1].clone()],
        components: [comps[0].clone(), comps[1].clone()],
        d: [ds[0].clone(), ds[1].clone()],
        report,
    })
}

impl Z2ParaComplex {
    /// For `C♮` of a parachain complex: the differential on product
    /// coordinates is `(dx)_j = b x_{j+1} + B x_{j-1}`.  Returns the
    /// comparison for parity `i` with the top component dropped.
    pub fn check_b_plus_big_b(&self, space: &TotalSpace, b: &GradedMap, big_b: &GradedMap) -> ValidationReport {
        let mut rep = ValidationReport::new();
        for i in 0..2 {
            let top = self.top[i];
            if top == 0 {
                continue;
            }
            // d on the total space degree `top` is already slotwise; compare with b and B blocks
            let slots_src = space.slots(top);
            let slots_tgt = space.slots(top - 1);
            let d = &self.d[i];
            let mut ok = true;
            for s in slots_src {
                for t in slots_tgt {
                    let expected = if t.p == s.p {
                        b.block(s.q as i64)
                    } else if t.p + 1 == s.p {
                        big_b.block(s.q as i64)
                    } else {
                        RationalMatrix::zeros(t.dim, s.dim)
                    };
                    for j in 0..s.dim {
                        for r in 0..t.dim {
                            if d.get(t.offset + r, s.offset + j) != expected.get(r, j) {
                                ok = false;
                            }
                        }
                    }
                }
            }
            rep.check("periodic differential = b + B", Some(top), ok, || "blockwise mismatch".into());
        }
        rep
    }
}
