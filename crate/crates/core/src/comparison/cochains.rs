//! Cochains and the conversion of `(b, B)`-cocycles into cyclic cocycles.
//!
//! A cochain of degree `m` on `C_T♮` is stored on `C` as its list of
//! `T`-invariant components `(φ_m, φ_{m−2}, …)`, each a row vector on
//! `C_{m−2j}`.  Conversion is the transpose of `ν̄♮ : C^λ -> C_T♮`; the
//! certificate is `χ = φ ∘ φ̄♮`, for which `ι(ν̄φ) − φ = χ ∘ (b + Bu⁻¹)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ComparisonContext, ComparisonPack, LambdaRetract};
use crate::builders::{NaturalComplex, TotalSpace};
use crate::error::{ParacycError, Result};
use crate::graded::GradedMap;
use crate::homology::{homology_rank, induced_map_on_homology, ComplexHandle};
use crate::linalg::{format_rational, kernel_basis, parse_rational, qi, Rational, RationalMatrix};
use crate::report::ValidationReport;

/// `(φ_m, φ_{m−2}, …)` with `φ_q` a row vector on `C_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub components: Vec<Vec<Rational>>,
}

impl Cochain {
    pub fn zero(ctx: &ComparisonContext, degree: usize) -> Self {
        let components = (0..=degree / 2).map(|j| vec![qi(0); ctx.ops.module.rank((degree - 2 * j) as i64)]).collect();
        Cochain { degree, components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|x| *x == qi(0))
    }
}

/// On-disk form: rationals as `"p/q"` strings, components ordered
/// `φ_m, φ_{m−2}, …`.  Conversion output adds the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleFile {
    pub degree: usize,
    pub components: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateBlock>,
}

/// The cochain `χ` of degree `m − 1` whose coboundary is `ι(ν̄φ) − φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBlock {
    pub degree: usize,
    pub components: Vec<Vec<String>>,
}

fn strings(v: &[Vec<Rational>]) -> Vec<Vec<String>> {
    v.iter().map(|c| c.iter().map(format_rational).collect()).collect()
}

impl CocycleFile {
    pub fn from_cochain(c: &Cochain) -> Self {
        CocycleFile { degree: c.degree, components: strings(&c.components), certificate: None }
    }

    pub fn to_cochain(&self) -> Result<Cochain> {
        let components =
            self.components.iter().map(|c| c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Ok(Cochain { degree: self.degree, components })
    }

    /// The cyclic cocycle as a one-component file, with the certificate.
    pub fn from_conversion(c: &CocycleConversion) -> Self {
        CocycleFile {
            degree: c.input.degree,
            components: strings(std::slice::from_ref(&c.cyclic)),
            certificate: c.certificate.as_ref().map(|x| CertificateBlock { degree: x.degree, components: strings(&x.components) }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CocycleConversion {
    pub input: Cochain,
    /// `ν̄_♮(φ)` as a `τ`-invariant row vector on `C_m`.
    pub cyclic: Vec<Rational>,
    /// `χ`, absent in degree 0 where `ι ν̄_♮ = 1` on cocycles.
    pub certificate: Option<Cochain>,
    pub report: ValidationReport,
}

fn row(v: &[Rational]) -> RationalMatrix {
    RationalMatrix::from_dense(&[v.to_vec()])
}

fn unrow(m: &RationalMatrix) -> Vec<Rational> {
    (0..m.cols()).map(|c| m.get(0, c)).collect()
}

/// The `C_T♮` retract and both total complexes the conversion runs through.
struct Natural<'a> {
    on_c: &'a NaturalComplex,
    on_ct: &'a NaturalComplex,
    retract: &'a LambdaRetract,
}

fn natural<'a>(ctx: &'a ComparisonContext, pack: &'a ComparisonPack) -> Result<Natural<'a>> {
    let on_ct = ctx.coinv.nat.as_ref().ok_or(ParacycError::MissingHomotopy)?;
    let retract = &pack.lambda_n.as_ref().ok_or(ParacycError::MissingHomotopy)?.coinvariant;
    Ok(Natural { on_c: ctx.nat()?, on_ct, retract })
}

/// Concatenates per-slot rows `slot p ↦ row_p · maps_q` into one row on `X_m`.
fn assemble(space: &TotalSpace, m: usize, mut slot_row: impl FnMut(usize, usize) -> RationalMatrix) -> RationalMatrix {
    let width: usize = space.slots(m).iter().map(|s| s.dim).sum();
    let mut out = vec![qi(0); width];
    for s in space.slots(m) {
        let r = slot_row(s.p, s.q);
        for c in 0..s.dim {
            out[s.offset + c] = r.get(0, c);
        }
    }
    row(&out)
}

/// Splits a row on `X_m` into its slot components, each mapped by `f`.
fn split(space: &TotalSpace, m: usize, x: &RationalMatrix, mut f: impl FnMut(usize, RationalMatrix) -> RationalMatrix) -> Vec<Vec<Rational>> {
    space
        .slots(m)
        .iter()
        .map(|s| {
            let part = RationalMatrix::from_dense(&[(0..s.dim).map(|c| x.get(0, s.offset + c)).collect()]);
            unrow(&f(s.q, part))
        })
        .collect()
}

fn check_shape(ctx: &ComparisonContext, phi: &Cochain) -> Result<()> {
    if phi.components.len() != phi.degree / 2 + 1 {
        return Err(ParacycError::DimensionMismatch(format!("degree {} needs {} components, got {}", phi.degree, phi.degree / 2 + 1, phi.components.len())));
    }
    for (j, c) in phi.components.iter().enumerate() {
        let q = phi.degree - 2 * j;
        if c.len() != ctx.ops.module.rank(q as i64) {
            return Err(ParacycError::DimensionMismatch(format!("component on C_{q} has length {}, expected {}", c.len(), ctx.ops.module.rank(q as i64))));
        }
    }
    Ok(())
}

/// Lifts `T`-invariant components on `C` to a row on `C_T♮_m`.
fn to_coinvariant_row(ctx: &ComparisonContext, nat: &Natural, phi: &Cochain) -> Result<RationalMatrix> {
    check_shape(ctx, phi)?;
    for (j, c) in phi.components.iter().enumerate() {
        let q = phi.degree - 2 * j;
        if !row(c).mul(ctx.ops.one_minus_t.block_ref(q)).is_zero() {
            return Err(ParacycError::PreconditionFailed(format!("component on C_{q} is not T-invariant")));
        }
    }
    let section = ctx.coinv.quotient.section.clone();
    Ok(assemble(&nat.on_ct.space, phi.degree, |p, q| row(&phi.components[p]).mul(section.block_ref(q))))
}

/// Pulls a row on `C_T♮_m` back to `T`-invariant components on `C`.
fn from_coinvariant_row(ctx: &ComparisonContext, nat: &Natural, m: usize, x: &RationalMatrix) -> Cochain {
    let pi = &ctx.coinv.quotient.pi;
    Cochain { degree: m, components: split(&nat.on_ct.space, m, x, |q, part| part.mul(pi.block_ref(q))) }
}

fn within_window(ctx: &ComparisonContext, m: usize) -> Result<()> {
    if m + 1 > ctx.max_degree() {
        return Err(ParacycError::WindowExhausted { context: format!("cocycle condition in degree {m} needs degree {}", m + 1) });
    }
    Ok(())
}

/// `ν̄_♮(φ)` in closed form on `C`: `Σ φ_{m−2j} ∘ [1 + (1−τ)s'η] ξ^j N̂`.
pub fn nu_natural_closed_form(ctx: &ComparisonContext, phi: &Cochain) -> Result<Vec<Rational>> {
    check_shape(ctx, phi)?;
    let ops = &ctx.ops;
    let hats = &ctx.hats;
    let lead = ops.id.add(&ops.one_minus_tau.compose(ops.sp()?)?.compose(&hats.eta)?)?;
    let m = phi.degree;
    let mut acc = RationalMatrix::zeros(1, ops.module.rank(m as i64));
    let mut series = hats.n_hat.clone();
    for (j, c) in phi.components.iter().enumerate() {
        if j > 0 {
            series = hats.xi.compose(&series)?;
        }
        let block = lead.compose(&series)?;
        acc = acc.add(&row(c).mul(block.block_ref(m)));
    }
    Ok(unrow(&acc))
}

/// Converts a `(b, B)`-cocycle on `C_T` into a cohomologous cyclic cocycle.
pub fn convert_cocycle(ctx: &ComparisonContext, pack: &ComparisonPack, phi: &Cochain) -> Result<CocycleConversion> {
    let nat = natural(ctx, pack)?;
    let m = phi.degree;
    within_window(ctx, m)?;
    let x = to_coinvariant_row(ctx, &nat, phi)?;
    let obstruction = x.mul(nat.on_ct.d.block_ref(m + 1));
    if !obstruction.is_zero() {
        let parts = split(&nat.on_ct.space, m + 1, &obstruction, |_, p| p);
        let q = nat.on_ct.space.slots(m + 1).iter().zip(&parts).find(|(_, v)| v.iter().any(|x| *x != qi(0))).map(|(s, _)| s.q);
        return Err(ParacycError::NotACocycle { component: format!("(b+B)phi is nonzero on C_{}", q.unwrap_or(0)) });
    }
    let r = nat.retract;
    let lambda_pi = ctx.lambda.pi();
    let out = x.mul(r.nu.block_ref(m));
    let cyclic = out.mul(lambda_pi.block_ref(m));

    let mut rep = ValidationReport::new();
    rep.check("output is tau-invariant", Some(m), cyclic.mul(ctx.ops.one_minus_tau.block_ref(m)).is_zero(), || "nonzero on ran(1-tau)".into());
    rep.check("output is a b-cocycle", Some(m), cyclic.mul(ctx.ops.b.block_ref(m + 1)).is_zero(), || "phi b != 0".into());
    let closed = nu_natural_closed_form(ctx, phi)?;
    rep.check("output matches the closed form", Some(m), unrow(&cyclic) == closed, || "entries differ".into());

    // ι(ν̄φ) − φ on C_T♮_m, and its certificate
    let diff = out.mul(r.pi.block_ref(m)).sub(&x);
    let certificate = if m == 0 {
        rep.check("iota(out) = phi in degree 0", Some(0), diff.is_zero(), || "difference is nonzero".into());
        None
    } else {
        let chi = x.mul(r.phi.block_ref(m - 1));
        rep.check("iota(out) - phi = chi (b + B u^-1) on C_T~", Some(m), diff == chi.mul(nat.on_ct.d.block_ref(m)), || "coboundary differs".into());
        let chi_c = from_coinvariant_row(ctx, &nat, m - 1, &chi);
        // the same identity on C♮, where the components live
        let lift = |c: &Cochain, k: usize| assemble(&nat.on_c.space, k, |p, _| row(&c.components[p]));
        let mut iota_out = Cochain::zero(ctx, m);
        iota_out.components[0] = unrow(&cyclic);
        let lhs = lift(&iota_out, m).sub(&lift(phi, m));
        rep.check("iota(out) - phi = chi (b + B u^-1) on C~", Some(m), lhs == lift(&chi_c, m - 1).mul(nat.on_c.d.block_ref(m)), || "coboundary differs".into());
        Some(chi_c)
    };
    Ok(CocycleConversion { input: phi.clone(), cyclic: unrow(&cyclic), certificate, report: rep })
}

/// `ν̄_♮ ι_♮ = 1` on `C^m_λ`: both as matrices and on `ψ = e_k` for each
/// basis functional of `C^λ_m`.
pub fn left_inverse_check(ctx: &ComparisonContext, pack: &ComparisonPack, m: usize) -> Result<ValidationReport> {
    let nat = natural(ctx, pack)?;
    let r = nat.retract;
    let mut rep = ValidationReport::new();
    let composite = r.pi.block_ref(m).mul(r.nu.block_ref(m));
    // (ψ ∘ π̄) ∘ ν̄ = ψ ∘ (π̄ ν̄) for every ψ, so the transpose must be 1
    rep.check("nu_~ iota_~ = 1 on cyclic cochains", Some(m), composite.transpose().is_identity(), || "pi nu != 1".into());
    Ok(rep)
}

/// A random `(b, B)`-cocycle of degree `m` on `C_T`, as `T`-invariant
/// components on `C`; coefficients in `[−3, 3]` on a cocycle basis.
pub fn random_cocycle(ctx: &ComparisonContext, pack: &ComparisonPack, m: usize, seed: u64) -> Result<Cochain> {
    let nat = natural(ctx, pack)?;
    within_window(ctx, m)?;
    let basis = kernel_basis(&nat.on_ct.d.block_ref(m + 1).transpose());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = nat.on_ct.space.slots(m).iter().map(|s| s.dim).sum();
    let mut x = vec![qi(0); width];
    for v in &basis.basis {
        let c = qi(rng.gen_range(-3..=3));
        for (i, y) in v {
            x[*i] += &c * y;
        }
    }
    Ok(from_coinvariant_row(ctx, &nat, m, &row(&x)))
}

/// Stabilization of `S` on one parity of `H^•_λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityStabilization {
    pub parity: usize,
    /// First degree from which every observed `S` is an isomorphism.
    pub stable_from: Option<usize>,
    /// `dim H^{stable_from}`, the rank of `HP^parity`.
    pub rank: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct StabilizationReport {
    /// `dim H^n_λ`, i.e. `HC^n`.
    pub hc_ranks: Vec<usize>,
    /// `S : H^n_λ -> H^{n+2}_λ` in the deterministic bases.
    pub s_maps: Vec<(usize, RationalMatrix)>,
    pub periodic: [ParityStabilization; 2],
    /// Degrees where `ν̄_♮ : HC^n(C_T) -> H^n_λ` is an isomorphism.
    pub nu_isomorphisms: Vec<(usize, bool)>,
    /// Degrees where `ν̄_♮` intertwines the inclusion `u` and `S` on cohomology.
    pub s_compatible: Vec<(usize, bool)>,
    pub report: ValidationReport,
}

fn transposed(a: &GradedMap, shift: i32, src_len: usize) -> Result<GradedMap> {
    // `a` has shift `−shift`; the dual's block on degree n is a.block(n + shift)ᵀ
    let blocks = (0..src_len).map(|n| a.block_ref(n + shift as usize).transpose()).collect();
    GradedMap::new(a.target().clone(), a.source().clone(), shift, blocks)
}

/// `HC^n` ranks, `S` on cyclic cohomology and the stabilized `HP^i` ranks
/// within the window, with the action of `ν̄_♮` on cohomology.
pub fn periodic_cochain_stabilize(ctx: &ComparisonContext, pack: &ComparisonPack, s: &GradedMap) -> Result<StabilizationReport> {
    let lambda = ComplexHandle::new("C^lambda", &ctx.lambda.b)?.dual();
    let top = lambda.top().unwrap_or(0);
    let hc_ranks = (0..=top).map(|n| homology_rank(&lambda, n)).collect::<Result<Vec<_>>>()?;
    // S^† : C^n_λ -> C^{n+2}_λ
    let s_dual = transposed(s, 2, (s.window_len()).saturating_sub(2))?;
    let mut s_maps = Vec::new();
    for n in 0..=top.saturating_sub(2) {
        s_maps.push((n, induced_map_on_homology(&s_dual, &lambda, &lambda, n)?));
    }
    let periodic = [0, 1].map(|parity| {
        let iso = |n: usize| s_maps.iter().find(|(k, _)| *k == n).is_some_and(|(_, a)| a.rows() == a.cols() && a.rank() == a.cols());
        let maps: Vec<usize> = s_maps.iter().map(|(n, _)| *n).filter(|n| n % 2 == parity).collect();
        let start = maps.iter().rposition(|&n| !iso(n)).map_or(0, |k| k + 1);
        match maps.get(start) {
            Some(&n) => ParityStabilization { parity, stable_from: Some(n), rank: Some(hc_ranks[n]) },
            None => ParityStabilization { parity, stable_from: None, rank: None },
        }
    });

    let mut rep = ValidationReport::new();
    let mut nu_isomorphisms = Vec::new();
    let mut s_compatible = Vec::new();
    if let Ok(nat) = natural(ctx, pack) {
        let r = nat.retract;
        let x = ComplexHandle::new("C_T~", &nat.on_ct.d)?.dual();
        let nu_dual = transposed(&r.nu, 0, r.nu.window_len())?;
        let u_dual = transposed(&r.u, 2, r.u.window_len().saturating_sub(2))?;
        for n in 0..=top.min(x.top().unwrap_or(0)) {
            let a = induced_map_on_homology(&nu_dual, &x, &lambda, n)?;
            let ok = a.rows() == a.cols() && a.rank() == a.cols();
            rep.check("nu_~ is an isomorphism HC(C_T) -> H_lambda", Some(n), ok, || format!("rank {} of {}x{}", a.rank(), a.rows(), a.cols()));
            nu_isomorphisms.push((n, ok));
            if n + 2 <= top {
                let lhs = induced_map_on_homology(&nu_dual.compose(&u_dual)?, &x, &lambda, n)?;
                let rhs = induced_map_on_homology(&s_dual.compose(&nu_dual)?, &x, &lambda, n)?;
                rep.check("nu_~ u = S nu_~ on cohomology", Some(n), lhs == rhs, || "induced maps differ".into());
                s_compatible.push((n, lhs == rhs));
            }
        }
    }
    Ok(StabilizationReport { hc_ranks, s_maps, periodic, nu_isomorphisms, s_compatible, report: rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::periodicity_s;
    use crate::linalg::q;

    fn setup(name: &str, m: usize) -> (ComparisonContext, ComparisonPack) {
        let ctx = ComparisonContext::for_example(name, m).unwrap();
        let pack = ComparisonPack::build(&ctx).unwrap();
        (ctx, pack)
    }

    #[test]
    fn trivial_degree_two() {
        let (ctx, pack) = setup("trivial-Q", 3);
        let phi = Cochain { degree: 2, components: vec![vec![qi(1)], vec![qi(1)]] };
        let c = convert_cocycle(&ctx, &pack, &phi).unwrap();
        assert_eq!(c.cyclic, vec![q(1, 2)]);
        assert!(c.report.all_pass(), "{}", c.report);
        // general (φ₂, φ₀) ↦ φ₂ − φ₀/2
        let phi = Cochain { degree: 2, components: vec![vec![qi(5)], vec![qi(3)]] };
        assert_eq!(convert_cocycle(&ctx, &pack, &phi).unwrap().cyclic, vec![q(7, 2)]);
    }

    #[test]
    fn zero_maps_to_zero() {
        let (ctx, pack) = setup("dual-numbers", 4);
        let c = convert_cocycle(&ctx, &pack, &Cochain::zero(&ctx, 2)).unwrap();
        assert!(c.cyclic.iter().all(|x| *x == qi(0)));
        assert!(c.certificate.unwrap().is_zero());
    }

    #[test]
    fn rejects_non_cocycle() {
        let (ctx, pack) = setup("trivial-Q", 3);
        // (b+B)(φ₁) = φ₁ b on C_2 = φ₁ ≠ 0
        let phi = Cochain { degree: 1, components: vec![vec![qi(1)]] };
        assert!(matches!(convert_cocycle(&ctx, &pack, &phi), Err(ParacycError::NotACocycle { .. })));
    }

    #[test]
    fn rejects_non_invariant_components() {
        let (ctx, pack) = setup("group-Z2-phi-g", 3);
        let mut phi = Cochain::zero(&ctx, 0);
        phi.components[0][0] = qi(1);
        assert!(matches!(convert_cocycle(&ctx, &pack, &phi), Err(ParacycError::PreconditionFailed(_))));
    }

    #[test]
    fn file_round_trip() {
        let phi = Cochain { degree: 2, components: vec![vec![q(1, 3)], vec![qi(-2)]] };
        let f = CocycleFile::from_cochain(&phi);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"degree":2,"components":[["1/3"],["-2"]]}"#);
        let back: CocycleFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_cochain().unwrap(), phi);
    }

    #[test]
    fn random_cocycles_convert() {
        for name in ["sign-twisted", "group-Z2-phi-g"] {
            let (ctx, pack) = setup(name, 4);
            for seed in 0..3 {
                for m in 1..=3 {
                    let phi = random_cocycle(&ctx, &pack, m, seed).unwrap();
                    let c = convert_cocycle(&ctx, &pack, &phi).unwrap();
                    assert!(c.report.all_pass(), "{name} m={m} seed={seed}: {}", c.report);
                }
            }
        }
    }

    #[test]
    fn left_inverse() {
        let (ctx, pack) = setup("group-Z2-phi-e", 4);
        for m in 0..=4 {
            assert!(left_inverse_check(&ctx, &pack, m).unwrap().all_pass());
        }
    }

    #[test]
    fn trivial_stabilization() {
        let (ctx, pack) = setup("trivial-Q", 7);
        let per = periodicity_s(&ctx, &pack).unwrap();
        let st = periodic_cochain_stabilize(&ctx, &pack, &per.s).unwrap();
        assert_eq!(st.hc_ranks, vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(st.periodic[0], ParityStabilization { parity: 0, stable_from: Some(0), rank: Some(1) });
        assert_eq!(st.periodic[1].rank, Some(0));
        assert!(st.report.all_pass(), "{}", st.report);
    }
}
