//! Deformation retracts: `I/J/h` between `C♮` and `C♮♮`, the maps
//! `ν₀, φ, μ` between `C` and `C♮♮` (and their `J`-transports to `C♮`),
//! and the retracts of both total complexes onto `C^λ`.

use crate::builders::TotalSpace;
use crate::error::Result;
use crate::graded::GradedMap;
use crate::linalg::RationalMatrix;
use crate::perturbation::{
    check_expansions, perturb, verify_lemma_delta_zero, verify_lemma_special, ParaTwinComplex, PerturbedData,
    TransferenceData,
};
use crate::report::ValidationReport;

use super::{descend, variant, ComparisonContext, Variant};

fn identity_block(space: &TotalSpace, q: usize) -> RationalMatrix {
    RationalMatrix::identity(space.base.rank(q as i64))
}

/// `[x, y∘x, y∘y∘x, …]` with `count` entries.
fn orbit(y: &GradedMap, x: &GradedMap, count: usize) -> Result<Vec<GradedMap>> {
    let mut out = vec![x.clone()];
    for _ in 1..count {
        let next = y.compose(out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// `Σ_j (1 + η u) ξ^j · lead · u^{2j}` from `C` into `C♮♮`, the common
/// shape of `ν₀♮♮` (`lead = N̂`) and `μ♮♮` (`lead = x̂`).
fn xi_series_nn(ctx: &ComparisonContext, lead: &GradedMap) -> Result<GradedMap> {
    let hats = &ctx.hats;
    let count = ctx.max_degree() / 2 + 1;
    let main = orbit(&hats.xi, lead, count)?;
    let side = main.iter().map(|m| hats.eta.compose(m)).collect::<Result<Vec<_>>>()?;
    let plain = TotalSpace::plain(&ctx.ops.module);
    plain.assemble(&ctx.nn.space, 0, |_, _, q| {
        let mut terms = Vec::new();
        for j in 0..=q / 2 {
            terms.push((2 * j, main[j].block(q as i64)));
            if q > 2 * j {
                terms.push((2 * j + 1, side[j].block(q as i64)));
            }
        }
        Ok(Some(terms))
    })
}

/// `I`, `J`, the special homotopy `h`, and their unperturbed parts.
#[derive(Clone, Debug)]
pub struct IjhPack {
    /// `C♮ -> C♮♮`.
    pub i: GradedMap,
    /// `C♮♮ -> C♮`.
    pub j: GradedMap,
    /// On `C♮♮`, shift +1.
    pub h: GradedMap,
    pub i0: GradedMap,
    pub j0: GradedMap,
    pub perturbed: PerturbedData,
    pub report: ValidationReport,
}

/// Builds `I`, `J`, `h` from their closed forms, re-derives them with the
/// perturbation engine, and certifies the retract.
pub fn build_ijh(ctx: &ComparisonContext) -> Result<IjhPack> {
    let nat = ctx.nat()?;
    let nn = &ctx.nn;
    let ops = &ctx.ops;
    let sp = ops.sp()?;
    let sp_n = sp.compose(&ops.n)?;
    let tau_sp = ops.one_minus_tau.compose(sp)?;
    let (ns, ts) = (&nn.space, &nat.space);

    let i0 = ts.assemble(ns, 0, |_, p, q| Ok(Some(vec![(2 * p, identity_block(ts, q))])))?;
    let j0 = ns.assemble(ts, 0, |_, p, q| Ok(Some(if p % 2 == 0 { vec![(p / 2, identity_block(ns, q))] } else { Vec::new() })))?;
    let h = ns.assemble(ns, 1, |_, p, q| {
        if p % 2 == 0 {
            return Ok(Some(Vec::new()));
        }
        Ok(sp.defined_at(q as i64).then(|| vec![(p, sp.block(q as i64))]))
    })?;
    let i = ts.assemble(ns, 0, |_, p, q| {
        Ok(Some(if p == 0 {
            vec![(0, identity_block(ts, q))]
        } else {
            vec![(2 * p, identity_block(ts, q)), (2 * p - 1, sp_n.block(q as i64))]
        }))
    })?;
    let j = ns.assemble(ts, 0, |_, p, q| {
        Ok(Some(if p % 2 == 0 { vec![(p / 2, identity_block(ns, q))] } else { vec![(p / 2, tau_sp.block(q as i64))] }))
    })?;

    let mut rep = ValidationReport::new();
    let one_n = GradedMap::identity(&ts.module);
    let one_nn = GradedMap::identity(&ns.module);
    rep.check_eq_result("J0 I0 = 1", j0.compose(&i0).map(|l| (l, one_n.clone())));
    rep.check_eq_result(
        "I0 J0 = 1 + delta h + h delta",
        i0.compose(&j0).and_then(|l| Ok((l, nn.delta.anticommutator(&h)?.add(&one_nn)?))),
    );
    rep.check_eq_result("J I = 1", j.compose(&i).map(|l| (l, one_n.clone())));
    rep.check_eq_result(
        "I J = 1 + (partial + delta) h + h (partial + delta)",
        i.compose(&j).and_then(|l| Ok((l, nn.d.anticommutator(&h)?.add(&one_nn)?))),
    );
    rep.check_eq_result("I (b + Bu^-1) = (partial + delta) I", i.compose(&nat.d).and_then(|l| Ok((l, nn.d.compose(&i)?))));
    rep.check_eq_result("J (partial + delta) = (b + Bu^-1) J", j.compose(&nn.d).and_then(|l| Ok((l, nat.d.compose(&j)?))));
    rep.check_eq_result("I u^-1 = u^-2 I", i.compose(&nat.s).and_then(|l| Ok((l, nn.s.compose(&i)?))));
    rep.check_eq_result("J u^-2 = u^-1 J", j.compose(&nn.s).and_then(|l| Ok((l, nat.s.compose(&j)?))));
    rep.check_zero("J h = 0", j.compose(&h));
    rep.check_zero("h I = 0", h.compose(&i));
    rep.check_zero("h^2 = 0", h.compose(&h));

    // the same retract from the perturbation lemma: perturb (δ, I0, J0, h) by ∂
    let src = ParaTwinComplex::new(nn.delta.clone(), nn.partial.clone());
    let tgt = ParaTwinComplex::new(nat.b.clone(), nat.bu.clone());
    let td = TransferenceData::new(src, tgt, j0.clone(), i0.clone(), h.clone());
    let pd = perturb(&td)?;
    rep.check_eq("engine phi~ = h", &pd.phi_tilde, &h);
    rep.check_eq("engine f~ = J", &pd.f_tilde, &j);
    rep.check_eq("engine g~ = I", &pd.g_tilde, &i);
    rep.check_eq("engine delta~ = B u^-1", &pd.delta_tilde, &nat.bu);
    rep.extend(check_expansions(&td, &pd).prefixed("I/J/h"));
    match verify_lemma_special(&td, &pd) {
        Ok(r) => rep.extend(r.prefixed("I/J/h")),
        Err(e) => rep.fail("I/J/h: special perturbation lemma hypotheses", None, e.to_string()),
    }
    Ok(IjhPack { i, j, h, i0, j0, perturbed: pd, report: rep })
}

/// `ν₀♮♮`, `φ♮♮`, `μ♮♮` between `C` and `C♮♮`.
#[derive(Clone, Debug)]
pub struct NuDoubleNatural {
    /// `x ↦ N̂x u⁰`, the unperturbed inclusion.
    pub nu: GradedMap,
    /// Unperturbed homotopy on `C♮♮`.
    pub phi0: GradedMap,
    pub nu0: GradedMap,
    pub phi: GradedMap,
    pub mu: GradedMap,
    /// `π₀♮♮ : C♮♮ -> C`.
    pub pi0: GradedMap,
    pub perturbed: PerturbedData,
    pub report: ValidationReport,
    /// Whether `δ̃ = bN̂` squares to zero.
    pub delta_tilde_square_zero: bool,
}

pub fn build_nu_nn(ctx: &ComparisonContext) -> Result<NuDoubleNatural> {
    let ops = &ctx.ops;
    let hats = &ctx.hats;
    let nn = &ctx.nn;
    let ns = &nn.space;
    let c = &ops.module;
    let pi0 = ns.pi0()?;
    let iota0 = ns.iota0()?;
    let nu = iota0.compose(&hats.n_hat)?;
    let phi0 = ns.assemble(ns, 1, |_, p, q| {
        let blk = if p % 2 == 0 { hats.d_hat.block(q as i64) } else { hats.hat.block(q as i64) };
        Ok(Some(vec![(p + 1, blk.neg())]))
    })?;

    let src = ParaTwinComplex::new(nn.partial.clone(), nn.delta.clone());
    let tgt = ParaTwinComplex::new(GradedMap::zero(c, c, -1), ops.b.clone());
    let td = TransferenceData::new(src, tgt, pi0.clone(), nu.clone(), phi0.clone());
    let pd = perturb(&td)?;
    let nu0 = pd.g_tilde.clone();
    let phi = pd.phi_tilde.clone();
    // μ = Σ (φδ)^j x̂ u⁰
    let mu = {
        let phid = phi0.compose(&nn.delta)?;
        let series = crate::perturbation::nilpotent_series(&phid, td.nilpotency_bound)?;
        series.compose(&iota0)?.compose(&hats.hat)?
    };

    let mut rep = ValidationReport::new();
    match verify_lemma_delta_zero(&td, &pd) {
        Ok(r) => rep.extend(r.prefixed("nu~~")),
        Err(e) => rep.fail("nu~~: Delta = 0 perturbation lemma hypotheses", None, e.to_string()),
    }
    rep.extend(check_expansions(&td, &pd).prefixed("nu~~"));
    // π₀ is not a chain map for ∂, and (bN̂)² need not vanish
    let delta_tilde_square_zero = pd.delta_tilde.compose(&pd.delta_tilde).map(|x| x.is_zero()).unwrap_or(false);
    rep.check_eq_result("delta~ = b N^", ops.b.compose(&hats.n_hat).map(|r| (pd.delta_tilde.clone(), r)));
    rep.check_eq_result(
        "b N^ = b - (1-tau) b' D^",
        ops.b.compose(&hats.n_hat).and_then(|l| Ok((l, ops.b.sub(&ops.one_minus_tau.compose(&ops.bp)?.compose(&hats.d_hat)?)?))),
    );

    let one_minus_t_nn = ns.diagonal(&ops.one_minus_t)?;
    rep.check_eq_result(
        "(partial + delta) nu0 = nu0 b - (1-T) mu b' D^",
        nn.d.compose(&nu0).and_then(|l| {
            let corr = one_minus_t_nn.compose(&mu)?.compose(&ops.bp)?.compose(&hats.d_hat)?;
            Ok((l, nu0.compose(&ops.b)?.sub(&corr)?))
        }),
    );
    rep.check_eq_result(
        "pi0 nu0 = 1 - (1-tau) D^",
        pi0.compose(&nu0).and_then(|l| Ok((l, ops.id.sub(&ops.one_minus_tau.compose(&hats.d_hat)?)?))),
    );
    rep.check_eq_result(
        "nu0 pi0 = 1 + (partial + delta) phi + phi (partial + delta)",
        nu0.compose(&pi0).and_then(|l| Ok((l, nn.d.anticommutator(&phi)?.add(&GradedMap::identity(&ns.module))?))),
    );
    rep.check_eq_result(
        "nu0 (1-tau) = (1-T) mu",
        nu0.compose(&ops.one_minus_tau).and_then(|l| Ok((l, one_minus_t_nn.compose(&mu)?))),
    );
    rep.check_zero("pi0 phi = 0", pi0.compose(&phi));

    // closed forms, assembled directly from ξ, η, D̂, b̂'
    rep.check_eq_result("nu0 = sum (1 + eta u) xi^j N^ u^2j", xi_series_nn(ctx, &hats.n_hat).map(|r| (nu0.clone(), r)));
    rep.check_eq_result("mu = sum (1 + eta u) xi^j x^ u^2j", xi_series_nn(ctx, &hats.hat).map(|r| (mu.clone(), r)));
    rep.check_eq_result("phi~~ closed form", phi_closed_form(ctx).map(|r| (phi.clone(), r)));
    Ok(NuDoubleNatural { nu, phi0, nu0, phi, mu, pi0, perturbed: pd, report: rep, delta_tilde_square_zero })
}

/// `φ♮♮(xu^{2p}) = −Σ (1 + b̂'u) ζ^j D̂x u^{2p+2j+1}` with `ζ = −D̂bb̂'`, and
/// `φ♮♮(xu^{2p+1}) = −Σ (1 + ηu) ξ^j x̂ u^{2p+2j+2}`.
fn phi_closed_form(ctx: &ComparisonContext) -> Result<GradedMap> {
    let hats = &ctx.hats;
    let count = ctx.max_degree() / 2 + 1;
    let zeta = hats.eta.compose(&hats.bp_hat)?;
    let even_main = orbit(&zeta, &hats.d_hat, count)?;
    let even_side = even_main.iter().map(|m| hats.bp_hat.compose(m)).collect::<Result<Vec<_>>>()?;
    let odd_main = orbit(&hats.xi, &hats.hat, count)?;
    let odd_side = odd_main.iter().map(|m| hats.eta.compose(m)).collect::<Result<Vec<_>>>()?;
    let ns = &ctx.nn.space;
    ns.assemble(ns, 1, |_, p, q| {
        let (main, side) = if p % 2 == 0 { (&even_main, &even_side) } else { (&odd_main, &odd_side) };
        let mut terms = Vec::new();
        for j in 0..=q / 2 {
            terms.push((p + 2 * j + 1, main[j].block(q as i64).neg()));
            if q > 2 * j {
                terms.push((p + 2 * j + 2, side[j].block(q as i64).neg()));
            }
        }
        Ok(Some(terms))
    })
}

/// `ν₀♮ = Jν₀♮♮`, `φ♮ = Jφ♮♮I`, `μ♮ = Jμ♮♮`.
#[derive(Clone, Debug)]
pub struct NuNatural {
    pub nu0: GradedMap,
    pub phi: GradedMap,
    pub mu: GradedMap,
    /// `π₀♮ : C♮ -> C`.
    pub pi0: GradedMap,
    pub report: ValidationReport,
    /// Competing printed forms, evaluated but not asserted.
    pub variants: Vec<Variant>,
}

pub fn build_nu_n(ctx: &ComparisonContext, ijh: &IjhPack, nunn: &NuDoubleNatural) -> Result<NuNatural> {
    let ops = &ctx.ops;
    let hats = &ctx.hats;
    let nat = ctx.nat()?;
    let ts = &nat.space;
    let sp = ops.sp()?;
    let nu0 = ijh.j.compose(&nunn.nu0)?;
    let phi = ijh.j.compose(&nunn.phi)?.compose(&ijh.i)?;
    let mu = ijh.j.compose(&nunn.mu)?;
    let pi0 = ts.pi0()?;
    let one_minus_t_n = ts.diagonal(&ops.one_minus_t)?;
    let tau_sp = ops.one_minus_tau.compose(sp)?;

    let mut rep = ValidationReport::new();
    rep.check_eq_result(
        "(b + Bu^-1) nu0~ = nu0~ b - (1-T) mu~ b' D^",
        nat.d.compose(&nu0).and_then(|l| {
            let corr = one_minus_t_n.compose(&mu)?.compose(&ops.bp)?.compose(&hats.d_hat)?;
            Ok((l, nu0.compose(&ops.b)?.sub(&corr)?))
        }),
    );
    rep.check_eq_result(
        "nu0~ pi0~ = 1 + (b + Bu^-1) phi~ + phi~ (b + Bu^-1)",
        nu0.compose(&pi0).and_then(|l| Ok((l, nat.d.anticommutator(&phi)?.add(&GradedMap::identity(&ts.module))?))),
    );
    rep.check_eq_result(
        "nu0~ (1-tau) = (1-T) mu~",
        nu0.compose(&ops.one_minus_tau).and_then(|l| Ok((l, one_minus_t_n.compose(&mu)?))),
    );
    // [1 − (1−τ)s'D̂b] N̂ = 1 − (1−τ)[D̂ + s'D̂bN̂]
    let sdb = sp.compose(&hats.d_hat)?.compose(&ops.b)?;
    rep.check_eq_result(
        "pi0~ nu0~ = [1 - (1-tau) s' D^ b] N^",
        pi0.compose(&nu0).and_then(|l| Ok((l, ops.id.sub(&ops.one_minus_tau.compose(&sdb)?)?.compose(&hats.n_hat)?))),
    );
    rep.check_eq_result(
        "pi0~ nu0~ = 1 - (1-tau) [D^ + s' D^ b N^]",
        pi0.compose(&nu0).and_then(|l| Ok((l, ops.id.sub(&ops.one_minus_tau.compose(&hats.d_hat.add(&sdb.compose(&hats.n_hat)?)?)?)?))),
    );
    let u1 = ctx.nn.space.u_inverse(1)?;
    rep.check_eq_result(
        "pi0~ J = pi0~~ + (1-tau) s' pi0~~ u^-1",
        pi0.compose(&ijh.j).and_then(|l| Ok((l, nunn.pi0.add(&tau_sp.compose(&nunn.pi0)?.compose(&u1)?)?))),
    );
    rep.check_eq_result(
        "pi0~ phi~ = -(1-tau) s' D^ pi0~",
        pi0.compose(&phi).and_then(|l| Ok((l, tau_sp.compose(&hats.d_hat)?.compose(&pi0)?.neg()))),
    );
    // ν₀♮ = Σ [1 + (1−τ)s'η] ξ^j N̂ u^j
    let closed = {
        let count = ctx.max_degree() / 2 + 1;
        let main = orbit(&hats.xi, &hats.n_hat, count)?;
        let corr = tau_sp.compose(&hats.eta)?;
        let full = main.iter().map(|m| m.add(&corr.compose(m)?)).collect::<Result<Vec<_>>>()?;
        TotalSpace::plain(&ops.module).assemble(ts, 0, |_, _, q| Ok(Some((0..=q / 2).map(|j| (j, full[j].block(q as i64))).collect())))
    };
    rep.check_eq_result("nu0~ = sum [1 - (1-tau) s' D^ b] (b^' D^ b)^j N^ u^j", closed.map(|r| (nu0.clone(), r)));
    rep.check_eq_result("pi0~~ I = pi0~", nunn.pi0.compose(&ijh.i).map(|l| (l, pi0.clone())));

    let variants = vec![
        variant(
            "pi0~ nu0~ = 1 - (1-tau)[1 + s' D^ b N^]",
            pi0.compose(&nu0).and_then(|l| Ok((l, ops.id.sub(&ops.one_minus_tau.compose(&ops.id.add(&sdb.compose(&hats.n_hat)?)?)?)?))),
        ),
        variant(
            "pi0~ phi~ = -(1-tau) D^ pi0~",
            pi0.compose(&phi).and_then(|l| Ok((l, ops.one_minus_tau.compose(&hats.d_hat)?.compose(&pi0)?.neg()))),
        ),
        variant(
            "pi0~ phi~ = -(1-tau) s' b^ D^ pi0~",
            pi0.compose(&phi).and_then(|l| {
                let bh = hats.hat.compose(&ops.b)?;
                Ok((l, tau_sp.compose(&bh)?.compose(&hats.d_hat)?.compose(&pi0)?.neg()))
            }),
        ),
    ];
    Ok(NuNatural { nu0, phi, mu, pi0, report: rep, variants })
}

/// A deformation retract of a total complex `X` onto `C^λ`.
#[derive(Clone, Debug)]
pub struct LambdaRetract {
    pub label: String,
    /// `X -> C^λ`.
    pub pi: GradedMap,
    /// `C^λ -> X`.
    pub nu: GradedMap,
    pub phi: GradedMap,
    /// Differential of `X`.
    pub d: GradedMap,
    /// The `u`-operator of `X` that `ν` intertwines with `S`.
    pub u: GradedMap,
    pub report: ValidationReport,
}

/// The three retract flavours onto `C^λ` for one total complex.
#[derive(Clone, Debug)]
pub struct LambdaRetracts {
    /// Through the coinvariants `C_T`; always available.
    pub coinvariant: LambdaRetract,
    /// Through `C^T`; quasi-cyclic only.
    pub quasi: Option<LambdaRetract>,
    /// Directly on `X`; `T = 1` only.
    pub precyclic: Option<LambdaRetract>,
}

/// `πν = 1`, `νπ = 1 + dφ + φd`, `πφ = 0` and the chain-map identities.
pub fn retract_battery(pi: &GradedMap, nu: &GradedMap, phi: &GradedMap, d: &GradedMap, b_lambda: &GradedMap) -> ValidationReport {
    let mut rep = ValidationReport::new();
    rep.check_eq_result("pi nu = 1", pi.compose(nu).map(|l| (l, GradedMap::identity(nu.source()))));
    rep.check_eq_result(
        "nu pi = 1 + d phi + phi d",
        nu.compose(pi).and_then(|l| Ok((l, d.anticommutator(phi)?.add(&GradedMap::identity(pi.source()))?))),
    );
    rep.check_zero("pi phi = 0", pi.compose(phi));
    rep.check_eq_result("d nu = nu b", d.compose(nu).and_then(|l| Ok((l, nu.compose(b_lambda)?))));
    rep.check_eq_result("pi d = b pi", pi.compose(d).and_then(|l| Ok((l, b_lambda.compose(pi)?))));
    rep
}

/// The maps of one total complex `X` that the retracts are assembled from.
struct TotalData<'a> {
    /// `π₀ : X -> C`.
    pi0: &'a GradedMap,
    /// `ν₀ : C -> X`.
    nu0: &'a GradedMap,
    phi: &'a GradedMap,
    d: &'a GradedMap,
    u: &'a GradedMap,
    space: &'a TotalSpace,
    /// Coinvariant counterparts: `π_T`, section, differential and `u` on `X_T`.
    pi_t: &'a GradedMap,
    section_t: &'a GradedMap,
    d_t: &'a GradedMap,
    u_t: &'a GradedMap,
    /// Homotopy on `X` with `1 + dh + hd = π^T`.
    h_quasi: Option<GradedMap>,
}

fn build_retracts(ctx: &ComparisonContext, x: TotalData, tag: &str) -> Result<LambdaRetracts> {
    let ops = &ctx.ops;
    let lambda = &ctx.lambda;
    let one_minus_t_x = x.space.diagonal(&ops.one_minus_t)?;
    let pi_lambda = lambda.pi().compose(x.pi0)?;

    let coinvariant = {
        let pi = descend(&pi_lambda, &one_minus_t_x, x.section_t)?;
        let nu = descend(&x.pi_t.compose(x.nu0)?, &ops.one_minus_tau, lambda.section())?;
        let phi = descend(&x.pi_t.compose(x.phi)?, &one_minus_t_x, x.section_t)?;
        let mut report = retract_battery(&pi, &nu, &phi, x.d_t, &lambda.b);
        report.check_eq_result("pi_T d = d_T pi_T", x.pi_t.compose(x.d).and_then(|l| Ok((l, x.d_t.compose(x.pi_t)?))));
        LambdaRetract { label: format!("{tag} coinvariant"), pi, nu, phi, d: x.d_t.clone(), u: x.u_t.clone(), report }
    };

    let quasi = match (&ctx.quasi, &x.h_quasi) {
        (Some(qd), Some(h)) => {
            let pit_x = x.space.diagonal(&qd.split.projector)?;
            let nu = descend(&pit_x.compose(x.nu0)?, &ops.one_minus_tau, lambda.section())?;
            let phi = h.add(&x.phi.compose(&pit_x)?)?;
            let mut report = ValidationReport::new();
            report.check_eq_result(
                "1 + d h + h d = pi^T",
                x.d.anticommutator(h).and_then(|s| s.add(&GradedMap::identity(&x.space.module))).map(|l| (l, pit_x.clone())),
            );
            report.extend(retract_battery(&pi_lambda, &nu, &phi, x.d, &lambda.b));
            Some(LambdaRetract { label: format!("{tag} quasi"), pi: pi_lambda.clone(), nu, phi, d: x.d.clone(), u: x.u.clone(), report })
        }
        _ => None,
    };

    let precyclic = if ctx.is_precyclic() {
        let nu = descend(x.nu0, &ops.one_minus_tau, lambda.section())?;
        let mut report = retract_battery(&pi_lambda, &nu, x.phi, x.d, &lambda.b);
        report.check_eq_result("nu_bar = pi_T nu", x.pi_t.compose(&nu).map(|r| (coinvariant.nu.clone(), r)));
        Some(LambdaRetract { label: format!("{tag} precyclic"), pi: pi_lambda.clone(), nu, phi: x.phi.clone(), d: x.d.clone(), u: x.u.clone(), report })
    } else {
        None
    };
    Ok(LambdaRetracts { coinvariant, quasi, precyclic })
}

/// Retracts of `C♮♮` (and `C_T♮♮`) onto `C^λ`.
pub fn build_retract_lambda_nn(ctx: &ComparisonContext, nunn: &NuDoubleNatural) -> Result<LambdaRetracts> {
    let co = &ctx.coinv;
    let data = TotalData {
        pi0: &nunn.pi0,
        nu0: &nunn.nu0,
        phi: &nunn.phi,
        d: &ctx.nn.d,
        u: &ctx.nn.s,
        space: &ctx.nn.space,
        pi_t: &co.pi_nn,
        section_t: &co.section_nn,
        d_t: &co.nn.d,
        u_t: &co.nn.s,
        h_quasi: ctx.quasi.as_ref().map(|q| q.pack.h_nn.clone()),
    };
    build_retracts(ctx, data, "C~~")
}

/// Retracts of `C♮` (and `C_T♮`) onto `C^λ`.
pub fn build_retract_lambda_n(ctx: &ComparisonContext, nun: &NuNatural) -> Result<LambdaRetracts> {
    let nat = ctx.nat()?;
    let co = &ctx.coinv;
    let nat_t = co.nat.as_ref().ok_or(crate::error::ParacycError::MissingHomotopy)?;
    let (Some(pi_t), Some(section_t)) = (&co.pi_nat, &co.section_nat) else {
        return Err(crate::error::ParacycError::MissingHomotopy);
    };
    let h_quasi = match &ctx.quasi {
        Some(q) => Some(nat.space.diagonal(&q.pack.h)?),
        None => None,
    };
    let data = TotalData {
        pi0: &nun.pi0,
        nu0: &nun.nu0,
        phi: &nun.phi,
        d: &nat.d,
        u: &nat.s,
        space: &nat.space,
        pi_t,
        section_t,
        d_t: &nat_t.d,
        u_t: &nat_t.s,
        h_quasi,
    };
    build_retracts(ctx, data, "C~")
}

/// Every comparison map available for a structure.
#[derive(Clone, Debug)]
pub struct ComparisonPack {
    pub ijh: Option<IjhPack>,
    pub nu_nn: NuDoubleNatural,
    pub lambda_nn: LambdaRetracts,
    pub nu_n: Option<NuNatural>,
    pub lambda_n: Option<LambdaRetracts>,
}

impl ComparisonPack {
    pub fn build(ctx: &ComparisonContext) -> Result<Self> {
        let nu_nn = build_nu_nn(ctx)?;
        let lambda_nn = build_retract_lambda_nn(ctx, &nu_nn)?;
        let (ijh, nu_n, lambda_n) = if ctx.nat.is_some() {
            let ijh = build_ijh(ctx)?;
            let nu_n = build_nu_n(ctx, &ijh, &nu_nn)?;
            let lambda_n = build_retract_lambda_n(ctx, &nu_n)?;
            (Some(ijh), Some(nu_n), Some(lambda_n))
        } else {
            (None, None, None)
        };
        Ok(ComparisonPack { ijh, nu_nn, lambda_nn, nu_n, lambda_n })
    }

    /// Every retract onto `C^λ` that was built.
    pub fn retracts(&self) -> Vec<&LambdaRetract> {
        let mut out = Vec::new();
        for r in std::iter::once(&self.lambda_nn).chain(self.lambda_n.iter()) {
            out.push(&r.coinvariant);
            out.extend(r.quasi.iter());
            out.extend(r.precyclic.iter());
        }
        out
    }

    pub fn report(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        if let Some(ijh) = &self.ijh {
            rep.extend(ijh.report.clone());
        }
        rep.extend(self.nu_nn.report.clone());
        if let Some(n) = &self.nu_n {
            rep.extend(n.report.clone());
        }
        for r in self.retracts() {
            rep.extend(r.report.clone().prefixed(&r.label));
        }
        rep
    }
}
