//! Named verification suites: each gathers the certificates of one layer
//! of the theory into a single report for one structure.

use std::fmt;
use std::str::FromStr;

use crate::builders::{build_invariants_t, parachain_report};
use crate::comparison::cochains::{convert_cocycle, left_inverse_check, periodic_cochain_stabilize, random_cocycle};
use crate::comparison::periodicity::{connes_bs_cycles, periodicity_homotopies, periodicity_s};
use crate::comparison::{ComparisonContext, ComparisonPack, Variant};
use crate::cyclic::{derive_operators, homotopy_change_iso, validate, CyclicStructure, DerivedOperators};
use crate::error::{ParacycError, Result};
use crate::graded::GradedMap;
use crate::homology::{retract_homology_check, ComplexHandle};
use crate::linalg::{solve_matrix, Rational};
use crate::para_s::{check_para_s, periodic_truncation};
use crate::perturbation::{delta_tilde_identity, non_special_control, perturb, specialize_parachain, Parachain, ParachainPerturbation};
use crate::report::ValidationReport;
use crate::zoo::zoo_entry;

/// Seeds used for random cocycles.
pub const COCYCLE_SEEDS: u64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Axioms,
    ParaS,
    Perturbation,
    Retracts,
    Periodicity,
    Cocycle,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["axioms", "para-s", "perturbation", "retracts", "periodicity", "cocycle", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::ParaS => "para-s",
            Suite::Perturbation => "perturbation",
            Suite::Retracts => "retracts",
            Suite::Periodicity => "periodicity",
            Suite::Cocycle => "cocycle",
            Suite::All => "all",
        }
    }

    /// The concrete suites a selector stands for, in run order.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Axioms, Suite::ParaS, Suite::Perturbation, Suite::Retracts, Suite::Periodicity, Suite::Cocycle],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ParacycError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "axioms" => Suite::Axioms,
            "para-s" => Suite::ParaS,
            "perturbation" => Suite::Perturbation,
            "retracts" => Suite::Retracts,
            "periodicity" => Suite::Periodicity,
            "cocycle" => Suite::Cocycle,
            "all" => Suite::All,
            other => return Err(ParacycError::Parse(format!("unknown suite '{other}' (expected one of {})", Suite::NAMES.join(", ")))),
        })
    }
}

/// A structure to verify, with the quasi data a zoo entry knows about.
#[derive(Clone, Debug)]
pub struct Subject {
    pub structure: CyclicStructure,
    pub quasi_polynomial: Option<Vec<Rational>>,
    pub r_cyclic: Option<usize>,
}

impl Subject {
    pub fn example(name: &str, max_degree: usize) -> Result<Self> {
        let e = zoo_entry(name, max_degree)?;
        Ok(Subject { quasi_polynomial: e.quasi_polynomial(), r_cyclic: e.r_cyclic, structure: e.structure })
    }

    /// A user structure; the quasi splitting is searched for generically.
    pub fn structure(cs: CyclicStructure) -> Self {
        Subject { structure: cs, quasi_polynomial: None, r_cyclic: None }
    }

    pub fn name(&self) -> &str {
        &self.structure.name
    }

    pub fn context(&self) -> Result<ComparisonContext> {
        ComparisonContext::new(&self.structure, self.quasi_polynomial.as_deref(), self.r_cyclic)
    }
}

/// Result of one suite: asserted identities plus evaluated-but-not-asserted
/// competing formulas.
#[derive(Clone, Debug, Default)]
pub struct SuiteOutcome {
    pub report: ValidationReport,
    pub variants: Vec<Variant>,
}

/// Lazily built comparison data shared by the suites of one run.
pub struct Verifier {
    subject: Subject,
    ctx: Option<std::result::Result<ComparisonContext, ParacycError>>,
    pack: Option<std::result::Result<ComparisonPack, ParacycError>>,
}

impl Verifier {
    pub fn new(subject: Subject) -> Self {
        Verifier { subject, ctx: None, pack: None }
    }

    pub fn subject(&self) -> &Subject {
        &self.subject
    }

    fn ensure(&mut self) {
        if self.ctx.is_none() {
            self.ctx = Some(self.subject.context());
        }
        if self.pack.is_none() {
            self.pack = Some(match self.ctx.as_ref().unwrap() {
                Ok(ctx) => ComparisonPack::build(ctx),
                Err(e) => Err(e.clone()),
            });
        }
    }

    /// The comparison context, if it could be built.
    pub fn context(&mut self) -> Result<&ComparisonContext> {
        self.ensure();
        self.ctx.as_ref().unwrap().as_ref().map_err(Clone::clone)
    }

    pub fn parts(&mut self) -> Result<(&ComparisonContext, &ComparisonPack)> {
        self.ensure();
        let ctx = self.ctx.as_ref().unwrap().as_ref().map_err(Clone::clone)?;
        let pack = self.pack.as_ref().unwrap().as_ref().map_err(Clone::clone)?;
        Ok((ctx, pack))
    }

    /// Runs one suite (or every suite for [`Suite::All`]); identity names
    /// are prefixed with the suite name.  Construction errors become
    /// failing entries rather than aborting the run.
    pub fn run(&mut self, suite: Suite) -> SuiteOutcome {
        let mut out = SuiteOutcome::default();
        for s in suite.expand() {
            let r = match s {
                Suite::Axioms => Ok(axioms(&self.subject.structure)),
                Suite::ParaS => self.parts().and_then(|(c, _)| para_s_suite(c)),
                Suite::Perturbation => self.parts().and_then(|(c, p)| perturbation_suite(c, p)),
                Suite::Retracts => self.parts().and_then(|(c, p)| retracts_suite(c, p)),
                Suite::Periodicity => self.parts().and_then(|(c, p)| periodicity_suite(c, p)),
                Suite::Cocycle => self.parts().and_then(|(c, p)| cocycle_suite(c, p)),
                Suite::All => unreachable!("expanded above"),
            };
            match r {
                Ok(o) => {
                    out.report.extend(o.report.prefixed(s.name()));
                    out.variants.extend(o.variants.into_iter().map(|v| Variant { name: format!("{}: {}", s.name(), v.name), ..v }));
                }
                Err(e) => out.report.fail(format!("{}: construction", s.name()), None, e.to_string()),
            }
        }
        out
    }
}

/// Runs a suite selector on a subject.
pub fn run_suite(subject: Subject, suite: Suite) -> SuiteOutcome {
    Verifier::new(subject).run(suite)
}

fn outcome(report: ValidationReport) -> SuiteOutcome {
    SuiteOutcome { report, variants: Vec::new() }
}

/// Structure relations and the derived operator identities.
pub fn axioms(cs: &CyclicStructure) -> SuiteOutcome {
    let mut rep = validate(cs);
    match derive_operators(cs) {
        Ok(ops) => rep.extend(ops.check_identities()),
        Err(e) => rep.fail("derived operators", None, e.to_string()),
    }
    outcome(rep)
}

fn para_s_suite(ctx: &ComparisonContext) -> Result<SuiteOutcome> {
    let mut rep = ValidationReport::new();
    rep.extend(ctx.nn.check().prefixed("C~~"));
    rep.extend(check_para_s(&ctx.nn.psm()).prefixed("C~~"));
    rep.extend(check_para_s(&ctx.coinv.nn.psm()).prefixed("C_T~~"));
    if let Some(nat) = &ctx.nat {
        let psm = nat.psm();
        rep.extend(check_para_s(&psm).prefixed("C~"));
        rep.extend(periodic_truncation(&psm, psm.module.max_degree() / 2)?.report.prefixed("C~"));
    }
    if let Some(nat_t) = &ctx.coinv.nat {
        rep.extend(check_para_s(&nat_t.psm()).prefixed("C_T~"));
    }
    rep.extend(ctx.check());
    if let Some(qd) = &ctx.quasi {
        rep.extend(qd.split.check(&ctx.ops.big_t).prefixed("quasi splitting"));
    }
    Ok(outcome(rep))
}

/// An alternative contracting homotopy of `b'`: the extra degeneracy `s`
/// when `T = 1` (then `ŝ(1-T)ŝ = 0` is automatic), otherwise `s'` itself.
pub fn alternative_homotopy(ops: &DerivedOperators) -> Result<GradedMap> {
    let sp = ops.sp()?;
    match &ops.s {
        Some(s) if ops.one_minus_t.is_zero() => Ok(s.clone()),
        _ => Ok(sp.clone()),
    }
}

/// The quasi retract of `(C, b, B)` onto the invariants `C^T`:
/// `f = π^T` in coordinates, `g` the inclusion, `φ = h = -β(1-π^T)`,
/// co-extended to the natural complexes.
pub fn invariant_parachain_retract(ctx: &ComparisonContext) -> Result<ParachainPerturbation> {
    let qd = ctx.quasi.as_ref().ok_or_else(|| ParacycError::PreconditionFailed("no quasi splitting".into()))?;
    let ops = &ctx.ops;
    let inv = build_invariants_t(&ctx.structure, ops)?;
    let g = inv.inclusion.clone();
    let pit = &qd.split.projector;
    let blocks = (0..=ctx.max_degree())
        .map(|m| {
            solve_matrix(g.block_ref(m), pit.block_ref(m))
                .ok_or_else(|| ParacycError::DescentObstruction { degree: m, witness: "pi^T leaves ker(1-T)".into() })
        })
        .collect::<Result<Vec<_>>>()?;
    let f = GradedMap::new(ops.module.clone(), g.source().clone(), 0, blocks)?;
    let big_b = ctx.big_b()?;
    let src = Parachain { b: ops.b.clone(), big_b: big_b.clone(), big_t: ops.big_t.clone() };
    let tgt = Parachain {
        b: f.compose(&ops.b)?.compose(&g)?,
        big_b: f.compose(big_b)?.compose(&g)?,
        big_t: GradedMap::identity(g.source()),
    };
    specialize_parachain(&src, &tgt, &f, &g, &qd.pack.h)
}

fn perturbation_suite(ctx: &ComparisonContext, pack: &ComparisonPack) -> Result<SuiteOutcome> {
    let ops = &ctx.ops;
    let mut rep = ValidationReport::new();
    let mut variants = Vec::new();
    match parachain_report(ops) {
        Ok(r) => rep.extend(r.prefixed("parachain")),
        Err(e) => rep.fail("parachain: operator B", None, e.to_string()),
    }
    if ctx.big_b.is_some() {
        let s_hat = alternative_homotopy(ops)?;
        rep.extend(homotopy_change_iso(ops, &s_hat)?.report.prefixed("homotopy change"));
        if ctx.quasi.is_some() {
            rep.extend(invariant_parachain_retract(ctx)?.report.prefixed("C -> C^T"));
        }
    }
    if let Some(ijh) = &pack.ijh {
        rep.extend(ijh.report.clone());
    }
    let td = non_special_control();
    let holds = delta_tilde_identity(&td, &perturb(&td)?)?;
    rep.check("negative control: non-special homotopy breaks delta~^2 + dl delta~ + delta~ dl = f Delta g", None, !holds, || {
        "identity held for a non-special homotopy".into()
    });
    rep.extend(pack.nu_nn.report.clone());
    variants.push(Variant {
        name: "(b N^)^2 = 0".into(),
        holds: pack.nu_nn.delta_tilde_square_zero,
        detail: None,
    });
    Ok(SuiteOutcome { report: rep, variants })
}

fn retracts_suite(ctx: &ComparisonContext, pack: &ComparisonPack) -> Result<SuiteOutcome> {
    let mut rep = pack.report();
    let lambda = ComplexHandle::new("C^lambda", &ctx.lambda.b)?;
    for r in pack.retracts() {
        // homology only makes sense where the total differential squares to zero
        let x = match ComplexHandle::new(r.label.clone(), &r.d) {
            Ok(x) => x,
            Err(ParacycError::HypothesisFailed { .. }) => continue,
            Err(e) => return Err(e),
        };
        rep.extend(retract_homology_check(r, &x, &lambda).prefixed(&r.label));
    }
    let variants = pack.nu_n.as_ref().map(|n| n.variants.clone()).unwrap_or_default();
    Ok(SuiteOutcome { report: rep, variants })
}

fn periodicity_suite(ctx: &ComparisonContext, pack: &ComparisonPack) -> Result<SuiteOutcome> {
    let per = periodicity_s(ctx, pack)?;
    let hom = periodicity_homotopies(ctx, pack, &per)?;
    let mut rep = per.report.clone();
    rep.extend(hom.report.clone());
    if ctx.max_degree() >= 2 && per.s.window_len() > 2 {
        match connes_bs_cycles(ctx, &per, 2) {
            Ok(_) => rep.pass("B S certificates for degree-2 cycles", Some(2)),
            Err(e) => rep.fail("B S certificates for degree-2 cycles", Some(2), e.to_string()),
        }
    }
    let mut variants = per.variants.clone();
    variants.extend(hom.variants.iter().cloned());
    Ok(SuiteOutcome { report: rep, variants })
}

fn cocycle_suite(ctx: &ComparisonContext, pack: &ComparisonPack) -> Result<SuiteOutcome> {
    let mut rep = ValidationReport::new();
    let top = ctx.max_degree();
    for m in 0..top {
        rep.extend(left_inverse_check(ctx, pack, m)?);
        for seed in 0..COCYCLE_SEEDS {
            let phi = random_cocycle(ctx, pack, m, seed)?;
            let conv = convert_cocycle(ctx, pack, &phi)?;
            rep.extend(conv.report.prefixed(&format!("seed {seed}")));
        }
    }
    let per = periodicity_s(ctx, pack)?;
    rep.extend(periodic_cochain_stabilize(ctx, pack, &per.s)?.report);
    Ok(outcome(rep))
}
