//! Comparison maps between `C♮♮`, `C♮` and Connes' complex `C^λ`: the
//! `I/J/h` retract, the `ν/D̂` maps and their descended and quasi variants,
//! the periodicity operator in all of its formulations with its homotopies,
//! and the dual conversion of `(b, B)`-cocycles into cyclic cocycles.

pub mod cochains;
pub mod hats;
pub mod periodicity;
pub mod retracts;

pub use cochains::*;
pub use hats::*;
pub use periodicity::*;
pub use retracts::*;

use crate::builders::{
    build_lambda, build_quotient_t, quasi_mixed_pack, DoubleNaturalComplex, GradedQuotient, LambdaComplex, NaturalComplex,
    QuasiMixedPack,
};
use crate::cyclic::{derive_operators, CyclicStructure, DerivedOperators};
use crate::error::{ParacycError, Result};
use crate::graded::GradedMap;
use crate::linalg::Rational;
use crate::para_s::{quasi_split, QuasiSplitting};
use crate::report::ValidationReport;
use crate::zoo::zoo_entry;

/// The coinvariant structure `C_T` with its two total complexes and the
/// slot-wise projections onto them.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub structure: CyclicStructure,
    pub ops: DerivedOperators,
    pub quotient: GradedQuotient,
    pub nn: DoubleNaturalComplex,
    pub nat: Option<NaturalComplex>,
    /// `π_T : C♮♮ -> C_T♮♮` and a section.
    pub pi_nn: GradedMap,
    pub section_nn: GradedMap,
    pub pi_nat: Option<GradedMap>,
    pub section_nat: Option<GradedMap>,
}

/// The splitting `C = C^T ⊕ R^T` with the quasi-mixed homotopies.
pub struct QuasiData {
    pub split: QuasiSplitting,
    pub pack: QuasiMixedPack,
}

/// Everything the comparison maps are built from.
pub struct ComparisonContext {
    pub structure: CyclicStructure,
    pub ops: DerivedOperators,
    pub hats: HatOperators,
    pub nn: DoubleNaturalComplex,
    pub nat: Option<NaturalComplex>,
    pub big_b: Option<GradedMap>,
    pub lambda: LambdaComplex,
    pub coinv: Coinvariants,
    pub quasi: Option<QuasiData>,
}

impl ComparisonContext {
    /// `poly` is the projector polynomial `Q(X)` if known; otherwise the
    /// quasi splitting is searched for generically.
    pub fn new(cs: &CyclicStructure, poly: Option<&[Rational]>, r_cyclic: Option<usize>) -> Result<Self> {
        let ops = derive_operators(cs)?;
        let hats = HatOperators::new(&ops)?;
        let nn = DoubleNaturalComplex::build(&ops)?;
        let big_b = ops.operator_b().ok();
        let nat = match &big_b {
            Some(bb) => Some(NaturalComplex::build(&ops.b, bb, &ops.big_t)?),
            None => None,
        };
        let lambda = build_lambda(&ops)?;
        let coinv = coinvariants(cs, &ops, &nn, nat.as_ref())?;
        let quasi = match (&big_b, quasi_split(&ops.big_t, poly)) {
            (Some(_), Ok(split)) => {
                let pack = quasi_mixed_pack(&ops, &split, r_cyclic)?;
                Some(QuasiData { split, pack })
            }
            (None, _) | (_, Err(ParacycError::NotQuasi { .. })) => None,
            (_, Err(e)) => return Err(e),
        };
        Ok(ComparisonContext { structure: cs.clone(), ops, hats, nn, nat, big_b, lambda, coinv, quasi })
    }

    pub fn for_example(name: &str, max_degree: usize) -> Result<Self> {
        let entry = zoo_entry(name, max_degree)?;
        let poly = entry.quasi_polynomial();
        Self::new(&entry.structure, poly.as_deref(), entry.r_cyclic)
    }

    pub fn max_degree(&self) -> usize {
        self.ops.module.max_degree()
    }

    /// `T = 1` in every degree.
    pub fn is_precyclic(&self) -> bool {
        self.ops.one_minus_t.is_zero()
    }

    pub fn nat(&self) -> Result<&NaturalComplex> {
        self.nat.as_ref().ok_or(ParacycError::MissingHomotopy)
    }

    pub fn big_b(&self) -> Result<&GradedMap> {
        self.big_b.as_ref().ok_or(ParacycError::MissingHomotopy)
    }

    /// Identities of the hat operators together with the complexes' axioms.
    pub fn check(&self) -> ValidationReport {
        let mut rep = self.hats.check(&self.ops);
        rep.extend(self.nn.check().prefixed("C~~"));
        rep.check_zero("C^lambda: b^2 = 0", self.lambda.b.compose(&self.lambda.b));
        rep.check_zero("C_T~~: d^2 = 0", self.coinv.nn.d.compose(&self.coinv.nn.d));
        rep.check_eq_result(
            "pi_T d = d pi_T on C~~",
            self.coinv.pi_nn.compose(&self.nn.d).and_then(|l| Ok((l, self.coinv.nn.d.compose(&self.coinv.pi_nn)?))),
        );
        if let (Some(nat), Some(nat_t), Some(pi)) = (&self.nat, &self.coinv.nat, &self.coinv.pi_nat) {
            rep.check_zero("C_T~: d^2 = 0", nat_t.d.compose(&nat_t.d));
            rep.check_eq_result("pi_T d = d pi_T on C~", pi.compose(&nat.d).and_then(|l| Ok((l, nat_t.d.compose(pi)?))));
        }
        if let Some(q) = &self.quasi {
            rep.extend(q.pack.report.clone().prefixed("quasi"));
        }
        rep
    }
}

fn coinvariants(
    cs: &CyclicStructure,
    ops: &DerivedOperators,
    nn: &DoubleNaturalComplex,
    nat: Option<&NaturalComplex>,
) -> Result<Coinvariants> {
    let co = build_quotient_t(cs, ops)?;
    let ops_t = derive_operators(&co.structure)?;
    let nn_t = DoubleNaturalComplex::build(&ops_t)?;
    let pi_nn = nn.space.lift(&nn_t.space, &co.quotient.pi)?;
    let section_nn = nn_t.space.lift(&nn.space, &co.quotient.section)?;
    let (nat_t, pi_nat, section_nat) = match (nat, ops_t.operator_b()) {
        (Some(nat), Ok(bb)) => {
            let nat_t = NaturalComplex::build(&ops_t.b, &bb, &ops_t.big_t)?;
            let pi = nat.space.lift(&nat_t.space, &co.quotient.pi)?;
            let sec = nat_t.space.lift(&nat.space, &co.quotient.section)?;
            (Some(nat_t), Some(pi), Some(sec))
        }
        _ => (None, None, None),
    };
    Ok(Coinvariants {
        structure: co.structure,
        ops: ops_t,
        quotient: co.quotient,
        nn: nn_t,
        nat: nat_t,
        pi_nn,
        section_nn,
        pi_nat,
        section_nat,
    })
}

/// Descends `a : X -> Y` along a quotient `X -> X/ran(killer)`: certifies
/// `a ∘ killer = 0`, then returns `a ∘ section`.
pub fn descend(a: &GradedMap, killer: &GradedMap, section: &GradedMap) -> Result<GradedMap> {
    crate::builders::certify_zero(&a.compose(killer)?)?;
    a.compose(section)
}

/// A named identity that is evaluated but not asserted: used for printed
/// formulas that compete with the derived one.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Variant {
    pub name: String,
    pub holds: bool,
    /// Why the identity could not be evaluated (e.g. mismatched shifts).
    pub detail: Option<String>,
}

pub(crate) fn variant(name: &str, pair: Result<(GradedMap, GradedMap)>) -> Variant {
    match pair {
        Ok((l, r)) if l.shift() != r.shift() => {
            Variant { name: name.to_string(), holds: false, detail: Some(format!("degree-inconsistent: shifts {} and {}", l.shift(), r.shift())) }
        }
        Ok((l, r)) => Variant { name: name.to_string(), holds: l.equals(&r), detail: None },
        Err(e) => Variant { name: name.to_string(), holds: false, detail: Some(e.to_string()) },
    }
}
