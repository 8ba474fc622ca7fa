//! The rescaled operators `x̂ = x/(m+1)`, `N̂`, `D̂`, `b̂'` and the
//! combinations `ξ = −b̂'D̂b`, `η = −D̂b`.

use crate::cyclic::DerivedOperators;
use crate::error::Result;
use crate::graded::{GradedMap, GradedModule};
use crate::linalg::{q, qi, Rational, RationalMatrix};
use crate::para_s::poly_eval;
use crate::report::ValidationReport;

/// `N_j(X) = Σ_{ℓ≤j} X^ℓ`, coefficients from the constant term up.
pub fn norm_polynomial(j: usize) -> Vec<Rational> {
    vec![qi(1); j + 1]
}

/// `D_m(X) = Σ_{0≤j≤m} (m−j) X^j`.
pub fn d_polynomial(m: usize) -> Vec<Rational> {
    (0..=m).map(|j| qi((m - j) as i64)).collect()
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![qi(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(|c| *c == qi(0)) {
        p.pop();
    }
    p
}

/// `N_m(X) − (m+1) = (X − 1) D_m(X)` as an identity of polynomials.
pub fn norm_polynomial_identity(m: usize) -> bool {
    let mut lhs = norm_polynomial(m);
    lhs[0] -= qi(m as i64 + 1);
    let rhs = poly_mul(&[qi(-1), qi(1)], &d_polynomial(m));
    trim(lhs) == trim(rhs)
}

/// Degree-dependent rescalings of the cyclic operators.
#[derive(Clone, Debug)]
pub struct HatOperators {
    /// `x ↦ x/(m+1)` on `C_m`.
    pub hat: GradedMap,
    pub n_hat: GradedMap,
    pub d_hat: GradedMap,
    /// `x ↦ b'x/m`, zero on `C_0`.
    pub bp_hat: GradedMap,
    /// `−b̂'D̂b`, shift −2.
    pub xi: GradedMap,
    /// `−D̂b`, shift −1.
    pub eta: GradedMap,
}

fn per_degree(module: &GradedModule, f: impl Fn(usize) -> RationalMatrix + Sync) -> GradedMap {
    GradedMap::from_fn(module, module, 0, None, f)
}

impl HatOperators {
    pub fn new(ops: &DerivedOperators) -> Result<Self> {
        let c = &ops.module;
        let hat = per_degree(c, |m| RationalMatrix::scalar(c.rank(m as i64), &q(1, m as i64 + 1)));
        let n_hat = ops.n.compose(&hat)?;
        let d_hat = per_degree(c, |m| poly_eval(&d_polynomial(m), ops.tau.block_ref(m)).scale(&q(1, m as i64 + 1)));
        let bp_hat = GradedMap::from_fn(c, c, -1, None, |m| {
            let bp = ops.bp.block_ref(m);
            if m == 0 {
                bp.clone()
            } else {
                bp.scale(&q(1, m as i64))
            }
        });
        let eta = d_hat.compose(&ops.b)?.neg();
        let xi = bp_hat.compose(&eta)?;
        Ok(HatOperators { hat, n_hat, d_hat, bp_hat, xi, eta })
    }

    /// `N̂ + (1−τ)D̂ = 1` and `[τ, D̂] = 0`.
    pub fn check(&self, ops: &DerivedOperators) -> ValidationReport {
        let mut rep = ValidationReport::new();
        rep.check_eq_result(
            "N^ + (1-tau) D^ = 1",
            ops.one_minus_tau.compose(&self.d_hat).and_then(|x| x.add(&self.n_hat)).map(|l| (l, ops.id.clone())),
        );
        rep.check_zero("[tau, D^] = 0", ops.tau.commutator(&self.d_hat));
        for m in 0..=ops.module.max_degree() {
            rep.check("N_m(X) - (m+1) = (X-1) D_m(X)", Some(m), norm_polynomial_identity(m), || "polynomials differ".into());
        }
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::derive_operators;
    use crate::zoo::zoo;
    use proptest::prelude::*;

    #[test]
    fn trivial_module_values() {
        let ops = derive_operators(&zoo("trivial-Q", 3).unwrap()).unwrap();
        let hats = HatOperators::new(&ops).unwrap();
        // τ = −1 on C_1: D_1(τ) = 1, so D̂ = 1/2
        assert_eq!(hats.d_hat.block(1).get(0, 0), q(1, 2));
        // τ = 1 on C_2: N = 3, N̂ = 1
        assert_eq!(hats.n_hat.block(2).get(0, 0), qi(1));
        // b = 1 on C_2, D̂ = 1/2 on C_1, b̂' = d_0 = 1 on C_1
        assert_eq!(hats.xi.block(2).get(0, 0), q(-1, 2));
        assert!(hats.check(&ops).all_pass());
    }

    proptest! {
        #[test]
        fn polynomial_identity_holds(m in 0usize..40) {
            prop_assert!(norm_polynomial_identity(m));
        }

        #[test]
        fn d_polynomial_at_one(m in 0usize..40) {
            // D_m(1) = m(m+1)/2
            let s: Rational = d_polynomial(m).iter().sum();
            prop_assert_eq!(s, qi((m * (m + 1) / 2) as i64));
        }
    }
}
