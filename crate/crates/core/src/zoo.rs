//! Small, fully explicit para-cyclic modules: twisted cyclic modules of
//! finite-dimensional algebras and twisted cyclic modules of finite groups.

use rayon::prelude::*;

use crate::cyclic::CyclicStructure;
use crate::error::{ParacycError, Result};
use crate::linalg::{axpy, q, qi, Rational, RationalMatrix, SparseVec};

pub const EXAMPLE_NAMES: [&str; 6] =
    ["trivial-Q", "dual-numbers", "sign-twisted", "group-Z2-phi-g", "group-Z3-phi-g", "group-Z2-phi-e"];

/// A finite-dimensional algebra on a basis `e_0..e_{n-1}` with an automorphism.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub dim: usize,
    /// `products[i][j]` is `e_i e_j` as a sparse combination.
    pub products: Vec<Vec<SparseVec>>,
    pub unit: Option<SparseVec>,
    pub sigma: RationalMatrix,
}

/// A finite group by its Cayley table, with a distinguished normal element.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub elements: Vec<String>,
    /// `table[a][b]` is the index of `ab`.
    pub table: Vec<Vec<usize>>,
    pub phi: usize,
}

fn mul_vecs(products: &[Vec<SparseVec>], x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseVec {
    let mut acc = Vec::new();
    for (i, a) in x {
        for (j, b) in y {
            acc = axpy(&acc, &(a * b), &products[*i][*j]);
        }
    }
    acc
}

impl AlgebraPresentation {
    fn basis(&self, i: usize) -> SparseVec {
        vec![(i, qi(1))]
    }

    fn mul(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseVec {
        mul_vecs(&self.products, x, y)
    }

    /// Associativity on basis triples, unit laws, and `σ` multiplicative,
    /// invertible and unital.
    pub fn check(&self) -> Result<()> {
        let n = self.dim;
        let bad = |s: String| Err(ParacycError::PreconditionFailed(s));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let l = self.mul(&self.mul(&self.basis(i), &self.basis(j)), &self.basis(k));
                    let r = self.mul(&self.basis(i), &self.mul(&self.basis(j), &self.basis(k)));
                    if l != r {
                        return bad(format!("not associative on e{i} e{j} e{k}"));
                    }
                }
                let sl = self.sigma.mul_vec(&self.mul(&self.basis(i), &self.basis(j)));
                let sr = self.mul(&self.sigma.mul_vec(&self.basis(i)), &self.sigma.mul_vec(&self.basis(j)));
                if sl != sr {
                    return bad(format!("sigma not multiplicative on e{i} e{j}"));
                }
            }
            if let Some(u) = &self.unit {
                if self.mul(u, &self.basis(i)) != self.basis(i) || self.mul(&self.basis(i), u) != self.basis(i) {
                    return bad(format!("unit fails on e{i}"));
                }
            }
        }
        if let Some(u) = &self.unit {
            if &self.sigma.mul_vec(u) != u {
                return bad("sigma does not fix the unit".into());
            }
        }
        if self.sigma.rank() != n {
            return bad("sigma is not invertible".into());
        }
        Ok(())
    }

    /// `Q` itself.
    pub fn rationals() -> Self {
        AlgebraPresentation {
            dim: 1,
            products: vec![vec![vec![(0, qi(1))]]],
            unit: Some(vec![(0, qi(1))]),
            sigma: RationalMatrix::identity(1),
        }
    }

    /// `Q[x]/(x² - c)` on the basis `1, x`, with `σ(x) = ε x`.
    pub fn quadratic(c: i64, eps: i64) -> Self {
        let cc: SparseVec = if c == 0 { Vec::new() } else { vec![(0, qi(c))] };
        AlgebraPresentation {
            dim: 2,
            products: vec![vec![vec![(0, qi(1))], vec![(1, qi(1))]], vec![vec![(1, qi(1))], cc]],
            unit: Some(vec![(0, qi(1))]),
            sigma: RationalMatrix::from_i64(&[&[1, 0], &[0, eps]]),
        }
    }
}

impl GroupPresentation {
    /// The cyclic group of order `n` with `φ = g^k`.
    pub fn cyclic(n: usize, k: usize) -> Self {
        GroupPresentation {
            elements: (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("g^{i}") }).collect(),
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
            phi: k % n,
        }
    }

    fn identity(&self) -> Option<usize> {
        (0..self.elements.len()).find(|&e| (0..self.elements.len()).all(|a| self.table[e][a] == a && self.table[a][e] == a))
    }

    fn inverse(&self, a: usize) -> usize {
        let e = self.identity().expect("checked group");
        (0..self.elements.len()).find(|&b| self.table[a][b] == e).expect("checked group")
    }

    /// Group axioms on the table and normality of the subgroup generated by `φ`.
    pub fn check(&self) -> Result<()> {
        let n = self.elements.len();
        let bad = |s: &str| Err(ParacycError::PreconditionFailed(s.into()));
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) || self.phi >= n {
            return bad("malformed Cayley table");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]] {
                        return bad("Cayley table is not associative");
                    }
                }
            }
        }
        let Some(e) = self.identity() else { return bad("no identity element") };
        if (0..n).any(|a| !(0..n).any(|b| self.table[a][b] == e)) {
            return bad("missing inverse");
        }
        // normality of the cyclic subgroup generated by φ
        let mut sub = vec![e];
        let mut x = self.phi;
        while x != e {
            sub.push(x);
            x = self.table[x][self.phi];
        }
        for a in 0..n {
            let conj = self.table[self.table[a][self.phi]][self.inverse(a)];
            if !sub.contains(&conj) {
                return bad("phi does not generate a normal subgroup");
            }
        }
        Ok(())
    }
}

/// Multi-index helpers: `C_m` has basis `n^{m+1}` tuples, first entry most significant.
fn decode(mut idx: usize, n: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for k in (0..len).rev() {
        out[k] = idx % n;
        idx /= n;
    }
    out
}

fn encode(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &a| acc * n + a)
}

/// Matrix `C_m -> C_{m'}` from a map on basis tuples.
fn tuple_matrix(n: usize, len_in: usize, len_out: usize, f: impl Fn(&[usize]) -> Vec<(Vec<usize>, Rational)> + Sync) -> RationalMatrix {
    let cols = n.pow(len_in as u32);
    let rows = n.pow(len_out as u32);
    let data: Vec<SparseVec> = (0..cols)
        .into_par_iter()
        .map(|j| {
            let mut col: SparseVec = Vec::new();
            for (t, c) in f(&decode(j, n, len_in)) {
                col = axpy(&col, &c, &[(encode(&t, n), qi(1))]);
            }
            col
        })
        .collect();
    RationalMatrix::from_columns(rows, data)
}

fn assemble_structure(
    name: &str,
    n: usize,
    max_degree: usize,
    face: impl Fn(usize, usize, &[usize]) -> Vec<(Vec<usize>, Rational)> + Sync,
    cyc: impl Fn(&[usize]) -> Vec<(Vec<usize>, Rational)> + Sync,
    degen: Option<&(dyn Fn(usize, &[usize]) -> Vec<(Vec<usize>, Rational)> + Sync)>,
) -> Result<CyclicStructure> {
    let ranks: Vec<usize> = (0..=max_degree).map(|m| n.pow(m as u32 + 1)).collect();
    let mut faces = vec![Vec::new()];
    for m in 1..=max_degree {
        faces.push((0..=m).map(|i| tuple_matrix(n, m + 1, m, |t| face(m, i, t))).collect());
    }
    let t = (0..=max_degree).map(|m| tuple_matrix(n, m + 1, m + 1, &cyc)).collect();
    let degeneracies =
        degen.map(|s| (0..max_degree).map(|m| (0..=m).map(|j| tuple_matrix(n, m + 1, m + 2, |t| s(j, t))).collect()).collect());
    CyclicStructure::new(name, ranks, faces, t, degeneracies, None)
}

/// Twisted cyclic module `C^σ(A)`: `C_m = A^{⊗(m+1)}`,
/// `d_i` multiplies neighbours for `i < m`, `d_m(a) = σ(a^m)a^0 ⊗ a^1 ⊗ …`,
/// `t(a) = σ(a^m) ⊗ a^0 ⊗ … ⊗ a^{m-1}`, `s_j` inserts the unit after slot `j`.
pub fn twisted_algebra(name: &str, alg: &AlgebraPresentation, max_degree: usize) -> Result<CyclicStructure> {
    alg.check()?;
    let n = alg.dim;
    let expand = |head: &[usize], v: &SparseVec, tail: &[usize]| -> Vec<(Vec<usize>, Rational)> {
        v.iter()
            .map(|(k, c)| {
                let mut t = head.to_vec();
                t.push(*k);
                t.extend_from_slice(tail);
                (t, c.clone())
            })
            .collect()
    };
    let face = |m: usize, i: usize, a: &[usize]| {
        if i < m {
            expand(&a[..i], &alg.mul(&alg.basis(a[i]), &alg.basis(a[i + 1])), &a[i + 2..])
        } else {
            let sig = alg.sigma.mul_vec(&alg.basis(a[m]));
            expand(&[], &alg.mul(&sig, &alg.basis(a[0])), &a[1..m])
        }
    };
    let cyc = |a: &[usize]| {
        let m = a.len() - 1;
        expand(&[], &alg.sigma.mul_vec(&alg.basis(a[m])), &a[..m])
    };
    match &alg.unit {
        Some(u) => {
            let degen = |j: usize, a: &[usize]| expand(&a[..=j], u, &a[j + 1..]);
            assemble_structure(name, n, max_degree, face, cyc, Some(&degen))
        }
        None => assemble_structure(name, n, max_degree, face, cyc, None),
    }
}

/// Twisted cyclic module `C^φ(G)`: basis `G^{m+1}`, `d_i` drops entry `i`,
/// `s_j` repeats entry `j`, `t(γ) = (φ^{-1}γ_m, γ_0, …, γ_{m-1})`.
pub fn twisted_group(name: &str, grp: &GroupPresentation, max_degree: usize) -> Result<CyclicStructure> {
    grp.check()?;
    let n = grp.elements.len();
    let phi_inv = grp.inverse(grp.phi);
    let face = |_m: usize, i: usize, g: &[usize]| {
        let mut t = g.to_vec();
        t.remove(i);
        vec![(t, qi(1))]
    };
    let cyc = |g: &[usize]| {
        let m = g.len() - 1;
        let mut t = vec![grp.table[phi_inv][g[m]]];
        t.extend_from_slice(&g[..m]);
        vec![(t, qi(1))]
    };
    let degen = |j: usize, g: &[usize]| {
        let mut t = g.to_vec();
        t.insert(j, g[j]);
        vec![(t, qi(1))]
    };
    assemble_structure(name, n, max_degree, face, cyc, Some(&degen))
}

/// A zoo structure together with the order `r` of `T` when `T^r = 1`.
#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub structure: CyclicStructure,
    pub r_cyclic: Option<usize>,
}

impl ZooEntry {
    /// `Q(X) = (1 + X + … + X^{r-1}) / r`, the projector polynomial of an
    /// `r`-cyclic module.
    pub fn quasi_polynomial(&self) -> Option<Vec<Rational>> {
        self.r_cyclic.map(quasi_polynomial)
    }
}

pub fn quasi_polynomial(r: usize) -> Vec<Rational> {
    vec![q(1, r as i64); r]
}

pub fn zoo_entry(name: &str, max_degree: usize) -> Result<ZooEntry> {
    let (structure, r) = match name {
        "trivial-Q" => (twisted_algebra(name, &AlgebraPresentation::rationals(), max_degree)?, 1),
        "dual-numbers" => (twisted_algebra(name, &AlgebraPresentation::quadratic(0, 1), max_degree)?, 1),
        "sign-twisted" => (twisted_algebra(name, &AlgebraPresentation::quadratic(1, -1), max_degree)?, 2),
        "group-Z2-phi-g" => (twisted_group(name, &GroupPresentation::cyclic(2, 1), max_degree)?, 2),
        "group-Z3-phi-g" => (twisted_group(name, &GroupPresentation::cyclic(3, 1), max_degree)?, 3),
        "group-Z2-phi-e" => (twisted_group(name, &GroupPresentation::cyclic(2, 0), max_degree)?, 1),
        other => return Err(ParacycError::UnknownExample(other.to_string())),
    };
    Ok(ZooEntry { structure, r_cyclic: Some(r) })
}

pub fn zoo(name: &str, max_degree: usize) -> Result<CyclicStructure> {
    Ok(zoo_entry(name, max_degree)?.structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::validate;

    #[test]
    fn every_example_validates() {
        for name in EXAMPLE_NAMES {
            let cs = zoo(name, 3).unwrap();
            let rep = validate(&cs);
            assert!(rep.all_pass(), "{name}:\n{rep}");
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(zoo("nope", 3), Err(ParacycError::UnknownExample(_))));
    }

    #[test]
    fn group_degree_one_cyclic_operator() {
        let cs = zoo("group-Z2-phi-g", 2).unwrap();
        // basis (γ0, γ1) ↦ 2γ0 + γ1; t(γ0, γ1) = (gγ1, γ0)
        let t = &cs.t[1];
        for g0 in 0..2 {
            for g1 in 0..2 {
                let src = 2 * g0 + g1;
                let dst = 2 * ((g1 + 1) % 2) + g0;
                assert_eq!(t.col(src), &[(dst, qi(1))][..]);
            }
        }
    }

    #[test]
    fn trivial_module_is_scalar() {
        let cs = zoo("trivial-Q", 4).unwrap();
        assert!(cs.t.iter().all(RationalMatrix::is_identity));
        assert!(cs.faces.iter().flatten().all(RationalMatrix::is_identity));
    }

    #[test]
    fn sign_twisted_t_power_is_sigma() {
        let cs = zoo("sign-twisted", 2).unwrap();
        for m in 0..=2 {
            let mut pow = RationalMatrix::identity(cs.rank(m));
            for _ in 0..=m {
                pow = cs.t[m].mul(&pow);
            }
            // σ^{⊗(m+1)} is diagonal with sign (-1)^{number of x factors}
            for j in 0..cs.rank(m) {
                let ones = j.count_ones() as i64;
                assert_eq!(pow.get(j, j), qi(if ones % 2 == 0 { 1 } else { -1 }));
            }
        }
    }
}
