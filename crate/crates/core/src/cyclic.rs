//! Para-precyclic and paracyclic modules: structure data, axiom checks and
//! the derived operators `b, b', τ, N, T, s, s', d'` and `B = (1-τ)s'N`.

use serde::{Deserialize, Serialize};

use crate::builders::NaturalComplex;
use crate::error::{ParacycError, Result};
use crate::graded::{GradedMap, GradedModule};
use crate::linalg::{invert, qi, Rational, RationalMatrix};
use crate::report::ValidationReport;

/// Faces, cyclic operator and (optionally) degeneracies or a contracting
/// homotopy of the bar complex, per degree `0..=M`.
#[derive(Clone, Debug)]
pub struct CyclicStructure {
    pub name: String,
    pub module: GradedModule,
    /// `faces[m][i] = d_i : C_m -> C_{m-1}`; `faces[0]` is empty.
    pub faces: Vec<Vec<RationalMatrix>>,
    /// `t[m] : C_m -> C_m`.
    pub t: Vec<RationalMatrix>,
    /// `degeneracies[m][j] = s_j : C_m -> C_{m+1}` for `m < M`.
    pub degeneracies: Option<Vec<Vec<RationalMatrix>>>,
    /// A contracting homotopy `s : C_m -> C_{m+1}` of `(C, b')` for `m < M`.
    pub homotopy_s: Option<Vec<RationalMatrix>>,
}

impl CyclicStructure {
    pub fn max_degree(&self) -> usize {
        self.module.max_degree()
    }

    pub fn rank(&self, m: usize) -> usize {
        self.module.rank(m as i64)
    }

    /// Same structure cut down to degrees `0..=max_degree`.
    pub fn truncate(&self, max_degree: usize) -> CyclicStructure {
        let m = max_degree.min(self.max_degree());
        CyclicStructure {
            name: self.name.clone(),
            module: self.module.truncate(m),
            faces: self.faces[..=m].to_vec(),
            t: self.t[..=m].to_vec(),
            degeneracies: self.degeneracies.as_ref().map(|d| d[..m].to_vec()),
            homotopy_s: self.homotopy_s.as_ref().map(|h| h[..m].to_vec()),
        }
    }

    fn check_shapes(&self) -> Result<()> {
        let mm = self.max_degree();
        let bad = |what: String| Err(ParacycError::DimensionMismatch(what));
        if self.faces.len() != mm + 1 || self.t.len() != mm + 1 {
            return bad("faces and t need one entry per degree".into());
        }
        for m in 0..=mm {
            let r = self.rank(m);
            if self.t[m].shape() != (r, r) {
                return bad(format!("t in degree {m}"));
            }
            let expect = if m == 0 { 0 } else { m + 1 };
            if self.faces[m].len() != expect {
                return bad(format!("degree {m} needs {expect} faces"));
            }
            for (i, d) in self.faces[m].iter().enumerate() {
                if d.shape() != (self.rank(m - 1), r) {
                    return bad(format!("face d_{i} in degree {m}"));
                }
            }
        }
        if let Some(deg) = &self.degeneracies {
            if deg.len() != mm {
                return bad("degeneracies need one list per degree below the top".into());
            }
            for (m, list) in deg.iter().enumerate() {
                if list.len() != m + 1 || list.iter().any(|s| s.shape() != (self.rank(m + 1), self.rank(m))) {
                    return bad(format!("degeneracies in degree {m}"));
                }
            }
        }
        if let Some(h) = &self.homotopy_s {
            if h.len() != mm || h.iter().enumerate().any(|(m, s)| s.shape() != (self.rank(m + 1), self.rank(m))) {
                return bad("homotopy_s shapes".into());
            }
        }
        Ok(())
    }

    /// Checks shapes and builds the structure.
    pub fn new(
        name: impl Into<String>,
        ranks: Vec<usize>,
        faces: Vec<Vec<RationalMatrix>>,
        t: Vec<RationalMatrix>,
        degeneracies: Option<Vec<Vec<RationalMatrix>>>,
        homotopy_s: Option<Vec<RationalMatrix>>,
    ) -> Result<Self> {
        let cs = CyclicStructure { name: name.into(), module: GradedModule::new(ranks), faces, t, degeneracies, homotopy_s };
        cs.check_shapes()?;
        Ok(cs)
    }

    /// Whether a contracting homotopy of the bar complex is available.
    pub fn is_h_unital(&self) -> bool {
        self.degeneracies.is_some() || self.homotopy_s.is_some()
    }
}

fn mat_eq(rep: &mut ValidationReport, name: String, m: usize, a: &RationalMatrix, b: &RationalMatrix) {
    let w = a.first_difference(b);
    rep.check(name, Some(m), w.is_none(), || {
        let (i, j, x, y) = w.unwrap();
        format!("entry ({i},{j}): {x} vs {y}")
    });
}

/// Exhaustive axiom check: face, degeneracy, mixed, cyclic and extra
/// degeneracy relations in every degree of the window.
pub fn validate(cs: &CyclicStructure) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let mm = cs.max_degree();
    let d = &cs.faces;
    let t = &cs.t;
    for m in 0..=mm {
        let ok = invert(&t[m]).is_ok();
        rep.check("t invertible", Some(m), ok, || "t is singular".into());
    }
    // d_i d_j = d_{j-1} d_i for i < j
    for m in 2..=mm {
        for j in 1..=m {
            for i in 0..j {
                mat_eq(&mut rep, format!("d_{i} d_{j} = d_{} d_{i}", j - 1), m, &d[m - 1][i].mul(&d[m][j]), &d[m - 1][j - 1].mul(&d[m][i]));
            }
        }
    }
    // t d_i = d_{i+1} t (i < m) and d_m = d_0 t
    for m in 1..=mm {
        for i in 0..m {
            mat_eq(&mut rep, format!("t d_{i} = d_{} t", i + 1), m, &t[m - 1].mul(&d[m][i]), &d[m][i + 1].mul(&t[m]));
        }
        mat_eq(&mut rep, "d_m = d_0 t".into(), m, &d[m][m], &d[m][0].mul(&t[m]));
    }
    if let Some(s) = &cs.degeneracies {
        for m in 0..mm {
            // s_i s_j = s_{j+1} s_i for i <= j
            if m + 1 < mm {
                for j in 0..=m {
                    for i in 0..=j {
                        mat_eq(&mut rep, format!("s_{i} s_{j} = s_{} s_{i}", j + 1), m, &s[m + 1][i].mul(&s[m][j]), &s[m + 1][j + 1].mul(&s[m][i]));
                    }
                }
            }
            // d_i s_j on C_m: faces of C_{m+1}
            let id = RationalMatrix::identity(cs.rank(m));
            for j in 0..=m {
                for i in 0..=m + 1 {
                    let lhs = d[m + 1][i].mul(&s[m][j]);
                    let (name, rhs) = if i < j {
                        (format!("d_{i} s_{j} = s_{} d_{i}", j - 1), s[m - 1][j - 1].mul(&d[m][i]))
                    } else if i == j || i == j + 1 {
                        (format!("d_{i} s_{j} = 1"), id.clone())
                    } else {
                        (format!("d_{i} s_{j} = s_{j} d_{}", i - 1), s[m - 1][j].mul(&d[m][i - 1]))
                    };
                    mat_eq(&mut rep, name, m, &lhs, &rhs);
                }
            }
            // t s_j = s_{j+1} t (j < m); t^2 s_m = s_0 t
            for j in 0..m {
                mat_eq(&mut rep, format!("t s_{j} = s_{} t", j + 1), m, &t[m + 1].mul(&s[m][j]), &s[m][j + 1].mul(&t[m]));
            }
            mat_eq(&mut rep, "t s_m = s_-1".into(), m, &t[m + 1].mul(&t[m + 1]).mul(&s[m][m]), &s[m][0].mul(&t[m]));
        }
    }
    // extra degeneracy s_{-1} (or the supplied homotopy) relations
    match extra_degeneracy(cs) {
        Ok(Some(sx)) if cs.degeneracies.is_some() => {
            for m in 0..mm {
                mat_eq(&mut rep, "d_0 s_-1 = 1".into(), m, &d[m + 1][0].mul(&sx[m]), &RationalMatrix::identity(cs.rank(m)));
                for i in 1..=m {
                    mat_eq(&mut rep, format!("d_{i} s_-1 = s_-1 d_{}", i - 1), m, &d[m + 1][i].mul(&sx[m]), &sx[m - 1].mul(&d[m][i - 1]));
                }
                mat_eq(&mut rep, "d_(m+1) s_-1 = t".into(), m, &d[m + 1][m + 1].mul(&sx[m]), &t[m]);
            }
        }
        Ok(_) => {}
        Err(e) => rep.fail("extra degeneracy", None, e.to_string()),
    }
    if cs.homotopy_s.is_some() && cs.degeneracies.is_none() {
        match derive_operators(cs) {
            Ok(ops) => {
                let s = ops.s.as_ref().expect("homotopy present");
                rep.check_eq_result(
                    "b's + sb' = 1",
                    ops.bp.compose(s).and_then(|x| s.compose(&ops.bp).and_then(|y| x.add(&y))).map(|l| (l, ops.id.clone())),
                );
                rep.check_zero("[T, s] = 0", ops.big_t.commutator(s));
            }
            Err(e) => rep.fail("derived operators", None, e.to_string()),
        }
    }
    rep
}

/// `s_{-1} = t^{-1} s_0 t` per degree `m < M`, when degeneracies exist.
fn extra_degeneracy(cs: &CyclicStructure) -> Result<Option<Vec<RationalMatrix>>> {
    let Some(s) = &cs.degeneracies else { return Ok(None) };
    let mut out = Vec::new();
    for m in 0..cs.max_degree() {
        let tinv = invert(&cs.t[m + 1])?;
        out.push(tinv.mul(&s[m][0]).mul(&cs.t[m]));
    }
    Ok(Some(out))
}

/// Every operator derived from the structure, as graded maps on `C`.
#[derive(Clone, Debug)]
pub struct DerivedOperators {
    pub module: GradedModule,
    pub id: GradedMap,
    pub t: GradedMap,
    pub b: GradedMap,
    pub bp: GradedMap,
    pub tau: GradedMap,
    pub n: GradedMap,
    pub big_t: GradedMap,
    pub big_t_inv: GradedMap,
    /// `1 - τ` and `1 - T`.
    pub one_minus_tau: GradedMap,
    pub one_minus_t: GradedMap,
    /// `d' = b - b' = (-1)^m d_m`.
    pub dprime: GradedMap,
    /// End face `d_m` on `C_m`.
    pub d_last: GradedMap,
    /// Contracting homotopy of `(C, b')`: the extra degeneracy when
    /// degeneracies exist, else the supplied homotopy.
    pub s: Option<GradedMap>,
    /// `s' = s b' s`.
    pub sp: Option<GradedMap>,
}

fn sign(m: usize) -> Rational {
    if m.is_multiple_of(2) {
        qi(1)
    } else {
        qi(-1)
    }
}

pub fn derive_operators(cs: &CyclicStructure) -> Result<DerivedOperators> {
    let c = &cs.module;
    let rank = |m: i64| c.rank(m);
    let face_sum = |m: usize, upto: usize| -> RationalMatrix {
        let mut acc = RationalMatrix::zeros(rank(m as i64 - 1), rank(m as i64));
        for i in 0..upto.min(cs.faces[m].len()) {
            acc = acc.axpy(&sign(i), &cs.faces[m][i]);
        }
        acc
    };
    let b = GradedMap::from_fn(c, c, -1, None, |m| face_sum(m, m + 1));
    let bp = GradedMap::from_fn(c, c, -1, None, |m| face_sum(m, m));
    let d_last = GradedMap::from_fn(c, c, -1, None, |m| {
        if m == 0 {
            RationalMatrix::zeros(0, rank(0))
        } else {
            cs.faces[m][m].clone()
        }
    });
    let dprime = GradedMap::from_fn(c, c, -1, None, |m| d_last.block_ref(m).scale(&sign(m)));
    let t = GradedMap::from_fn(c, c, 0, None, |m| cs.t[m].clone());
    let tau = GradedMap::from_fn(c, c, 0, None, |m| cs.t[m].scale(&sign(m)));
    let n = GradedMap::from_fn(c, c, 0, None, |m| {
        let tm = tau.block_ref(m);
        let mut pow = RationalMatrix::identity(rank(m as i64));
        let mut acc = pow.clone();
        for _ in 0..m {
            pow = tm.mul(&pow);
            acc = acc.add(&pow);
        }
        acc
    });
    let big_t = GradedMap::from_fn(c, c, 0, None, |m| {
        let mut pow = RationalMatrix::identity(rank(m as i64));
        for _ in 0..=m {
            pow = cs.t[m].mul(&pow);
        }
        pow
    });
    let mut inv_blocks = Vec::new();
    for m in 0..=c.max_degree() {
        inv_blocks.push(invert(big_t.block_ref(m))?);
    }
    let big_t_inv = GradedMap::new(c.clone(), c.clone(), 0, inv_blocks)?;
    let id = GradedMap::identity(c);
    let one_minus_tau = id.sub(&tau)?;
    let one_minus_t = id.sub(&big_t)?;
    let s = match (extra_degeneracy(cs)?, &cs.homotopy_s) {
        (Some(sx), _) => Some(GradedMap::new(c.clone(), c.clone(), 1, sx)?),
        (None, Some(h)) => Some(GradedMap::new(c.clone(), c.clone(), 1, h.clone())?),
        (None, None) => None,
    };
    let sp = match &s {
        Some(s) => Some(s.compose(&bp.compose(s)?)?),
        None => None,
    };
    Ok(DerivedOperators { module: c.clone(), id, t, b, bp, tau, n, big_t, big_t_inv, one_minus_tau, one_minus_t, dprime, d_last, s, sp })
}

impl DerivedOperators {
    pub fn sp(&self) -> Result<&GradedMap> {
        self.sp.as_ref().ok_or(ParacycError::MissingHomotopy)
    }

    /// `B = (1 - τ) s' N`, shift +1.
    pub fn operator_b(&self) -> Result<GradedMap> {
        self.one_minus_tau.compose(&self.sp()?.compose(&self.n)?)
    }

    /// Face-identity consequences checked on the derived operators.
    pub fn check_identities(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        rep.check_zero("b^2 = 0", self.b.compose(&self.b));
        rep.check_zero("b'^2 = 0", self.bp.compose(&self.bp));
        rep.check_eq_result(
            "b(1-tau) = (1-tau)b'",
            self.b.compose(&self.one_minus_tau).and_then(|l| Ok((l, self.one_minus_tau.compose(&self.bp)?))),
        );
        rep.check_eq_result("Nb = b'N", self.n.compose(&self.b).and_then(|l| Ok((l, self.bp.compose(&self.n)?))));
        rep.check_eq_result("(1-tau)N = 1-T", self.one_minus_tau.compose(&self.n).map(|l| (l, self.one_minus_t.clone())));
        rep.check_eq_result("N(1-tau) = 1-T", self.n.compose(&self.one_minus_tau).map(|l| (l, self.one_minus_t.clone())));
        rep.check_eq_result("T T^-1 = 1", self.big_t.compose(&self.big_t_inv).map(|l| (l, self.id.clone())));
        for (name, x) in [("b", &self.b), ("b'", &self.bp), ("tau", &self.tau), ("N", &self.n), ("t", &self.t), ("d_m", &self.d_last)] {
            rep.check_eq_result(&format!("[T, {name}] = 0"), x.compose(&self.big_t).and_then(|l| Ok((l, self.big_t.compose(x)?))));
        }
        rep.check_eq_result("d' = (-1)^m d_m", self.b.sub(&self.bp).map(|l| (l, self.dprime.clone())));
        match (&self.s, &self.sp) {
            (Some(s), Some(sp)) => {
                rep.check_eq_result("b's + sb' = 1", self.bp.anticommutator(s).map(|l| (l, self.id.clone())));
                rep.check_eq_result("b's' + s'b' = 1", self.bp.anticommutator(sp).map(|l| (l, self.id.clone())));
                rep.check_zero("s'^2 = 0", sp.compose(sp));
                rep.check_zero("s'(1-T)s' = 0", sp.compose(&self.one_minus_t).and_then(|x| sp.compose(&x)));
                rep.check_zero("[T, s'] = 0", self.big_t.commutator(sp));
            }
            _ => rep.fail("contracting homotopy", None, ParacycError::MissingHomotopy.to_string()),
        }
        rep
    }
}

/// Parachain axioms for `(C, b, B)`: `bB + Bb = 1 - T`, `B^2 = 0`.
pub fn check_parachain(ops: &DerivedOperators, big_b: &GradedMap) -> ValidationReport {
    let mut rep = ValidationReport::new();
    rep.check_eq_result("bB + Bb = 1 - T", ops.b.anticommutator(big_b).map(|l| (l, ops.one_minus_t.clone())));
    rep.check_zero("B^2 = 0", big_b.compose(big_b));
    rep.check_zero("[T, B] = 0", ops.big_t.commutator(big_b));
    rep
}

/// The isomorphism `f = 1 + (1-τ) ŝ s' N u^{-1}` of `C♮` relating the
/// cyclic complexes built from `s'` and from an alternative homotopy `ŝ`,
/// together with its certificate.
pub struct HomotopyChange {
    pub f: GradedMap,
    pub f_inv: GradedMap,
    pub b_hat: GradedMap,
    pub report: ValidationReport,
}

pub fn homotopy_change_iso(ops: &DerivedOperators, s_hat: &GradedMap) -> Result<HomotopyChange> {
    let sp = ops.sp()?;
    let hyp = |name: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(ParacycError::HypothesisFailed { name: name.into(), degree: 0 })
        }
    };
    hyp("b'ŝ + ŝb' = 1", ops.bp.anticommutator(s_hat)?.equals(&ops.id.restrict(s_hat.hi().unwrap_or(0))))?;
    hyp("ŝ(1-T)ŝ = 0", s_hat.compose(&ops.one_minus_t.compose(s_hat)?)?.is_zero())?;
    hyp("[T, ŝ] = 0", ops.big_t.commutator(s_hat)?.is_zero())?;

    let b = ops.operator_b()?;
    let b_hat = ops.one_minus_tau.compose(&s_hat.compose(&ops.n)?)?;
    // k = (1-τ) ŝ s' N : C_q -> C_{q+2}
    let k = ops.one_minus_tau.compose(&s_hat.compose(&sp.compose(&ops.n)?)?)?;
    let nat = NaturalComplex::build(&ops.b, &b, &ops.big_t)?;
    let nat_hat = NaturalComplex::build(&ops.b, &b_hat, &ops.big_t)?;
    let space = nat.space.clone();
    let one = GradedMap::identity(&space.module);
    let ku = space.diagonal_shifted(&k, -1)?;
    let f = one.add(&ku)?;
    // f^{-1} = sum_j (-k u^{-1})^j, finite since u^{-1} strictly lowers the slot
    let mut f_inv = one.clone();
    let mut pow = one.clone();
    let neg = ku.neg();
    for _ in 0..=space.max_degree() / 2 {
        pow = neg.compose(&pow)?;
        f_inv = f_inv.add(&pow)?;
    }
    let mut report = ValidationReport::new();
    report.check_eq_result("f (b + Bu^-1) = (b + B^u^-1) f", f.compose(&nat.d).and_then(|l| Ok((l, nat_hat.d.compose(&f)?))));
    report.check_eq_result("f f^-1 = 1", f.compose(&f_inv).map(|l| (l, one.clone())));
    report.check_eq_result("f^-1 f = 1", f_inv.compose(&f).map(|l| (l, one.clone())));
    report.check_eq_result("f u^-1 = u^-1 f", f.compose(&nat.s).and_then(|l| Ok((l, nat.s.compose(&f)?))));
    report.check_eq_result("f T = T f", f.compose(&nat.t).and_then(|l| Ok((l, nat.t.compose(&f)?))));
    Ok(HomotopyChange { f, f_inv, b_hat, report })
}

/// JSON structure file.  Matrices are row-major arrays of `"p/q"` strings;
/// `faces[m]` lists `d_0..d_m` for degree `m` (`faces[0]` is empty).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureFile {
    #[serde(default)]
    pub name: Option<String>,
    pub max_degree: usize,
    pub ranks: Vec<usize>,
    pub faces: Vec<Vec<Vec<Vec<String>>>>,
    pub t: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracies: Option<Vec<Vec<Vec<Vec<String>>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homotopy_s: Option<Vec<Vec<Vec<String>>>>,
}

impl StructureFile {
    pub fn from_structure(cs: &CyclicStructure) -> Self {
        let conv = |m: &RationalMatrix| m.to_strings();
        StructureFile {
            name: Some(cs.name.clone()),
            max_degree: cs.max_degree(),
            ranks: cs.module.ranks().to_vec(),
            faces: cs.faces.iter().map(|l| l.iter().map(conv).collect()).collect(),
            t: cs.t.iter().map(conv).collect(),
            degeneracies: cs.degeneracies.as_ref().map(|d| d.iter().map(|l| l.iter().map(conv).collect()).collect()),
            homotopy_s: cs.homotopy_s.as_ref().map(|h| h.iter().map(conv).collect()),
        }
    }

    pub fn into_structure(self) -> Result<CyclicStructure> {
        let mm = self.max_degree;
        if self.ranks.len() != mm + 1 {
            return Err(ParacycError::DimensionMismatch(format!("{} ranks for max_degree {mm}", self.ranks.len())));
        }
        let r = |m: i64| if m < 0 { 0 } else { self.ranks[m as usize] };
        let parse = |rows: usize, cols: usize, s: &[Vec<String>]| -> Result<RationalMatrix> {
            // zero-row matrices serialise as []
            if rows == 0 && s.is_empty() {
                return Ok(RationalMatrix::zeros(0, cols));
            }
            RationalMatrix::from_strings(rows, cols, s)
        };
        // accept either one face list per degree (with an empty degree-0 list) or one per degree >= 1
        let faces_raw = match self.faces.len() {
            n if n == mm + 1 => self.faces,
            n if n == mm => std::iter::once(Vec::new()).chain(self.faces).collect(),
            n => return Err(ParacycError::DimensionMismatch(format!("{n} face lists for max_degree {mm}"))),
        };
        let mut faces = Vec::new();
        for (m, list) in faces_raw.iter().enumerate() {
            faces.push(list.iter().map(|x| parse(r(m as i64 - 1), r(m as i64), x)).collect::<Result<Vec<_>>>()?);
        }
        if self.t.len() != mm + 1 {
            return Err(ParacycError::DimensionMismatch("t needs one matrix per degree".into()));
        }
        let t = self.t.iter().enumerate().map(|(m, x)| parse(r(m as i64), r(m as i64), x)).collect::<Result<Vec<_>>>()?;
        let degeneracies = match self.degeneracies {
            None => None,
            Some(d) => Some(
                d.iter()
                    .enumerate()
                    .map(|(m, l)| l.iter().map(|x| parse(r(m as i64 + 1), r(m as i64), x)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let homotopy_s = match self.homotopy_s {
            None => None,
            Some(h) => Some(h.iter().enumerate().map(|(m, x)| parse(r(m as i64 + 1), r(m as i64), x)).collect::<Result<Vec<_>>>()?),
        };
        CyclicStructure::new(self.name.unwrap_or_else(|| "structure-file".into()), self.ranks.clone(), faces, t, degeneracies, homotopy_s)
    }
}
