//! Validation reports: one line per (identity, degree) pair.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graded::GradedMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub identity: String,
    pub degree: Option<usize>,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub entries: Vec<Entry>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, identity: impl Into<String>, degree: Option<usize>, witness: Option<String>) {
        let status = if witness.is_none() { Status::Pass } else { Status::Fail };
        self.entries.push(Entry { identity: identity.into(), degree, status, witness });
    }

    pub fn pass(&mut self, identity: impl Into<String>, degree: Option<usize>) {
        self.push(identity, degree, None);
    }

    pub fn fail(&mut self, identity: impl Into<String>, degree: Option<usize>, witness: impl Into<String>) {
        self.push(identity, degree, Some(witness.into()));
    }

    /// Records a boolean check.
    pub fn check(&mut self, identity: impl Into<String>, degree: Option<usize>, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass(identity, degree);
        } else {
            self.fail(identity, degree, witness());
        }
    }

    /// Records `lhs == rhs` degree by degree on the common window.  A failure
    /// to even compare (shift mismatch, empty window) is recorded as a failure.
    pub fn check_eq(&mut self, identity: &str, lhs: &GradedMap, rhs: &GradedMap) {
        self.check_eq_from(identity, lhs, rhs, 0)
    }

    /// As [`check_eq`](Self::check_eq) but only for degrees `>= lo`.
    pub fn check_eq_from(&mut self, identity: &str, lhs: &GradedMap, rhs: &GradedMap, lo: usize) {
        match lhs.compare(rhs) {
            Ok(rows) => {
                let mut any = false;
                for (m, w) in rows.into_iter().filter(|(m, _)| *m >= lo) {
                    any = true;
                    self.push(identity, Some(m), w);
                }
                if !any {
                    self.fail(identity, None, "no degree left in the valid window");
                }
            }
            Err(e) => self.fail(identity, None, e.to_string()),
        }
    }

    /// Records the outcome of a fallible computation of `lhs` and `rhs`.
    pub fn check_eq_result(&mut self, identity: &str, pair: Result<(GradedMap, GradedMap)>) {
        match pair {
            Ok((l, r)) => self.check_eq(identity, &l, &r),
            Err(e) => self.fail(identity, None, e.to_string()),
        }
    }

    pub fn check_zero(&mut self, identity: &str, map: Result<GradedMap>) {
        match map {
            Ok(m) => {
                let z = GradedMap::zero(m.source(), m.target(), m.shift()).restrict(m.hi().unwrap_or(0));
                self.check_eq(identity, &m, &z)
            }
            Err(e) => self.fail(identity, None, e.to_string()),
        }
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.entries.extend(other.entries);
    }

    /// Prefixes every identity name.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for e in &mut self.entries {
            e.identity = format!("{prefix}: {}", e.identity);
        }
        self
    }

    pub fn all_pass(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether some entry with this exact identity name failed.
    pub fn failed(&self, identity: &str) -> bool {
        self.entries.iter().any(|e| e.identity == identity && e.status == Status::Fail)
    }

    /// Whether every entry with this identity name passed (and one exists).
    pub fn passed(&self, identity: &str) -> bool {
        let mut it = self.entries.iter().filter(|e| e.identity == identity).peekable();
        it.peek().is_some() && it.all(|e| e.status == Status::Pass)
    }

    /// One line per identity with the number of degrees checked.
    pub fn summary(&self) -> Vec<(String, usize, usize)> {
        let mut out: Vec<(String, usize, usize)> = Vec::new();
        for e in &self.entries {
            match out.iter_mut().find(|(n, _, _)| *n == e.identity) {
                Some(row) => {
                    row.1 += 1;
                    if e.status == Status::Fail {
                        row.2 += 1;
                    }
                }
                None => out.push((e.identity.clone(), 1, usize::from(e.status == Status::Fail))),
            }
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let deg = e.degree.map_or("-".to_string(), |d| d.to_string());
            let st = match e.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            write!(f, "{st} [{deg}] {}", e.identity)?;
            if let Some(w) = &e.witness {
                write!(f, " -- {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
