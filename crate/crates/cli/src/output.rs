//! Rendering of command results as text, JSON or CSV.  Output is a pure
//! function of the results, so fixed inputs give identical bytes.

use std::fmt::Write as _;

use clap::ValueEnum;
use paracyc::comparison::cochains::CocycleFile;
use paracyc::homology::AgreementRow;
use paracyc::report::Status;
use paracyc::suites::{Suite, SuiteOutcome};
use paracyc::ValidationReport;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Header {
    pub subject: String,
    pub max_degree: usize,
}

/// One result in all three formats.
pub struct Rendered {
    pub pass: bool,
    text: String,
    json: Value,
    csv: Vec<Vec<String>>,
}

impl Rendered {
    pub fn bytes(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        Ok(match format {
            Format::Text => self.text.clone().into_bytes(),
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(&self.json)?;
                v.push(b'\n');
                v
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row)?;
                }
                w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?
            }
        })
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn degree_str(d: Option<usize>) -> String {
    d.map_or_else(String::new, |d| d.to_string())
}

fn report_rows(report: &ValidationReport) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["identity".into(), "degree".into(), "status".into(), "witness".into()]];
    for e in &report.entries {
        let status = if e.status == Status::Pass { "pass" } else { "fail" };
        rows.push(vec![e.identity.clone(), degree_str(e.degree), status.into(), e.witness.clone().unwrap_or_default()]);
    }
    rows
}

/// One line per identity (with the number of degrees checked), then the
/// witnesses of every failing entry.
fn report_text(out: &mut String, report: &ValidationReport) {
    for (name, checked, failed) in report.summary() {
        let _ = writeln!(out, "{} {name} ({checked} checked{})", verdict(failed == 0), if failed > 0 { format!(", {failed} failed") } else { String::new() });
    }
    let failures: Vec<_> = report.failures().collect();
    if !failures.is_empty() {
        let _ = writeln!(out, "\nfailures:");
        for e in failures {
            let _ = writeln!(out, "  [{}] {}: {}", degree_str(e.degree), e.identity, e.witness.as_deref().unwrap_or(""));
        }
    }
}

pub fn verify(h: &Header, suite: Suite, outcome: &SuiteOutcome) -> Rendered {
    let pass = outcome.report.all_pass();
    let failed = outcome.report.failures().count();
    let mut text = format!("structure: {}\nmax degree: {}\nsuite: {suite}\n\n", h.subject, h.max_degree);
    report_text(&mut text, &outcome.report);
    if !outcome.variants.is_empty() {
        let _ = writeln!(text, "\nevaluated but not asserted:");
        for v in &outcome.variants {
            let _ = write!(text, "  {} {}", if v.holds { "holds" } else { "fails" }, v.name);
            if let Some(d) = &v.detail {
                let _ = write!(text, " ({d})");
            }
            text.push('\n');
        }
    }
    let _ = writeln!(text, "\nresult: {} ({} checks, {failed} failed)", verdict(pass), outcome.report.len());
    let json = json!({
        "structure": h.subject,
        "max_degree": h.max_degree,
        "suite": suite.name(),
        "pass": pass,
        "checks": outcome.report,
        "variants": outcome.variants,
    });
    Rendered { pass, text, json, csv: report_rows(&outcome.report) }
}

pub fn homology(h: &Header, theory: &str, complex: &str, ranks: &[usize]) -> Rendered {
    let mut text = format!("structure: {}\ntheory: {theory} ({complex})\n\ndegree rank\n", h.subject);
    for (m, r) in ranks.iter().enumerate() {
        let _ = writeln!(text, "{m:>6} {r}");
    }
    let joined: Vec<String> = ranks.iter().map(ToString::to_string).collect();
    let _ = writeln!(text, "\nranks: {}", joined.join(","));
    let json = json!({ "structure": h.subject, "theory": theory, "complex": complex, "ranks": ranks });
    let mut csv = vec![vec!["degree".to_string(), "rank".to_string()]];
    csv.extend(ranks.iter().enumerate().map(|(m, r)| vec![m.to_string(), r.to_string()]));
    Rendered { pass: true, text, json, csv }
}

pub fn compare(h: &Header, rows: &[AgreementRow]) -> Rendered {
    let pass = rows.iter().all(|r| r.agree);
    let opt = |x: Option<usize>| x.map_or_else(|| "-".to_string(), |x| x.to_string());
    let mut text = format!("structure: {}\nmax degree: {}\n\ndegree C^lambda C_T~ C_T~~ agree\n", h.subject, h.max_degree);
    for r in rows {
        let _ = writeln!(text, "{:>6} {:>8} {:>4} {:>5} {}", r.degree, r.lambda, opt(r.natural), r.double_natural, if r.agree { "yes" } else { "NO" });
    }
    let _ = writeln!(text, "\nresult: {}", verdict(pass));
    let json = json!({ "structure": h.subject, "max_degree": h.max_degree, "pass": pass, "rows": rows });
    let mut csv = vec![["degree", "lambda", "natural", "double_natural", "agree"].map(String::from).to_vec()];
    csv.extend(rows.iter().map(|r| vec![r.degree.to_string(), r.lambda.to_string(), opt(r.natural), r.double_natural.to_string(), r.agree.to_string()]));
    Rendered { pass, text, json, csv }
}

pub fn cocycle(h: &Header, file: &CocycleFile, report: &ValidationReport) -> Rendered {
    let pass = report.all_pass();
    let mut text = format!("structure: {}\ndegree: {}\n\ncyclic cocycle: [{}]\n", h.subject, file.degree, file.components[0].join(", "));
    match &file.certificate {
        Some(c) => {
            let parts: Vec<String> = c.components.iter().map(|x| format!("[{}]", x.join(", "))).collect();
            let _ = writeln!(text, "certificate (degree {}): {}", c.degree, parts.join(" "));
        }
        None => text.push_str("certificate: none needed in degree 0\n"),
    }
    text.push('\n');
    report_text(&mut text, report);
    let _ = writeln!(text, "\nresult: {}", verdict(pass));
    let json = json!({
        "degree": file.degree,
        "components": file.components,
        "certificate": file.certificate,
        "checks": report,
    });
    let mut csv = vec![vec!["block".to_string(), "degree".to_string(), "index".to_string(), "value".to_string()]];
    for (i, v) in file.components[0].iter().enumerate() {
        csv.push(vec!["cyclic".into(), file.degree.to_string(), i.to_string(), v.clone()]);
    }
    if let Some(c) = &file.certificate {
        for (j, comp) in c.components.iter().enumerate() {
            let deg = c.degree - 2 * j;
            for (i, v) in comp.iter().enumerate() {
                csv.push(vec!["certificate".into(), deg.to_string(), i.to_string(), v.clone()]);
            }
        }
    }
    Rendered { pass, text, json, csv }
}

pub fn perturb_demo(h: &Header, report: &ValidationReport) -> Rendered {
    let pass = report.all_pass();
    let mut text = format!(
        "structure: {}\nmax degree: {}\n\nI, J, h and B u^-1 re-derived by perturbing (delta, I0, J0, h) by partial:\n\n",
        h.subject, h.max_degree
    );
    report_text(&mut text, report);
    let _ = writeln!(text, "\nresult: {}", verdict(pass));
    let json = json!({ "structure": h.subject, "max_degree": h.max_degree, "pass": pass, "checks": report });
    Rendered { pass, text, json, csv: report_rows(report) }
}
