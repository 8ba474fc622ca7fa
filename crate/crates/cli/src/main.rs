//! `paracyc`: run verification suites, compute homology tables, convert
//! cocycles and replay the perturbation demo.
//!
//! Exit codes: 0 when every asserted identity passes, 1 when one fails,
//! 2 on usage or input errors.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use paracyc::comparison::cochains::{convert_cocycle, CocycleFile};
use paracyc::cyclic::StructureFile;
use paracyc::homology::{agreement_report, homology_ranks, theory_complex};
use paracyc::perturbation::{delta_tilde_identity, non_special_control, perturb};
use paracyc::suites::{Subject, Suite, Verifier};
use paracyc::zoo::EXAMPLE_NAMES;
use paracyc::{ParacycError, ValidationReport};

use output::{Format, Rendered};

/// Window used when neither `--max-degree` nor the environment sets one.
const DEFAULT_MAX_DEGREE: usize = 5;

#[derive(Parser)]
#[command(name = "paracyc", version, about = "Exact verification of para-cyclic comparison maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report every identity checked.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all", value_parser = PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
    },
    /// Homology ranks of one of the complexes, degrees 0..=max-degree.
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Theory::Cyclic)]
        theory: Theory,
    },
    /// Rank agreement of `C^lambda`, `C_T~` and `C_T~~` through degree M-2.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Convert a (b, B)-cocycle into a cyclic cocycle with its certificate.
    ConvertCocycle {
        #[command(flatten)]
        common: Common,
        /// Cocycle file: {"degree": m, "components": [[phi_m], [phi_(m-2)], ...]}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Re-derive I, J, h and B u^-1 with the perturbation engine and compare
    /// with their closed forms.
    PerturbDemo {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Built-in example structure.
    #[arg(long, value_parser = PossibleValuesParser::new(EXAMPLE_NAMES), required_unless_present = "structure", conflicts_with = "structure")]
    example: Option<String>,
    /// JSON structure file.
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Top degree M of the window (at least 2).
    #[arg(long, env = "PARACYC_MAX_DEGREE", value_parser = clap::value_parser!(u64).range(2..))]
    max_degree: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theory {
    Hochschild,
    Cyclic,
    Lambda,
    Cc,
}

impl Theory {
    fn name(self) -> &'static str {
        match self {
            Theory::Hochschild => "hochschild",
            Theory::Cyclic => "cyclic",
            Theory::Lambda => "lambda",
            Theory::Cc => "cc",
        }
    }
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: e.into() }
}

fn run_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: e.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    let (common, rendered) = match command {
        Command::Verify { common, suite } => {
            let r = cmd_verify(&common, &suite)?;
            (common, r)
        }
        Command::Homology { common, theory } => {
            let r = cmd_homology(&common, theory)?;
            (common, r)
        }
        Command::Compare { common } => {
            let r = cmd_compare(&common)?;
            (common, r)
        }
        Command::ConvertCocycle { common, input } => {
            let r = cmd_convert_cocycle(&common, &input)?;
            (common, r)
        }
        Command::PerturbDemo { common } => {
            let r = cmd_perturb_demo(&common)?;
            (common, r)
        }
    };
    let bytes = rendered.bytes(common.format).map_err(run_error)?;
    match &common.output {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())).map_err(input_error)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(run_error)?;
        }
    }
    Ok(if rendered.pass { 0 } else { 1 })
}

/// Loads the subject with window `max_degree`, or the default window.
/// `extra` widens the window of a built-in example (used when the command
/// needs one degree beyond what it reports).
fn load_subject(common: &Common, default_m: usize, extra: usize) -> Result<Subject, Failure> {
    let requested = common.max_degree.map(|m| m as usize);
    match (&common.example, &common.structure) {
        (Some(name), _) => Subject::example(name, requested.unwrap_or(default_m) + extra).map_err(input_error),
        (None, Some(path)) => {
            let cs = read_structure(path).map_err(input_error)?;
            let cs = match requested {
                Some(m) if m + extra < cs.max_degree() => cs.truncate(m + extra),
                _ => cs,
            };
            Ok(Subject::structure(cs))
        }
        (None, None) => Err(input_error(anyhow!("one of --example or --structure is required"))),
    }
}

fn read_structure(path: &Path) -> anyhow::Result<paracyc::cyclic::CyclicStructure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: StructureFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mut cs = file.into_structure()?;
    if cs.name.is_empty() {
        cs.name = path.display().to_string();
    }
    Ok(cs)
}

fn cmd_verify(common: &Common, suite: &str) -> Result<Rendered, Failure> {
    let suite: Suite = suite.parse().map_err(input_error)?;
    let subject = load_subject(common, DEFAULT_MAX_DEGREE, 0)?;
    let header = subject_header(&subject);
    let mut verifier = Verifier::new(subject);
    let out = verifier.run(suite);
    Ok(output::verify(&header, suite, &out))
}

fn subject_header(subject: &Subject) -> output::Header {
    output::Header { subject: subject.name().to_string(), max_degree: subject.structure.max_degree() }
}

fn cmd_homology(common: &Common, theory: Theory) -> Result<Rendered, Failure> {
    // degree M needs the differential out of degree M + 1
    let subject = load_subject(common, DEFAULT_MAX_DEGREE, 1)?;
    let report_top = common.max_degree.map(|m| m as usize).unwrap_or(DEFAULT_MAX_DEGREE);
    let header = subject_header(&subject);
    let ctx = subject.context().map_err(run_error)?;
    let h = theory_complex(&ctx, theory.name()).map_err(run_error)?;
    let mut ranks = homology_ranks(&h);
    ranks.truncate(report_top + 1);
    Ok(output::homology(&header, theory.name(), &h.name, &ranks))
}

fn cmd_compare(common: &Common) -> Result<Rendered, Failure> {
    let subject = load_subject(common, DEFAULT_MAX_DEGREE, 0)?;
    let header = subject_header(&subject);
    let ctx = subject.context().map_err(run_error)?;
    let rows = agreement_report(&ctx).map_err(run_error)?;
    Ok(output::compare(&header, &rows))
}

fn cmd_convert_cocycle(common: &Common, input: &Path) -> Result<Rendered, Failure> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display())).map_err(input_error)?;
    let file: CocycleFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", input.display())).map_err(input_error)?;
    let phi = file.to_cochain().map_err(input_error)?;
    // the conversion reads the differential out of degree m + 1
    let needed = (phi.degree + 1).max(2);
    if let Some(m) = common.max_degree {
        if (m as usize) < needed {
            return Err(input_error(anyhow!("a degree-{} cocycle needs --max-degree >= {needed}", phi.degree)));
        }
    }
    let subject = load_subject(common, needed, 0)?;
    if subject.structure.max_degree() < needed {
        return Err(input_error(anyhow!("structure window {} is too small for a degree-{} cocycle", subject.structure.max_degree(), phi.degree)));
    }
    let header = subject_header(&subject);
    let mut verifier = Verifier::new(subject);
    let (ctx, pack) = verifier.parts().map_err(run_error)?;
    let conv = convert_cocycle(ctx, pack, &phi).map_err(|e| match e {
        ParacycError::NotACocycle { .. } | ParacycError::DimensionMismatch(_) | ParacycError::PreconditionFailed(_) => input_error(e),
        e => run_error(e),
    })?;
    Ok(output::cocycle(&header, &CocycleFile::from_conversion(&conv), &conv.report))
}

fn cmd_perturb_demo(common: &Common) -> Result<Rendered, Failure> {
    let subject = load_subject(common, DEFAULT_MAX_DEGREE, 0)?;
    let header = subject_header(&subject);
    let mut verifier = Verifier::new(subject);
    let (_, pack) = verifier.parts().map_err(run_error)?;
    let Some(ijh) = &pack.ijh else {
        return Err(run_error(anyhow!("the structure has no contracting homotopy, so C~ and I/J/h are unavailable")));
    };
    let mut rep = ValidationReport::new();
    rep.extend(ijh.report.clone());
    let td = non_special_control();
    let holds = perturb(&td).and_then(|pd| delta_tilde_identity(&td, &pd)).map_err(run_error)?;
    rep.check("negative control: non-special homotopy breaks delta~^2 + dl delta~ + delta~ dl = f Delta g", None, !holds, || {
        "identity held for a non-special homotopy".into()
    });
    Ok(output::perturb_demo(&header, &rep))
}
