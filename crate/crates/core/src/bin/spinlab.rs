use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use spinlab::approx::{approx_pair, approx_unit, torus_to_spin, MIN_DIM};
use spinlab::arith::parse_rational;
use spinlab::certificate::verify_text;
use spinlab::congruence::{
    run_width, Convention, FiniteGroupSpec, WidthMode, WidthReport, DEFAULT_GROUP_CAP,
};
use spinlab::json::{to_canonical_string, write_atomic};
use spinlab::steinberg::symbol_property_suite;
use spinlab::suites::{clifford_suite, coroot_suite, tori_suite, SuiteReport};
use spinlab::{Error, OIdeal, QuadForm};

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SAMPLED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spinlab",
    version,
    about = "Spin groups, norm-one tori and congruence quotients over Z[1/2]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded identity suite, or re-verify a certificate file.
    Verify(VerifyArgs),
    /// Build an approximation certificate.
    Approx {
        #[command(subcommand)]
        kind: ApproxKind,
    },
    /// Conjugacy width of gcl(x) in a finite quotient of Spin.
    Width(WidthArgs),
    /// All suites plus small width experiments in both conventions.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Coroots,
    Steinberg,
    Clifford,
    Tori,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Option<Suite>,
    /// Certificate or spin-pair JSON to re-verify.
    #[arg(long, conflicts_with = "suite")]
    file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ApproxKind {
    /// z ∈ T_t(O) with ρ_P(z) ≡ a at every P | I.
    Unit {
        a: String,
        ideal: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two torus points with disjoint supports.
    Pair(PairArgs),
    /// The pair lifted to commuting elements of Spin(f_a).
    Spinpair {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = MIN_DIM)]
        dim: usize,
    },
}

#[derive(Args)]
struct PairArgs {
    a1: String,
    a2: String,
    ideal: String,
    /// Torus parameter; defaults to the least non-square t ≡ −1 mod I.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormName {
    Fa,
    Fs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Quotient,
    Cover,
}

#[derive(Args)]
struct WidthArgs {
    form: FormName,
    modulus: u64,
    /// `id`, a blade such as `e12` or `e1234`, or `gen<k>`; a leading `-` negates.
    #[arg(long, default_value = "gen0")]
    element: String,
    /// Maximal number of BFS layers.
    #[arg(long, default_value_t = 10)]
    cap: u32,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, value_enum, default_value_t = ConventionArg::Quotient)]
    convention: ConventionArg,
    /// Enumeration cap; beyond it the report is sampled.
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Validated settings of one run.
#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    subcommand: String,
    seed: u64,
    dim: Option<usize>,
    output: Option<PathBuf>,
    bfs_cap: Option<u32>,
    group_cap: Option<usize>,
    prime_cap: u64,
}

impl RunConfig {
    fn new(subcommand: &str, seed: u64, dim: Option<usize>, output: Option<PathBuf>) -> Self {
        RunConfig {
            subcommand: subcommand.into(),
            seed,
            dim,
            output,
            bfs_cap: None,
            group_cap: None,
            prime_cap: spinlab::approx::prime_cap(),
        }
    }

    fn check_dim(&self, min: usize) -> Result<usize, Failure> {
        let dim = self.dim.expect("dimension set");
        if dim % 2 == 1 || dim < min {
            return Err(Failure::usage(format!(
                "--dim must be even and at least {min}, got {dim}"
            )));
        }
        Ok(dim)
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn failed(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FAILED,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded(_)
            | Error::SearchFailed(_)
            | Error::Verification(_)
            | Error::NotCommuting => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let text = to_canonical_string(value)?;
    match out {
        Some(path) => write_atomic(path, &text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{text}").and_then(|_| stdout.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(Failure::usage(format!("cannot write to stdout: {e}")));
                }
            }
        }
    }
    Ok(())
}

fn suite_exit(r: &SuiteReport) -> u8 {
    if r.passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn run_suite(suite: Suite, cfg: &mut RunConfig) -> Result<SuiteReport, Failure> {
    Ok(match suite {
        Suite::Coroots => {
            cfg.dim.get_or_insert(20);
            coroot_suite(cfg.seed, cfg.check_dim(6)?)?
        }
        Suite::Clifford => {
            cfg.dim.get_or_insert(8);
            let dim = cfg.check_dim(2)?;
            if dim > 12 {
                return Err(Failure::usage(format!(
                    "--dim {dim} is too large for the Clifford suite (at most 12)"
                )));
            }
            clifford_suite(cfg.seed, dim)?
        }
        Suite::Steinberg | Suite::Tori => {
            if cfg.dim.is_some() {
                return Err(Failure::usage("--dim does not apply to this suite"));
            }
            match suite {
                Suite::Steinberg => symbol_property_suite(cfg.seed)?,
                _ => tori_suite(cfg.seed)?,
            }
        }
    })
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let report = verify_text(&text)?;
        emit(&report, args.out.as_deref())?;
        return Ok(if report.passed { EXIT_OK } else { EXIT_FAILED });
    }
    let Some(suite) = args.suite else {
        return Err(Failure::usage("verify needs a suite name or --file"));
    };
    let mut cfg = RunConfig::new("verify", args.seed, args.dim, args.out.clone());
    let report = run_suite(suite, &mut cfg)?;
    emit(&report, args.out.as_deref())?;
    Ok(suite_exit(&report))
}

fn parse_ideal(s: &str) -> Result<OIdeal, Failure> {
    let m: BigInt = s
        .parse()
        .map_err(|_| Failure::usage(format!("ideal {s:?} is not an integer")))?;
    OIdeal::new(m).map_err(|e| Failure::usage(e.to_string()))
}

fn parse_rat(s: &str) -> Result<spinlab::Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::usage(e.to_string()))
}

fn check_verified<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = to_canonical_string(value)?;
    let report = verify_text(&text)?;
    if !report.passed {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.ok)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        return Err(Failure::failed(format!(
            "re-verification failed: {}",
            failed.join("; ")
        )));
    }
    Ok(())
}

/// Re-verifies through the independent path, then writes.
fn emit_verified<T: Serialize>(value: &T, out: Option<&Path>) -> Outcome {
    check_verified(value)?;
    emit(value, out)?;
    Ok(EXIT_OK)
}

fn cmd_approx(kind: ApproxKind) -> Outcome {
    match kind {
        ApproxKind::Unit { a, ideal, out } => {
            let (a, ideal) = (parse_rat(&a)?, parse_ideal(&ideal)?);
            let ap = approx_unit(&a, &ideal).map_err(|e| log_partial("unit", e))?;
            emit_verified(&ap.certificate, out.as_deref())
        }
        ApproxKind::Pair(p) => {
            let ap = build_pair(&p)?;
            emit_verified(&ap.certificate, p.out.as_deref())
        }
        ApproxKind::Spinpair { pair, dim } => {
            if dim % 2 == 1 || dim < MIN_DIM {
                return Err(Failure::usage(format!(
                    "--dim must be even and at least {MIN_DIM}, got {dim}"
                )));
            }
            let ap = build_pair(&pair)?;
            check_verified(&ap.certificate)?;
            let sp = torus_to_spin(&ap.t, &ap.z[0], &ap.z[1], dim)?;
            emit_verified(&sp.to_json(), pair.out.as_deref())
        }
    }
}

fn build_pair(p: &PairArgs) -> Result<spinlab::approx::Approximation, Failure> {
    let a1 = parse_rat(&p.a1)?;
    let a2 = parse_rat(&p.a2)?;
    let ideal = parse_ideal(&p.ideal)?;
    let t = match &p.t {
        Some(s) => Some(
            s.parse::<BigInt>()
                .map_err(|_| Failure::usage(format!("t {s:?} is not an integer")))?,
        ),
        None => None,
    };
    approx_pair(&a1, &a2, &ideal, t).map_err(|e| log_partial("pair", e))
}

fn log_partial(kind: &str, e: Error) -> Failure {
    if let Error::CapExceeded(_) | Error::SearchFailed(_) = e {
        eprintln!("approx {kind}: search stopped: {e}");
    }
    Failure::from(e)
}

fn cmd_width(args: WidthArgs) -> Outcome {
    let mut cfg = RunConfig::new("width", 0, Some(args.dim), args.out.clone());
    cfg.bfs_cap = Some(args.cap);
    cfg.group_cap = Some(args.group_cap);
    let dim = cfg.check_dim(4)?;
    let form = Arc::new(match args.form {
        FormName::Fa => QuadForm::fa(dim)?,
        FormName::Fs => QuadForm::fs(dim)?,
    });
    let spec = FiniteGroupSpec::standard(&form, args.modulus)?.with_group_cap(args.group_cap);
    let x = spec.parse_element(&args.element)?;
    let convention = match args.convention {
        ConventionArg::Quotient => Convention::Quotient,
        ConventionArg::Cover => Convention::Cover,
    };
    let report = run_width(&spec, &[x], args.cap, convention)?;
    emit(&report, args.out.as_deref())?;
    Ok(match report.mode {
        WidthMode::Exact => EXIT_OK,
        WidthMode::Sampled => EXIT_SAMPLED,
    })
}

#[derive(Serialize)]
struct WidthCase {
    form: &'static str,
    modulus: u64,
    element: String,
    quotient: WidthReport,
    cover: WidthReport,
    widths_differ: bool,
}

fn cmd_report(args: ReportArgs) -> Outcome {
    let mut suites = Vec::new();
    for suite in [
        Suite::Coroots,
        Suite::Steinberg,
        Suite::Clifford,
        Suite::Tori,
    ] {
        let mut cfg = RunConfig::new("report", args.seed, None, None);
        suites.push(run_suite(suite, &mut cfg)?);
    }
    let mut cases = Vec::new();
    for (name, modulus) in [("fs", 3u64), ("fa", 3), ("fs", 5), ("fa", 5)] {
        let form = Arc::new(if name == "fs" {
            QuadForm::fs(4)?
        } else {
            QuadForm::fa(4)?
        });
        let spec = FiniteGroupSpec::standard(&form, modulus)?;
        for element in ["e12", "e1234", "gen0", "gen1"] {
            let x = spec.parse_element(element)?;
            let quotient = run_width(&spec, std::slice::from_ref(&x), 20, Convention::Quotient)?;
            let cover = run_width(&spec, &[x], 20, Convention::Cover)?;
            cases.push(WidthCase {
                form: name,
                modulus,
                element: element.into(),
                widths_differ: quotient.width != cover.width,
                quotient,
                cover,
            });
        }
    }
    let passed = suites.iter().all(|s| s.passed);
    let report: Value = json!({
        "seed": args.seed,
        "suites": suites,
        "width": cases,
        "sign_ambiguity_changed_width": cases.iter().any(|c| c.widths_differ),
        "passed": passed,
    });
    emit(&report, args.out.as_deref())?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Approx { kind } => cmd_approx(kind),
        Command::Width(a) => cmd_width(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("spinlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
