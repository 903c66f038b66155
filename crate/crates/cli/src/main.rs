//! `sepcheck`: separability checks, family sweeps, audits and decompositions.
//!
//! Exit codes:
//!
//! | code | meaning                                             |
//! |------|-----------------------------------------------------|
//! | 0    | success                                             |
//! | 2    | invalid configuration (flags, names, grids)         |
//! | 3    | file could not be read or written                   |
//! | 4    | input file failed to parse or holds an invalid state |
//! | 5    | computation error                                   |
//! | 6    | decomposition search or verification found no certificate |

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use separability::criteria::{
    applicable_criteria, evaluate, is_exact, BatteryConfig, CriterionId, StateInput, Verdict,
    DEFAULT_CHSH_RESTARTS, TOL,
};
use separability::decomposition::{
    liqiao_search, liqiao_verify, Residuals, SearchOutcome, DEFAULT_MAX_ITERS, DEFAULT_TERMS,
};
use separability::harness::{audit, fmt_sig, sweep, FamilySpec, Generator};
use separability::io::{candidate_to_json, parse_candidate, parse_state};
use separability::linalg::BipartiteDims;
use separability::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_FILE: u8 = 3;
const EXIT_PARSE: u8 = 4;
const EXIT_COMPUTE: u8 = 5;
const EXIT_NO_CERTIFICATE: u8 = 6;

#[derive(Parser, Debug)]
#[command(name = "sepcheck", version, about = "Entanglement criteria for bipartite states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the criteria battery on one state file.
    Check(CheckArgs),
    /// Evaluate criteria along a one-parameter state family.
    Sweep(SweepArgs),
    /// Compare criteria against the ppt label on random states.
    Audit(AuditArgs),
    /// Search for, or verify, a separable decomposition of a two-qubit state.
    Decompose(DecomposeArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Decision tolerance shared by all criteria.
    #[arg(long, default_value_t = TOL)]
    tol: f64,
    /// Comma-separated criterion names (default: all applicable).
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// State file.
    input: PathBuf,
    #[command(flatten)]
    common: Common,
    /// Seed for the randomized CHSH optimizer.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// werner, rho_p, pure_schmidt_angle, bell_diagonal or bell_diagonal:tx,ty,tz
    #[arg(long)]
    family: String,
    /// start:stop:steps or a comma-separated list of parameters.
    #[arg(long)]
    grid: String,
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// Number of random states.
    #[arg(long, short = 'n')]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// separable, mixed or pure
    #[arg(long)]
    generator: String,
    /// Local dimensions as AxB.
    #[arg(long, default_value = "2x2")]
    dims: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    /// State file.
    input: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Number of product terms.
    #[arg(long = "terms", short = 'L', default_value_t = DEFAULT_TERMS)]
    terms: usize,
    /// Iteration budget per restart.
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Check this candidate file instead of searching.
    #[arg(long)]
    verify: Option<PathBuf>,
    /// Where to write the certificate.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Errors raised while interpreting flags.
fn config_error(e: Error) -> Failure {
    Failure::new(EXIT_CONFIG, e.to_string())
}

/// Errors raised while running a computation.
fn compute_error(e: Error) -> Failure {
    match e {
        Error::NotApplicable { .. } | Error::UnsupportedDims { .. } => config_error(e),
        other => Failure::new(EXIT_COMPUTE, other.to_string()),
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_FILE, format!("{}: {e}", path.display())))
}

fn load_state(path: &Path) -> CliResult<StateInput> {
    let text = read_file(path)?;
    parse_state(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let fail = |e: std::io::Error| Failure::new(EXIT_FILE, format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, report: &str) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(path, report),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn battery_config(tol: f64, seed: u64) -> CliResult<BatteryConfig> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::new(
            EXIT_CONFIG,
            format!("--tol must be positive and finite, got {tol}"),
        ));
    }
    Ok(BatteryConfig {
        tol,
        seed,
        chsh_restarts: DEFAULT_CHSH_RESTARTS,
    })
}

fn parse_criteria(names: &[String]) -> CliResult<Vec<CriterionId>> {
    names
        .iter()
        .filter(|n| !n.trim().is_empty())
        .map(|n| n.trim().parse::<CriterionId>().map_err(config_error))
        .collect()
}

fn parse_dims(s: &str) -> CliResult<BipartiteDims> {
    let bad = || Failure::new(EXIT_CONFIG, format!("--dims expects AxB, got '{s}'"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    BipartiteDims::new(a, b).map_err(config_error)
}

fn run_check(args: &CheckArgs) -> CliResult<String> {
    let config = battery_config(args.common.tol, args.seed)?;
    let requested = parse_criteria(&args.common.criteria)?;
    let state = load_state(&args.input)?;
    let criteria = if requested.is_empty() {
        applicable_criteria(&state)
    } else {
        requested
    };
    let dims = state.dims();
    let kind = match state {
        StateInput::Mixed(_) => "mixed",
        StateInput::Pure(_) => "pure",
    };
    let mut report = format!("# state: {kind}, dims {dims}\n");
    let _ = writeln!(
        report,
        "{:<20} {:>20} {:>12} {:<12} details",
        "criterion", "statistic", "threshold", "verdict"
    );
    let mut entangled = false;
    let mut separable = false;
    for id in criteria {
        let v = evaluate(id, &state, &config).map_err(compute_error)?;
        if is_exact(id, &state) {
            entangled |= v.verdict == Verdict::Entangled;
            separable |= v.verdict == Verdict::Separable;
        }
        let _ = writeln!(
            report,
            "{:<20} {:>20} {:>12} {:<12} {}",
            id.name(),
            fmt_sig(v.statistic),
            fmt_sig(v.threshold),
            v.verdict.to_string(),
            v.details
        );
    }
    let summary = if entangled {
        "ENTANGLED"
    } else if separable {
        "SEPARABLE"
    } else {
        "INCONCLUSIVE"
    };
    report.push_str(summary);
    report.push('\n');
    emit(args.common.out.as_deref(), &report)?;
    Ok(summary.to_string())
}

fn run_sweep(args: &SweepArgs) -> CliResult<String> {
    let config = battery_config(args.common.tol, args.seed)?;
    let criteria = parse_criteria(&args.common.criteria)?;
    let spec = FamilySpec {
        family: args.family.parse().map_err(config_error)?,
        grid: args.grid.parse().map_err(config_error)?,
    };
    spec.validate().map_err(config_error)?;
    let report = sweep(&spec, &criteria, &config).map_err(compute_error)?;
    emit(args.common.out.as_deref(), &report.to_csv())?;
    let mut summary = String::new();
    for (id, p) in &report.thresholds {
        let _ = writeln!(summary, "threshold {id} {}", fmt_sig(*p));
    }
    Ok(summary.trim_end().to_string())
}

fn run_audit(args: &AuditArgs) -> CliResult<String> {
    let config = battery_config(args.common.tol, args.seed)?;
    let criteria = parse_criteria(&args.common.criteria)?;
    let generator: Generator = args.generator.parse().map_err(config_error)?;
    let dims = parse_dims(&args.dims)?;
    if args.n == 0 {
        return Err(Failure::new(EXIT_CONFIG, "-n must be at least 1"));
    }
    let summary =
        audit(args.n, args.seed, generator, dims, &criteria, &config).map_err(compute_error)?;
    emit(args.common.out.as_deref(), &summary.to_csv())?;
    Ok(format!(
        "audited {} {} states at {dims}: {} labelled entangled",
        summary.samples, summary.generator, summary.entangled
    ))
}

fn residual_line(r: &Residuals) -> String {
    format!(
        "residuals dr={} ds={} dtau={}",
        fmt_sig(r.dr),
        fmt_sig(r.ds),
        fmt_sig(r.dtau)
    )
}

fn run_decompose(args: &DecomposeArgs) -> CliResult<String> {
    if args.terms == 0 || args.max_iters == 0 {
        return Err(Failure::new(
            EXIT_CONFIG,
            "--terms and --max-iters must be at least 1",
        ));
    }
    let state = load_state(&args.input)?;
    let rho = state.density();
    if let Some(path) = &args.verify {
        let cand = parse_candidate(&read_file(path)?)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        let res = liqiao_verify(&cand, &rho).map_err(compute_error)?;
        let line = residual_line(&res);
        if res.certifies() {
            return Ok(format!("{line}\nCERTIFIED"));
        }
        return Err(Failure::new(
            EXIT_NO_CERTIFICATE,
            format!("{line}\ncandidate does not certify separability"),
        ));
    }
    match liqiao_search(&rho, args.terms, args.seed, args.max_iters).map_err(compute_error)? {
        SearchOutcome::Certificate(cand, res) => {
            emit(args.out.as_deref(), &candidate_to_json(&cand))?;
            Ok(format!(
                "{}\nCERTIFIED with {} terms",
                residual_line(&res),
                cand.len()
            ))
        }
        SearchOutcome::Failure(res) => Err(Failure::new(
            EXIT_NO_CERTIFICATE,
            format!(
                "{}\nno certificate found (inconclusive, not evidence of entanglement)",
                residual_line(&res)
            ),
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, summary_to_stderr) = match &cli.command {
        Command::Check(a) => (run_check(a), a.common.out.is_none()),
        Command::Sweep(a) => (run_sweep(a), a.common.out.is_none()),
        Command::Audit(a) => (run_audit(a), a.common.out.is_none()),
        Command::Decompose(a) => (run_decompose(a), a.out.is_none() && a.verify.is_none()),
    };
    match result {
        Ok(summary) => {
            // The report already went to stdout; keep the summary off it
            // unless it is the only output, so reports stay machine-readable.
            let already_printed = matches!(cli.command, Command::Check(_)) && summary_to_stderr;
            if !summary.is_empty() && !already_printed {
                if summary_to_stderr {
                    eprintln!("{summary}");
                } else {
                    println!("{summary}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("sepcheck: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
