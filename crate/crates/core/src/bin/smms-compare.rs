use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use smms_compare::report::{self, Format, Summary};
use smms_compare::scenarios;
use smms_compare::sweep::{run_sweep, SweepConfig};
use smms_compare::theorems::{run_check, CheckContext, CheckParams, THEOREM_IDS};
use smms_compare::{CheckReport, Error};

const EXIT_VIOLATION: u8 = 1;
const EXIT_STRICT_SKIP: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "smms-compare", version, about = "Check integral-curvature comparison estimates on rotationally symmetric weighted spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run theorem checks on one scenario.
    Check(CheckArgs),
    /// Run a parameter sweep over scenarios and theorems.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Structured => Format::Structured,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Report file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Exit 2 when any check was skipped.
    #[arg(long)]
    strict: bool,
    /// Base of the check tolerance `tol·(1 + |lhs| + |rhs|)`.
    #[arg(long)]
    tol: Option<f64>,
    /// Grid size for pointwise displays.
    #[arg(long)]
    grid_points: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// Catalog spec, scenario file or inline scenario object.
    #[arg(long)]
    scenario: String,
    /// Theorem id; repeat for several.
    #[arg(long, required = true)]
    theorem: Vec<String>,
    /// Dimension for catalog specs without `n=`.
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "H", allow_negative_numbers = true)]
    h: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long = "R")]
    big_r: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    #[arg(long = "R1")]
    big_r1: Option<f64>,
    #[arg(long = "R2")]
    big_r2: Option<f64>,
    /// Radii for the growth check, comma separated.
    #[arg(long = "R-list", value_delimiter = ',')]
    r_list: Option<Vec<f64>>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario entries replacing the configured list.
    #[arg(long)]
    scenario: Vec<String>,
    /// Theorem ids replacing the configured list.
    #[arg(long)]
    theorem: Vec<String>,
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() || matches!(e, Error::Range(_)) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Run(e.to_string())
        }
    }
}

fn context(c: &Common) -> CheckContext {
    let mut ctx = CheckContext::default();
    if let Some(t) = c.tol {
        ctx.tol_base = t;
    }
    if let Some(g) = c.grid_points {
        ctx.grid_points = g;
    }
    ctx
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Run(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_for(s: &Summary, strict: bool) -> u8 {
    if s.violated > 0 || s.failed > 0 {
        EXIT_VIOLATION
    } else if strict && s.skipped > 0 {
        EXIT_STRICT_SKIP
    } else {
        0
    }
}

fn check(a: CheckArgs) -> Result<u8, Failure> {
    for t in &a.theorem {
        if !THEOREM_IDS.contains(&t.as_str()) {
            return Err(Failure::Usage(format!("unknown theorem `{t}`; expected one of {}", THEOREM_IDS.join(", "))));
        }
    }
    let space = scenarios::resolve(&a.scenario, a.n)?;
    let ctx = context(&a.common);
    let prm = CheckParams {
        p: a.p,
        h: a.h,
        a: a.a,
        r: a.r,
        big_r: a.big_r,
        m: a.m,
        k: a.k,
        alpha: a.alpha,
        delta: a.delta,
        r1: a.r1,
        r2: a.r2,
        big_r1: a.big_r1,
        big_r2: a.big_r2,
        r_list: a.r_list,
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for t in &a.theorem {
        reports.extend(run_check(t, &space, &prm, &ctx)?);
    }
    report::sort_reports(&mut reports);
    let format = a.common.format.map(Format::from).unwrap_or_default();
    emit(&report::render(&reports, format)?, a.common.out.as_ref())?;
    let s = Summary::of(&reports);
    eprintln!("{s}");
    Ok(exit_for(&s, a.common.strict))
}

fn sweep(a: SweepArgs) -> Result<u8, Failure> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
            SweepConfig::from_json(&text)?
        }
        None => SweepConfig::default(),
    };
    if !a.scenario.is_empty() {
        cfg.scenarios = a.scenario;
    }
    if !a.theorem.is_empty() {
        cfg.theorems = a.theorem;
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    if let Some(t) = a.common.tol {
        cfg.tolerances.check_tol = Some(t);
    }
    if let Some(g) = a.common.grid_points {
        cfg.tolerances.grid_points = Some(g);
    }
    if let Some(f) = a.common.format {
        cfg.output.format = f.into();
    }
    if let Some(o) = a.common.out {
        cfg.output.path = Some(o);
    }
    let outcome = run_sweep(&cfg, &CheckContext::default())?;
    emit(&outcome.render(cfg.output.format)?, cfg.output.path.as_ref())?;
    eprintln!("{} tuples, {}", outcome.tuples, outcome.summary);
    Ok(exit_for(&outcome.summary, a.common.strict))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Command::Check(a) => check(a),
        Command::Sweep(a) => sweep(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_VIOLATION)
        }
    }
}
