//! `ea-bounds`: command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or verification failure, 2 invalid
//! configuration, 3 size guard exceeded.

mod dist;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ea_bounds::bounds::{lower_bound, BoundValue, CouplingDistribution, Method};
use ea_bounds::checks::{render_table, run_suite, SuiteConfig};
use ea_bounds::classical::{frustration_from_mask, sign_pattern_census, SignPatternSolver};
use ea_bounds::exact_gs::{check_guard, sample_upper_bound, MAX_EXHAUSTIVE_SITES, MAX_PERIODIC_WIDTH};
use ea_bounds::lattice::{make_cell, BondGraph, Boundary};
use ea_bounds::quantum::{anisotropy_sweep, sweep_csv};
use ea_bounds::rational::{fraction_string, DEFAULT_PRECISION};
use ea_bounds::{Error, SCHEMA_VERSION, TOOL_VERSION};

use crate::dist::{parse_dist, parse_list};

#[derive(Debug, Parser)]
#[command(name = "ea-bounds", version, about = "Cell lower bounds and exact finite-lattice energies for Edwards-Anderson spin glasses")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower bounds on the ground-state energy per site.
    #[command(subcommand)]
    Bound(BoundKind),
    /// Exact ground energies of sampled finite lattices.
    Upper(UpperArgs),
    /// Run the self-verification suite.
    Verify(VerifyArgs),
    /// Frustration statistics of a cell.
    #[command(subcommand)]
    Analyze(AnalyzeKind),
}

#[derive(Debug, Subcommand)]
enum BoundKind {
    /// Classical Ising cell bound.
    Classical(ClassicalArgs),
    /// Quantum XZ cell bound along an alpha_x sweep.
    Quantum(QuantumArgs),
}

#[derive(Debug, Subcommand)]
enum AnalyzeKind {
    /// Frustrated-face census over all +-1 sign patterns.
    Frustration(FrustrationArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    Auto,
    Free,
    Periodic,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassicalArgs {
    #[arg(long)]
    dim: usize,
    /// bernoulli[:J], point:V, gaussian[:SIGMA], uniform[:A] or file:PATH
    #[arg(long, default_value = "bernoulli")]
    dist: String,
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    /// Monte Carlo samples.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fractional digits of printed decimals.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    /// Accept a coupling law with nonzero mean.
    #[arg(long)]
    allow_noncentered: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct QuantumArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value = "bernoulli")]
    dist: String,
    /// Comma-separated alpha_x grid; must contain 0.
    #[arg(long = "alpha-x", default_value = "0")]
    alpha_x: String,
    /// Monte Carlo samples for continuous laws.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    allow_noncentered: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct UpperArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long = "L", visible_alias = "side")]
    side: usize,
    /// `auto` uses periodic boundaries when the exact solver allows them.
    #[arg(long, value_enum, default_value = "auto")]
    boundary: BoundaryArg,
    #[arg(long, default_value = "bernoulli")]
    dist: String,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lattice samples for the cell-inequality check.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct FrustrationArgs {
    #[arg(long)]
    dim: usize,
    #[command(flatten)]
    out: OutputArgs,
}

/// Configuration echoed into every output. Thread count and output path are
/// left out since they do not affect results.
#[derive(Debug, Default, Serialize)]
struct RunConfig {
    subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dist: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<MethodArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_x: Option<Vec<f64>>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    side: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundary: Option<Boundary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    precision: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    allow_noncentered: Option<bool>,
    format: Option<Format>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            e if e.is_guard() => 3,
            Error::CellInequalityViolated { .. } | Error::Eigensolver(_) | Error::Inconsistent(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// A finished command: the rendered output and whether it signals failure.
struct Outcome {
    text: String,
    failed: bool,
}

fn envelope(config: &RunConfig, report: Value) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "tool": {"name": "ea-bounds", "version": TOOL_VERSION},
        "config": config,
        "report": report,
    })
}

fn header_lines(config: &RunConfig) -> String {
    format!(
        "# ea-bounds {TOOL_VERSION} ({SCHEMA_VERSION})\n# config {}\n",
        serde_json::to_string(config).expect("config serializes")
    )
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serializes");
    s.push('\n');
    s
}

fn bound_classical(args: &ClassicalArgs) -> Result<Outcome, Failure> {
    let format = args.out.format.unwrap_or(Format::Human);
    let cell = make_cell(args.dim)?;
    let dist = parse_dist(&args.dist, args.allow_noncentered)?;
    let method = match args.method {
        MethodArg::Exact => {
            if dist.as_discrete().is_none() {
                return Err(config_error(format!(
                    "{} is continuous; exact enumeration needs a discrete law (use --method mc)",
                    dist.describe()
                )));
            }
            Method::Exact
        }
        MethodArg::Mc => Method::MonteCarlo {
            samples: args.samples,
            seed: args.seed,
        },
    };
    let mut report = lower_bound(&cell, &dist, method)?;
    report.set_precision(args.precision);
    let mc = matches!(method, Method::MonteCarlo { .. });
    let config = RunConfig {
        subcommand: "bound classical",
        dimension: Some(args.dim),
        dist: Some(args.dist.clone()),
        method: Some(args.method),
        samples: mc.then_some(args.samples),
        seed: mc.then_some(args.seed),
        precision: Some(args.precision),
        allow_noncentered: Some(args.allow_noncentered),
        format: Some(format),
        ..RunConfig::default()
    };
    let text = match format {
        Format::Human => format!("{}{}", header_lines(&config), report.render_human()),
        Format::Json => pretty(&envelope(&config, to_json(&report))),
        Format::Csv => {
            let mut s = header_lines(&config);
            s.push_str("dimension,distribution,method,lower_bound_fraction,lower_bound,stderr\n");
            let (fraction, stderr) = match &report.value {
                BoundValue::Exact { lower_bound, .. } => (fraction_string(lower_bound), String::new()),
                BoundValue::Estimate { stderr, .. } => (String::new(), stderr.to_string()),
            };
            let _ = writeln!(
                s,
                "{},\"{}\",{},{},{},{}",
                report.dimension,
                report.distribution,
                report.method.name(),
                fraction,
                report.decimal,
                stderr
            );
            s
        }
    };
    Ok(Outcome { text, failed: false })
}

fn bound_quantum(args: &QuantumArgs) -> Result<Outcome, Failure> {
    let format = args.out.format.unwrap_or(Format::Csv);
    let cell = make_cell(args.dim)?;
    let dist = parse_dist(&args.dist, args.allow_noncentered)?;
    let grid = parse_list(&args.alpha_x)?;
    let continuous = matches!(dist, CouplingDistribution::Continuous(_));
    let rows = anisotropy_sweep(&cell, &dist, &grid, continuous.then_some((args.samples, args.seed)))?;
    let config = RunConfig {
        subcommand: "bound quantum",
        dimension: Some(args.dim),
        dist: Some(args.dist.clone()),
        alpha_x: Some(grid),
        samples: continuous.then_some(args.samples),
        seed: continuous.then_some(args.seed),
        allow_noncentered: Some(args.allow_noncentered),
        format: Some(format),
        ..RunConfig::default()
    };
    let mut notes = vec![format!(
        "couplings {}; anisotropy (alpha_x, 0, 1); bound = {} * average cell ground energy",
        dist.describe(),
        fraction_string(cell.multiplicity_factor())
    )];
    if continuous {
        notes.push("estimate, not a rigorous bound: Monte Carlo cell averages".into());
    }
    if !dist.is_centered() {
        notes.push("assumption violated: couplings are not centered".into());
    }
    let text = match format {
        Format::Csv | Format::Human => {
            let mut s = header_lines(&config);
            for n in &notes {
                let _ = writeln!(s, "# {n}");
            }
            s.push_str(&sweep_csv(&rows));
            s
        }
        Format::Json => pretty(&envelope(&config, json!({"rows": rows, "notes": notes}))),
    };
    Ok(Outcome { text, failed: false })
}

fn resolve_boundary(dim: usize, side: usize, arg: BoundaryArg) -> Boundary {
    match arg {
        BoundaryArg::Free => Boundary::Free,
        BoundaryArg::Periodic => Boundary::Periodic,
        BoundaryArg::Auto => {
            let fits = match dim {
                2 => side <= MAX_PERIODIC_WIDTH,
                _ => side.checked_pow(dim as u32).is_some_and(|n| n <= MAX_EXHAUSTIVE_SITES),
            };
            if fits && side >= Boundary::Periodic.minimum_side() {
                Boundary::Periodic
            } else {
                Boundary::Free
            }
        }
    }
}

fn upper(args: &UpperArgs) -> Result<Outcome, Failure> {
    let format = args.out.format.unwrap_or(Format::Json);
    if format == Format::Csv {
        return Err(config_error("upper writes json lines or human output"));
    }
    if !(2..=3).contains(&args.dim) {
        return Err(Error::UnsupportedDimension(args.dim).into());
    }
    let boundary = resolve_boundary(args.dim, args.side, args.boundary);
    check_guard(args.dim, &vec![args.side; args.dim], boundary)?;
    let dist = parse_dist(&args.dist, true)?;
    let discrete = dist
        .as_discrete()
        .ok_or_else(|| config_error(format!("{} is continuous; exact lattice energies need a discrete law", dist.describe())))?;
    let run = sample_upper_bound(args.dim, args.side, boundary, discrete, args.samples, args.seed)?;
    let config = RunConfig {
        subcommand: "upper",
        dimension: Some(args.dim),
        dist: Some(args.dist.clone()),
        side: Some(args.side),
        boundary: Some(boundary),
        samples: Some(args.samples),
        seed: Some(args.seed),
        format: Some(format),
        ..RunConfig::default()
    };
    let s = &run.summary;
    let text = match format {
        Format::Json => {
            let mut out = String::new();
            let header = json!({
                "type": "header",
                "schema": SCHEMA_VERSION,
                "tool": {"name": "ea-bounds", "version": TOOL_VERSION},
                "config": config,
            });
            out.push_str(&header.to_string());
            out.push('\n');
            for r in &run.records {
                let mut v = to_json(r);
                v["type"] = json!("sample");
                out.push_str(&v.to_string());
                out.push('\n');
            }
            let mut v = to_json(s);
            v["type"] = json!("summary");
            out.push_str(&v.to_string());
            out.push('\n');
            out
        }
        _ => {
            let mut out = header_lines(&config);
            let _ = writeln!(out, "lattice          {}^{} ({})", s.side, s.dimension, s.boundary);
            let _ = writeln!(out, "distribution     {}", s.distribution);
            let _ = writeln!(out, "samples          {} (seed {})", s.samples, s.seed);
            let _ = writeln!(
                out,
                "mean per site    {} ({}) +- {}",
                fraction_string(&s.mean_per_site),
                s.mean_decimal,
                s.stderr
            );
            for n in &s.notes {
                let _ = writeln!(out, "note: {n}");
            }
            out
        }
    };
    Ok(Outcome { text, failed: false })
}

fn verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let format = args.out.format.unwrap_or(Format::Human);
    let suite = SuiteConfig {
        seed: args.seed,
        samples: args.samples,
        ..SuiteConfig::default()
    };
    let results = run_suite(&suite);
    let failed = results.iter().any(|r| !r.passed);
    let config = RunConfig {
        subcommand: "verify",
        samples: Some(args.samples),
        seed: Some(args.seed),
        format: Some(format),
        ..RunConfig::default()
    };
    let text = match format {
        Format::Json => pretty(&envelope(&config, json!({"passed": !failed, "checks": results}))),
        _ => {
            let passed = results.iter().filter(|r| r.passed).count();
            format!(
                "{}{}{passed}/{} checks passed\n",
                header_lines(&config),
                render_table(&results),
                results.len()
            )
        }
    };
    Ok(Outcome { text, failed })
}

fn analyze_frustration(args: &FrustrationArgs) -> Result<Outcome, Failure> {
    let format = args.out.format.unwrap_or(Format::Human);
    let cell = make_cell(args.dim)?;
    let census = sign_pattern_census(&cell);
    let config = RunConfig {
        subcommand: "analyze frustration",
        dimension: Some(args.dim),
        format: Some(format),
        ..RunConfig::default()
    };
    let text = match format {
        Format::Json => pretty(&envelope(&config, to_json(&census))),
        Format::Csv => {
            let mut s = header_lines(&config);
            s.push_str("pattern,frustrated_faces,ground_energy\n");
            let solver = SignPatternSolver::new(&cell);
            for mask in 0..census.patterns {
                let sig = frustration_from_mask(&cell, mask);
                let _ = writeln!(s, "{mask},{},{}", sig.frustrated_count, solver.ground_energy(mask));
            }
            s
        }
        Format::Human => {
            let mut s = header_lines(&config);
            let _ = writeln!(s, "cell             {:?} ({} bonds, {} faces)", cell.kind(), cell.bond_count(), cell.faces().len());
            let _ = writeln!(s, "sign patterns    {}", census.patterns);
            let _ = writeln!(s, "frustrated faces -> patterns");
            for (k, v) in &census.by_frustrated_count {
                let _ = writeln!(s, "  {k:>2} -> {v}");
            }
            let _ = writeln!(s, "ground energy (units of J) -> patterns");
            for (k, v) in &census.by_ground_energy {
                let _ = writeln!(s, "  {k:>3} -> {v}");
            }
            let _ = writeln!(s, "sum of minima    {}", census.energy_sum);
            if cell.faces().len() == 6 {
                let _ = writeln!(s, "parity violations {}", census.parity_violations);
            }
            s
        }
    };
    Ok(Outcome { text, failed: false })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(config_error("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| config_error(e.to_string()))?;
    }
    let (outcome, path) = match &cli.command {
        Command::Bound(BoundKind::Classical(a)) => (bound_classical(a)?, &a.out.output),
        Command::Bound(BoundKind::Quantum(a)) => (bound_quantum(a)?, &a.out.output),
        Command::Upper(a) => (upper(a)?, &a.out.output),
        Command::Verify(a) => (verify(a)?, &a.out.output),
        Command::Analyze(AnalyzeKind::Frustration(a)) => (analyze_frustration(a)?, &a.out.output),
    };
    match path {
        Some(p) => fs::write(p, &outcome.text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", p.display()),
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.text.as_bytes()).map_err(|e| Failure {
                code: 1,
                message: e.to_string(),
            })?;
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome { failed: false, .. }) => ExitCode::SUCCESS,
        Ok(Outcome { failed: true, .. }) => {
            eprintln!("ea-bounds: verification failed");
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("ea-bounds: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
