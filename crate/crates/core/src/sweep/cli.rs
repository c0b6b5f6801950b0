//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chain::{
    factorizing_field, quad_measures, residual_report, Backend, ChainConfig, SiteQuad,
    PRODUCTION_SITES,
};
use crate::error::{Error, Result};
use crate::measures::fourtangle_mixed;
use crate::mixtures::{pair_concurrence_product, Family};
use crate::parallel::Parallelism;

use super::csv::render_csv;
use super::plan::{parse_quads, Grid, SweepMode, SweepPlan};
use super::run::{convergence_gate, ground, run_sweep_with, RunOptions, SweepRow};

/// Deviation above which `validate` reports failure.
pub const VALIDATE_TOLERANCE: f64 = 1e-8;
/// Gate samples used when `--gate` is not given.
pub const DEFAULT_GATE_SAMPLES: usize = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fourtangle",
    version,
    about = "4-tangle, concurrence and residual tangle for GHZ/W mixtures and XY chain ground states"
)]
struct Cli {
    /// Worker threads for grid points; 0 uses every core, 1 runs sequentially
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one measure of a mixture or a chain ground state and print it
    Measure(MeasureArgs),
    /// Run a sweep and write CSV
    Scan(ScanArgs),
    /// Run a residual-tangle sweep (scan with mode chain-residual)
    Residual(ScanArgs),
    /// Compare exact diagonalization with the free-fermion backend over a coupling grid
    Validate(ValidateArgs),
    /// Print the factorizing coupling (1 - gamma^2)^(-1/2)
    Factorizing {
        /// Anisotropy in [0, 1]
        #[arg(long)]
        gamma: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    /// 4-tangle of the mixture or of the chain quad
    C4,
    /// Product of the concurrences of the first and last pair
    C2Product,
    /// Concurrence of the first pair of the quad (chain only)
    C2First,
    /// Concurrence of the last pair of the quad (chain only)
    C2Last,
    /// One-tangle of the center site (chain only)
    Tau1,
    /// Residual tangle of the center site (chain only)
    Residual,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Quantity to print
    #[arg(value_enum)]
    quantity: Quantity,
    /// Mixture family (selects a mixture instead of a chain)
    #[arg(long)]
    family: Option<Family>,
    /// Weight of the first family component
    #[arg(long)]
    p: Option<f64>,
    /// Split of the remaining weight between the second and third component
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    /// Chain coupling
    #[arg(long)]
    lambda: Option<f64>,
    /// Chain anisotropy
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Quad gaps n1,n2,n3
    #[arg(long, default_value = "1,1,1")]
    quad: SiteQuad,
    /// Chain length
    #[arg(long = "sites", visible_alias = "n", default_value_t = PRODUCTION_SITES)]
    sites: usize,
    /// Chain backend: ed or freefermion
    #[arg(long, default_value = "freefermion")]
    backend: Backend,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Plan file of key=value lines; flags override its entries
    #[arg(long)]
    plan: Option<PathBuf>,
    /// mixture-rank2, mixture-rank3, chain-c4, chain-residual or validate
    #[arg(long)]
    mode: Option<SweepMode>,
    /// Mixture family
    #[arg(long)]
    family: Option<Family>,
    /// p grid, start:stop:step or a single value
    #[arg(long)]
    p: Option<Grid>,
    /// q grid, start:stop:step or a single value
    #[arg(long)]
    q: Option<Grid>,
    /// Coupling grid, start:stop:step or a single value
    #[arg(long)]
    lambda: Option<Grid>,
    /// Chain anisotropy
    #[arg(long)]
    gamma: Option<f64>,
    /// Quads, `;`-separated, gaps may be ranges: `1,1-9,1`
    #[arg(long)]
    quads: Option<String>,
    /// Chain backend: ed or freefermion
    #[arg(long)]
    backend: Option<Backend>,
    /// Chain length
    #[arg(long = "sites", visible_alias = "n")]
    sites: Option<usize>,
    /// CSV destination; standard output when absent
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Build a ground state per quad instead of sharing one per coupling
    #[arg(long)]
    no_cache: bool,
    /// Grid points checked against a doubled chain (free-fermion chain modes)
    #[arg(long)]
    gate: Option<usize>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Chain anisotropy
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Coupling grid, start:stop:step or a single value
    #[arg(long, default_value = "0:2:0.25")]
    lambda: Grid,
    /// Chain length (at most 14)
    #[arg(long = "sites", visible_alias = "n", default_value_t = crate::chain::ED_DEFAULT_SITES)]
    sites: usize,
    /// Quads, `;`-separated, gaps may be ranges
    #[arg(long, default_value = "1,1,1")]
    quad: String,
    /// Also write the per-point deviations as CSV
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Runs the command line with process stdio; returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    cli_run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`cli_main`] with explicit output streams.
pub fn cli_run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let par = Parallelism::from_threads(cli.threads);
    let result = match cli.command {
        Command::Measure(a) => measure(&a).and_then(|v| Ok(writeln!(out, "{v}")?)),
        Command::Scan(a) => scan(&a, None, par, out, err),
        Command::Residual(a) => scan(&a, Some(SweepMode::ChainResidual), par, out, err),
        Command::Validate(a) => validate(&a, par, out, err),
        Command::Factorizing { gamma } => {
            factorizing_field(gamma).and_then(|v| Ok(writeln!(out, "{v}")?))
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for invalid input, 1 for numerical or I/O failure.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidPlan(_)
        | Error::InvalidConfig(_)
        | Error::UnknownTag(_)
        | Error::InvalidSites(_)
        | Error::InvalidWeights(_)
        | Error::MalformedLabels(_) => 2,
        _ => 1,
    }
}

fn measure(a: &MeasureArgs) -> Result<f64> {
    if let Some(family) = a.family {
        let p = a
            .p
            .ok_or_else(|| Error::InvalidPlan("--p is required with --family".into()))?;
        if a.lambda.is_some() {
            return Err(Error::InvalidPlan("--family and --lambda exclude each other".into()));
        }
        let rho = family.density(p, a.q)?;
        return match a.quantity {
            Quantity::C4 => fourtangle_mixed(&rho),
            Quantity::C2Product => pair_concurrence_product(&rho),
            q => Err(Error::InvalidPlan(format!(
                "{} is a chain quantity",
                q.to_possible_value().expect("named").get_name()
            ))),
        };
    }
    let lambda = a
        .lambda
        .ok_or_else(|| Error::InvalidPlan("give --family for a mixture or --lambda for a chain".into()))?;
    let cfg = ChainConfig::new(lambda, a.gamma, a.sites, a.backend)?;
    match a.quantity {
        Quantity::Tau1 | Quantity::Residual => {
            let report = residual_report(&ground(&cfg, &[], true)?)?;
            Ok(if a.quantity == Quantity::Tau1 { report.tau1 } else { report.residual })
        }
        q => {
            let m = quad_measures(&ground(&cfg, &[a.quad], false)?, &a.quad)?;
            Ok(match q {
                Quantity::C4 => m.c4,
                Quantity::C2First => m.c2_first,
                Quantity::C2Last => m.c2_last,
                _ => m.c2_product(),
            })
        }
    }
}

/// Plan from the optional file, then the flags.
fn build_plan(a: &ScanArgs, forced: Option<SweepMode>) -> Result<SweepPlan> {
    let mut plan = match &a.plan {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidPlan(format!("{}: {e}", path.display())))?;
            SweepPlan::from_text(&text)?
        }
        None => SweepPlan::for_mode(forced.or(a.mode).unwrap_or(SweepMode::ChainC4)),
    };
    if let Some(mode) = forced.or(a.mode) {
        plan.mode = mode;
    }
    if let Some(f) = a.family {
        plan.family = f;
    }
    if let Some(g) = a.p {
        plan.p = g;
    }
    if let Some(g) = a.q {
        plan.q = g;
    }
    if let Some(g) = a.lambda {
        plan.lambda = g;
    }
    if let Some(g) = a.gamma {
        plan.gamma = g;
    }
    if let Some(q) = &a.quads {
        plan.quads = parse_quads(q)?;
    }
    if let Some(b) = a.backend {
        plan.backend = b;
    }
    if let Some(n) = a.sites {
        plan.sites = n;
    }
    if let Some(o) = &a.output {
        plan.output = Some(o.clone());
    }
    plan.validate()?;
    Ok(plan)
}

fn scan(
    a: &ScanArgs,
    forced: Option<SweepMode>,
    par: Parallelism,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let plan = build_plan(a, forced)?;
    let rows = run_sweep_with(&plan, RunOptions { parallelism: par, cache: !a.no_cache })?;
    write_rows(&plan, &rows, out)?;
    let gated = matches!(plan.mode, SweepMode::ChainC4 | SweepMode::ChainResidual)
        && plan.backend == Backend::FreeFermion;
    let samples = a.gate.unwrap_or(if gated { DEFAULT_GATE_SAMPLES } else { 0 });
    if samples > 0 {
        let gate = convergence_gate(&plan, samples, par)?;
        writeln!(
            err,
            "convergence gate: max change {:e} under N -> 2N over {} points (worst at lambda = {})",
            gate.worst,
            gate.lambdas.len(),
            gate.worst_lambda
        )?;
        if !gate.passed() {
            log::warn!("convergence gate exceeded {:e}", super::run::GATE_TOLERANCE);
        }
    }
    Ok(())
}

fn write_rows(plan: &SweepPlan, rows: &[SweepRow], out: &mut dyn Write) -> Result<()> {
    match &plan.output {
        Some(path) => super::csv::emit_csv(plan, rows, path),
        None => {
            out.write_all(render_csv(plan.mode, rows, Some(&plan.echo()))?.as_bytes())?;
            Ok(())
        }
    }
}

fn validate(a: &ValidateArgs, par: Parallelism, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut plan = SweepPlan::for_mode(SweepMode::Validate);
    plan.gamma = a.gamma;
    plan.lambda = a.lambda;
    plan.sites = a.sites;
    plan.quads = parse_quads(&a.quad)?;
    plan.output = a.output.clone();
    let rows = run_sweep_with(&plan, RunOptions { parallelism: par, cache: true })?;
    if let Some(path) = &plan.output {
        super::csv::emit_csv(&plan, &rows, path)?;
    }
    let worst = rows
        .iter()
        .map(|r| match r {
            SweepRow::Validate { deviation, .. } => *deviation,
            _ => 0.0,
        })
        .fold(0.0, f64::max);
    writeln!(out, "{worst:e}")?;
    if worst > VALIDATE_TOLERANCE {
        writeln!(err, "deviation exceeds {VALIDATE_TOLERANCE:e}")?;
        return Err(Error::BackendInconsistency { eigenvalue: worst });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fourtangle").chain(args.iter().copied());
        let code = cli_run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn factorizing() {
        let (code, out, _) = run(&["factorizing", "--gamma", "0.6"]);
        assert_eq!(code, 0);
        assert!((out.trim().parse::<f64>().unwrap() - 1.25).abs() < 1e-12);
        assert_eq!(run(&["factorizing", "--gamma", "2"]).0, 2);
    }

    #[test]
    fn measure_mixture() {
        let (code, out, _) = run(&["measure", "c4", "--family", "ghz-w", "--p", "0.3"]);
        assert_eq!(code, 0);
        assert!((out.trim().parse::<f64>().unwrap() - 0.3).abs() < 1e-10);
        assert_eq!(run(&["measure", "tau1", "--family", "ghz-w", "--p", "0.3"]).0, 2);
        assert_eq!(run(&["measure", "c4", "--family", "ghz-w"]).0, 2);
        assert_eq!(run(&["measure", "c4", "--family", "nope", "--p", "0.3"]).0, 2);
    }

    #[test]
    fn measure_chain() {
        let (code, out, _) = run(&["measure", "c2-first", "--lambda", "0", "--sites", "20"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim().parse::<f64>().unwrap(), 0.0);
        let (code, _, _) = run(&["measure", "c4", "--lambda", "1", "--sites", "40", "--backend", "ed"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&[]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["scan", "--lambda", "1:0:0.1"]).0, 2);
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("factorizing"));
    }

    #[test]
    fn validate_prints_deviation() {
        let (code, out, _) = run(&["validate", "--gamma", "1", "--lambda", "0.5", "--n", "10", "--quad", "1,1,1"]);
        assert_eq!(code, 0);
        assert!(out.trim().parse::<f64>().unwrap() <= 1e-8);
    }

    #[test]
    fn scan_to_stdout() {
        let (code, out, _) = run(&["scan", "--mode", "mixture-rank2", "--p", "0:1:0.5"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "# plan: mode=mixture-rank2 family=ghz-w p=0:1:0.5");
        assert_eq!(lines[1], "p,c4,c2_product");
        assert_eq!(lines.len(), 5);
    }
}
