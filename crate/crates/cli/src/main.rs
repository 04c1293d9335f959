use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use delta_shells::harness::{
    self, crosscheck_csv, run_asymptotics, run_crosscheck, run_sweep, run_uniform_check, solve_at, solve_limit,
    sweep_csv, uniform_csv, AsymptoticsInput, ProblemKind, ProblemSpec, Thresholds,
};

#[derive(Parser)]
#[command(name = "delta-shells", version, about = "Eigenvalues of two close delta shells and their ε → 0 asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a one-dimensional problem at its `epsilon` (default 0).
    Onedim(SolveArgs),
    /// Solve a concentric circle or sphere problem at its `epsilon`.
    Radial(SolveArgs),
    /// Solve a curve problem with the boundary-integral solver.
    Curve(SolveArgs),
    /// Eigenvalues over an ε ladder, fitted against the predicted slope.
    Sweep(SweepArgs),
    /// Compare the radial and boundary-integral solvers on a circle.
    Crosscheck(CrosscheckArgs),
    /// Evaluate first-order slopes from serialized trace bundles.
    Asymptotics(CommonArgs),
    /// Convergence rates of traces and eigenvalues.
    Uniform(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Input JSON file.
    #[arg(long)]
    spec: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; inferred from the `--out` extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Boundary or angular trace nodes.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated shell distances.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Relative tolerance on the fitted slope.
    #[arg(long)]
    tol_slope: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated shell distances (0 allowed).
    #[arg(long, value_delimiter = ',', default_value = "0,0.01")]
    eps: Vec<f64>,
    #[arg(long, default_value_t = harness::DEFAULT_NODES)]
    nodes: usize,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_spec(path: &Path, nodes: Option<usize>) -> Result<ProblemSpec> {
    Ok(ProblemSpec::from_json(&read(path)?)?.with_nodes(nodes))
}

fn format_of(common: &CommonArgs, default: Format) -> Format {
    common.format.unwrap_or_else(|| match common.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        _ => default,
    })
}

fn emit(common: &CommonArgs, text: &str) -> Result<()> {
    match &common.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn status(pass: bool, what: &str) -> ExitCode {
    eprintln!("{} {what}", if pass { "PASS" } else { "FAIL" });
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn solve(args: &SolveArgs, kind: ProblemKind) -> Result<ExitCode> {
    let spec = load_spec(&args.common.spec, args.nodes)?;
    if spec.kind != kind {
        bail!("spec kind {:?} does not match the subcommand", spec.kind);
    }
    let eps = spec.epsilon.unwrap_or(0.0);
    let limit = solve_limit(&spec)?;
    let text = if eps == 0.0 {
        match format_of(&args.common, Format::Json) {
            Format::Json => json(&limit)?,
            Format::Csv => format!(
                "epsilon,lambda_re,lambda_im,kappa_re,kappa_im,slope_re,slope_im\n{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                0.0, limit.lambda.re, limit.lambda.im, limit.kappa.re, limit.kappa.im, limit.predicted_slope.re, limit.predicted_slope.im
            ),
        }
    } else {
        let row = solve_at(&spec, eps, limit.kappa)?;
        match format_of(&args.common, Format::Json) {
            Format::Json => json(&row)?,
            Format::Csv => format!(
                "epsilon,lambda_re,lambda_im,kappa_re,kappa_im,residual,solver\n{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                row.epsilon, row.lambda.re, row.lambda.im, row.kappa.re, row.kappa.im, row.residual, row.solver
            ),
        }
    };
    emit(&args.common, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn thresholds(tol_slope: Option<f64>) -> Result<Thresholds> {
    let mut t = Thresholds::default();
    if let Some(tol) = tol_slope {
        if !(tol > 0.0) {
            bail!("--tol-slope must be positive");
        }
        t.slope_rel = tol;
    }
    Ok(t)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Onedim(a) => solve(&a, ProblemKind::Onedim),
        Command::Radial(a) => solve(&a, ProblemKind::Radial),
        Command::Curve(a) => solve(&a, ProblemKind::Curve),
        Command::Sweep(a) => {
            let spec = load_spec(&a.common.spec, a.nodes)?;
            let eps = match a.eps.clone() {
                Some(e) => e,
                None => spec.default_epsilons()?,
            };
            let report = run_sweep(&spec, &eps, thresholds(a.tol_slope)?)?;
            let text = match format_of(&a.common, Format::Csv) {
                Format::Csv => sweep_csv(&report),
                Format::Json => json(&report)?,
            };
            emit(&a.common, &text)?;
            for f in &report.failures {
                eprintln!("row ε = {:e} failed: {}", f.epsilon, f.error);
            }
            if let (Some(fit), Some(p)) = (&report.fitted, report.predicted_slope) {
                eprintln!(
                    "fitted slope {} predicted {} rel error {:.3e} remainder order {:?}",
                    fit.coefficients[1], p, report.slope_rel_error.unwrap_or(f64::NAN), report.remainder_order
                );
            }
            Ok(status(report.passed(), "sweep"))
        }
        Command::Crosscheck(a) => {
            let spec = load_spec(&a.common.spec, None)?;
            let report = run_crosscheck(&spec, &a.eps, a.nodes)?;
            let text = match format_of(&a.common, Format::Csv) {
                Format::Csv => crosscheck_csv(&report),
                Format::Json => json(&report)?,
            };
            emit(&a.common, &text)?;
            eprintln!("max discrepancy {:.3e} (tolerance {:e})", report.max_discrepancy, report.tolerance);
            Ok(status(report.pass, "crosscheck"))
        }
        Command::Asymptotics(a) => {
            let input: AsymptoticsInput =
                serde_json::from_str(&read(&a.spec)?).context("parsing trace bundles")?;
            let out = run_asymptotics(&input)?;
            let text = match format_of(&a, Format::Json) {
                Format::Json => json(&out)?,
                Format::Csv => {
                    let mut s = String::from("slope_re,slope_im\n");
                    for v in &out.slopes {
                        s.push_str(&format!("{:.16e},{:.16e}\n", v.re, v.im));
                    }
                    s
                }
            };
            emit(&a, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Uniform(a) => {
            let spec = load_spec(&a.common.spec, a.nodes)?;
            let eps = match a.eps.clone() {
                Some(e) => e,
                None => spec.default_epsilons()?,
            };
            let report = run_uniform_check(&spec, &eps, thresholds(a.tol_slope)?)?;
            let text = match format_of(&a.common, Format::Csv) {
                Format::Csv => uniform_csv(&report),
                Format::Json => json(&report)?,
            };
            emit(&a.common, &text)?;
            eprintln!(
                "trace order {:?} eigenvalue order {:?}",
                report.trace_order, report.eigenvalue_order
            );
            Ok(status(report.pass, "uniform"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
