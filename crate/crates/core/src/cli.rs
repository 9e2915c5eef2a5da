//! Command-line driver.
//!
//! Exit codes: 0 success, 1 usage or validation failure, 2 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::approximation::study::l2_error;
use crate::approximation::{convergence_study, solve_dirichlet_h, CellQuadrature, ContinuumProblem, Domain, StudyOptions};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::identities::run_identities;
use crate::magnetic::MagneticPotential;
use crate::report::{cochain_json, emit_json, emit_study, grid_json, json_float, ReportFormat};
use crate::solver::{assemble, Method, SolveOptions, DEFAULT_CG_TOL};

#[derive(Debug, Parser)]
#[command(name = "maglap", version, about = "Discrete magnetic Laplacian on the lattice cochain complex")]
struct Cli {
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Seeded residuals of the exact calculus identities.
    Identities(IdentitiesArgs),
    /// Solve one continuum problem on one grid.
    Solve(SolveArgs),
    /// Eigenvalues of the assembled operator on the unit lattice.
    Spectrum(SpectrumArgs),
    /// Refinement study against a manufactured solution.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Args)]
struct IdentitiesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the table here instead of stdout; `.json` selects JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolverFlags {
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
    #[arg(long)]
    tol: Option<f64>,
    /// Diagonal preconditioning for cg.
    #[arg(long)]
    jacobi: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Catalog problem name.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    problem: Option<String>,
    /// JSON file with keys domain, problem, N, M, method, tol.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    solver: SolverFlags,
    /// Also write the matrix as `row col re im` lines.
    #[arg(long)]
    matrix_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    /// Constant first component of the potential.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a1x: f64,
    /// Constant second component of the potential.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a2y: f64,
    /// Draw the potential uniformly from [-a, a] per component instead.
    #[arg(long)]
    random_potential: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[arg(long)]
    problem: String,
    /// Comma-separated, strictly increasing column counts.
    #[arg(long, value_delimiter = ',', required = true)]
    levels: Vec<usize>,
    #[command(flatten)]
    solver: SolverFlags,
    /// Rectangle as a1,b1,a2,b2 (default unit square).
    #[arg(long, value_delimiter = ',', num_args = 4, allow_negative_numbers = true)]
    domain: Option<Vec<f64>>,
    /// csv or json; defaults from the --out extension, else csv.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveConfig {
    domain: Option<Domain>,
    problem: String,
    #[serde(rename = "N")]
    n: Option<usize>,
    #[serde(rename = "M")]
    m: Option<usize>,
    method: Option<Method>,
    tol: Option<f64>,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

impl SolverFlags {
    fn options(&self, method: Option<Method>, tol: Option<f64>) -> Result<SolveOptions> {
        let tol = self.tol.or(tol).unwrap_or(DEFAULT_CG_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("--tol must be positive, got {tol}")));
        }
        Ok(SolveOptions {
            method: self.method.or(method).unwrap_or(Method::Direct),
            tol,
            max_iter: None,
            jacobi: self.jacobi,
        })
    }
}

fn write_out(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn format_for(out: Option<&Path>, explicit: Option<&str>) -> Result<ReportFormat> {
    match explicit {
        Some(f) => f.parse(),
        None => Ok(match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }),
    }
}

fn cmd_identities(a: &IdentitiesArgs, stdout: &mut dyn Write) -> Result<bool> {
    let grid = GridSpec::lattice(a.n, a.m.unwrap_or(a.n))?;
    let report = run_identities(&grid, a.trials, a.seed)?;
    let bytes = match format_for(a.out.as_deref(), None)? {
        ReportFormat::Json => emit_json(&json!({
            "grid": grid_json(&grid),
            "trials": a.trials,
            "seed": a.seed,
            "checks": report.checks.iter().map(|c| json!({
                "name": c.name,
                "max_residual": json_float(c.max_residual),
                "tolerance": json_float(c.tolerance),
                "samples": c.samples,
                "passed": c.passed(),
            })).collect::<Vec<_>>(),
        }))?,
        ReportFormat::Csv => {
            let mut s = String::from("identity,max_residual,tolerance,samples,status\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{},{:.3e},{:.0e},{},{}\n",
                    c.name,
                    c.max_residual,
                    c.tolerance,
                    c.samples,
                    if c.passed() { "ok" } else { "FAIL" }
                ));
            }
            s.into_bytes()
        }
    };
    write_out(a.out.as_deref(), &bytes, stdout)?;
    Ok(report.all_passed())
}

fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = match &a.config {
        Some(path) => Some(serde_json::from_str::<SolveConfig>(&fs::read_to_string(path)?)?),
        None => None,
    };
    let name = a
        .problem
        .clone()
        .or_else(|| config.as_ref().map(|c| c.problem.clone()))
        .ok_or_else(|| Error::InvalidArgument("no problem given".into()))?;
    let domain = config.as_ref().and_then(|c| c.domain).unwrap_or_else(Domain::unit);
    let domain = Domain::new(domain.a1, domain.b1, domain.a2, domain.b2)?;
    let n = a
        .n
        .or_else(|| config.as_ref().and_then(|c| c.n))
        .ok_or_else(|| Error::InvalidArgument("--n is required".into()))?;
    let m = match a.m.or_else(|| config.as_ref().and_then(|c| c.m)) {
        Some(m) => m,
        None => domain.rows_for(n)?,
    };
    let grid = domain.grid_nm(n, m)?;
    let opts = a.solver.options(config.as_ref().and_then(|c| c.method), config.as_ref().and_then(|c| c.tol))?;
    let problem = ContinuumProblem::builtin(&name, domain)?;
    let sol = solve_dirichlet_h(&problem, &grid, opts)?;

    if let Some(path) = &a.matrix_out {
        let l = assemble(&grid, &sol.potential.scaled(grid.h))?;
        let mut buf = Vec::new();
        l.write_coordinates(&mut buf)?;
        fs::write(path, buf)?;
    }
    let l2 = match problem.has_exact() {
        true => json_float(l2_error(&sol.field, |x, y| problem.exact(x, y).unwrap(), &CellQuadrature::default())?),
        false => Value::Null,
    };
    let value = json!({
        "problem": name,
        "grid": grid_json(&grid),
        "method": opts.method.to_string(),
        "iterations": sol.report.iterations,
        "residual": json_float(sol.report.relative_residual),
        "energy": json_float(sol.report.energy),
        "l2_error": l2,
        "solution": cochain_json(&sol.report.solution),
    });
    write_out(a.out.as_deref(), &emit_json(&value)?, stdout)
}

fn cmd_spectrum(a: &SpectrumArgs, stdout: &mut dyn Write) -> Result<()> {
    let grid = GridSpec::lattice(a.n, a.m.unwrap_or(a.n))?;
    let (pot, desc) = match a.random_potential {
        Some(amp) => {
            if !(amp >= 0.0 && amp.is_finite()) {
                return Err(Error::InvalidArgument(format!("--random-potential must be non-negative, got {amp}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let pot = MagneticPotential::from_fn(grid, |_, _| {
                (rng.random_range(-amp..=amp), rng.random_range(-amp..=amp))
            });
            (pot, json!({ "kind": "random", "amplitude": json_float(amp), "seed": a.seed }))
        }
        None => (
            MagneticPotential::constant(grid, a.a1x, a.a2y),
            json!({ "kind": "constant", "a1": json_float(a.a1x), "a2": json_float(a.a2y) }),
        ),
    };
    let l = assemble(&grid, &pot)?;
    let eig = l.eigenvalues()?;
    let value = json!({
        "grid": grid_json(&grid),
        "potential": desc,
        "min_eigenvalue": json_float(eig[0]),
        "eigenvalues": eig.iter().map(|&x| json_float(x)).collect::<Vec<_>>(),
    });
    write_out(a.out.as_deref(), &emit_json(&value)?, stdout)
}

fn cmd_convergence(a: &ConvergenceArgs, stdout: &mut dyn Write) -> Result<()> {
    let domain = match &a.domain {
        Some(d) => Domain::new(d[0], d[1], d[2], d[3])?,
        None => Domain::unit(),
    };
    let format = format_for(a.out.as_deref(), a.format.as_deref())?;
    let problem = ContinuumProblem::builtin(&a.problem, domain)?;
    let opts = StudyOptions { solve: a.solver.options(None, None)?, parallel: a.parallel, ..StudyOptions::default() };
    let study = convergence_study(&problem, &a.levels, opts)?;
    if !study.rows.is_empty() {
        write_out(a.out.as_deref(), &emit_study(&study, format)?, stdout)?;
    }
    match study.failure {
        None => Ok(()),
        Some(f) if f.numerical => Err(Error::Numerical(format!("level N={} failed: {}", f.n, f.message))),
        Some(f) => Err(Error::InvalidArgument(format!("level N={} failed: {}", f.n, f.message))),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    if cli.verbose {
        let _ = env_logger::Builder::new().filter_level(log::LevelFilter::Debug).try_init();
    }
    let outcome = match &cli.command {
        Command::Identities(a) => cmd_identities(a, stdout).and_then(|ok| {
            if ok {
                Ok(())
            } else {
                Err(Error::Numerical("identity residuals above tolerance".into()))
            }
        }),
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Spectrum(a) => cmd_spectrum(a, stdout),
        Command::Convergence(a) => cmd_convergence(a, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

/// [`run_with`] on the process arguments and standard streams.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
