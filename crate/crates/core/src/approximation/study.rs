//! h-scaled Dirichlet solves and refinement studies.

use log::info;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::problem::ContinuumProblem;
use super::quadrature::{discretize_oneform_with, discretize_scalar_with, CellQuadrature, DEFAULT_ORDER};
use super::step::{w_norm, StepField};
use crate::cochain::Cochain0;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::magnetic::MagneticPotential;
use crate::solver::{assemble, solve_with, Method, SolveOptions, SolveReport};

/// Sample points per side for the Steklov error.
const STEKLOV_SAMPLES: usize = 33;

/// Output of [`solve_dirichlet_h`].
#[derive(Clone, Debug)]
pub struct HSolution {
    pub field: StepField,
    pub report: SolveReport,
    /// Cell averages `f̂` of the right side.
    pub rhs: Cochain0,
    /// Cell averages of `A`, before the factor `h`.
    pub potential: MagneticPotential,
}

/// Solves `δd phi - ihA*dphi + ihδ(A phi) + h^2 A*A phi = h^2 f̂`, i.e.
/// `-Δ_{hA} phi = h^2 f̂` on the lattice, and returns `phi^h`.
pub fn solve_dirichlet_h(p: &ContinuumProblem, grid: &GridSpec, opts: SolveOptions) -> Result<HSolution> {
    solve_dirichlet_h_with(p, grid, opts, &CellQuadrature::default())
}

pub fn solve_dirichlet_h_with(
    p: &ContinuumProblem,
    grid: &GridSpec,
    opts: SolveOptions,
    quad: &CellQuadrature,
) -> Result<HSolution> {
    if !p.domain().matches(grid) {
        return Err(Error::InvalidGrid(format!(
            "grid [{}, {}] x [{}, {}] does not cover the problem domain {:?}",
            grid.a1,
            grid.a2,
            grid.b1,
            grid.b2,
            p.domain()
        )));
    }
    let h = grid.h;
    let rhs = discretize_scalar_with(|x, y| p.f(x, y), grid, quad)?;
    let potential = discretize_oneform_with(|x, y| p.potential(x, y).0, |x, y| p.potential(x, y).1, grid, quad)?;
    let l = assemble(grid, &potential.scaled(h))?;
    let report = solve_with(&l, &rhs.scale(Complex64::new(h * h, 0.0)), opts)?;
    let field = StepField::from_cochain(&report.solution);
    Ok(HSolution { field, report, rhs, potential })
}

#[derive(Clone, Copy, Debug)]
pub struct StudyOptions {
    pub solve: SolveOptions,
    /// Gauss–Legendre nodes per direction for right sides and error integrals.
    pub quadrature_order: usize,
    /// Compute levels concurrently; rows keep level order.
    pub parallel: bool,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self { solve: SolveOptions::default(), quadrature_order: DEFAULT_ORDER, parallel: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub h: f64,
    /// `||phi^h - phi||_{L^2(Omega)}`; absent without an exact solution.
    pub l2_error: Option<f64>,
    /// `log(e_prev / e) / log(h_prev / h)`; absent on the first row.
    pub order: Option<f64>,
    pub w_norm: f64,
    /// `||phi^h||_W / (||Re f||_{L^2} + ||Im f||_{L^2})`.
    pub ratio_bound: f64,
    /// Max over a sample lattice of `|J^h phi^h - phi|`.
    pub steklov_error: Option<f64>,
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
}

/// A level that failed; rows before it are still reported.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelFailure {
    #[serde(rename = "N")]
    pub n: usize,
    pub message: String,
    pub numerical: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Study {
    pub problem: String,
    pub rows: Vec<ConvergenceRow>,
    pub failure: Option<LevelFailure>,
}

impl Study {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

fn l2_split_norms(p: &ContinuumProblem, grid: &GridSpec, quad: &CellQuadrature) -> Result<(f64, f64)> {
    let (mut re, mut im) = (0.0, 0.0);
    let h2 = grid.h * grid.h;
    for i in 0..grid.dim() {
        let (k, s) = grid.point(i);
        let z = quad.cell_average(grid, k, s, |x, y| {
            let f = p.f(x, y);
            Complex64::new(f.re * f.re, f.im * f.im)
        })?;
        re += h2 * z.re;
        im += h2 * z.im;
    }
    Ok((re.sqrt(), im.sqrt()))
}

/// `||phi^h - phi||_{L^2(Omega)}` by per-cell quadrature.
pub fn l2_error(field: &StepField, exact: impl Fn(f64, f64) -> Complex64, quad: &CellQuadrature) -> Result<f64> {
    let grid = *field.grid();
    let h2 = grid.h * grid.h;
    let mut acc = 0.0;
    for i in 0..grid.dim() {
        let (k, s) = grid.point(i);
        let c = field.cell(k, s);
        acc += h2 * quad.cell_average(&grid, k, s, |x, y| Complex64::new((c - exact(x, y)).norm_sqr(), 0.0))?.re;
    }
    Ok(acc.sqrt())
}

/// Max of `|J^h phi^h - phi|` over a uniform lattice of sample points on the closed rectangle.
pub fn steklov_error(field: &StepField, exact: impl Fn(f64, f64) -> Complex64) -> f64 {
    let g = field.grid();
    let last = (STEKLOV_SAMPLES - 1) as f64;
    let mut worst: f64 = 0.0;
    for j in 0..STEKLOV_SAMPLES {
        let y = g.b1 + (g.b2 - g.b1) * j as f64 / last;
        for i in 0..STEKLOV_SAMPLES {
            let x = g.a1 + (g.a2 - g.a1) * i as f64 / last;
            worst = worst.max((field.steklov_eval(x, y) - exact(x, y)).norm());
        }
    }
    worst
}

fn run_level(p: &ContinuumProblem, n: usize, opts: &StudyOptions) -> Result<ConvergenceRow> {
    let grid = p.domain().grid(n)?;
    let quad = CellQuadrature::new(opts.quadrature_order)?;
    let sol = solve_dirichlet_h_with(p, &grid, opts.solve, &quad)?;
    let (l2_error, steklov_error) = if p.has_exact() {
        let exact = |x, y| p.exact(x, y).expect("checked above");
        (Some(l2_error(&sol.field, exact, &quad)?), Some(steklov_error(&sol.field, exact)))
    } else {
        (None, None)
    };
    let w = w_norm(&sol.report.solution);
    let (fr, fi) = l2_split_norms(p, &grid, &quad)?;
    info!(
        "level N={n}: iterations={} residual={:e} l2_error={:?}",
        sol.report.iterations, sol.report.relative_residual, l2_error
    );
    Ok(ConvergenceRow {
        n: grid.n,
        m: grid.m,
        h: grid.h,
        l2_error,
        order: None,
        w_norm: w,
        ratio_bound: w / (fr + fi).max(f64::MIN_POSITIVE),
        steklov_error,
        method: sol.report.method,
        iterations: sol.report.iterations,
        residual: sol.report.relative_residual,
    })
}

/// Solves `p` on each level `N` (square cells, `M` from the aspect ratio) and
/// tabulates errors and norms. A failing level stops the study; the rows
/// before it are kept and the failure is recorded.
pub fn convergence_study(p: &ContinuumProblem, levels: &[usize], opts: StudyOptions) -> Result<Study> {
    if levels.is_empty() {
        return Err(Error::InvalidArgument("no levels given".into()));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("levels must be strictly increasing, got {levels:?}")));
    }
    for &n in levels {
        p.domain().grid(n)?;
    }
    let results: Vec<Result<ConvergenceRow>> = if opts.parallel {
        levels.par_iter().map(|&n| run_level(p, n, &opts)).collect()
    } else {
        let mut out = Vec::with_capacity(levels.len());
        for &n in levels {
            let r = run_level(p, n, &opts);
            let failed = r.is_err();
            out.push(r);
            if failed {
                break;
            }
        }
        out
    };

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
    let mut failure = None;
    for (&n, r) in levels.iter().zip(results) {
        match r {
            Ok(mut row) => {
                if let (Some(prev), Some(e)) = (rows.last(), row.l2_error) {
                    if let Some(e0) = prev.l2_error {
                        row.order = Some((e0 / e).ln() / (prev.h / row.h).ln());
                    }
                }
                rows.push(row);
            }
            Err(err) => {
                failure = Some(LevelFailure { n, message: err.to_string(), numerical: err.is_numerical() });
                break;
            }
        }
    }
    Ok(Study { problem: p.name().to_string(), rows, failure })
}
