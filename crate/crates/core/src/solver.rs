//! Assembly and solution of the Dirichlet problem `-Δ_A phi = f`.
//!
//! Unknowns are ordered row-major with k fastest: `(k, s) -> (s-1) N + (k-1)`.
//! Every reduction runs in a fixed order, so results are reproducible for a
//! given build.

use std::fmt;
use std::io::Write;

use log::debug;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cochain::{ensure_same_grid, Cochain0};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::magnetic::MagneticPotential;

/// Largest dimension accepted by the dense paths.
pub const DENSE_LIMIT: usize = 4096;

/// Default relative-residual tolerance for conjugate gradients.
pub const DEFAULT_CG_TOL: f64 = 1e-10;

const TINY: f64 = 1e-300;

/// Anything that can apply a square complex matrix to a vector.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

/// Compressed sparse row storage.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl CsrMatrix {
    /// Builds from per-row `(col, value)` lists; columns are sorted per row.
    fn from_rows(rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.row(i)
            .find(|&(c, _)| c == j)
            .map_or(Complex64::new(0.0, 0.0), |(_, v)| v)
    }

    /// Coordinate triplets `(row, col, value)` in row order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in self.row(i) {
                acc += v * x[j];
            }
            *yi = acc;
        }
    }
}

/// `-Δ_A` restricted to the Dirichlet space, as a sparse Hermitian matrix.
#[derive(Clone, Debug)]
pub struct AssembledOperator {
    grid: GridSpec,
    potential: MagneticPotential,
    matrix: CsrMatrix,
}

/// Row of the operator at interior point `(k, s)`:
///
/// ```text
/// (4 + (A1_{k,s})² + (A2_{k,s})²) phi_{k,s}
///   - (1 + i A1_{k,s})   phi_{k+1,s} - (1 - i A1_{k-1,s}) phi_{k-1,s}
///   - (1 + i A2_{k,s})   phi_{k,s+1} - (1 - i A2_{k,s-1}) phi_{k,s-1}
/// ```
fn stencil(a: &MagneticPotential, k: i64, s: i64) -> [(i64, i64, Complex64); 5] {
    let (a1, a2) = (a.a1(k, s), a.a2(k, s));
    // listed in ascending unknown order so sparse and matrix-free sums agree bitwise
    [
        (k, s - 1, Complex64::new(-1.0, a.a2(k, s - 1))),
        (k - 1, s, Complex64::new(-1.0, a.a1(k - 1, s))),
        (k, s, Complex64::new(4.0 + a1 * a1 + a2 * a2, 0.0)),
        (k + 1, s, Complex64::new(-1.0, -a1)),
        (k, s + 1, Complex64::new(-1.0, -a2)),
    ]
}

pub fn assemble(grid: &GridSpec, a: &MagneticPotential) -> Result<AssembledOperator> {
    ensure_same_grid(grid, a.grid())?;
    let rows = (0..grid.dim())
        .map(|i| {
            let (k, s) = grid.point(i);
            stencil(a, k, s)
                .into_iter()
                .filter(|&(kk, ss, _)| grid.contains(kk, ss))
                .map(|(kk, ss, v)| (grid.index(kk, ss), v))
                .collect()
        })
        .collect();
    Ok(AssembledOperator {
        grid: *grid,
        potential: a.clone(),
        matrix: CsrMatrix::from_rows(rows),
    })
}

impl AssembledOperator {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn potential(&self) -> &MagneticPotential {
        &self.potential
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn apply_cochain(&self, phi: &Cochain0) -> Result<Cochain0> {
        ensure_same_grid(&self.grid, phi.grid())?;
        let x = phi.to_vec();
        let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
        self.matrix.apply(&x, &mut y);
        Cochain0::from_vec(self.grid, y)
    }

    /// Largest `|L_ij - conj(L_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        self.matrix
            .triplets()
            .map(|(i, j, v)| (v - self.matrix.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Writes `row col re im` lines (0-based, row-major unknown order).
    pub fn write_coordinates<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, j, v) in self.matrix.triplets() {
            writeln!(out, "{i} {j} {:.16e} {:.16e}", v.re, v.im)?;
        }
        Ok(())
    }

    /// All eigenvalues in ascending order (dense path).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.dim() > DENSE_LIMIT {
            return Err(Error::TooLarge { dim: self.dim(), max: DENSE_LIMIT });
        }
        let eig = self.matrix.to_dense().symmetric_eigenvalues();
        let mut vals: Vec<f64> = eig.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }
}

impl LinearOperator for AssembledOperator {
    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.matrix.apply(x, y)
    }
}

/// Matrix-free application of the same stencil.
#[derive(Clone, Debug)]
pub struct StencilOperator {
    potential: MagneticPotential,
}

impl StencilOperator {
    pub fn new(potential: MagneticPotential) -> Self {
        Self { potential }
    }
}

impl LinearOperator for StencilOperator {
    fn dim(&self) -> usize {
        self.potential.grid().dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let grid = self.potential.grid();
        for (i, yi) in y.iter_mut().enumerate() {
            let (k, s) = grid.point(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (kk, ss, v) in stencil(&self.potential, k, s) {
                if grid.contains(kk, ss) {
                    acc += v * x[grid.index(kk, ss)];
                }
            }
            *yi = acc;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Cg,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Cg => "cg",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "cg" => Ok(Method::Cg),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

/// Tuning knobs for [`solve_with`].
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub method: Method,
    /// Relative residual target for cg.
    pub tol: f64,
    /// Defaults to `10 * N * M` when `None`.
    pub max_iter: Option<usize>,
    /// Diagonal (Jacobi) preconditioning for cg.
    pub jacobi: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { method: Method::Direct, tol: DEFAULT_CG_TOL, max_iter: None, jacobi: false }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Cochain0,
    pub method: Method,
    /// Zero for the direct path.
    pub iterations: usize,
    /// `||L phi - f|| / max(||f||, 1e-300)`.
    pub relative_residual: f64,
    /// `Re (phi, -Δ_A phi)_V`.
    pub energy: f64,
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

struct CgOutcome {
    x: Vec<Complex64>,
    iterations: usize,
}

/// Conjugate gradients for Hermitian positive-definite systems with the
/// `sum x conj(y)` inner product.
fn conjugate_gradient<L: LinearOperator>(
    op: &L,
    b: &[Complex64],
    tol: f64,
    max_iter: usize,
    diag: Option<&[f64]>,
) -> Result<CgOutcome> {
    let n = b.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(CgOutcome { x, iterations: 0 });
    }
    let precondition = |r: &[Complex64]| -> Vec<Complex64> {
        match diag {
            Some(d) => r.iter().zip(d).map(|(z, di)| z / di).collect(),
            None => r.to_vec(),
        }
    };
    let mut r = b.to_vec();
    let mut z = precondition(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z).re;
    let mut ap = vec![zero; n];
    let mut rel = 1.0;
    for it in 1..=max_iter {
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap).re;
        if pap <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rel = norm(&r) / b_norm;
        if rel <= tol {
            return Ok(CgOutcome { x, iterations: it });
        }
        z = precondition(&r);
        let rz_new = dot(&r, &z).re;
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged { iterations: max_iter, residual: rel })
}

/// Solves `L phi = f` and reports diagnostics.
pub fn solve(l: &AssembledOperator, f: &Cochain0, method: Method, tol: f64) -> Result<SolveReport> {
    solve_with(l, f, SolveOptions { method, tol, ..SolveOptions::default() })
}

pub fn solve_with(l: &AssembledOperator, f: &Cochain0, opts: SolveOptions) -> Result<SolveReport> {
    ensure_same_grid(l.grid(), f.grid())?;
    let b = f.to_vec();
    let (x, iterations) = match opts.method {
        Method::Direct => (solve_dense(l, &b)?, 0),
        Method::Cg => {
            if !(opts.tol > 0.0) {
                return Err(Error::InvalidArgument(format!("cg tolerance must be positive, got {}", opts.tol)));
            }
            let max_iter = opts.max_iter.unwrap_or(10 * l.dim());
            let diag: Option<Vec<f64>> = opts
                .jacobi
                .then(|| (0..l.dim()).map(|i| l.matrix.get(i, i).re).collect());
            let out = conjugate_gradient(l, &b, opts.tol, max_iter, diag.as_deref())?;
            (out.x, out.iterations)
        }
    };
    let solution = Cochain0::from_vec(*l.grid(), x)?;
    let lphi = l.apply_cochain(&solution)?;
    let relative_residual = lphi.sub(f)?.norm() / f.norm().max(TINY);
    let energy = solution.inner(&lphi)?.re;
    debug!(
        "solve {}x{} method={} iterations={} residual={:e}",
        l.grid().n,
        l.grid().m,
        opts.method,
        iterations,
        relative_residual
    );
    Ok(SolveReport { solution, method: opts.method, iterations, relative_residual, energy })
}

fn solve_dense(l: &AssembledOperator, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if l.dim() > DENSE_LIMIT {
        return Err(Error::TooLarge { dim: l.dim(), max: DENSE_LIMIT });
    }
    let chol = l.matrix.to_dense().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let x = chol.solve(&DVector::from_column_slice(b));
    Ok(x.iter().copied().collect())
}

/// Smallest eigenvalue of the assembled operator (dense Hermitian path).
pub fn min_eigenvalue(l: &AssembledOperator) -> Result<f64> {
    Ok(l.eigenvalues()?[0])
}

/// `||L phi - f||` in the interior norm.
pub fn residual_norm(l: &AssembledOperator, phi: &Cochain0, f: &Cochain0) -> Result<f64> {
    ensure_same_grid(phi.grid(), f.grid())?;
    Ok(l.apply_cochain(phi)?.sub(f)?.norm())
}
