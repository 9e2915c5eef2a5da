//! Continuum problems `-Δ_A phi = f` on a rectangle.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

pub type ScalarFn = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;
pub type RealFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Points sampled per side when checking the boundary condition.
const BOUNDARY_SAMPLES: usize = 64;
const BOUNDARY_TOL: f64 = 1e-10;

/// Names accepted by [`ContinuumProblem::builtin`].
pub const BUILTIN_PROBLEMS: [&str; 3] = ["sine-product", "sine-product-constant-A", "sine-product-linear-A"];

/// The rectangle `[a1, a2] x [b1, b2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
}

impl Domain {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64) -> Result<Self> {
        let d = Self { a1, b1, a2, b2 };
        if ![a1, b1, a2, b2].iter().all(|x| x.is_finite()) || a1 >= a2 || b1 >= b2 {
            return Err(Error::InvalidProblem(format!("degenerate domain {d:?}")));
        }
        Ok(d)
    }

    pub fn unit() -> Self {
        Self { a1: 0.0, b1: 0.0, a2: 1.0, b2: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.a2 - self.a1
    }

    pub fn height(&self) -> f64 {
        self.b2 - self.b1
    }

    /// Number of rows `M` giving square cells for `n` columns, if one exists.
    pub fn rows_for(&self, n: usize) -> Result<usize> {
        let m = (n as f64 * self.height() / self.width()).round();
        if m < 1.0 {
            return Err(Error::InvalidGrid(format!("{n} columns leave no room for a row")));
        }
        Ok(m as usize)
    }

    /// Grid with `n` columns and square cells.
    pub fn grid(&self, n: usize) -> Result<GridSpec> {
        GridSpec::new(n, self.rows_for(n)?, self.a1, self.b1, self.a2, self.b2)
    }

    pub fn grid_nm(&self, n: usize, m: usize) -> Result<GridSpec> {
        GridSpec::new(n, m, self.a1, self.b1, self.a2, self.b2)
    }

    /// Whether `grid` covers exactly this rectangle.
    pub fn matches(&self, grid: &GridSpec) -> bool {
        let tol = 1e-12 * self.width().max(self.height()).max(1.0);
        (grid.a1 - self.a1).abs() <= tol
            && (grid.b1 - self.b1).abs() <= tol
            && (grid.a2 - self.a2).abs() <= tol
            && (grid.b2 - self.b2).abs() <= tol
    }
}

/// Right side `f`, real potential `(A1, A2)` and optionally the exact
/// solution, all given as functions on the closed rectangle.
#[derive(Clone)]
pub struct ContinuumProblem {
    name: String,
    domain: Domain,
    f: ScalarFn,
    a1: RealFn,
    a2: RealFn,
    exact: Option<ScalarFn>,
}

impl fmt::Debug for ContinuumProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuumProblem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl ContinuumProblem {
    pub fn new<F, G, H>(name: impl Into<String>, domain: Domain, f: F, a1: G, a2: H) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
        G: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            domain,
            f: Arc::new(f),
            a1: Arc::new(a1),
            a2: Arc::new(a2),
            exact: None,
        }
    }

    /// Attaches the exact solution after checking that it vanishes on the boundary.
    pub fn with_exact<E>(mut self, exact: E) -> Result<Self>
    where
        E: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        let d = self.domain;
        for i in 0..BOUNDARY_SAMPLES {
            let t = i as f64 / (BOUNDARY_SAMPLES - 1) as f64;
            let x = d.a1 + t * d.width();
            let y = d.b1 + t * d.height();
            for (px, py) in [(x, d.b1), (x, d.b2), (d.a1, y), (d.a2, y)] {
                let z = exact(px, py);
                if !(z.norm() <= BOUNDARY_TOL) {
                    return Err(Error::InvalidProblem(format!(
                        "exact solution is {z} at boundary point ({px}, {py})"
                    )));
                }
            }
        }
        self.exact = Some(Arc::new(exact));
        Ok(self)
    }

    /// Manufactured problem from the catalog on the given rectangle.
    ///
    /// All three share `phi = sin(pi X / W) sin(pi Y / H)` with `X = x - a1`,
    /// `Y = y - b1`; the potentials are `0`, `(1, 2)` and `(-y, x)`.
    pub fn builtin(name: &str, domain: Domain) -> Result<Self> {
        let potential: (RealFn, RealFn) = match name {
            "sine-product" => (Arc::new(|_, _| 0.0), Arc::new(|_, _| 0.0)),
            "sine-product-constant-A" => (Arc::new(|_, _| 1.0), Arc::new(|_, _| 2.0)),
            "sine-product-linear-A" => (Arc::new(|_, y| -y), Arc::new(|x, _| x)),
            other => {
                return Err(Error::InvalidProblem(format!(
                    "unknown problem '{other}' (known: {})",
                    BUILTIN_PROBLEMS.join(", ")
                )))
            }
        };
        // both catalog potentials are divergence free
        Self::manufactured_sine(name, domain, potential, Arc::new(|_, _| 0.0))
    }

    fn manufactured_sine(
        name: &str,
        domain: Domain,
        (a1, a2): (RealFn, RealFn),
        div_a: RealFn,
    ) -> Result<Self> {
        let (x0, y0) = (domain.a1, domain.b1);
        let (al, be) = (PI / domain.width(), PI / domain.height());
        let phi = move |x: f64, y: f64| {
            Complex64::new((al * (x - x0)).sin() * (be * (y - y0)).sin(), 0.0)
        };
        let grad = move |x: f64, y: f64| {
            let (sx, cx) = (al * (x - x0)).sin_cos();
            let (sy, cy) = (be * (y - y0)).sin_cos();
            (al * cx * sy, be * sx * cy)
        };
        let (fa1, fa2) = (a1.clone(), a2.clone());
        // -Δ_A phi = -Δ phi - i (div A) phi - 2i A·∇phi + |A|^2 phi
        let f = move |x: f64, y: f64| {
            let p = phi(x, y);
            let (px, py) = grad(x, y);
            let (b1, b2) = (fa1(x, y), fa2(x, y));
            let i = Complex64::new(0.0, 1.0);
            p * (al * al + be * be) - i * div_a(x, y) * p - 2.0 * i * (b1 * px + b2 * py)
                + p * (b1 * b1 + b2 * b2)
        };
        Self {
            name: name.to_string(),
            domain,
            f: Arc::new(f),
            a1,
            a2,
            exact: None,
        }
        .with_exact(phi)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn f(&self, x: f64, y: f64) -> Complex64 {
        (self.f)(x, y)
    }

    pub fn potential(&self, x: f64, y: f64) -> (f64, f64) {
        ((self.a1)(x, y), (self.a2)(x, y))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact(&self, x: f64, y: f64) -> Option<Complex64> {
        self.exact.as_ref().map(|e| e(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `-div(∇phi + iA phi) - i A·(∇phi + iA phi)` by central differences.
    fn fd_operator(p: &ContinuumProblem, x: f64, y: f64) -> Complex64 {
        let e = 1e-4;
        let i = Complex64::new(0.0, 1.0);
        let phi = |x, y| p.exact(x, y).unwrap();
        let flux = |x: f64, y: f64| {
            let (a1, a2) = p.potential(x, y);
            let dx = (phi(x + e, y) - phi(x - e, y)) / (2.0 * e);
            let dy = (phi(x, y + e) - phi(x, y - e)) / (2.0 * e);
            (dx + i * a1 * phi(x, y), dy + i * a2 * phi(x, y))
        };
        let div = (flux(x + e, y).0 - flux(x - e, y).0) / (2.0 * e)
            + (flux(x, y + e).1 - flux(x, y - e).1) / (2.0 * e);
        let (a1, a2) = p.potential(x, y);
        let (w1, w2) = flux(x, y);
        -div - i * (a1 * w1 + a2 * w2)
    }

    #[test]
    fn manufactured_right_sides_match_finite_differences() {
        let domains = [Domain::unit(), Domain::new(-1.0, 0.5, 1.0, 1.5).unwrap()];
        for d in domains {
            for name in BUILTIN_PROBLEMS {
                let p = ContinuumProblem::builtin(name, d).unwrap();
                for &(tx, ty) in &[(0.3, 0.6), (0.71, 0.2), (0.5, 0.5), (0.05, 0.93)] {
                    let (x, y) = (d.a1 + tx * d.width(), d.b1 + ty * d.height());
                    let want = fd_operator(&p, x, y);
                    let got = p.f(x, y);
                    assert!((got - want).norm() < 1e-5 * (1.0 + want.norm()), "{name} at ({x},{y}): {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn unknown_problem_is_rejected() {
        assert!(matches!(
            ContinuumProblem::builtin("nope", Domain::unit()),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn exact_solution_must_vanish_on_boundary() {
        let p = ContinuumProblem::new("c", Domain::unit(), |_, _| Complex64::new(1.0, 0.0), |_, _| 0.0, |_, _| 0.0);
        assert!(p.clone().with_exact(|x, _| Complex64::new(x, 0.0)).is_err());
        assert!(p.with_exact(|x, y| Complex64::new(x * (1.0 - x) * y * (1.0 - y), 0.0)).is_ok());
    }

    #[test]
    fn domain_grids() {
        let d = Domain::new(0.0, 0.0, 2.0, 1.0).unwrap();
        let g = d.grid(8).unwrap();
        assert_eq!((g.n, g.m), (8, 4));
        assert!(d.matches(&g));
        assert!(!Domain::unit().matches(&g));
        assert!(d.grid_nm(8, 5).is_err());
        assert!(Domain::new(1.0, 0.0, 1.0, 1.0).is_err());
    }
}
