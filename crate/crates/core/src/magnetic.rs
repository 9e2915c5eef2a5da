//! Magnetic deformation of the lattice calculus.
//!
//! A real 1-form `A` acts on 0-forms by cup multiplication,
//! `d_A = d + i A`, `δ_A = δ - i A*`, and the discrete magnetic Laplacian is
//! `-Δ_A = δ_A d_A`. All inputs are read under the Dirichlet conditions, so a
//! 0-form is always taken to vanish off the interior indices.

use num_complex::Complex64;

use crate::cochain::{ensure_same_grid, Cochain0, Cochain1};
use crate::components::Components;
use crate::error::{Error, Result};
use crate::grid::GridSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real 1-form `A = sum A^1_{k,s} e_1^{k,s} + A^2_{k,s} e_2^{k,s}` with
/// components on `1..=N x 1..=M` and zero everywhere else.
#[derive(Clone, Debug, PartialEq)]
pub struct MagneticPotential {
    grid: GridSpec,
    a1: Vec<f64>,
    a2: Vec<f64>,
}

impl MagneticPotential {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, a1: vec![0.0; grid.dim()], a2: vec![0.0; grid.dim()] }
    }

    pub fn constant(grid: GridSpec, a1: f64, a2: f64) -> Self {
        Self { grid, a1: vec![a1; grid.dim()], a2: vec![a2; grid.dim()] }
    }

    pub fn from_fn<F: FnMut(i64, i64) -> (f64, f64)>(grid: GridSpec, mut f: F) -> Self {
        let (a1, a2) = (0..grid.dim())
            .map(|i| {
                let (k, s) = grid.point(i);
                f(k, s)
            })
            .unzip();
        Self { grid, a1, a2 }
    }

    /// Components in row-major (k fastest) order.
    pub fn from_vecs(grid: GridSpec, a1: Vec<f64>, a2: Vec<f64>) -> Result<Self> {
        if a1.len() != grid.dim() || a2.len() != grid.dim() {
            return Err(Error::InvalidArgument(format!(
                "potential needs {} components per direction",
                grid.dim()
            )));
        }
        Ok(Self { grid, a1, a2 })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn a1(&self, k: i64, s: i64) -> f64 {
        if self.grid.contains(k, s) {
            self.a1[self.grid.index(k, s)]
        } else {
            0.0
        }
    }

    #[inline]
    pub fn a2(&self, k: i64, s: i64) -> f64 {
        if self.grid.contains(k, s) {
            self.a2[self.grid.index(k, s)]
        } else {
            0.0
        }
    }

    /// `c * A`, used for the h-scaled operator.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            a1: self.a1.iter().map(|a| c * a).collect(),
            a2: self.a2.iter().map(|a| c * a).collect(),
        }
    }

    /// `A` as a complex 1-form on the extended index set.
    pub fn to_cochain(&self) -> Cochain1 {
        Cochain1::from_fn(self.grid, |k, s| {
            (Complex64::new(self.a1(k, s), 0.0), Complex64::new(self.a2(k, s), 0.0))
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.a1.iter().chain(&self.a2).map(|a| a.abs()).fold(0.0, f64::max)
    }
}

/// `A phi = phi ∪ A = (phi_{k,s} A^1_{k,s}, phi_{k,s} A^2_{k,s})`.
pub fn mul_a(phi: &Cochain0, a: &MagneticPotential) -> Result<Cochain1> {
    ensure_same_grid(phi.grid(), a.grid())?;
    let grid = *phi.grid();
    Ok(Cochain1::from_fn(grid, |k, s| {
        let p = if grid.contains(k, s) { phi.get(k, s) } else { Complex64::new(0.0, 0.0) };
        (p * a.a1(k, s), p * a.a2(k, s))
    }))
}

/// `(A* omega)_{k,s} = A^1_{k,s} u_{k,s} + A^2_{k,s} v_{k,s}` on the interior.
pub fn adjoint_a(w: &Cochain1, a: &MagneticPotential) -> Result<Cochain0> {
    ensure_same_grid(w.grid(), a.grid())?;
    Ok(Cochain0::from_fn(*w.grid(), |k, s| {
        a.a1(k, s) * w.u(k, s) + a.a2(k, s) * w.v(k, s)
    }))
}

/// `d_A phi = d phi + i phi ∪ A` on `0..=N x 0..=M`.
pub fn d_a(phi: &Cochain0, a: &MagneticPotential) -> Result<Cochain1> {
    ensure_same_grid(phi.grid(), a.grid())?;
    let p = phi.restrict_to_domain();
    let grid = *phi.grid();
    let (ks, ss) = grid.extended();
    let u = Components::from_fn(ks.clone(), ss.clone(), |k, s| {
        p.get(k + 1, s) - p.get(k, s) + I * a.a1(k, s) * p.get(k, s)
    });
    let v = Components::from_fn(ks, ss, |k, s| {
        p.get(k, s + 1) - p.get(k, s) + I * a.a2(k, s) * p.get(k, s)
    });
    Ok(Cochain1::from_components(grid, u, v))
}

/// `δ_A omega = δ omega - i A* omega`.
pub fn delta_a(w: &Cochain1, a: &MagneticPotential) -> Result<Cochain0> {
    ensure_same_grid(w.grid(), a.grid())?;
    Ok(Cochain0::from_fn(*w.grid(), |k, s| {
        -(w.u(k, s) - w.u(k - 1, s)) - (w.v(k, s) - w.v(k, s - 1))
            - I * (a.a1(k, s) * w.u(k, s) + a.a2(k, s) * w.v(k, s))
    }))
}

/// `-Δ_A phi = δ_A d_A phi`.
pub fn magnetic_laplacian(phi: &Cochain0, a: &MagneticPotential) -> Result<Cochain0> {
    delta_a(&d_a(phi, a)?, a)
}

/// The expanded form `-Δ phi - i A* d phi + i δ(A phi) + A* A phi`.
pub fn magnetic_laplacian_expanded(phi: &Cochain0, a: &MagneticPotential) -> Result<Cochain0> {
    ensure_same_grid(phi.grid(), a.grid())?;
    let p = phi.restrict_to_domain();
    let lap = p.laplace();
    let a_star_d = adjoint_a(&p.d(), a)?;
    let delta_a_phi = mul_a(&p, a)?.codifferential();
    let a_star_a = adjoint_a(&mul_a(&p, a)?, a)?;
    lap.sub(&a_star_d.scale(I))?
        .add(&delta_a_phi.scale(I))?
        .add(&a_star_a)
}
