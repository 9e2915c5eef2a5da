//! Discrete magnetic Laplacian on the two-dimensional lattice cochain complex.
//!
//! Cochains of degree 0, 1 and 2 live on the points, edges and cells of the
//! unit lattice `Z^2`. The crate provides the coboundary, cup product, Hodge
//! star and codifferential, the magnetically deformed operators
//! `d_A = d + iA` and `δ_A = δ - iA*`, a Dirichlet solver for
//! `-Δ_A phi = f`, and a refinement harness that compares lattice solutions
//! against continuum problems on a rectangle.

pub mod approximation;
pub mod calculus;
pub mod chain;
pub mod cli;
pub mod cochain;
pub mod components;
pub mod error;
pub mod grid;
pub mod identities;
pub mod magnetic;
pub mod report;
pub mod solver;

pub use chain::{boundary, pairing, BasisElement, Chain};
pub use cochain::{Cochain0, Cochain1, Cochain2, Form};
pub use components::Components;
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use magnetic::{
    adjoint_a, d_a, delta_a, magnetic_laplacian, magnetic_laplacian_expanded, mul_a,
    MagneticPotential,
};
pub use solver::{
    assemble, min_eigenvalue, residual_norm, solve, solve_with, AssembledOperator, LinearOperator,
    Method, SolveOptions, SolveReport, StencilOperator,
};
