//! Continuum problems on a rectangle and their lattice approximations.
//!
//! A grid of scale `h` identifies cochains with step functions. Right sides
//! are discretized by cell averages, the lattice equation is solved with the
//! potential scaled by `h`, and the resulting step field is compared with the
//! continuum solution.

pub mod problem;
pub mod quadrature;
pub mod step;
pub mod study;

pub use problem::{ContinuumProblem, Domain, BUILTIN_PROBLEMS};
pub use quadrature::{discretize_oneform, discretize_scalar, CellQuadrature};
pub use step::{w_norm, StepField, StepOneForm};
pub use study::{
    convergence_study, solve_dirichlet_h, ConvergenceRow, HSolution, LevelFailure, Study, StudyOptions,
};
