use std::f64::consts::PI;

use maglap::approximation::{
    convergence_study, discretize_scalar, solve_dirichlet_h, w_norm, CellQuadrature, ContinuumProblem, Domain,
    StepField, StudyOptions, BUILTIN_PROBLEMS,
};
use maglap::{Cochain0, Error, GridSpec, SolveOptions};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #[test]
    fn step_norm_equals_scaled_cochain_norm(
        n in 1usize..12,
        m in 1usize..12,
        h in 0.05..3.0f64,
        seed in prop::collection::vec(-1.0..1.0f64, 288),
    ) {
        let g = GridSpec::new(n, m, -1.0, 0.5, -1.0 + n as f64 * h, 0.5 + m as f64 * h).unwrap();
        let phi = Cochain0::from_fn(g, |k, s| {
            let i = 2 * g.index(k, s);
            c(seed[i], seed[i + 1])
        });
        let field = StepField::from_cochain(&phi);
        let expected = h * phi.norm();
        prop_assert!((field.l2_norm_domain() - expected).abs() <= 1e-12 * expected.max(1e-300));
        prop_assert!((field.l2_norm() - expected).abs() <= 1e-12 * expected.max(1e-300));
        let wsum = w_norm(&phi);
        prop_assert!((field.w_norm() - wsum).abs() <= 1e-12 * wsum.max(1e-300));
        prop_assert!(field.l2_norm_domain() <= field.w_norm() * (n.max(m) as f64 * h).max(1.0));
    }
}

#[test]
fn step_field_is_piecewise_constant() {
    let g = GridSpec::new(4, 2, 0.0, 0.0, 2.0, 1.0).unwrap();
    let phi = Cochain0::from_fn(g, |k, s| c(k as f64, s as f64));
    let f = StepField::from_cochain(&phi);
    assert_eq!(f.eval(0.1, 0.1), c(1.0, 1.0));
    assert_eq!(f.eval(1.9, 0.9), c(4.0, 2.0));
    assert_eq!(f.eval(2.1, 0.5), c(0.0, 0.0));
    assert_eq!(f.eval(-0.1, 0.5), c(0.0, 0.0));
}

#[test]
fn cell_averages_of_polynomials_are_exact() {
    let g = GridSpec::new(3, 3, 0.0, 0.0, 1.5, 1.5).unwrap();
    let f = |x: f64, y: f64| c(x * x * y, x - y * y * y);
    let avg = discretize_scalar(f, &g).unwrap();
    let h = 0.5;
    for k in 1..=3 {
        for s in 1..=3 {
            let (x0, y0) = ((k - 1) as f64 * h, (s - 1) as f64 * h);
            let (x1, y1) = (x0 + h, y0 + h);
            let ix2 = (x1.powi(3) - x0.powi(3)) / 3.0 / h;
            let iy = (y1 * y1 - y0 * y0) / 2.0 / h;
            let iy3 = (y1.powi(4) - y0.powi(4)) / 4.0 / h;
            let ix = (x1 * x1 - x0 * x0) / 2.0 / h;
            let exact = c(ix2 * iy, ix - iy3);
            assert!((avg.get(k, s) - exact).norm() < 1e-13);
        }
    }
    assert_eq!(CellQuadrature::new(4).unwrap().order(), 4);
}

#[test]
fn builtins_have_exact_solutions() {
    for name in BUILTIN_PROBLEMS {
        let p = ContinuumProblem::builtin(name, Domain::new(0.0, 0.0, 2.0, 1.0).unwrap()).unwrap();
        assert!(p.has_exact(), "{name}");
    }
    assert!(ContinuumProblem::builtin("nope", Domain::unit()).is_err());
}

#[test]
fn solution_approaches_exact_on_rectangle() {
    let d = Domain::new(0.0, 0.0, 2.0, 1.0).unwrap();
    let p = ContinuumProblem::builtin("sine-product-linear-A", d).unwrap();
    let s = convergence_study(&p, &[4, 8, 16], StudyOptions::default()).unwrap();
    assert!(s.is_complete());
    let errs: Vec<f64> = s.rows.iter().map(|r| r.l2_error.unwrap()).collect();
    assert!(errs[1] < errs[0] && errs[2] < errs[1]);
    assert_eq!(s.rows[1].m, 4);
    assert!(s.rows[2].order.unwrap() > 0.8);
}

#[test]
fn domain_mismatch_is_rejected() {
    let p = ContinuumProblem::builtin("sine-product", Domain::unit()).unwrap();
    let g = GridSpec::new(4, 4, 0.0, 0.0, 2.0, 2.0).unwrap();
    assert!(matches!(solve_dirichlet_h(&p, &g, SolveOptions::default()), Err(Error::InvalidGrid(_))));
}

#[test]
fn a_zero_solution_satisfies_energy_identity() {
    let p = ContinuumProblem::new("bump", Domain::unit(), |x, y| c((PI * x).sin() * y, 0.0), |_, _| 0.0, |_, _| 0.0);
    let g = GridSpec::unit_square(10).unwrap();
    let sol = solve_dirichlet_h(&p, &g, SolveOptions::default()).unwrap();
    let phi = &sol.report.solution;
    let lhs = w_norm(phi).powi(2);
    let rhs = g.h * g.h * phi.inner(&sol.rhs).unwrap().re;
    assert!((lhs - rhs).abs() <= 1e-12 * rhs);
}
