use maglap::{
    adjoint_a, d_a, delta_a, magnetic_laplacian, magnetic_laplacian_expanded, mul_a, Cochain0, Cochain1, Cochain2,
    GridSpec, MagneticPotential,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> impl Strategy<Value = GridSpec> {
    (1usize..=9, 1usize..=9).prop_map(|(n, m)| GridSpec::lattice(n, m).unwrap())
}

fn values(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

fn cochain0(g: GridSpec) -> impl Strategy<Value = Cochain0> {
    values(g.dim()).prop_map(move |v| Cochain0::from_vec(g, v).unwrap())
}

/// 1-forms vanishing on the collar `k = 0` and `s = 0`, where the interior
/// inner product does not see them.
fn cochain1(g: GridSpec) -> impl Strategy<Value = Cochain1> {
    (values(g.dim()), values(g.dim())).prop_map(move |(u, v)| {
        let zero = Complex64::new(0.0, 0.0);
        Cochain1::from_fn(g, |k, s| if g.contains(k, s) { (u[g.index(k, s)], v[g.index(k, s)]) } else { (zero, zero) })
    })
}

/// Sum of squared moduli over the extended window.
fn extended_norm_sqr(w: &Cochain1) -> f64 {
    let (ks, ss) = w.grid().extended();
    let u = w.u_components().dot_over(w.u_components(), ks.clone(), ss.clone());
    let v = w.v_components().dot_over(w.v_components(), ks, ss);
    (u + v).re
}

fn cochain2(g: GridSpec) -> impl Strategy<Value = Cochain2> {
    values(g.dim()).prop_map(move |v| Cochain2::from_vec(g, v).unwrap())
}

fn potential(g: GridSpec) -> impl Strategy<Value = MagneticPotential> {
    let d = g.dim();
    (prop::collection::vec(-3.0..3.0f64, d), prop::collection::vec(-3.0..3.0f64, d))
        .prop_map(move |(a1, a2)| MagneticPotential::from_vecs(g, a1, a2).unwrap())
}

fn close(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-12 * scale.max(1.0)
}

proptest! {
    #[test]
    fn d_squared_is_zero(phi in grid().prop_flat_map(cochain0)) {
        prop_assert!(phi.d().d().max_abs() <= 1e-15);
    }

    #[test]
    fn star_inverse_round_trips(g in grid().prop_flat_map(|g| (cochain0(g), cochain1(g), cochain2(g)))) {
        let (phi, w, eta) = g;
        prop_assert_eq!(phi.star().star_inv().max_abs_diff(&phi), 0.0);
        prop_assert_eq!(w.star().star_inv().max_abs_diff(&w), 0.0);
        prop_assert_eq!(eta.star().star_inv().max_abs_diff(&eta), 0.0);
    }

    #[test]
    fn codifferential_is_adjoint_of_d(pair in grid().prop_flat_map(|g| (cochain0(g), cochain1(g)))) {
        let (phi, w) = pair;
        let lhs = phi.d().inner(&w).unwrap();
        let rhs = phi.inner(&w.codifferential()).unwrap();
        prop_assert!(close(lhs, rhs, phi.norm() * w.norm()));
    }

    #[test]
    fn codifferential_routes_agree(w in grid().prop_flat_map(cochain1)) {
        prop_assert!(w.codifferential().max_abs_diff(&w.codifferential_via_star()) <= 1e-13);
    }

    #[test]
    fn deformed_adjoint(t in grid().prop_flat_map(|g| (cochain0(g), cochain1(g), potential(g)))) {
        let (phi, w, a) = t;
        let lhs = d_a(&phi, &a).unwrap().inner(&w).unwrap();
        let rhs = phi.inner(&delta_a(&w, &a).unwrap()).unwrap();
        prop_assert!(close(lhs, rhs, phi.norm() * w.norm() * (1.0 + a.max_abs())));

        let lhs = mul_a(&phi, &a).unwrap().inner(&w).unwrap();
        let rhs = phi.inner(&adjoint_a(&w, &a).unwrap()).unwrap();
        prop_assert!(close(lhs, rhs, phi.norm() * w.norm() * a.max_abs()));
    }

    #[test]
    fn laplacian_forms_agree(t in grid().prop_flat_map(|g| (cochain0(g), potential(g)))) {
        let (phi, a) = t;
        let direct = magnetic_laplacian(&phi, &a).unwrap();
        let expanded = magnetic_laplacian_expanded(&phi, &a).unwrap();
        let scale = phi.max_abs() * (1.0 + a.max_abs()).powi(2);
        prop_assert!(direct.max_abs_diff(&expanded) <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn energy_is_real_and_nonnegative(t in grid().prop_flat_map(|g| (cochain0(g), potential(g)))) {
        let (phi, a) = t;
        let q = phi.inner(&magnetic_laplacian(&phi, &a).unwrap()).unwrap();
        let e = extended_norm_sqr(&d_a(&phi, &a).unwrap());
        prop_assert!(close(q, Complex64::new(e, 0.0), e));
        prop_assert!(q.re >= 0.0);
    }
}
