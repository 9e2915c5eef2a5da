//! Seeded sweep over the exact identities of the lattice calculus.
//!
//! Every check reports a relative residual: the size of the defect divided
//! by the size of the largest term taking part. Random data come from
//! ChaCha8 (a counter-based stream cipher generator) seeded through
//! `seed_from_u64`, with one stream per grid, so runs are reproducible on
//! every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{BasisElement, Chain};
use crate::cochain::{Cochain0, Cochain1, Cochain2, Form};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::magnetic::{
    adjoint_a, d_a, delta_a, magnetic_laplacian, magnetic_laplacian_expanded, mul_a, MagneticPotential,
};
use crate::solver::{assemble, LinearOperator};

const TINY: f64 = 1e-300;
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Exact-arithmetic identities: only rounding in the last bits is allowed.
pub const TOL_EXACT: f64 = 1e-13;
/// Identities involving sums over the grid.
pub const TOL_SUM: f64 = 1e-12;

/// Largest relative residual seen for one identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

/// Checks in a fixed order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    fn record(&mut self, name: &'static str, tolerance: f64, residual: f64) {
        // NaN must never look like a pass
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        match self.checks.iter_mut().find(|c| c.name == name) {
            Some(c) => {
                c.max_residual = c.max_residual.max(residual);
                c.samples += 1;
            }
            None => self.checks.push(IdentityCheck { name, max_residual: residual, tolerance, samples: 1 }),
        }
    }

    /// Folds another report in, keeping the worst residual per identity.
    pub fn merge(&mut self, other: &IdentityReport) {
        for c in &other.checks {
            match self.checks.iter_mut().find(|x| x.name == c.name) {
                Some(x) => {
                    x.max_residual = x.max_residual.max(c.max_residual);
                    x.samples += c.samples;
                }
                None => self.checks.push(c.clone()),
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

fn rel(defect: f64, scale: f64) -> f64 {
    if defect == 0.0 {
        0.0
    } else {
        defect / scale.max(TINY)
    }
}

fn scalar_rel(lhs: Complex64, rhs: Complex64, terms: &[Complex64]) -> f64 {
    let scale = terms.iter().map(|z| z.norm()).sum::<f64>().max(lhs.norm()).max(rhs.norm());
    rel((lhs - rhs).norm(), scale)
}

fn form_rel(lhs: &Form, rhs: &Form, terms: &[f64]) -> Result<f64> {
    let scale = terms.iter().copied().fold(lhs.max_abs().max(rhs.max_abs()), f64::max);
    Ok(rel(lhs.max_abs_diff(rhs)?, scale))
}

struct Sampler {
    rng: ChaCha8Rng,
    grid: GridSpec,
}

impl Sampler {
    fn new(grid: GridSpec, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((grid.n as u64) << 32) | grid.m as u64);
        Self { rng, grid }
    }

    fn z(&mut self) -> Complex64 {
        Complex64::new(self.rng.random_range(-1.0..1.0), self.rng.random_range(-1.0..1.0))
    }

    fn zero_form(&mut self) -> Cochain0 {
        Cochain0::from_fn(self.grid, |_, _| self.z())
    }

    fn real_zero_form(&mut self) -> Cochain0 {
        Cochain0::from_fn(self.grid, |_, _| Complex64::new(self.rng.random_range(-1.0..1.0), 0.0))
    }

    /// Random on the whole `0..=N x 0..=M` window.
    fn one_form(&mut self) -> Cochain1 {
        Cochain1::from_fn(self.grid, |_, _| (self.z(), self.z()))
    }

    /// Random on the interior, zero on the `k = 0` and `s = 0` layers.
    fn interior_one_form(&mut self) -> Cochain1 {
        Cochain1::from_fn(self.grid, |k, s| {
            let (u, v) = (self.z(), self.z());
            if k == 0 || s == 0 {
                (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (u, v)
            }
        })
    }

    fn two_form(&mut self) -> Cochain2 {
        Cochain2::from_fn(self.grid, |_, _| self.z())
    }

    fn potential(&mut self) -> MagneticPotential {
        MagneticPotential::from_fn(self.grid, |_, _| {
            (self.rng.random_range(-2.0..2.0), self.rng.random_range(-2.0..2.0))
        })
    }

    fn coefficient(&mut self) -> f64 {
        self.rng.random_range(-1.0..1.0)
    }
}

fn basis_chains(grid: &GridSpec) -> Vec<BasisElement> {
    let mut out = Vec::new();
    for s in 0..=grid.m as i64 {
        for k in 0..=grid.n as i64 {
            out.push(BasisElement::HEdge(k, s));
            out.push(BasisElement::VEdge(k, s));
            out.push(BasisElement::Cell(k, s));
        }
    }
    out
}

/// Basis cochain dual to an interior basis element.
fn unit_form(grid: GridSpec, e: BasisElement) -> Result<Form> {
    let one = Complex64::new(1.0, 0.0);
    Ok(match e {
        BasisElement::Point(k, s) => {
            let mut f = Cochain0::zeros(grid);
            f.set(k, s, one)?;
            f.into()
        }
        BasisElement::HEdge(k, s) => {
            let mut f = Cochain1::zeros(grid);
            f.set_u(k, s, one)?;
            f.into()
        }
        BasisElement::VEdge(k, s) => {
            let mut f = Cochain1::zeros(grid);
            f.set_v(k, s, one)?;
            f.into()
        }
        BasisElement::Cell(k, s) => {
            let mut f = Cochain2::zeros(grid);
            f.set(k, s, one)?;
            f.into()
        }
    })
}

fn sum_boundary_rows(phi: &Cochain0, psi: &Cochain0) -> Complex64 {
    let g = phi.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 1..=g.m as i64 {
        acc += phi.get(1, s) * psi.get(1, s).conj();
    }
    for k in 1..=g.n as i64 {
        acc += phi.get(k, 1) * psi.get(k, 1).conj();
    }
    acc
}

/// Deterministic checks that do not need random data.
fn structural(grid: GridSpec, report: &mut IdentityReport) -> Result<()> {
    let (n, m) = (grid.n as i64, grid.m as i64);
    for s in 0..=m {
        for k in 0..=n {
            let bb = Chain::basis(BasisElement::Cell(k, s)).boundary().boundary();
            report.record("boundary_of_boundary", TOL_EXACT, if bb.is_zero() { 0.0 } else { 1.0 });
        }
    }
    // ε ∪ *ε = V for every interior basis element
    for s in 1..=m {
        for k in 1..=n {
            let mut cell = Cochain2::zeros(grid);
            cell.set(k, s, Complex64::new(1.0, 0.0))?;
            for e in [
                BasisElement::Point(k, s),
                BasisElement::HEdge(k, s),
                BasisElement::VEdge(k, s),
                BasisElement::Cell(k, s),
            ] {
                let eps = unit_form(grid, e)?;
                let prod = crate::calculus::cup(&eps, &crate::calculus::star(&eps))?;
                let pair = Chain::basis(BasisElement::Cell(k, s)).pair(&prod)?;
                let defect = prod.max_abs_diff(&cell.clone().into())?.max((pair - 1.0).norm());
                report.record("star_definition", TOL_EXACT, defect);
            }
        }
    }
    Ok(())
}

/// One random trial of every identity.
fn trial(smp: &mut Sampler, report: &mut IdentityReport) -> Result<()> {
    let grid = smp.grid;
    let (n, m) = (grid.n as i64, grid.m as i64);

    // chains
    let mut chain = Chain::zero();
    for s in 0..=m {
        for k in 0..=n {
            chain.add_term(BasisElement::Cell(k, s), smp.coefficient())?;
        }
    }
    let bb = chain.boundary().boundary();
    let worst = bb.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max);
    report.record("boundary_of_boundary", TOL_EXACT, worst);

    let alpha0: Form = smp.zero_form().into();
    let alpha1: Form = smp.one_form().into();
    let d0 = crate::calculus::d(&alpha0)?;
    let d1 = crate::calculus::d(&alpha1)?;
    for e in basis_chains(&grid) {
        let a = Chain::basis(e);
        let (alpha, dalpha) = if e.degree() == 1 { (&alpha0, &d0) } else { (&alpha1, &d1) };
        let lhs = a.boundary().pair(alpha)?;
        let rhs = a.pair(dalpha)?;
        let terms: Vec<Complex64> = a
            .boundary()
            .terms()
            .map(|(&f, &c)| Chain::basis(f).pair(alpha).map(|z| c * z))
            .collect::<Result<_>>()?;
        report.record("chain_cochain_duality", TOL_EXACT, scalar_rel(lhs, rhs, &terms));
    }
    let lhs = chain.boundary().pair(&alpha1)?;
    let rhs = chain.pair(&d1)?;
    report.record("chain_cochain_duality", TOL_EXACT, scalar_rel(lhs, rhs, &[chain.pair(&d1)?]));

    // coboundary and cup product
    let phi = smp.zero_form();
    let psi = smp.zero_form();
    let omega = smp.one_form();
    let dphi = phi.d();
    report.record("d_of_d", TOL_EXACT, rel(dphi.d().max_abs(), dphi.max_abs()));

    let lhs = phi.cup0(&psi)?.d();
    let t1 = dphi.cup0(&psi)?;
    let t2 = phi.cup1(&psi.d())?;
    report.record(
        "cup_leibniz",
        TOL_SUM,
        form_rel(&lhs.clone().into(), &t1.add(&t2)?.into(), &[t1.max_abs(), t2.max_abs()])?,
    );
    let lhs = phi.cup1(&omega)?.d();
    let t1 = dphi.cup1(&omega)?;
    let t2 = phi.cup2(&omega.d())?;
    report.record(
        "cup_leibniz",
        TOL_SUM,
        form_rel(&lhs.into(), &t1.add(&t2)?.into(), &[t1.max_abs(), t2.max_abs()])?,
    );
    let lhs = omega.cup0(&phi)?.d();
    let t1 = omega.d().cup0(&phi)?;
    let t2 = omega.cup1(&dphi)?;
    report.record(
        "cup_leibniz",
        TOL_SUM,
        form_rel(&lhs.into(), &t1.sub(&t2)?.into(), &[t1.max_abs(), t2.max_abs()])?,
    );

    // star
    let eta = smp.two_form();
    report.record("star_inverse", TOL_EXACT, rel(phi.star().star_inv().max_abs_diff(&phi), phi.max_abs()));
    report.record("star_inverse", TOL_EXACT, rel(omega.star().star_inv().max_abs_diff(&omega), omega.max_abs()));
    report.record("star_inverse", TOL_EXACT, rel(eta.star().star_inv().max_abs_diff(&eta), eta.max_abs()));

    let a = omega.codifferential();
    let b = omega.codifferential_via_star();
    report.record("codifferential_two_routes", TOL_SUM, rel(a.max_abs_diff(&b), omega.max_abs()));

    // adjointness
    let pot = smp.potential();
    let w0 = smp.interior_one_form();
    let lhs = dphi.inner(&w0)?;
    let rhs = phi.inner(&w0.codifferential())?;
    report.record("adjoint_codifferential", TOL_SUM, scalar_rel(lhs, rhs, &[Complex64::new(dphi.norm() * w0.norm(), 0.0)]));

    let lhs = mul_a(&phi, &pot)?.inner(&omega)?;
    let rhs = phi.inner(&adjoint_a(&omega, &pot)?)?;
    let scale = mul_a(&phi, &pot)?.norm() * omega.norm();
    report.record("adjoint_multiplication", TOL_SUM, scalar_rel(lhs, rhs, &[Complex64::new(scale, 0.0)]));

    let dphi_a = d_a(&phi, &pot)?;
    let lhs = dphi_a.inner(&w0)?;
    let rhs = phi.inner(&delta_a(&w0, &pot)?)?;
    report.record("adjoint_deformed", TOL_SUM, scalar_rel(lhs, rhs, &[Complex64::new(dphi_a.norm() * w0.norm(), 0.0)]));

    let apsi = mul_a(&psi, &pot)?;
    let lhs = dphi.inner(&apsi)?;
    let mut edge = Complex64::new(0.0, 0.0);
    for s in 1..=m {
        edge += phi.get(n + 1, s) * (psi.get(n, s) * pot.a1(n, s)).conj()
            - phi.get(1, s) * (psi.get(0, s) * pot.a1(0, s)).conj();
    }
    for k in 1..=n {
        edge += phi.get(k, m + 1) * (psi.get(k, m) * pot.a2(k, m)).conj()
            - phi.get(k, 1) * (psi.get(k, 0) * pot.a2(k, 0)).conj();
    }
    let bulk = phi.inner(&apsi.codifferential())?;
    report.record("adjoint_boundary_terms", TOL_SUM, scalar_rel(lhs, edge + bulk, &[edge, bulk]));

    // magnetic Laplacian
    let lphi = magnetic_laplacian(&phi, &pot)?;
    let lpsi = magnetic_laplacian(&psi, &pot)?;
    let expanded = magnetic_laplacian_expanded(&phi, &pot)?;
    report.record(
        "laplacian_expansion",
        TOL_EXACT,
        form_rel(&lphi.clone().into(), &expanded.into(), &[])?,
    );

    let l = assemble(&grid, &pot)?;
    let mut y = vec![Complex64::new(0.0, 0.0); grid.dim()];
    l.apply(&phi.to_vec(), &mut y);
    let assembled = Cochain0::from_vec(grid, y)?;
    report.record("assembled_matrix", TOL_EXACT, form_rel(&assembled.into(), &lphi.clone().into(), &[])?);

    let lhs = lphi.inner(&psi)?;
    let rhs = phi.inner(&lpsi)?;
    report.record("self_adjointness", TOL_SUM, scalar_rel(lhs, rhs, &[Complex64::new(lphi.norm() * psi.norm(), 0.0)]));

    let energy = dphi_a.inner(&dphi_a)?;
    let edges = sum_boundary_rows(&phi, &phi);
    let rhs = phi.inner(&lphi)?;
    report.record("energy_identity", TOL_SUM, scalar_rel(energy + edges, rhs, &[energy, edges]));

    let dpsi_a = d_a(&psi, &pot)?;
    let lhs = dphi_a.inner(&dpsi_a)?;
    let edges = sum_boundary_rows(&phi, &psi);
    let bulk = phi.inner(&lpsi)?;
    report.record("boundary_term_identity", TOL_SUM, scalar_rel(lhs, bulk - edges, &[edges, bulk]));

    let lhs = delta_a(&phi.cup1(&omega)?, &pot)?;
    let first = phi.cup0(&delta_a(&omega, &pot)?)?;
    let corr = Cochain0::from_fn(grid, |k, s| {
        (phi.get(k, s) - phi.get(k - 1, s)) * omega.u(k - 1, s)
            + (phi.get(k, s) - phi.get(k, s - 1)) * omega.v(k, s - 1)
    });
    report.record(
        "delta_a_leibniz",
        TOL_SUM,
        form_rel(&lhs.into(), &first.sub(&corr)?.into(), &[first.max_abs(), corr.max_abs()])?,
    );

    let mut squares = 0.0;
    for s in 1..=m {
        for k in 1..=n {
            let p = phi.get(k, s);
            let dk = phi.get(k + 1, s) - p;
            let ds = phi.get(k, s + 1) - p;
            let (a1, a2) = (pot.a1(k, s), pot.a2(k, s));
            squares += (dk.re - a1 * p.im).powi(2)
                + (dk.im + a1 * p.re).powi(2)
                + (ds.re - a2 * p.im).powi(2)
                + (ds.im + a2 * p.re).powi(2);
        }
    }
    let defect = (energy - squares).norm();
    let sos = if squares >= 0.0 { rel(defect, squares.max(energy.norm())) } else { f64::INFINITY };
    report.record("sum_of_squares", TOL_SUM, sos);

    let real = smp.real_zero_form();
    let dr = real.d();
    let iar = mul_a(&real, &pot)?.scale(I);
    let cross = dr.inner(&iar)?;
    let cross_back = iar.inner(&dr)?;
    report.record("real_cross_terms", TOL_EXACT, rel((cross + cross_back).norm(), 2.0 * cross.norm()));

    Ok(())
}

/// Runs `trials` random trials of every identity on one grid.
pub fn run_identities(grid: &GridSpec, trials: usize, seed: u64) -> Result<IdentityReport> {
    let mut report = IdentityReport::default();
    structural(*grid, &mut report)?;
    let mut smp = Sampler::new(*grid, seed);
    for _ in 0..trials {
        trial(&mut smp, &mut report)?;
    }
    Ok(report)
}

/// [`run_identities`] over several grids, keeping the worst residual per identity.
pub fn run_identity_sweep(grids: &[GridSpec], trials: usize, seed: u64) -> Result<IdentityReport> {
    let mut total = IdentityReport::default();
    for g in grids {
        total.merge(&run_identities(g, trials, seed)?);
    }
    Ok(total)
}
