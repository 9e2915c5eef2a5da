//! Coboundary, cup product, star, codifferential and the plain discrete
//! Laplacian.
//!
//! `d`, `cup`, `star` and `star_inv` act on forms over all of `Z^2` and never
//! drop a component: their output windows grow to hold the whole support.
//! The codifferential of a 1-form and the Laplacian take values in `H^0` and
//! are evaluated on the interior indices only.

use num_complex::Complex64;

use crate::cochain::{ensure_same_grid, Cochain0, Cochain1, Cochain2, Form};
use crate::components::Components;
use crate::error::{Error, Result};

fn widen_low(c: &Components) -> (std::ops::RangeInclusive<i64>, std::ops::RangeInclusive<i64>) {
    let (ks, ss) = (c.k_range(), c.s_range());
    (ks.start() - 1..=*ks.end(), ss.start() - 1..=*ss.end())
}

impl Cochain0 {
    /// `u_{k,s} = phi_{k+1,s} - phi_{k,s}`, `v_{k,s} = phi_{k,s+1} - phi_{k,s}`.
    ///
    /// For an interior-supported `phi` the result lives on `0..=N x 0..=M`.
    pub fn d(&self) -> Cochain1 {
        let phi = &self.comp;
        let (ks, ss) = widen_low(phi);
        let u = Components::from_fn(ks.clone(), ss.clone(), |k, s| phi.get(k + 1, s) - phi.get(k, s));
        let v = Components::from_fn(ks, ss, |k, s| phi.get(k, s + 1) - phi.get(k, s));
        Cochain1::from_components(self.grid, u, v)
    }

    /// `(phi ∪ psi)_{k,s} = phi_{k,s} psi_{k,s}`.
    pub fn cup0(&self, other: &Cochain0) -> Result<Cochain0> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(Cochain0::from_components(self.grid, self.comp.zip_with(&other.comp, |a, b| a * b)))
    }

    /// `phi ∪ omega = (phi_{k,s} u_{k,s}, phi_{k,s} v_{k,s})`.
    pub fn cup1(&self, w: &Cochain1) -> Result<Cochain1> {
        ensure_same_grid(&self.grid, &w.grid)?;
        let phi = &self.comp;
        let u = Components::from_fn(w.u.k_range(), w.u.s_range(), |k, s| phi.get(k, s) * w.u.get(k, s));
        let v = Components::from_fn(w.v.k_range(), w.v.s_range(), |k, s| phi.get(k, s) * w.v.get(k, s));
        Ok(Cochain1::from_components(self.grid, u, v))
    }

    /// `(phi ∪ eta)_{k,s} = phi_{k,s} eta_{k,s}`.
    pub fn cup2(&self, eta: &Cochain2) -> Result<Cochain2> {
        ensure_same_grid(&self.grid, &eta.grid)?;
        let c = Components::from_fn(eta.comp.k_range(), eta.comp.s_range(), |k, s| {
            self.get(k, s) * eta.get(k, s)
        });
        Ok(Cochain2::from_components(self.grid, c))
    }

    /// `*x^{k,s} = V^{k,s}`.
    pub fn star(&self) -> Cochain2 {
        Cochain2::from_components(self.grid, self.comp.clone())
    }

    /// Inverse of [`Cochain2::star`]: `x^{k,s} -> V^{k-1,s-1}`.
    pub fn star_inv(&self) -> Cochain2 {
        Cochain2::from_components(self.grid, self.comp.shifted(-1, -1))
    }

    /// `-Δ^c phi = δ^c d^c phi` under the Dirichlet conditions: the
    /// five-point stencil `4 phi_{k,s} - phi_{k±1,s} - phi_{k,s±1}` with
    /// ghost zeros.
    pub fn laplace(&self) -> Cochain0 {
        self.restrict_to_domain().d().codifferential()
    }
}

impl Cochain1 {
    /// `eta_{k,s} = Δ_k v_{k,s} - Δ_s u_{k,s}`.
    pub fn d(&self) -> Cochain2 {
        let (ks, ss) = self.u.hull(&self.v);
        let ks = ks.start() - 1..=*ks.end();
        let ss = ss.start() - 1..=*ss.end();
        let c = Components::from_fn(ks, ss, |k, s| {
            self.v(k + 1, s) - self.v(k, s) - self.u(k, s + 1) + self.u(k, s)
        });
        Cochain2::from_components(self.grid, c)
    }

    /// `omega ∪ phi = (u_{k,s} phi_{k+1,s}, v_{k,s} phi_{k,s+1})`.
    pub fn cup0(&self, phi: &Cochain0) -> Result<Cochain1> {
        ensure_same_grid(&self.grid, &phi.grid)?;
        let u = Components::from_fn(self.u.k_range(), self.u.s_range(), |k, s| {
            self.u(k, s) * phi.get(k + 1, s)
        });
        let v = Components::from_fn(self.v.k_range(), self.v.s_range(), |k, s| {
            self.v(k, s) * phi.get(k, s + 1)
        });
        Ok(Cochain1::from_components(self.grid, u, v))
    }

    /// `(omega ∪ rho)_{k,s} = u_{k,s} rho^2_{k+1,s} - v_{k,s} rho^1_{k,s+1}`.
    pub fn cup1(&self, rho: &Cochain1) -> Result<Cochain2> {
        ensure_same_grid(&self.grid, &rho.grid)?;
        let (ks, ss) = self.u.hull(&self.v);
        let c = Components::from_fn(ks, ss, |k, s| {
            self.u(k, s) * rho.v(k + 1, s) - self.v(k, s) * rho.u(k, s + 1)
        });
        Ok(Cochain2::from_components(self.grid, c))
    }

    /// `*e_1^{k,s} = e_2^{k+1,s}`, `*e_2^{k,s} = -e_1^{k,s+1}`, i.e.
    /// `(*omega)^1_{k,s} = -v_{k,s-1}`, `(*omega)^2_{k,s} = u_{k-1,s}`.
    pub fn star(&self) -> Cochain1 {
        let u = self.v.shifted(0, 1).map(|z| -z);
        let v = self.u.shifted(1, 0);
        Cochain1::from_components(self.grid, u, v)
    }

    /// `*^{-1} e_2^{k,s} = e_1^{k-1,s}`, `*^{-1} e_1^{k,s} = -e_2^{k,s-1}`.
    pub fn star_inv(&self) -> Cochain1 {
        let u = self.v.shifted(-1, 0);
        let v = self.u.shifted(0, -1).map(|z| -z);
        Cochain1::from_components(self.grid, u, v)
    }

    /// `(δ^c omega)_{k,s} = -Δ_k u_{k-1,s} - Δ_s v_{k,s-1}` on `1..=N x 1..=M`.
    pub fn codifferential(&self) -> Cochain0 {
        Cochain0::from_fn(self.grid, |k, s| {
            -(self.u(k, s) - self.u(k - 1, s)) - (self.v(k, s) - self.v(k, s - 1))
        })
    }

    /// The same codifferential assembled as `-*^{-1} d^c *`, then read on
    /// the interior.
    pub fn codifferential_via_star(&self) -> Cochain0 {
        let eta = self.star().d();
        eta.star_inv().scale(Complex64::new(-1.0, 0.0)).restrict_to_domain()
    }
}

impl Cochain2 {
    /// `eta ∪ phi = eta_{k,s} phi_{k+1,s+1}`.
    pub fn cup0(&self, phi: &Cochain0) -> Result<Cochain2> {
        ensure_same_grid(&self.grid, &phi.grid)?;
        let c = Components::from_fn(self.comp.k_range(), self.comp.s_range(), |k, s| {
            self.get(k, s) * phi.get(k + 1, s + 1)
        });
        Ok(Cochain2::from_components(self.grid, c))
    }

    /// `*V^{k,s} = x^{k+1,s+1}`.
    pub fn star(&self) -> Cochain0 {
        Cochain0::from_components(self.grid, self.comp.shifted(1, 1))
    }

    /// Inverse of [`Cochain0::star`]: `V^{k,s} -> x^{k,s}`.
    pub fn star_inv(&self) -> Cochain0 {
        Cochain0::from_components(self.grid, self.comp.clone())
    }

    /// `δ^c eta = *^{-1} d^c * eta`, read on `0..=N x 0..=M`.
    pub fn codifferential(&self) -> Cochain1 {
        self.star().d().star_inv().restrict_to_extended()
    }
}

/// Coboundary of a 0- or 1-form.
pub fn d(alpha: &Form) -> Result<Form> {
    match alpha {
        Form::Zero(phi) => Ok(phi.d().into()),
        Form::One(w) => Ok(w.d().into()),
        Form::Two(_) => Err(Error::UnsupportedDegree { op: "d", degree: 2 }),
    }
}

/// Cup product following the index-shift rules of the lattice complex.
pub fn cup(alpha: &Form, beta: &Form) -> Result<Form> {
    match (alpha, beta) {
        (Form::Zero(a), Form::Zero(b)) => Ok(a.cup0(b)?.into()),
        (Form::Zero(a), Form::One(b)) => Ok(a.cup1(b)?.into()),
        (Form::Zero(a), Form::Two(b)) => Ok(a.cup2(b)?.into()),
        (Form::One(a), Form::Zero(b)) => Ok(a.cup0(b)?.into()),
        (Form::One(a), Form::One(b)) => Ok(a.cup1(b)?.into()),
        (Form::Two(a), Form::Zero(b)) => Ok(a.cup0(b)?.into()),
        _ => Err(Error::UnsupportedDegree {
            op: "cup",
            degree: alpha.degree() + beta.degree(),
        }),
    }
}

pub fn star(alpha: &Form) -> Form {
    match alpha {
        Form::Zero(a) => a.star().into(),
        Form::One(a) => a.star().into(),
        Form::Two(a) => a.star().into(),
    }
}

pub fn star_inv(alpha: &Form) -> Form {
    match alpha {
        Form::Zero(a) => a.star_inv().into(),
        Form::One(a) => a.star_inv().into(),
        Form::Two(a) => a.star_inv().into(),
    }
}

/// `δ^c = (-1)^p *^{-1} d^c *` on p-forms, p ∈ {1, 2}. For p = 1 the
/// closed backward-difference form is used.
pub fn codifferential(beta: &Form) -> Result<Form> {
    match beta {
        Form::Zero(_) => Err(Error::UnsupportedDegree { op: "codifferential", degree: 0 }),
        Form::One(w) => Ok(w.codifferential().into()),
        Form::Two(eta) => Ok(eta.codifferential().into()),
    }
}

/// `(alpha, beta)_V` for forms of equal degree. Cross-degree products are
/// rejected.
pub fn inner_product(alpha: &Form, beta: &Form) -> Result<Complex64> {
    match (alpha, beta) {
        (Form::Zero(a), Form::Zero(b)) => a.inner(b),
        (Form::One(a), Form::One(b)) => a.inner(b),
        (Form::Two(a), Form::Two(b)) => a.inner(b),
        _ => Err(Error::DegreeMismatch { expected: alpha.degree(), found: beta.degree() }),
    }
}

pub fn laplace0(phi: &Cochain0) -> Cochain0 {
    phi.laplace()
}
