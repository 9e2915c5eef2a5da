//! Complex-valued discrete forms on the lattice complex.
//!
//! A freshly constructed [`Cochain0`] or [`Cochain2`] is supported on the
//! interior indices `1..=N x 1..=M`; a [`Cochain1`] on the extended set
//! `0..=N x 0..=M` (both components). Reading any other index gives zero,
//! which encodes the Dirichlet conditions `alpha_{0,s} = alpha_{N+1,s} = 0`,
//! `alpha_{k,0} = alpha_{k,M+1} = 0`.
//!
//! The exterior operations (`d`, cup, star) are exact on `Z^2`, so their
//! results may carry a window wider than the standard one. Inner products and
//! the operators with values in `H^p` read the interior indices only.

use num_complex::Complex64;

use crate::components::Components;
use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// 0-form `phi = sum phi_{k,s} x^{k,s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain0 {
    pub(crate) grid: GridSpec,
    pub(crate) comp: Components,
}

/// 1-form `omega = sum u_{k,s} e_1^{k,s} + v_{k,s} e_2^{k,s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain1 {
    pub(crate) grid: GridSpec,
    pub(crate) u: Components,
    pub(crate) v: Components,
}

/// 2-form `eta = sum eta_{k,s} V^{k,s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain2 {
    pub(crate) grid: GridSpec,
    pub(crate) comp: Components,
}

pub(crate) fn ensure_same_grid(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

macro_rules! scalar_form {
    ($ty:ident, $degree:expr) => {
        impl $ty {
            pub fn zeros(grid: GridSpec) -> Self {
                let (ks, ss) = grid.interior();
                Self { grid, comp: Components::zeros(ks, ss) }
            }

            /// Interior components from `f(k, s)`.
            pub fn from_fn<F: FnMut(i64, i64) -> Complex64>(grid: GridSpec, f: F) -> Self {
                let (ks, ss) = grid.interior();
                Self { grid, comp: Components::from_fn(ks, ss, f) }
            }

            /// Interior components in row-major (k fastest) order.
            pub fn from_vec(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
                if values.len() != grid.dim() {
                    return Err(Error::InvalidArgument(format!(
                        "expected {} components, got {}",
                        grid.dim(),
                        values.len()
                    )));
                }
                Ok(Self::from_fn(grid, |k, s| values[grid.index(k, s)]))
            }

            pub(crate) fn from_components(grid: GridSpec, comp: Components) -> Self {
                Self { grid, comp }
            }

            pub fn grid(&self) -> &GridSpec {
                &self.grid
            }

            pub const DEGREE: u8 = $degree;

            #[inline]
            pub fn get(&self, k: i64, s: i64) -> Complex64 {
                self.comp.get(k, s)
            }

            pub fn set(&mut self, k: i64, s: i64, value: Complex64) -> Result<()> {
                self.comp.set(k, s, value)
            }

            pub fn components(&self) -> &Components {
                &self.comp
            }

            /// Interior components in row-major (k fastest) order.
            pub fn to_vec(&self) -> Vec<Complex64> {
                (0..self.grid.dim())
                    .map(|i| {
                        let (k, s) = self.grid.point(i);
                        self.get(k, s)
                    })
                    .collect()
            }

            /// Drops everything outside `1..=N x 1..=M`.
            pub fn restrict_to_domain(&self) -> Self {
                let (ks, ss) = self.grid.interior();
                Self { grid: self.grid, comp: self.comp.restrict(ks, ss) }
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                ensure_same_grid(&self.grid, &other.grid)?;
                Ok(Self { grid: self.grid, comp: self.comp.add(&other.comp) })
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                ensure_same_grid(&self.grid, &other.grid)?;
                Ok(Self { grid: self.grid, comp: self.comp.sub(&other.comp) })
            }

            pub fn scale(&self, c: Complex64) -> Self {
                Self { grid: self.grid, comp: self.comp.scale(c) }
            }

            pub fn conj(&self) -> Self {
                Self { grid: self.grid, comp: self.comp.map(|z| z.conj()) }
            }

            /// `(self, other)_V = sum_{k,s in V} a_{k,s} conj(b_{k,s})`.
            pub fn inner(&self, other: &Self) -> Result<Complex64> {
                ensure_same_grid(&self.grid, &other.grid)?;
                let (ks, ss) = self.grid.interior();
                Ok(self.comp.dot_over(&other.comp, ks, ss))
            }

            /// Norm induced by the interior inner product.
            pub fn norm(&self) -> f64 {
                let (ks, ss) = self.grid.interior();
                self.comp.dot_over(&self.comp, ks, ss).re.sqrt()
            }

            /// Sup-distance as functions on `Z^2`.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.comp.max_abs_diff(&other.comp)
            }

            pub fn max_abs(&self) -> f64 {
                self.comp.max_abs()
            }
        }
    };
}

scalar_form!(Cochain0, 0);
scalar_form!(Cochain2, 2);

impl Cochain1 {
    pub const DEGREE: u8 = 1;

    pub fn zeros(grid: GridSpec) -> Self {
        let (ks, ss) = grid.extended();
        Self {
            grid,
            u: Components::zeros(ks.clone(), ss.clone()),
            v: Components::zeros(ks, ss),
        }
    }

    /// Components on the extended set `0..=N x 0..=M` from `f(k, s) = (u, v)`.
    pub fn from_fn<F: FnMut(i64, i64) -> (Complex64, Complex64)>(grid: GridSpec, mut f: F) -> Self {
        let (ks, ss) = grid.extended();
        let mut v = Components::zeros(ks.clone(), ss.clone());
        let u = Components::from_fn(ks, ss, |k, s| {
            let (a, b) = f(k, s);
            v.set(k, s, b).expect("same window");
            a
        });
        Self { grid, u, v }
    }

    pub(crate) fn from_components(grid: GridSpec, u: Components, v: Components) -> Self {
        Self { grid, u, v }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn u(&self, k: i64, s: i64) -> Complex64 {
        self.u.get(k, s)
    }

    #[inline]
    pub fn v(&self, k: i64, s: i64) -> Complex64 {
        self.v.get(k, s)
    }

    pub fn set_u(&mut self, k: i64, s: i64, value: Complex64) -> Result<()> {
        self.u.set(k, s, value)
    }

    pub fn set_v(&mut self, k: i64, s: i64, value: Complex64) -> Result<()> {
        self.v.set(k, s, value)
    }

    pub fn u_components(&self) -> &Components {
        &self.u
    }

    pub fn v_components(&self) -> &Components {
        &self.v
    }

    /// Re-stores both components on `0..=N x 0..=M`.
    pub fn restrict_to_extended(&self) -> Self {
        let (ks, ss) = self.grid.extended();
        Self {
            grid: self.grid,
            u: self.u.restrict(ks.clone(), ss.clone()),
            v: self.v.restrict(ks, ss),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid,
            u: self.u.add(&other.u),
            v: self.v.add(&other.v),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid,
            u: self.u.sub(&other.u),
            v: self.v.sub(&other.v),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { grid: self.grid, u: self.u.scale(c), v: self.v.scale(c) }
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid,
            u: self.u.map(|z| z.conj()),
            v: self.v.map(|z| z.conj()),
        }
    }

    /// Interior inner product, summing both `u` and `v` over `1..=N x 1..=M`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        ensure_same_grid(&self.grid, &other.grid)?;
        let (ks, ss) = self.grid.interior();
        Ok(self.u.dot_over(&other.u, ks.clone(), ss.clone()) + self.v.dot_over(&other.v, ks, ss))
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).expect("same grid").re.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.u.max_abs_diff(&other.u).max(self.v.max_abs_diff(&other.v))
    }

    pub fn max_abs(&self) -> f64 {
        self.u.max_abs().max(self.v.max_abs())
    }
}

/// A cochain of dynamically known degree.
#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    Zero(Cochain0),
    One(Cochain1),
    Two(Cochain2),
}

impl Form {
    pub fn degree(&self) -> u8 {
        match self {
            Form::Zero(_) => 0,
            Form::One(_) => 1,
            Form::Two(_) => 2,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        match self {
            Form::Zero(c) => &c.grid,
            Form::One(c) => &c.grid,
            Form::Two(c) => &c.grid,
        }
    }

    pub fn max_abs_diff(&self, other: &Form) -> Result<f64> {
        match (self, other) {
            (Form::Zero(a), Form::Zero(b)) => Ok(a.max_abs_diff(b)),
            (Form::One(a), Form::One(b)) => Ok(a.max_abs_diff(b)),
            (Form::Two(a), Form::Two(b)) => Ok(a.max_abs_diff(b)),
            _ => Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() }),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Form::Zero(c) => c.max_abs(),
            Form::One(c) => c.max_abs(),
            Form::Two(c) => c.max_abs(),
        }
    }
}

impl From<Cochain0> for Form {
    fn from(c: Cochain0) -> Self {
        Form::Zero(c)
    }
}

impl From<Cochain1> for Form {
    fn from(c: Cochain1) -> Self {
        Form::One(c)
    }
}

impl From<Cochain2> for Form {
    fn from(c: Cochain2) -> Self {
        Form::Two(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn ghost_layers_read_zero() {
        let g = GridSpec::lattice(3, 2).unwrap();
        let phi = Cochain0::from_fn(g, |_, _| re(1.0));
        let eta = Cochain2::from_fn(g, |_, _| re(1.0));
        for s in 0..=3 {
            assert_eq!(phi.get(0, s), re(0.0));
            assert_eq!(phi.get(4, s), re(0.0));
            assert_eq!(eta.get(0, s), re(0.0));
            assert_eq!(eta.get(4, s), re(0.0));
        }
        for k in 0..=4 {
            assert_eq!(phi.get(k, 0), re(0.0));
            assert_eq!(phi.get(k, 3), re(0.0));
            assert_eq!(eta.get(k, 0), re(0.0));
            assert_eq!(eta.get(k, 3), re(0.0));
        }
    }

    #[test]
    fn one_forms_store_the_extended_layer() {
        let g = GridSpec::lattice(2, 2).unwrap();
        let mut w = Cochain1::zeros(g);
        assert!(w.set_u(0, 0, re(1.0)).is_ok());
        assert!(w.set_v(2, 2, re(1.0)).is_ok());
        assert!(w.set_u(3, 1, re(1.0)).is_err());
        assert!(w.set_v(1, -1, re(1.0)).is_err());
        assert_eq!(w.u(-1, 0), re(0.0));
    }

    #[test]
    fn inner_products_match_examples() {
        let g = GridSpec::lattice(2, 2).unwrap();
        let phi = Cochain0::from_fn(g, |_, _| Complex64::i());
        assert_eq!(phi.inner(&phi).unwrap(), re(4.0));

        let mut w = Cochain1::zeros(g);
        w.set_u(1, 1, re(3.0)).unwrap();
        w.set_v(2, 2, re(4.0)).unwrap();
        // the extended layer is not part of H^1
        w.set_u(0, 1, re(100.0)).unwrap();
        assert_eq!(w.inner(&w).unwrap(), re(25.0));
    }

    #[test]
    fn inner_rejects_grid_mismatch() {
        let a = Cochain0::zeros(GridSpec::lattice(2, 2).unwrap());
        let b = Cochain0::zeros(GridSpec::lattice(3, 2).unwrap());
        assert!(matches!(a.inner(&b), Err(Error::GridMismatch)));
    }

    #[test]
    fn vec_roundtrip_is_row_major() {
        let g = GridSpec::lattice(3, 2).unwrap();
        let values: Vec<_> = (0..6).map(|i| re(i as f64)).collect();
        let phi = Cochain0::from_vec(g, values.clone()).unwrap();
        assert_eq!(phi.get(3, 1), re(2.0));
        assert_eq!(phi.get(1, 2), re(3.0));
        assert_eq!(phi.to_vec(), values);
        assert!(Cochain0::from_vec(g, vec![re(0.0); 5]).is_err());
    }
}
