//! Tensor Gauss–Legendre cell averages.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::cochain::Cochain0;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::magnetic::MagneticPotential;

/// Nodes per direction used unless a caller asks otherwise.
pub const DEFAULT_ORDER: usize = 4;

/// Tensor-product Gauss–Legendre rule mapped to the unit square, with
/// weights summing to one so that it returns averages.
#[derive(Clone, Debug)]
pub struct CellQuadrature {
    // (offset in [0, 1], weight) per direction
    rule: Vec<(f64, f64)>,
}

impl CellQuadrature {
    pub fn new(order: usize) -> Result<Self> {
        let order = NonZeroUsize::new(order)
            .ok_or_else(|| Error::InvalidArgument("quadrature order must be at least 1".into()))?;
        let rule = GaussLegendre::new(order)
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        Ok(Self { rule })
    }

    pub fn order(&self) -> usize {
        self.rule.len()
    }

    /// Average of `f` over `[x0, x0 + h] x [y0, y0 + h]`.
    ///
    /// Returns `None` if any sample is non-finite.
    pub fn average<F>(&self, x0: f64, y0: f64, h: f64, mut f: F) -> Option<Complex64>
    where
        F: FnMut(f64, f64) -> Complex64,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(ty, wy) in &self.rule {
            for &(tx, wx) in &self.rule {
                let z = f(x0 + tx * h, y0 + ty * h);
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return None;
                }
                acc += wx * wy * z;
            }
        }
        Some(acc)
    }

    /// Average of `f` over cell `(k, s)` of `grid`.
    pub fn cell_average<F>(&self, grid: &GridSpec, k: i64, s: i64, f: F) -> Result<Complex64>
    where
        F: FnMut(f64, f64) -> Complex64,
    {
        let (x0, y0) = grid.cell_origin(k, s);
        self.average(x0, y0, grid.h, f).ok_or(Error::NonFinite { k, s })
    }
}

impl Default for CellQuadrature {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER).expect("positive order")
    }
}

/// Cell averages `h^-2 ∫_{V_{k,s}} f` as a 0-form.
pub fn discretize_scalar<F>(f: F, grid: &GridSpec) -> Result<Cochain0>
where
    F: Fn(f64, f64) -> Complex64,
{
    discretize_scalar_with(f, grid, &CellQuadrature::default())
}

pub fn discretize_scalar_with<F>(f: F, grid: &GridSpec, quad: &CellQuadrature) -> Result<Cochain0>
where
    F: Fn(f64, f64) -> Complex64,
{
    let values = (0..grid.dim())
        .map(|i| {
            let (k, s) = grid.point(i);
            quad.cell_average(grid, k, s, &f)
        })
        .collect::<Result<Vec<_>>>()?;
    Cochain0::from_vec(*grid, values)
}

/// Cell averages of `(A1, A2)`, each assigned to the edges `e^1_{k,s}`,
/// `e^2_{k,s}` of cell `(k, s)`.
pub fn discretize_oneform<F, G>(a1: F, a2: G, grid: &GridSpec) -> Result<MagneticPotential>
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    discretize_oneform_with(a1, a2, grid, &CellQuadrature::default())
}

pub fn discretize_oneform_with<F, G>(
    a1: F,
    a2: G,
    grid: &GridSpec,
    quad: &CellQuadrature,
) -> Result<MagneticPotential>
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    let mut c1 = Vec::with_capacity(grid.dim());
    let mut c2 = Vec::with_capacity(grid.dim());
    for i in 0..grid.dim() {
        let (k, s) = grid.point(i);
        c1.push(quad.cell_average(grid, k, s, |x, y| Complex64::new(a1(x, y), 0.0))?.re);
        c2.push(quad.cell_average(grid, k, s, |x, y| Complex64::new(a2(x, y), 0.0))?.re);
    }
    MagneticPotential::from_vecs(*grid, c1, c2)
}
