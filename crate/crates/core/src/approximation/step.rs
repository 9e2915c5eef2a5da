//! Piecewise-constant fields on the rectangle backed by cochains.

use num_complex::Complex64;

use crate::cochain::{Cochain0, Cochain1};
use crate::components::Components;
use crate::grid::GridSpec;

/// Step function taking the value `c_{k,s}` on the open cell `(k, s)`, where
/// cell `(k, s)` is `(a1 + (k-1)h, a1 + kh) x (b1 + (s-1)h, b1 + sh)` for any
/// integers `k, s`. Values vanish outside the stored window, so a field built
/// from a 0-form is the zero extension of `phi^h` beyond the rectangle.
#[derive(Clone, Debug, PartialEq)]
pub struct StepField {
    grid: GridSpec,
    values: Components,
}

impl StepField {
    /// `phi^h(x, y) = phi_{k,s}` on cell `(k, s)`.
    pub fn from_cochain(phi: &Cochain0) -> Self {
        Self { grid: *phi.grid(), values: phi.restrict_to_domain().components().clone() }
    }

    pub fn from_components(grid: GridSpec, values: Components) -> Self {
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn components(&self) -> &Components {
        &self.values
    }

    /// Cell value `c_{k,s}`.
    pub fn cell(&self, k: i64, s: i64) -> Complex64 {
        self.values.get(k, s)
    }

    /// The backing 0-form (interior cells only).
    pub fn cochain(&self) -> Cochain0 {
        Cochain0::from_fn(self.grid, |k, s| self.values.get(k, s))
    }

    /// Cell containing `(x, y)`; points on cell lines go to the cell above/right.
    pub fn locate(&self, x: f64, y: f64) -> (i64, i64) {
        let g = &self.grid;
        (
            ((x - g.a1) / g.h).floor() as i64 + 1,
            ((y - g.b1) / g.h).floor() as i64 + 1,
        )
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let (k, s) = self.locate(x, y);
        self.cell(k, s)
    }

    fn sum_sq<I: Iterator<Item = (i64, i64, Complex64)>>(&self, it: I) -> f64 {
        let h2 = self.grid.h * self.grid.h;
        it.map(|(_, _, z)| h2 * z.norm_sqr()).sum::<f64>()
    }

    /// `||.||_{L^2(Omega)}`: cells inside the rectangle only.
    pub fn l2_norm_domain(&self) -> f64 {
        let g = self.grid;
        self.sum_sq(self.values.iter().filter(|&(k, s, _)| g.contains(k, s))).sqrt()
    }

    /// `||.||_{L^2(R^2)}` of the zero-extended field.
    pub fn l2_norm(&self) -> f64 {
        self.sum_sq(self.values.iter()).sqrt()
    }

    /// Forward difference quotients
    /// `Δ_x^h f(x, y) = (f(x + h, y) - f(x, y)) / h` and the same in `y`.
    ///
    /// Both are stored on the whole cell window where they can be nonzero,
    /// which includes the collar of cells `k = 0` and `s = 0` outside the
    /// rectangle.
    pub fn difference_d(&self) -> StepOneForm {
        let h = self.grid.h;
        let (ks, ss) = (self.values.k_range(), self.values.s_range());
        let wide_k = (*ks.start() - 1)..=*ks.end();
        let wide_s = (*ss.start() - 1)..=*ss.end();
        let f = &self.values;
        let u = Components::from_fn(wide_k, ss.clone(), |k, s| (f.get(k + 1, s) - f.get(k, s)) / h);
        let v = Components::from_fn(ks, wide_s, |k, s| (f.get(k, s + 1) - f.get(k, s)) / h);
        StepOneForm {
            u: StepField::from_components(self.grid, u),
            v: StepField::from_components(self.grid, v),
        }
    }

    /// `||phi^h||_W`: the `L^2` norm over the plane of the difference quotients.
    pub fn w_norm(&self) -> f64 {
        self.difference_d().l2_norm()
    }

    /// Steklov average `J^h f(x, y) = h^-2 ∫_x^{x+h} ∫_y^{y+h} f`.
    ///
    /// The window meets at most four cells; the integral is the exact sum of
    /// cell values weighted by overlap area.
    pub fn steklov_eval(&self, x: f64, y: f64) -> Complex64 {
        let g = &self.grid;
        let h = g.h;
        let (k0, s0) = self.locate(x, y);
        let overlap = |lo: f64, cell_lo: f64| ((lo + h).min(cell_lo + h) - lo.max(cell_lo)).max(0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for s in s0..=s0 + 1 {
            let wy = overlap(y, g.b1 + (s - 1) as f64 * h);
            if wy == 0.0 {
                continue;
            }
            for k in k0..=k0 + 1 {
                let wx = overlap(x, g.a1 + (k - 1) as f64 * h);
                if wx != 0.0 {
                    acc += self.cell(k, s) * (wx * wy);
                }
            }
        }
        acc / (h * h)
    }
}

/// Step 1-form `omega^h = (u^h, v^h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOneForm {
    pub u: StepField,
    pub v: StepField,
}

impl StepOneForm {
    /// Backing 1-form: `u_{k,s}`, `v_{k,s}` are the cell values on `0..=N x 0..=M`.
    pub fn cochain(&self) -> Cochain1 {
        Cochain1::from_fn(*self.u.grid(), |k, s| (self.u.cell(k, s), self.v.cell(k, s)))
    }

    /// `||omega^h||_{L^2 Λ^1(Omega)}`.
    pub fn l2_norm_domain(&self) -> f64 {
        self.u.l2_norm_domain().hypot(self.v.l2_norm_domain())
    }

    pub fn l2_norm(&self) -> f64 {
        self.u.l2_norm().hypot(self.v.l2_norm())
    }
}

/// `||phi||_W = (sum_{k=0..N} sum_{s=0..M} |Δ_k phi_{k,s}|^2 + |Δ_s phi_{k,s}|^2)^{1/2}`,
/// reading `phi` as zero off the interior.
pub fn w_norm(phi: &Cochain0) -> f64 {
    let g = phi.grid();
    let p = |k, s| if g.contains(k, s) { phi.get(k, s) } else { Complex64::new(0.0, 0.0) };
    let (ks, ss) = g.extended();
    let mut acc = 0.0;
    for s in ss {
        for k in ks.clone() {
            acc += (p(k + 1, s) - p(k, s)).norm_sqr() + (p(k, s + 1) - p(k, s)).norm_sqr();
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn w_norm_single_point() {
        let g = GridSpec::lattice(1, 1).unwrap();
        let phi = Cochain0::from_fn(g, |_, _| c(1.0, 0.0));
        assert_eq!(w_norm(&phi), 2.0);
        assert_eq!(w_norm(&Cochain0::zeros(g)), 0.0);
    }

    #[test]
    fn norm_scales_with_h() {
        let g = GridSpec::new(3, 2, -1.0, 0.0, 0.5, 1.0).unwrap();
        let phi = Cochain0::from_fn(g, |k, s| c(k as f64, -(s as f64)));
        let f = StepField::from_cochain(&phi);
        assert!((f.l2_norm_domain() - g.h * phi.norm()).abs() < 1e-15);
        assert_eq!(f.l2_norm_domain(), f.l2_norm());
    }

    #[test]
    fn eval_reads_cells_and_zero_outside() {
        let g = GridSpec::unit_square(2).unwrap();
        let phi = Cochain0::from_fn(g, |k, s| c((10 * k + s) as f64, 0.0));
        let f = StepField::from_cochain(&phi);
        assert_eq!(f.eval(0.2, 0.7), c(12.0, 0.0));
        assert_eq!(f.eval(0.9, 0.1), c(21.0, 0.0));
        assert_eq!(f.eval(-0.1, 0.5), c(0.0, 0.0));
        assert_eq!(f.eval(0.5, 1.2), c(0.0, 0.0));
    }

    #[test]
    fn steklov_examples() {
        let g = GridSpec::unit_square(4).unwrap();
        let k = c(3.0, -1.0);
        let f = StepField::from_cochain(&Cochain0::from_fn(g, |_, _| k));
        assert!((f.steklov_eval(0.3, 0.41) - k).norm() < 1e-15);

        let phi = Cochain0::from_fn(g, |k, s| c((k + 4 * s) as f64, 0.0));
        let f = StepField::from_cochain(&phi);
        assert!((f.steklov_eval(0.25, 0.5) - phi.get(2, 3)).norm() < 1e-14);

        let half = Cochain0::from_fn(g, |k, _| c(if k >= 2 { 1.0 } else { 0.0 }, 0.0));
        let f = StepField::from_cochain(&half);
        assert!((f.steklov_eval(0.125, 0.25) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn steklov_uses_zero_extension() {
        let g = GridSpec::unit_square(2).unwrap();
        let f = StepField::from_cochain(&Cochain0::from_fn(g, |_, _| c(1.0, 0.0)));
        assert!((f.steklov_eval(-0.25, 0.0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((f.steklov_eval(0.75, 0.75) - c(0.25, 0.0)).norm() < 1e-15);
        assert_eq!(f.steklov_eval(3.0, 3.0), c(0.0, 0.0));
    }

    #[test]
    fn difference_matches_coboundary() {
        let g = GridSpec::new(3, 4, 0.0, 0.0, 1.5, 2.0).unwrap();
        let phi = Cochain0::from_fn(g, |k, s| c((k * s) as f64, k as f64 - 2.0));
        let w = StepField::from_cochain(&phi).difference_d();
        let dphi = phi.d();
        let scaled = w.cochain().scale(c(g.h, 0.0));
        assert!(scaled.max_abs_diff(&dphi) < 1e-14);
        let interior_norm = dphi.norm() / g.h;
        assert!((w.l2_norm_domain() - g.h * interior_norm).abs() < 1e-13 * interior_norm);
    }

    #[test]
    fn constant_field_differences_vanish_inside() {
        let g = GridSpec::unit_square(5).unwrap();
        let w = StepField::from_cochain(&Cochain0::from_fn(g, |_, _| c(2.0, 0.0))).difference_d();
        for s in 1..=5 {
            for k in 1..5 {
                assert_eq!(w.u.cell(k, s), c(0.0, 0.0));
                assert_eq!(w.v.cell(s, k), c(0.0, 0.0));
            }
            assert!((w.u.cell(5, s) - c(-10.0, 0.0)).norm() < 1e-12);
            assert!((w.u.cell(0, s) - c(10.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn w_norm_is_integral_of_differences() {
        let g = GridSpec::new(4, 3, 0.0, 0.0, 2.0, 1.5).unwrap();
        let phi = Cochain0::from_fn(g, |k, s| c(k as f64 * 0.3, (s * s) as f64));
        let f = StepField::from_cochain(&phi);
        assert!((f.w_norm() - w_norm(&phi)).abs() <= 1e-12 * w_norm(&phi));
    }
}
