//! Rectangle geometry and the combinatorial domain it is identified with.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on `(a2 - a1)/N == (b2 - b1)/M`.
const SCALE_TOL: f64 = 1e-12;

/// The rectangle `[a1, a2] x [b1, b2]` cut into `N x M` square cells of side `h`.
///
/// Cell `(k, s)`, `k = 1..=N`, `s = 1..=M`, is
/// `[a1 + (k-1)h, a1 + kh] x [b1 + (s-1)h, b1 + sh]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub m: usize,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub h: f64,
}

impl GridSpec {
    pub fn new(n: usize, m: usize, a1: f64, b1: f64, a2: f64, b2: f64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidGrid(format!("need N, M >= 1, got {n} x {m}")));
        }
        if !(a1.is_finite() && a2.is_finite() && b1.is_finite() && b2.is_finite()) {
            return Err(Error::InvalidGrid("non-finite rectangle".into()));
        }
        if a1 >= a2 || b1 >= b2 {
            return Err(Error::InvalidGrid(format!(
                "degenerate rectangle [{a1}, {a2}] x [{b1}, {b2}]"
            )));
        }
        let hx = (a2 - a1) / n as f64;
        let hy = (b2 - b1) / m as f64;
        if (hx - hy).abs() > SCALE_TOL * hx.max(hy) {
            return Err(Error::InvalidGrid(format!(
                "cells are not square: (a2-a1)/N = {hx}, (b2-b1)/M = {hy}"
            )));
        }
        Ok(Self { n, m, a1, b1, a2, b2, h: hx })
    }

    /// Unit-spaced lattice `[0, N] x [0, M]`, `h = 1`.
    pub fn lattice(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, 0.0, 0.0, n as f64, m as f64)
    }

    /// `[0, 1]^2` with `N x N` cells.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(n, n, 0.0, 0.0, 1.0, 1.0)
    }

    /// Number of interior unknowns, `N * M`.
    pub fn dim(&self) -> usize {
        self.n * self.m
    }

    /// Row-major (k fastest) position of interior point `(k, s)`.
    pub fn index(&self, k: i64, s: i64) -> usize {
        debug_assert!(self.contains(k, s));
        (s as usize - 1) * self.n + (k as usize - 1)
    }

    /// Inverse of [`GridSpec::index`].
    pub fn point(&self, idx: usize) -> (i64, i64) {
        ((idx % self.n) as i64 + 1, (idx / self.n) as i64 + 1)
    }

    /// Whether `(k, s)` is an interior index of the domain `V`.
    pub fn contains(&self, k: i64, s: i64) -> bool {
        k >= 1 && k <= self.n as i64 && s >= 1 && s <= self.m as i64
    }

    /// Lower-left corner of cell `(k, s)`.
    pub fn cell_origin(&self, k: i64, s: i64) -> (f64, f64) {
        (
            self.a1 + (k - 1) as f64 * self.h,
            self.b1 + (s - 1) as f64 * self.h,
        )
    }

    /// Interior index ranges `1..=N`, `1..=M`.
    pub fn interior(&self) -> (std::ops::RangeInclusive<i64>, std::ops::RangeInclusive<i64>) {
        (1..=self.n as i64, 1..=self.m as i64)
    }

    /// Extended ranges `0..=N`, `0..=M` used by 1-forms.
    pub fn extended(&self) -> (std::ops::RangeInclusive<i64>, std::ops::RangeInclusive<i64>) {
        (0..=self.n as i64, 0..=self.m as i64)
    }
}
