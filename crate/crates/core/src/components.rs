//! Rectangular windows of complex lattice values with zero continuation.
//!
//! Every cochain is a finitely supported function on `Z^2`. A [`Components`]
//! stores it on an inclusive index window; reads outside the window return
//! exactly zero, writes outside it are rejected.

use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Components {
    k0: i64,
    s0: i64,
    nk: usize,
    ns: usize,
    data: Vec<Complex64>,
}

fn span(r: &RangeInclusive<i64>) -> usize {
    if r.is_empty() {
        0
    } else {
        (r.end() - r.start() + 1) as usize
    }
}

impl Components {
    pub fn zeros(ks: RangeInclusive<i64>, ss: RangeInclusive<i64>) -> Self {
        let (nk, ns) = (span(&ks), span(&ss));
        Self {
            k0: *ks.start(),
            s0: *ss.start(),
            nk,
            ns,
            data: vec![ZERO; nk * ns],
        }
    }

    /// Fills the window from `f(k, s)`, k fastest.
    pub fn from_fn<F>(ks: RangeInclusive<i64>, ss: RangeInclusive<i64>, mut f: F) -> Self
    where
        F: FnMut(i64, i64) -> Complex64,
    {
        let mut out = Self::zeros(ks, ss);
        for j in 0..out.ns {
            for i in 0..out.nk {
                out.data[j * out.nk + i] = f(out.k0 + i as i64, out.s0 + j as i64);
            }
        }
        out
    }

    pub fn k_range(&self) -> RangeInclusive<i64> {
        self.k0..=self.k0 + self.nk as i64 - 1
    }

    pub fn s_range(&self) -> RangeInclusive<i64> {
        self.s0..=self.s0 + self.ns as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn stores(&self, k: i64, s: i64) -> bool {
        k >= self.k0
            && s >= self.s0
            && ((k - self.k0) as usize) < self.nk
            && ((s - self.s0) as usize) < self.ns
    }

    #[inline]
    fn offset(&self, k: i64, s: i64) -> Option<usize> {
        self.stores(k, s)
            .then(|| (s - self.s0) as usize * self.nk + (k - self.k0) as usize)
    }

    /// Component at `(k, s)`; zero outside the stored window.
    #[inline]
    pub fn get(&self, k: i64, s: i64) -> Complex64 {
        self.offset(k, s).map_or(ZERO, |i| self.data[i])
    }

    pub fn set(&mut self, k: i64, s: i64, value: Complex64) -> Result<()> {
        match self.offset(k, s) {
            Some(i) => {
                self.data[i] = value;
                Ok(())
            }
            None => Err(Error::OutOfRange { k, s }),
        }
    }

    /// Stored entries in k-fastest order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        self.data.iter().enumerate().map(move |(i, &z)| {
            (
                self.k0 + (i % self.nk.max(1)) as i64,
                self.s0 + (i / self.nk.max(1)) as i64,
                z,
            )
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            data: self.data.iter().map(|&z| f(z)).collect(),
            ..self.clone()
        }
    }

    /// `out(k, s) = self(k - dk, s - ds)`.
    pub fn shifted(&self, dk: i64, ds: i64) -> Self {
        Self {
            k0: self.k0 + dk,
            s0: self.s0 + ds,
            ..self.clone()
        }
    }

    /// Same function re-stored on another window (values outside it are dropped).
    pub fn restrict(&self, ks: RangeInclusive<i64>, ss: RangeInclusive<i64>) -> Self {
        Self::from_fn(ks, ss, |k, s| self.get(k, s))
    }

    /// Smallest window containing both operands' windows.
    pub fn hull(&self, other: &Self) -> (RangeInclusive<i64>, RangeInclusive<i64>) {
        if self.is_empty() {
            return (other.k_range(), other.s_range());
        }
        if other.is_empty() {
            return (self.k_range(), self.s_range());
        }
        let (a, b) = (self.k_range(), other.k_range());
        let (c, d) = (self.s_range(), other.s_range());
        (
            *a.start().min(b.start())..=*a.end().max(b.end()),
            *c.start().min(d.start())..=*c.end().max(d.end()),
        )
    }

    /// Pointwise `f(self, other)` on the hull of both windows.
    pub fn zip_with<F>(&self, other: &Self, f: F) -> Self
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        let (ks, ss) = self.hull(other);
        Self::from_fn(ks, ss, |k, s| f(self.get(k, s), other.get(k, s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| c * z)
    }

    /// Largest modulus over the stored window.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Sup-distance between the two functions on `Z^2`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// `sum z_{k,s} conj(w_{k,s})` over the given index ranges.
    pub fn dot_over(
        &self,
        other: &Self,
        ks: RangeInclusive<i64>,
        ss: RangeInclusive<i64>,
    ) -> Complex64 {
        let mut acc = ZERO;
        for s in ss {
            for k in ks.clone() {
                acc += self.get(k, s) * other.get(k, s).conj();
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn reads_outside_window_are_zero() {
        let a = Components::from_fn(1..=2, 1..=3, |k, s| c((10 * k + s) as f64));
        assert_eq!(a.get(2, 3), c(23.0));
        assert_eq!(a.get(0, 1), ZERO);
        assert_eq!(a.get(3, 1), ZERO);
        assert_eq!(a.get(1, 4), ZERO);
        assert_eq!(a.get(-7, 100), ZERO);
    }

    #[test]
    fn writes_outside_window_fail() {
        let mut a = Components::zeros(0..=2, 0..=2);
        assert!(a.set(2, 2, c(1.0)).is_ok());
        assert!(matches!(a.set(3, 0, c(1.0)), Err(Error::OutOfRange { k: 3, s: 0 })));
    }

    #[test]
    fn sum_spans_the_hull() {
        let a = Components::from_fn(1..=1, 1..=1, |_, _| c(1.0));
        let b = Components::from_fn(3..=3, 0..=0, |_, _| c(2.0));
        let sum = a.add(&b);
        assert_eq!(sum.k_range(), 1..=3);
        assert_eq!(sum.s_range(), 0..=1);
        assert_eq!(sum.get(1, 1), c(1.0));
        assert_eq!(sum.get(3, 0), c(2.0));
        assert_eq!(sum.get(2, 0), ZERO);
    }

    #[test]
    fn iter_is_k_fastest() {
        let a = Components::from_fn(0..=1, 5..=6, |k, s| c((k + 10 * s) as f64));
        let order: Vec<_> = a.iter().map(|(k, s, _)| (k, s)).collect();
        assert_eq!(order, vec![(0, 5), (1, 5), (0, 6), (1, 6)]);
    }

    #[test]
    fn empty_window() {
        #[allow(clippy::reversed_empty_ranges)]
        let e = Components::zeros(1..=0, 1..=3);
        assert!(e.is_empty());
        assert_eq!(e.get(1, 1), ZERO);
        let a = Components::from_fn(2..=2, 2..=2, |_, _| c(5.0));
        assert_eq!(e.add(&a), a);
    }
}
