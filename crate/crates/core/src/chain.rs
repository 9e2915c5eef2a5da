//! Chains of the two-dimensional complex, the boundary operator, and the
//! chain–cochain pairing.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::cochain::Form;
use crate::error::{Error, Result};

/// Basis element of the complex: point `x_{k,s}`, horizontal edge
/// `e^1_{k,s} = (x_{k,s}, x_{k+1,s})`, vertical edge
/// `e^2_{k,s} = (x_{k,s}, x_{k,s+1})`, or cell `V_{k,s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisElement {
    Point(i64, i64),
    HEdge(i64, i64),
    VEdge(i64, i64),
    Cell(i64, i64),
}

impl BasisElement {
    pub fn degree(&self) -> u8 {
        match self {
            BasisElement::Point(..) => 0,
            BasisElement::HEdge(..) | BasisElement::VEdge(..) => 1,
            BasisElement::Cell(..) => 2,
        }
    }
}

/// Finite real combination of basis elements of a single degree.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Chain {
    degree: Option<u8>,
    terms: BTreeMap<BasisElement, f64>,
}

impl Chain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(e: BasisElement) -> Self {
        let mut c = Self::zero();
        c.terms.insert(e, 1.0);
        c.degree = Some(e.degree());
        c
    }

    /// Adds `coeff * e`. Mixing degrees is rejected.
    pub fn add_term(&mut self, e: BasisElement, coeff: f64) -> Result<()> {
        match self.degree {
            Some(d) if d != e.degree() => {
                return Err(Error::DegreeMismatch { expected: d, found: e.degree() })
            }
            _ => self.degree = Some(e.degree()),
        }
        let entry = self.terms.entry(e).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.remove(&e);
        }
        Ok(())
    }

    pub fn with(mut self, e: BasisElement, coeff: f64) -> Result<Self> {
        self.add_term(e, coeff)?;
        Ok(self)
    }

    /// Degree of the chain; `None` only for a chain that never held a term.
    pub fn degree(&self) -> Option<u8> {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &BasisElement) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElement, &f64)> {
        self.terms.iter()
    }

    /// Boundary operator, extended linearly from
    /// `dx = 0`, `de^1_{k,s} = x_{k+1,s} - x_{k,s}`, `de^2_{k,s} = x_{k,s+1} - x_{k,s}`,
    /// `dV_{k,s} = e^1_{k,s} + e^2_{k+1,s} - e^1_{k,s+1} - e^2_{k,s}`.
    pub fn boundary(&self) -> Chain {
        use BasisElement::*;
        let mut out = Chain::zero();
        if let Some(d) = self.degree {
            if d > 0 {
                out.degree = Some(d - 1);
            }
        }
        for (&e, &c) in &self.terms {
            let faces: &[(BasisElement, f64)] = &match e {
                Point(..) => vec![],
                HEdge(k, s) => vec![(Point(k + 1, s), 1.0), (Point(k, s), -1.0)],
                VEdge(k, s) => vec![(Point(k, s + 1), 1.0), (Point(k, s), -1.0)],
                Cell(k, s) => vec![
                    (HEdge(k, s), 1.0),
                    (VEdge(k + 1, s), 1.0),
                    (HEdge(k, s + 1), -1.0),
                    (VEdge(k, s), -1.0),
                ],
            };
            for &(f, sign) in faces {
                out.add_term(f, sign * c).expect("faces share one degree");
            }
        }
        out
    }

    /// `<c, alpha>`: bilinear extension of the Kronecker pairing.
    pub fn pair(&self, alpha: &Form) -> Result<Complex64> {
        if let Some(d) = self.degree {
            if d != alpha.degree() {
                return Err(Error::DegreeMismatch { expected: d, found: alpha.degree() });
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (&e, &c) in &self.terms {
            let value = match (e, alpha) {
                (BasisElement::Point(k, s), Form::Zero(phi)) => phi.get(k, s),
                (BasisElement::HEdge(k, s), Form::One(w)) => w.u(k, s),
                (BasisElement::VEdge(k, s), Form::One(w)) => w.v(k, s),
                (BasisElement::Cell(k, s), Form::Two(eta)) => eta.get(k, s),
                _ => unreachable!("degree checked above"),
            };
            acc += c * value;
        }
        Ok(acc)
    }
}

/// Free-function form of [`Chain::boundary`].
pub fn boundary(c: &Chain) -> Chain {
    c.boundary()
}

/// Free-function form of [`Chain::pair`].
pub fn pairing(c: &Chain, alpha: &Form) -> Result<Complex64> {
    c.pair(alpha)
}
