//! Exact scalars, polynomials and linear algebra.

pub mod field;
pub mod laurent;
pub mod linalg;
pub mod poly;

pub use field::Field;
pub use laurent::Laurent;
pub use poly::{interpolate, Poly};

use crate::error::Result;

/// Polynomial-like carrier of `f(x(s))`: plain polynomials in `s` for
/// quadratic lattices, Laurent polynomials in `t = q^s` for q-quadratic ones.
pub trait Carrier<F: Field>: Clone + PartialEq + std::fmt::Debug + std::fmt::Display {
    fn zero() -> Self;
    fn constant(c: F) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn scaled(&self, c: &F) -> Self;
    fn divide_exact(&self, den: &Self) -> Result<Self>;
    fn evaluate(&self, at: &F) -> F;
    fn vanishes(&self) -> bool;
}

impl<F: Field> Carrier<F> for Poly<F> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn constant(c: F) -> Self {
        Poly::constant(c)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scaled(&self, c: &F) -> Self {
        self.scale(c)
    }
    fn divide_exact(&self, den: &Self) -> Result<Self> {
        self.exact_div(den)
    }
    fn evaluate(&self, at: &F) -> F {
        self.eval(at)
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl<F: Field> Carrier<F> for Laurent<F> {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn constant(c: F) -> Self {
        Laurent::constant(c)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn scaled(&self, c: &F) -> Self {
        self.scale(c)
    }
    fn divide_exact(&self, den: &Self) -> Result<Self> {
        self.exact_div(den)
    }
    fn evaluate(&self, at: &F) -> F {
        self.eval(at)
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

/// Substitute `inner` for the variable of `p` (Horner).
pub fn compose<F: Field, C: Carrier<F>>(p: &Poly<F>, inner: &C) -> C {
    p.coeffs()
        .iter()
        .rev()
        .fold(C::zero(), |acc, c| acc.times(inner).plus(&C::constant(c.clone())))
}
