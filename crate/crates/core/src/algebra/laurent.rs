use std::collections::BTreeMap;
use std::fmt;


use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Laurent polynomial in `t`, keyed by signed exponent. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent<F> {
    terms: BTreeMap<i64, F>,
}

impl<F: Field> Laurent<F> {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: F, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, F)>>(items: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in items {
            out.accumulate(e, c);
        }
        out
    }

    fn accumulate(&mut self, exp: i64, c: F) {
        if c.is_zero() {
            return;
        }
        let next = match self.terms.remove(&exp) {
            Some(old) => old + c,
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(exp, next);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> F {
        self.terms.get(&exp).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                out.accumulate(ea + eb, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { terms: self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())).collect() }
    }

    /// Evaluate at a nonzero point.
    pub fn eval(&self, t: &F) -> F {
        self.terms
            .iter()
            .fold(F::zero(), |acc, (e, c)| acc + c.clone() * t.powi(*e))
    }

    /// Split into `t^shift * p(t)` with `p(0) != 0`.
    fn to_shifted_poly(&self) -> (i64, Poly<F>) {
        let Some(lo) = self.min_exp() else {
            return (0, Poly::zero());
        };
        let hi = self.max_exp().unwrap_or(lo);
        let mut coeffs = vec![F::zero(); (hi - lo) as usize + 1];
        for (e, c) in &self.terms {
            coeffs[(e - lo) as usize] = c.clone();
        }
        (lo, Poly::from_coeffs(coeffs))
    }

    fn from_shifted_poly(shift: i64, p: &Poly<F>) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| (k as i64 + shift, c.clone())))
    }

    /// Exact quotient in the Laurent ring.
    pub fn exact_div(&self, den: &Self) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (sn, pn) = self.to_shifted_poly();
        let (sd, pd) = den.to_shifted_poly();
        let q = pn
            .exact_div(&pd)
            .map_err(|_| Error::NonZeroRemainder { remainder: format!("{self} / ({den})") })?;
        Ok(Self::from_shifted_poly(sn - sd, &q))
    }
}

impl<F: Field> fmt::Display for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| match e {
                0 => c.to_string(),
                1 => format!("({c})t"),
                _ => format!("({c})t^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational as Q;

    #[test]
    fn division_with_negative_exponents() {
        // (t - t^-1)(2t^-2 + 3) = 2t^-1 + 3t - 2t^-3 - 3t^-1
        let a = Laurent::from_terms([(1, Q::int(1)), (-1, Q::int(-1))]);
        let b = Laurent::from_terms([(-2, Q::int(2)), (0, Q::int(3))]);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        let bad = Laurent::from_terms([(0, Q::int(1)), (3, Q::int(1))]);
        assert!(bad.exact_div(&a).is_err());
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = Laurent::from_terms([(2, Q::int(1)), (-1, Q::int(4))]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.eval(&Q::int(2)), Q::int(6));
    }
}
