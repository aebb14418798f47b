//! Exact scalar fields.
//!
//! Everything in this crate is generic over [`Field`]. The trait is only
//! implemented for exact rational types: the divided-difference machinery
//! relies on exact cancellation and exact equality, so binary floats are
//! deliberately left out.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact field of characteristic zero.
pub trait Field:
    Clone + Debug + Display + FromStr + PartialEq + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// The integer `n` embedded in the field.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits every supported field")
    }

    /// The fraction `num/den`. Panics when `den == 0`.
    fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::int(num) / Self::int(den)
    }

    /// Parse from the `"p/q"` / `"p"` wire form.
    fn parse(text: &str) -> Option<Self> {
        Self::from_str(text.trim()).ok()
    }

    /// Integer power with a signed exponent. Panics on `0^negative`.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 {
            assert!(!self.is_zero(), "zero to a negative power");
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    fn recip(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::one() / self.clone()
    }
}

impl Field for Ratio<BigInt> {}
impl Field for Ratio<i128> {}
impl Field for Ratio<i64> {}
