//! JSON wire helpers: every rational travels as a `"p/q"` (or `"p"`) string.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};

pub fn parse<F: Field>(text: &str) -> Result<F> {
    F::parse(text).ok_or_else(|| Error::Invalid(format!("not a rational: {text:?}")))
}

pub fn parse_all<F: Field, S: AsRef<str>>(items: &[S]) -> Result<Vec<F>> {
    items.iter().map(|s| parse(s.as_ref())).collect()
}

pub fn render_all<F: Field>(items: &[F]) -> Vec<String> {
    items.iter().map(|x| x.to_string()).collect()
}

pub fn render_poly<F: Field>(p: &Poly<F>) -> Vec<String> {
    render_all(p.coeffs())
}

/// `#[serde(with = "wire::scalar")]`
pub mod scalar {
    use super::*;

    pub fn serialize<F: Field, S: Serializer>(x: &F, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(d: D) -> std::result::Result<F, D::Error> {
        let text = String::deserialize(d)?;
        F::parse(&text).ok_or_else(|| D::Error::custom(format!("not a rational: {text:?}")))
    }
}

/// `#[serde(with = "wire::scalars")]`
pub mod scalars {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<F: Field, S: Serializer>(xs: &[F], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<F>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items
            .iter()
            .map(|t| F::parse(t).ok_or_else(|| D::Error::custom(format!("not a rational: {t:?}"))))
            .collect()
    }
}

/// `#[serde(with = "wire::poly")]`: ascending coefficient list.
pub mod poly {
    use super::*;

    pub fn serialize<F: Field, S: Serializer>(p: &Poly<F>, s: S) -> std::result::Result<S::Ok, S::Error> {
        scalars::serialize(p.coeffs(), s)
    }

    pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(d: D) -> std::result::Result<Poly<F>, D::Error> {
        scalars::deserialize(d).map(Poly::from_coeffs)
    }
}
