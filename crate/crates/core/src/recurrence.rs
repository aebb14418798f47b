//! Monic three-term recurrences `P_{n+1} = (z - B_n) P_n - C_n P_{n-1}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};
use crate::functionals::MomentFunctional;
use crate::wire;

/// `B_0..=B_{n_max}` and `C_1..=C_{n_max}`, plus optional family metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "RawRecurrence<F>")]
pub struct RecurrenceData<F: Field> {
    #[serde(rename = "B", with = "wire::scalars")]
    b: Vec<F>,
    /// `c[i]` holds `C_{i+1}`.
    #[serde(rename = "C", with = "wire::scalars")]
    c: Vec<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(bound = "", deny_unknown_fields)]
struct RawRecurrence<F: Field> {
    #[serde(rename = "B", with = "wire::scalars")]
    b: Vec<F>,
    #[serde(rename = "C", with = "wire::scalars")]
    c: Vec<F>,
    #[serde(default)]
    family: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, String>,
}

impl<F: Field> TryFrom<RawRecurrence<F>> for RecurrenceData<F> {
    type Error = Error;

    fn try_from(raw: RawRecurrence<F>) -> Result<Self> {
        Ok(RecurrenceData::new(raw.b, raw.c)?.with_metadata(raw.family, raw.params))
    }
}

impl<F: Field> RecurrenceData<F> {
    /// Takes `B_0, B_1, ...` and `C_1, C_2, ...`; the longer list is cut so that
    /// `n_max = min(#B - 1, #C)`. Every retained `C_n` must be nonzero.
    pub fn new(mut b: Vec<F>, mut c: Vec<F>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::Invalid("recurrence needs at least B_0".into()));
        }
        let n_max = (b.len() - 1).min(c.len());
        b.truncate(n_max + 1);
        c.truncate(n_max);
        if let Some(i) = c.iter().position(|x| x.is_zero()) {
            return Err(Error::RegularityViolation { n: i + 1 });
        }
        Ok(RecurrenceData { b, c, family: None, params: BTreeMap::new() })
    }

    pub fn with_metadata(mut self, family: Option<String>, params: BTreeMap<String, String>) -> Self {
        self.family = family;
        self.params = params;
        self
    }

    pub fn tagged(self, family: &str, params: &[(&str, &F)]) -> Self {
        let params = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        self.with_metadata(Some(family.to_string()), params)
    }

    pub fn n_max(&self) -> usize {
        self.b.len() - 1
    }

    pub fn family(&self) -> Option<&str> {
        self.family.as_deref()
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn b_all(&self) -> &[F] {
        &self.b
    }

    /// `C_1, C_2, ...`.
    pub fn c_all(&self) -> &[F] {
        &self.c
    }

    pub fn b(&self, n: usize) -> Result<&F> {
        self.b.get(n).ok_or(Error::InsufficientDepth { needed: n, available: self.n_max() })
    }

    /// `C_n` for `n >= 1`; `C_0` is taken as zero.
    pub fn c(&self, n: usize) -> Result<F> {
        if n == 0 {
            return Ok(F::zero());
        }
        self.c.get(n - 1).cloned().ok_or(Error::InsufficientDepth { needed: n, available: self.n_max() })
    }

    /// Replace `B_n` (`which = 'B'`) or `C_n` (`which = 'C'`).
    pub fn with_override(mut self, which: char, n: usize, value: F) -> Result<Self> {
        match which {
            'B' => {
                let available = self.n_max();
                *self.b.get_mut(n).ok_or(Error::InsufficientDepth { needed: n, available })? = value
            }
            'C' if n >= 1 => {
                if value.is_zero() {
                    return Err(Error::RegularityViolation { n });
                }
                let available = self.c.len();
                *self.c.get_mut(n - 1).ok_or(Error::InsufficientDepth { needed: n, available })? = value
            }
            _ => return Err(Error::Invalid(format!("cannot override {which}_{n}"))),
        }
        Ok(self)
    }

    /// Truncate to a smaller `n_max`.
    pub fn truncated(&self, n_max: usize) -> Result<Self> {
        if n_max > self.n_max() {
            return Err(Error::InsufficientDepth { needed: n_max, available: self.n_max() });
        }
        let mut out = self.clone();
        out.b.truncate(n_max + 1);
        out.c.truncate(n_max);
        Ok(out)
    }

    /// `h_n = C_1 C_2 ... C_n`, i.e. `<u, P_n^2>` when `<u, 1> = 1`.
    pub fn norm(&self, n: usize) -> Result<F> {
        (1..=n).try_fold(F::one(), |acc, k| Ok(acc * self.c(k)?))
    }
}

/// Monic `P_0, ..., P_{count-1}`; `count` may reach `n_max + 2`.
pub fn generate_ops<F: Field>(r: &RecurrenceData<F>, count: usize) -> Result<Vec<Poly<F>>> {
    if count > r.n_max() + 2 {
        return Err(Error::InsufficientDepth { needed: count - 1, available: r.n_max() + 1 });
    }
    let mut out: Vec<Poly<F>> = Vec::with_capacity(count);
    let mut prev = Poly::zero();
    let mut cur = Poly::one();
    for n in 0..count {
        out.push(cur.clone());
        if n + 1 == count {
            break;
        }
        let next = &(&cur.shift(1) - &cur.scale(r.b(n)?)) - &prev.scale(&r.c(n)?);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}

/// Moments `mu_0..=mu_window` of the functional with `mu_0 = 1` whose monic
/// OPS satisfies the recurrence. `window` may reach `2 n_max + 1`.
///
/// Maintains the expansion `z^n = sum_k c_{n,k} P_k` truncated to the indices
/// that can still reach `k = 0`; `mu_n = c_{n,0}`.
pub fn moments_from_recurrence<F: Field>(r: &RecurrenceData<F>, window: usize) -> Result<MomentFunctional<F>> {
    let depth = 2 * r.n_max() + 1;
    if window > depth {
        return Err(Error::InsufficientDepth { needed: window, available: depth });
    }
    let mut coeffs = vec![F::one()];
    let mut moments = vec![F::one()];
    for n in 0..window {
        let keep = (n + 1).min(window - n - 1) + 1;
        let mut next = vec![F::zero(); keep];
        for (k, slot) in next.iter_mut().enumerate() {
            let mut v = F::zero();
            if k >= 1 {
                if let Some(x) = coeffs.get(k - 1) {
                    v = v + x.clone();
                }
            }
            if let Some(x) = coeffs.get(k) {
                v = v + r.b(k)?.clone() * x.clone();
            }
            if let Some(x) = coeffs.get(k + 1) {
                v = v + r.c(k + 1)? * x.clone();
            }
            *slot = v;
        }
        moments.push(next[0].clone());
        coeffs = next;
    }
    MomentFunctional::new(moments)
}

/// Stieltjes procedure: `B_n = <u, z P_n^2> / <u, P_n^2>`,
/// `C_{n+1} = <u, P_{n+1}^2> / <u, P_n^2>`. Requires `2 n_max + 1 <= window`.
/// Every norm reachable inside the window is checked for regularity.
pub fn recurrence_from_moments<F: Field>(u: &MomentFunctional<F>, n_max: usize) -> Result<RecurrenceData<F>> {
    if 2 * n_max + 1 > u.window() {
        return Err(Error::WindowExhausted { needed: 2 * n_max + 1, window: u.window() });
    }
    let top = u.window() / 2;
    let mut b = Vec::new();
    let mut c = Vec::new();
    let mut prev = Poly::zero();
    let mut cur = Poly::one();
    let mut h_prev = F::one();
    for n in 0..=top {
        let sq = &cur * &cur;
        let h = u.pair(&sq)?;
        if h.is_zero() {
            return Err(Error::NotRegular { n });
        }
        if n >= 1 {
            c.push(h.clone() / h_prev.clone());
        }
        if 2 * n + 1 > u.window() {
            break;
        }
        let bn = u.pair(&sq.shift(1))? / h.clone();
        let cn = if n == 0 { F::zero() } else { c[n - 1].clone() };
        let next = &(&cur.shift(1) - &cur.scale(&bn)) - &prev.scale(&cn);
        b.push(bn);
        prev = std::mem::replace(&mut cur, next);
        h_prev = h;
    }
    b.truncate(n_max + 1);
    c.truncate(n_max);
    RecurrenceData::new(b, c)
}

/// Recurrence coefficients of a monic sequence `P_0..P_N`, certifying that it
/// obeys a three-term recurrence with nonzero `C_n`. Yields `n_max = N - 1`.
pub fn recurrence_from_polys<F: Field>(polys: &[Poly<F>]) -> Result<RecurrenceData<F>> {
    if polys.len() < 2 {
        return Err(Error::NotOps("need at least P_0 and P_1".into()));
    }
    for (n, p) in polys.iter().enumerate() {
        if p.degree() != Some(n) || !p.is_monic() {
            return Err(Error::NotOps(format!("P_{n} is not monic of degree {n}")));
        }
    }
    let mut b = Vec::new();
    let mut c = Vec::new();
    for n in 0..polys.len() - 1 {
        let rest = &polys[n].shift(1) - &polys[n + 1];
        let bn = rest.coeff(n);
        let tail = &rest - &polys[n].scale(&bn);
        if n == 0 {
            if !tail.is_zero() {
                return Err(Error::NotOps("P_1 - z P_0 is not a multiple of P_0".into()));
            }
        } else {
            let cn = tail.coeff(n - 1);
            if tail != polys[n - 1].scale(&cn) || cn.is_zero() {
                return Err(Error::NotOps(format!("no three-term relation at n = {n}")));
            }
            c.push(cn);
        }
        b.push(bn);
    }
    RecurrenceData::new(b, c)
}
