//! Structure relations and the theorem checkers built on them.

pub mod lemma;
pub mod pearson;
pub mod relation;

use rayon::prelude::*;

use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};
use crate::functionals::MomentFunctional;
use crate::operators::OperatorTable;
use crate::recurrence::{generate_ops, moments_from_recurrence, recurrence_from_polys, RecurrenceData};

/// A monic OPS bundled with its recurrence and a moment window of its
/// functional (normalized to `<u, 1> = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ops<F: Field> {
    recurrence: RecurrenceData<F>,
    polys: Vec<Poly<F>>,
    functional: MomentFunctional<F>,
}

impl<F: Field> Ops<F> {
    /// `P_0..=P_{n_max+1}` and moments up to `window`.
    pub fn from_recurrence(r: &RecurrenceData<F>, window: usize) -> Result<Self> {
        Ok(Ops {
            polys: generate_ops(r, r.n_max() + 2)?,
            functional: moments_from_recurrence(r, window)?,
            recurrence: r.clone(),
        })
    }

    /// Recovers the recurrence from the sequence itself.
    pub fn from_polys(polys: Vec<Poly<F>>, window: usize) -> Result<Self> {
        let recurrence = recurrence_from_polys(&polys)?;
        Ok(Ops { functional: moments_from_recurrence(&recurrence, window)?, recurrence, polys })
    }

    pub fn recurrence(&self) -> &RecurrenceData<F> {
        &self.recurrence
    }

    pub fn polys(&self) -> &[Poly<F>] {
        &self.polys
    }

    pub fn poly(&self, n: usize) -> Result<&Poly<F>> {
        self.polys.get(n).ok_or(Error::InsufficientDepth { needed: n, available: self.polys.len().saturating_sub(1) })
    }

    pub fn functional(&self) -> &MomentFunctional<F> {
        &self.functional
    }

    /// `<u, P_n^2>`.
    pub fn norm(&self, n: usize) -> Result<F> {
        self.recurrence.norm(n)
    }
}

/// `P^[k]_n = (gamma_n! / gamma_{n+k}!) D_x^k P_{n+k}` for every `n` the input reaches.
pub fn derived_sequence<F: Field>(polys: &[Poly<F>], k: usize, table: &OperatorTable<F>) -> Result<Vec<Poly<F>>> {
    if polys.len() <= k {
        return Ok(Vec::new());
    }
    polys[k..]
        .par_iter()
        .map(|p| {
            let d = table.dx_power(p, k)?;
            match d.lead() {
                Some(l) if !l.is_zero() => Ok(d.monic()),
                _ => Err(Error::DegreeCollapse {
                    which: format!("D_x^{k}"),
                    expected: p.degree().unwrap_or(0).saturating_sub(k),
                    found: "zero".into(),
                }),
            }
        })
        .collect()
}

/// Coefficients of `target` in a basis of polynomials with distinct exact
/// degrees, listed by decreasing degree, and the remainder left over.
pub(crate) fn peel<F: Field>(target: &Poly<F>, basis: &[&Poly<F>]) -> (Vec<F>, Poly<F>) {
    let mut rest = target.clone();
    let coeffs = basis
        .iter()
        .map(|b| {
            let (Some(d), Some(l)) = (b.degree(), b.lead()) else {
                return F::zero();
            };
            let c = rest.coeff(d) / l.clone();
            if !c.is_zero() {
                rest = &rest - &b.scale(&c);
            }
            c
        })
        .collect();
    (coeffs, rest)
}
