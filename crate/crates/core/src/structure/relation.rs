//! The degree-two structure relation
//! `pi D_x P_n = a_n S_x P_{n+1} + b_n S_x P_n + c_n S_x P_{n-1}`,
//! its coefficient tables and the closed-form conditions attached to it.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derived_sequence, peel, Ops};
use crate::algebra::{linalg, Field, Poly};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::operators::OperatorTable;
use crate::recurrence::RecurrenceData;
use crate::wire;

/// `(a_n, b_n, c_n)` for one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Deg2Coeffs<F: Field> {
    #[serde(with = "wire::scalar")]
    pub a: F,
    #[serde(with = "wire::scalar")]
    pub b: F,
    #[serde(with = "wire::scalar")]
    pub c: F,
}

fn images<F: Field>(polys: &[Poly<F>], table: &OperatorTable<F>, d: bool) -> Result<Vec<Poly<F>>> {
    polys.par_iter().map(|p| if d { table.dx(p) } else { table.sx(p) }).collect()
}

fn need<F: Field>(polys: &[Poly<F>], count: usize) -> Result<()> {
    if polys.len() < count {
        return Err(Error::InsufficientDepth { needed: count - 1, available: polys.len().saturating_sub(1) });
    }
    Ok(())
}

/// Solves the relation for `n = 0..=n_max` by triangular peeling in the
/// basis `S_x P_j`. Needs `P_0..=P_{n_max+1}`; `c_0` is `0`.
pub fn solve_deg2_relation<F: Field>(
    polys: &[Poly<F>],
    table: &OperatorTable<F>,
    pi: &Poly<F>,
    n_max: usize,
) -> Result<Vec<Deg2Coeffs<F>>> {
    if pi.degree().is_some_and(|d| d > 2) {
        return Err(Error::Invalid("pi must have degree at most two".into()));
    }
    need(polys, n_max + 2)?;
    let sp = images(&polys[..n_max + 2], table, false)?;
    let dp = images(&polys[..=n_max], table, true)?;
    (0..=n_max)
        .map(|n| {
            let lhs = pi * &dp[n];
            let mut basis = vec![&sp[n + 1], &sp[n]];
            if n >= 1 {
                basis.push(&sp[n - 1]);
            }
            let (c, rest) = peel(&lhs, &basis);
            if !rest.is_zero() {
                return Err(Error::NoSolution { n, residual: rest.to_string() });
            }
            Ok(Deg2Coeffs {
                a: c[0].clone(),
                b: c[1].clone(),
                c: c.get(2).cloned().unwrap_or_else(F::zero),
            })
        })
        .collect()
}

/// Basis of the space of `pi` (degree at most two) for which the relation
/// is solvable for every `n <= n_max`.
pub fn discover_deg2_pi<F: Field>(polys: &[Poly<F>], table: &OperatorTable<F>, n_max: usize) -> Result<Vec<Poly<F>>> {
    need(polys, n_max + 2)?;
    let sp = images(&polys[..n_max + 2], table, false)?;
    let dp = images(&polys[..=n_max], table, true)?;
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let mut basis = vec![&sp[n + 1], &sp[n]];
        if n >= 1 {
            basis.push(&sp[n - 1]);
        }
        let rests: Vec<Poly<F>> = (0..3).map(|i| peel(&dp[n].shift(i), &basis).1).collect();
        let top = rests.iter().filter_map(|r| r.degree()).max();
        for d in 0..=top.unwrap_or(0) {
            if top.is_some() {
                rows.push(rests.iter().map(|r| r.coeff(d)).collect());
            }
        }
    }
    if rows.is_empty() {
        return Ok((0..3).map(|i| Poly::monomial(F::one(), i)).collect());
    }
    Ok(linalg::null_space(&rows, 3).into_iter().map(Poly::from_coeffs).collect())
}

/// One coefficient table of the proof of the degree-two theorem, indexed by `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm35Table<F: Field> {
    pub n: usize,
    /// `a_{n,j}` for `j = 0..=n+1`: `sum_j a_{n,j} S_x P_j`.
    pub a: Vec<F>,
    /// `b_{n,j}` for `j = 0..=n+1`: `sum_j b_{n,j} P^[1]_j`.
    pub b: Vec<F>,
}

struct PiCoeffs<F> {
    a: F,
    b: F,
    c: F,
}

impl<F: Field> PiCoeffs<F> {
    fn of(pi: &Poly<F>) -> Self {
        PiCoeffs { a: pi.coeff(2), b: pi.coeff(1), c: pi.coeff(0) }
    }
}

/// Closed forms `a_n = n a` and
/// `b_n = b n + a n B_n - (2/3) a n beta (2n^2 + 6n + 1) + a sum_{j<n} B_j`.
pub fn thm35_an_bn<F: Field>(n: usize, r: &RecurrenceData<F>, pi: &Poly<F>, beta: &F) -> Result<(F, F)> {
    let p = PiCoeffs::of(pi);
    let nf = F::int(n as i64);
    let mut sum = F::zero();
    for j in 0..n {
        sum = sum + r.b(j)?.clone();
    }
    let poly = F::int(2 * (n * n) as i64 + 6 * n as i64 + 1);
    let bn = p.b.clone() * nf.clone() + p.a.clone() * nf.clone() * r.b(n)?.clone()
        - F::frac(2, 3) * p.a.clone() * nf.clone() * beta.clone() * poly
        + p.a.clone() * sum;
    Ok((nf * p.a, bn))
}

/// `c_1 = c - a(B_0-beta)(B_1-beta) + a(C_1 - c5^2/4) + (B_0-beta)(b - a(6 beta - B_0 - B_1))`.
pub fn thm35_c1<F: Field>(r: &RecurrenceData<F>, pi: &Poly<F>, beta: &F, c5: &F) -> Result<F> {
    let p = PiCoeffs::of(pi);
    let (b0, b1) = (r.b(0)?.clone(), r.b(1)?.clone());
    let c1 = r.c(1)?;
    let quarter = c5.clone() * c5.clone() / F::int(4);
    Ok(p.c - p.a.clone() * (b0.clone() - beta.clone()) * (b1.clone() - beta.clone())
        + p.a.clone() * (c1 - quarter)
        + (b0.clone() - beta.clone()) * (p.b - p.a * (F::int(6) * beta.clone() - b0 - b1)))
}

/// The proof's closed-form tables for index `n`, given the solved relation
/// coefficients. Entries outside the band are zero.
pub fn thm35_closed_forms<F: Field>(
    n: usize,
    r: &RecurrenceData<F>,
    pi: &Poly<F>,
    rel: &[Deg2Coeffs<F>],
    lat: &LatticeSpec<F>,
) -> Result<Thm35Table<F>> {
    let p = PiCoeffs::of(pi);
    let beta = lat.beta().clone();
    let c5 = lat.c5();
    let rn = rel.get(n).ok_or_else(|| Error::MissingData(format!("relation coefficients at n = {n}")))?;
    let two_a = F::int(2) * p.a.clone();
    let bp = p.b.clone() + two_a.clone() * beta.clone();
    let nf = |k: i64| F::int(k);
    let ni = n as i64;
    let bn = |k: usize| r.b(k).cloned();
    let mut a = vec![F::zero(); n + 2];
    let mut b = vec![F::zero(); n + 2];
    a[n + 1] = two_a.clone() + rn.a.clone();
    a[n] = rn.b.clone() + two_a.clone() * bn(n)? + bp.clone();
    if n >= 1 {
        a[n - 1] = rn.c.clone() + two_a.clone() * r.c(n)?;
    }
    b[n + 1] = p.a.clone() * nf(ni + 2);
    b[n] = nf(ni + 1) * (p.a.clone() * (bn(n + 1)? + bn(n)?) + bp.clone());
    if n >= 1 {
        let bn_ = bn(n)?;
        let quarter = c5.clone() * c5 / F::int(4);
        b[n - 1] = nf(ni)
            * (p.a.clone() * (r.c(n + 1)? + bn_.clone() * bn_.clone() + r.c(n)?)
                + bp.clone() * (bn_ - beta.clone())
                + p.c.clone()
                - p.a.clone() * (beta.clone() * beta.clone() - quarter));
    }
    if n >= 2 {
        b[n - 2] = nf(ni - 1) * r.c(n)? * (p.a.clone() * (bn(n - 1)? + bn(n)?) + bp);
    }
    if n >= 3 {
        b[n - 3] = p.a.clone() * nf(ni - 2) * r.c(n)? * r.c(n - 1)?;
    }
    Ok(Thm35Table { n, a, b })
}

/// Direct expansion: `pi D_x P_n + S_x(D_x pi P_n)` in the basis `S_x P_j`
/// and `D_x[(S_x pi - 2 beta D_x pi) P_n]` in the basis `P^[1]_j`. The two
/// sides are also compared as polynomials.
pub fn thm35_direct<F: Field>(n: usize, ops: &Ops<F>, table: &OperatorTable<F>, pi: &Poly<F>) -> Result<Thm35Table<F>> {
    let lat = table.lattice();
    lat.require_theorem_quadratic()?;
    need(ops.polys(), n + 3)?;
    let polys = &ops.polys()[..n + 3];
    let pn = &polys[n];
    let dpi = table.dx(pi)?;
    let spi = table.sx(pi)?;
    let lhs = &(pi * &table.dx(pn)?) + &table.sx(&(&dpi * pn))?;
    let weight = &spi - &dpi.scale(&(F::int(2) * lat.beta().clone()));
    let rhs = table.dx(&(&weight * pn))?;
    if lhs != rhs {
        return Err(Error::Mismatch { n, j: -1, detail: format!("product rule: {lhs} vs {rhs}") });
    }
    let sp = images(&polys[..n + 2], table, false)?;
    let p1 = derived_sequence(polys, 1, table)?;
    let expand = |target: &Poly<F>, basis: &[Poly<F>], what: &str| -> Result<Vec<F>> {
        let refs: Vec<&Poly<F>> = basis[..n + 2].iter().rev().collect();
        let (mut c, rest) = peel(target, &refs);
        if !rest.is_zero() {
            return Err(Error::Mismatch { n, j: -1, detail: format!("{what} expansion leaves {rest}") });
        }
        c.reverse();
        Ok(c)
    };
    Ok(Thm35Table { n, a: expand(&lhs, &sp, "S_x P")?, b: expand(&rhs, &p1, "P^[1]")? })
}

/// Closed forms against direct expansion at index `n`, including the
/// closed forms of `a_n`, `b_n` (and `c_1` when `n = 1`).
pub fn thm35_expansion<F: Field>(
    n: usize,
    ops: &Ops<F>,
    table: &OperatorTable<F>,
    pi: &Poly<F>,
    rel: &[Deg2Coeffs<F>],
) -> Result<Thm35Table<F>> {
    let lat = table.lattice();
    let r = ops.recurrence();
    let rn = rel.get(n).ok_or_else(|| Error::MissingData(format!("relation coefficients at n = {n}")))?;
    let (an, bn) = thm35_an_bn(n, r, pi, lat.beta())?;
    let mut scalar_checks = vec![("a_n", an, &rn.a), ("b_n", bn, &rn.b)];
    if n == 1 {
        scalar_checks.push(("c_1", thm35_c1(r, pi, lat.beta(), &lat.c5())?, &rn.c));
    }
    for (name, closed, solved) in scalar_checks {
        if &closed != solved {
            return Err(Error::Mismatch { n, j: n as i64, detail: format!("{name}: closed {closed}, solved {solved}") });
        }
    }
    let closed = thm35_closed_forms(n, r, pi, rel, lat)?;
    let direct = thm35_direct(n, ops, table, pi)?;
    for (name, cs, ds) in [("a", &closed.a, &direct.a), ("b", &closed.b, &direct.b)] {
        if let Some(j) = (0..cs.len()).find(|&j| cs[j] != ds[j]) {
            return Err(Error::Mismatch {
                n,
                j: j as i64,
                detail: format!("{name}_(n,j): closed {}, direct {}", cs[j], ds[j]),
            });
        }
    }
    Ok(direct)
}

/// The closed-form conditions of the degree-two and degree-one theorems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "deg2-1")]
    Deg2First,
    #[serde(rename = "deg2-2")]
    Deg2Second,
    #[serde(rename = "deg1")]
    Deg1,
    #[serde(rename = "c1-relation")]
    C1Relation,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::Deg2First, Condition::Deg2Second, Condition::Deg1, Condition::C1Relation];

    pub fn name(self) -> &'static str {
        match self {
            Condition::Deg2First => "deg2-1",
            Condition::Deg2Second => "deg2-2",
            Condition::Deg1 => "deg1",
            Condition::C1Relation => "c1-relation",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown condition {s:?}")))
    }
}

/// Inputs of [`condition_residual`]: the recurrence, the lattice constants,
/// `pi = a z^2 + b z + c` and the solved relation coefficients (if any).
#[derive(Clone, Debug)]
pub struct ConditionData<'a, F: Field> {
    pub recurrence: &'a RecurrenceData<F>,
    pub beta: F,
    pub c5: F,
    pub pi: Poly<F>,
    pub relation: &'a [Deg2Coeffs<F>],
}

impl<F: Field> ConditionData<'_, F> {
    fn b(&self, n: usize) -> Result<F> {
        self.recurrence.b(n).cloned().map_err(|_| Error::MissingData(format!("B_{n}")))
    }

    fn c(&self, n: usize) -> Result<F> {
        self.recurrence.c(n).map_err(|_| Error::MissingData(format!("C_{n}")))
    }

    fn rel(&self, n: usize) -> Result<&Deg2Coeffs<F>> {
        self.relation.get(n).ok_or_else(|| Error::MissingData(format!("relation coefficients at n = {n}")))
    }

    /// `r_i = c_i + 2 a C_i`.
    fn r(&self, i: usize) -> Result<F> {
        Ok(self.rel(i)?.c.clone() + F::int(2) * self.pi.coeff(2) * self.c(i)?)
    }
}

/// Left-minus-right residual of the named condition; `0` means satisfied.
pub fn condition_residual<F: Field>(which: Condition, d: &ConditionData<'_, F>) -> Result<F> {
    let beta = d.beta.clone();
    let c5sq = d.c5.clone() * d.c5.clone();
    let (a, b, c) = (d.pi.coeff(2), d.pi.coeff(1), d.pi.coeff(0));
    let int = |k: i64| F::int(k);
    match which {
        Condition::Deg1 => {
            let (b0, b1, c2) = (d.b(0)?, d.b(1)?, d.c(2)?);
            let five = int(5) * beta;
            let sq = |x: F| x.clone() * x;
            Ok(int(2) * (c2 + (b0.clone() - b1.clone()) * c) - (sq(b1 - five.clone()) - sq(b0 - five)))
        }
        Condition::C1Relation => {
            let (b0, b1, c1) = (d.b(0)?, d.b(1)?, d.c(1)?);
            Ok(int(2) * beta.clone() * c1
                - (b1 - b0.clone() + int(8) * beta.clone()) * ((b0 - beta.clone()) * beta + c5sq / int(16)))
        }
        Condition::Deg2First => {
            if a.is_zero() {
                return Err(Error::ConstraintViolation("deg2-1 applies only when a != 0".into()));
            }
            let (b0, b1) = (d.b(0)?, d.b(1)?);
            let (c1, c2, c3) = (d.c(1)?, d.c(2)?, d.c(3)?);
            let r3 = d.r(3)?;
            let diff = b1.clone() - b0.clone();
            Ok(int(6) * a.clone() * c2.clone() * c3
                + int(2) * (F::one() + a.recip()) * r3.clone() * (c1 - c5sq / int(4))
                + r3 * (diff.clone() * diff - int(8) * beta.clone() * (b0 + b1 - int(2) * beta) - int(2) * c2))
        }
        Condition::Deg2Second => {
            let (b0, b1, b2) = (d.b(0)?, d.b(1)?, d.b(2)?);
            let (c2, c3) = (d.c(2)?, d.c(3)?);
            let (r2, r3) = (d.r(2)?, d.r(3)?);
            let b2_rel = d.rel(2)?.b.clone();
            let bp = b + int(2) * a.clone() * beta;
            Ok(a.clone() * c2.clone() * c3 * (b2_rel + int(2) * a.clone() * b2.clone() + bp.clone())
                - r3 * (a * (b2 + b1.clone()) * c2.clone() + bp * c2 - r2 / int(2) * (b1 - b0)))
        }
    }
}

/// The displayed closed forms of `D_x P_2`, `S_x P_2`, `D_x P_3`, `S_x P_3`
/// on `x(s) = 4 beta s^2 + c5 s`, in terms of `B_0, B_1, B_2, C_1, C_2`.
pub fn corollary_display<F: Field>(r: &RecurrenceData<F>, lat: &LatticeSpec<F>) -> Result<[Poly<F>; 4]> {
    lat.require_theorem_quadratic()?;
    let be = lat.beta().clone();
    let q = lat.c5() * lat.c5() / F::int(4);
    let (b0, b1, b2) = (r.b(0)?.clone(), r.b(1)?.clone(), r.b(2)?.clone());
    let (c1, c2) = (r.c(1)?, r.c(2)?);
    let int = |k: i64| F::int(k);
    let s01 = b0.clone() + b1.clone();
    let m0 = be.clone() - b0.clone();
    let m1 = be.clone() - b1.clone();
    let m2 = be.clone() - b2.clone();
    let dp2 = Poly::from_coeffs(vec![int(2) * be.clone() - s01.clone(), int(2)]);
    let sp2 = Poly::from_coeffs(vec![
        m0.clone() * m1.clone() + q.clone() - c1.clone(),
        int(6) * be.clone() - s01.clone(),
        F::one(),
    ]);
    let dp3 = Poly::from_coeffs(vec![
        m2.clone() * (int(2) * be.clone() - s01.clone()) + m0.clone() * m1.clone() - c1.clone() - c2.clone() + q.clone(),
        int(2) * (int(5) * be.clone() - s01.clone() - b2.clone()),
        int(3),
    ]);
    let sp3 = Poly::from_coeffs(vec![
        (b0.clone() - be.clone()) * c2.clone() - (s01.clone() + b2.clone() - int(3) * be.clone()) * q.clone()
            + m2.clone() * (m0.clone() * m1.clone() - c1.clone()),
        int(4) * be.clone() * (int(2) * be.clone() - s01.clone()) + int(3) * q - c1 - c2
            + m0 * m1
            + m2 * (int(6) * be.clone() - s01.clone()),
        int(15) * be - s01 - b2,
        F::one(),
    ]);
    Ok([dp2, sp2, dp3, sp3])
}
