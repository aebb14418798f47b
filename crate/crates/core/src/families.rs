//! Closed-form recurrence generators: continuous dual Hahn, Wilson, the two
//! degree-one structure-relation branches and the Pearson-driven generator.

use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::recurrence::RecurrenceData;

fn checked<F: Field>(b: Vec<F>, c: Vec<F>) -> Result<RecurrenceData<F>> {
    if let Some(i) = c.iter().position(|x| x.is_zero()) {
        return Err(Error::RegularityViolation { n: i + 1 });
    }
    RecurrenceData::new(b, c)
}

/// Monic continuous dual Hahn recurrence in the variable `x^2`:
/// `B_n = (n+a+b)(n+a+c) + n(n+b+c-1) - a^2`,
/// `C_{n+1} = (n+1)(n+a+b)(n+a+c)(n+b+c)`.
pub fn cdh_recurrence<F: Field>(a: &F, b: &F, c: &F, n_max: usize) -> Result<RecurrenceData<F>> {
    let ab = a.clone() + b.clone();
    let ac = a.clone() + c.clone();
    let bc = b.clone() + c.clone();
    let mut bs = Vec::with_capacity(n_max + 1);
    let mut cs = Vec::with_capacity(n_max);
    for n in 0..=n_max {
        let nf = F::int(n as i64);
        bs.push(
            (nf.clone() + ab.clone()) * (nf.clone() + ac.clone()) + nf.clone() * (nf.clone() + bc.clone() - F::one())
                - a.clone() * a.clone(),
        );
        if n < n_max {
            cs.push(
                (nf.clone() + F::one()) * (nf.clone() + ab.clone()) * (nf.clone() + ac.clone()) * (nf + bc.clone()),
            );
        }
    }
    Ok(checked(bs, cs)?.tagged("cdh", &[("a", a), ("b", b), ("c", c)]))
}

/// Monic Wilson recurrence in the variable `x^2`:
/// `B_n = A_n + C_n - a^2`, `C_n^(ttrr) = A_{n-1} C_n` with
/// `A_n = (n+s-1)(n+a+b)(n+a+c)(n+a+d) / ((2n+s-1)(2n+s))`,
/// `C_n = n(n+b+c-1)(n+b+d-1)(n+c+d-1) / ((2n+s-2)(2n+s-1))`, `s = a+b+c+d`, `C_0 = 0`.
pub fn wilson_recurrence<F: Field>(a: &F, b: &F, c: &F, d: &F, n_max: usize) -> Result<RecurrenceData<F>> {
    let s = a.clone() + b.clone() + c.clone() + d.clone();
    let big_a = |n: i64| -> Result<F> {
        let nf = F::int(n);
        let den = (F::int(2 * n) + s.clone() - F::one()) * (F::int(2 * n) + s.clone());
        if den.is_zero() {
            return Err(Error::RegularityViolation { n: n.max(0) as usize });
        }
        Ok((nf.clone() + s.clone() - F::one())
            * (nf.clone() + a.clone() + b.clone())
            * (nf.clone() + a.clone() + c.clone())
            * (nf + a.clone() + d.clone())
            / den)
    };
    let big_c = |n: i64| -> Result<F> {
        if n == 0 {
            return Ok(F::zero());
        }
        let nf = F::int(n);
        let den = (F::int(2 * n) + s.clone() - F::int(2)) * (F::int(2 * n) + s.clone() - F::one());
        if den.is_zero() {
            return Err(Error::RegularityViolation { n: n as usize });
        }
        Ok(nf.clone()
            * (nf.clone() + b.clone() + c.clone() - F::one())
            * (nf.clone() + b.clone() + d.clone() - F::one())
            * (nf + c.clone() + d.clone() - F::one())
            / den)
    };
    let mut bs = Vec::with_capacity(n_max + 1);
    let mut cs = Vec::with_capacity(n_max);
    for n in 0..=n_max as i64 {
        bs.push(big_a(n)? + big_c(n)? - a.clone() * a.clone());
        if n >= 1 {
            cs.push(big_a(n - 1)? * big_c(n)?);
        }
    }
    Ok(checked(bs, cs)?.tagged("wilson", &[("a", a), ("b", b), ("c", c), ("d", d)]))
}

/// A degree-one structure-relation instance
/// `(z + c) D_x P_n = b_n S_x P_n + c_n S_x P_{n-1}` with its Pearson pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryInstance<F: Field> {
    pub recurrence: RecurrenceData<F>,
    pub c: F,
    /// `b_0..=b_{n_max}`.
    pub b_seq: Vec<F>,
    /// `c_0..=c_{n_max}` (`c_0 = 0`).
    pub c_seq: Vec<F>,
    pub phi: Poly<F>,
    pub psi: Poly<F>,
}

impl<F: Field> CorollaryInstance<F> {
    /// `pi = z + c`.
    pub fn pi(&self) -> Poly<F> {
        Poly::from_coeffs(vec![self.c.clone(), F::one()])
    }
}

/// `phi = -(B_1 - B_0 + 4 beta)(z - B_0)/2 - C_1`, `psi = z - B_0`.
pub fn degree_one_pearson<F: Field>(r: &RecurrenceData<F>, beta: &F) -> Result<(Poly<F>, Poly<F>)> {
    let b0 = r.b(0)?.clone();
    let b1 = r.b(1)?.clone();
    let c1 = r.c(1)?;
    let psi = Poly::from_coeffs(vec![-b0.clone(), F::one()]);
    let slope = -(b1 - b0 + F::int(4) * beta.clone()) / F::int(2);
    let phi = &psi.scale(&slope) - &Poly::constant(c1);
    Ok((phi, psi))
}

fn c5_term<F: Field>(beta: &F, c5: &F) -> F {
    c5.clone() * c5.clone() / (F::int(16) * beta.clone())
}

/// First branch, parametrized by `(a, b)`:
/// `B_n = -2 beta (4n(n+a+b) + 2ab + a + b) - c5^2/(16 beta)`,
/// `C_{n+1} = 4 beta^2 (n+1)(n+a+b)(2n+2a+1)(2n+2b+1)`,
/// `c = c5^2/(16 beta)`, `b_n = n`, `c_n = -beta n (2n+2a-1)(2n+2b-1)`.
pub fn corollary_branch1<F: Field>(beta: &F, c5: &F, a: &F, b: &F, n_max: usize) -> Result<CorollaryInstance<F>> {
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    let n_max = n_max.max(1);
    let shift = c5_term(beta, c5);
    let two = F::int(2);
    let four_beta_sq = F::int(4) * beta.clone() * beta.clone();
    let mut bs = Vec::with_capacity(n_max + 1);
    let mut cs = Vec::with_capacity(n_max);
    let mut b_seq = Vec::with_capacity(n_max + 1);
    let mut c_seq = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max as i64 {
        let nf = F::int(n);
        let inner = F::int(4) * nf.clone() * (nf.clone() + a.clone() + b.clone())
            + two.clone() * a.clone() * b.clone()
            + a.clone()
            + b.clone();
        bs.push(-two.clone() * beta.clone() * inner - shift.clone());
        if (n as usize) < n_max {
            cs.push(
                four_beta_sq.clone()
                    * (nf.clone() + F::one())
                    * (nf.clone() + a.clone() + b.clone())
                    * (two.clone() * nf.clone() + two.clone() * a.clone() + F::one())
                    * (two.clone() * nf.clone() + two.clone() * b.clone() + F::one()),
            );
        }
        b_seq.push(nf.clone());
        c_seq.push(
            -beta.clone()
                * nf.clone()
                * (two.clone() * nf.clone() + two.clone() * a.clone() - F::one())
                * (two.clone() * nf + two.clone() * b.clone() - F::one()),
        );
    }
    let recurrence = checked(bs, cs)?.tagged("branch1", &[("beta", beta), ("c5", c5), ("a", a), ("b", b)]);
    let (phi, psi) = degree_one_pearson(&recurrence, beta)?;
    Ok(CorollaryInstance { recurrence, c: shift, b_seq, c_seq, phi, psi })
}

/// Second branch, parametrized by `(d, e)` with `(d+1)(e+1) = 1 - c5^2/(64 beta^2)`:
/// `B_n = -8 beta n^2 - 8 beta (d+e-1) n + beta (1 - 4de) - c5^2/(16 beta)`,
/// `C_{n+1} = 16 beta^2 (n+1)(n+d+e-1)(n+d)(n+e)`,
/// `c = c5^2/(16 beta)`, `b_n = n`, `c_n = -4 beta n (n+d-1)(n+e-1)`.
pub fn corollary_branch2<F: Field>(beta: &F, c5: &F, d: &F, e: &F, n_max: usize) -> Result<CorollaryInstance<F>> {
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    let lhs = (d.clone() + F::one()) * (e.clone() + F::one());
    let rhs = F::one() - c5.clone() * c5.clone() / (F::int(64) * beta.clone() * beta.clone());
    if lhs != rhs {
        return Err(Error::ConstraintViolation(format!("(d+1)(e+1) = {lhs}, expected {rhs}")));
    }
    let n_max = n_max.max(1);
    let shift = c5_term(beta, c5);
    let de = d.clone() * e.clone();
    let sum = d.clone() + e.clone() - F::one();
    let mut bs = Vec::with_capacity(n_max + 1);
    let mut cs = Vec::with_capacity(n_max);
    let mut b_seq = Vec::with_capacity(n_max + 1);
    let mut c_seq = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max as i64 {
        let nf = F::int(n);
        bs.push(
            -F::int(8) * beta.clone() * nf.clone() * nf.clone() - F::int(8) * beta.clone() * sum.clone() * nf.clone()
                + beta.clone() * (F::one() - F::int(4) * de.clone())
                - shift.clone(),
        );
        if (n as usize) < n_max {
            cs.push(
                F::int(16)
                    * beta.clone()
                    * beta.clone()
                    * (nf.clone() + F::one())
                    * (nf.clone() + sum.clone())
                    * (nf.clone() + d.clone())
                    * (nf.clone() + e.clone()),
            );
        }
        b_seq.push(nf.clone());
        c_seq.push(
            -F::int(4) * beta.clone() * nf.clone() * (nf.clone() + d.clone() - F::one()) * (nf + e.clone() - F::one()),
        );
    }
    let recurrence = checked(bs, cs)?.tagged("branch2", &[("beta", beta), ("c5", c5), ("d", d), ("e", e)]);
    let (phi, psi) = degree_one_pearson(&recurrence, beta)?;
    Ok(CorollaryInstance { recurrence, c: shift, b_seq, c_seq, phi, psi })
}

/// Recurrence of the monic OPS of a functional with `D(phi u) = S(psi u)`,
/// `phi = a z^2 + b z + c`, `psi = d z + e`, on `x(s) = 4 beta s^2 + c5 s`.
pub fn thm41_recurrence<F: Field>(
    phi: &Poly<F>,
    psi: &Poly<F>,
    lat: &LatticeSpec<F>,
    n_max: usize,
) -> Result<RecurrenceData<F>> {
    lat.require_theorem_quadratic()?;
    if phi.degree().is_some_and(|k| k > 2) {
        return Err(Error::Invalid("phi must have degree at most 2".into()));
    }
    if psi.degree() != Some(1) {
        return Err(Error::Invalid("psi must have exact degree 1".into()));
    }
    let beta = lat.beta().clone();
    let c5 = lat.c5();
    let (a, b) = (phi.coeff(2), phi.coeff(1));
    let (d, e) = (psi.coeff(1), psi.coeff(0));
    let d_at = |k: i64| a.clone() * F::int(k) + d.clone();
    let e_at = |k: i64| {
        let kf = F::int(k);
        b.clone() * kf.clone() + e.clone() + F::int(2) * beta.clone() * d.clone() * kf.clone() * kf
    };
    let nonzero = |n: usize, k: i64| -> Result<F> {
        let v = d_at(k);
        if v.is_zero() {
            Err(Error::DegenerateDenominator { n, index: k })
        } else {
            Ok(v)
        }
    };

    let mut bs = Vec::with_capacity(n_max + 1);
    let mut cs = Vec::with_capacity(n_max);
    for n in 0..=n_max {
        let ni = n as i64;
        let nf = F::int(ni);
        let mut bn = -(nf.clone() + F::one()) * e_at(ni) / nonzero(n, 2 * ni)?
            - F::int(2) * beta.clone() * nf.clone() * (nf.clone() - F::one());
        if n >= 1 {
            bn = bn + nf.clone() * e_at(ni - 1) / nonzero(n, 2 * ni - 2)?;
        }
        bs.push(bn);
        if n == n_max {
            break;
        }

        let ratio = if n == 0 {
            F::one() / nonzero(n, 1)?
        } else {
            d_at(ni - 1) / (nonzero(n, 2 * ni - 1)? * nonzero(n, 2 * ni + 1)?)
        };
        let bn2 = beta.clone() * nf.clone() * nf.clone();
        let dn = d_at(ni);
        let phi_n = Poly::from_coeffs(vec![
            phi.eval(&bn2)
                + F::int(2) * beta.clone() * nf.clone() * psi.eval(&bn2)
                + nf.clone() / F::int(4) * c5.clone() * c5.clone() * dn.clone(),
            b.clone() + F::int(6) * beta.clone() * nf.clone() * dn,
            a.clone(),
        ]);
        let arg = -bn2 - e_at(ni) / nonzero(n, 2 * ni)?;
        cs.push(-(nf + F::one()) * ratio * phi_n.eval(&arg));
    }
    checked(bs, cs)
}

/// `B~_n = lambda B_n + tau`, `C~_n = lambda^2 C_n`, i.e.
/// `P~_n(z) = lambda^n P_n((z - tau)/lambda)`.
pub fn affine_conjugate<F: Field>(r: &RecurrenceData<F>, lambda: &F, tau: &F) -> Result<RecurrenceData<F>> {
    if lambda.is_zero() {
        return Err(Error::Invalid("lambda must be nonzero".into()));
    }
    let lam2 = lambda.clone() * lambda.clone();
    let b = r.b_all().iter().map(|x| lambda.clone() * x.clone() + tau.clone()).collect();
    let c = r.c_all().iter().map(|x| lam2.clone() * x.clone()).collect();
    Ok(RecurrenceData::new(b, c)?.with_metadata(r.family().map(str::to_string), r.params().clone()))
}
