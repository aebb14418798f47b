//! Pearson equations `D_x(phi u) = S_x(psi u)` and the Sturm–Liouville
//! equations `phi D_x^2 Y + psi S_x D_x Y = lambda_n Y` they induce.

use serde::{Deserialize, Serialize};

use super::relation::Deg2Coeffs;
use crate::algebra::{linalg, Field, Poly};
use crate::error::{Error, Result};
use crate::functionals::MomentFunctional;
use crate::operators::OperatorTable;
use crate::recurrence::RecurrenceData;
use crate::wire;

/// `phi` of degree at most two and `psi` of exact degree one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "RawPearson<F>")]
pub struct PearsonData<F: Field> {
    #[serde(with = "wire::poly")]
    phi: Poly<F>,
    #[serde(with = "wire::poly")]
    psi: Poly<F>,
}

#[derive(Deserialize)]
#[serde(bound = "", deny_unknown_fields)]
struct RawPearson<F: Field> {
    #[serde(with = "wire::poly")]
    phi: Poly<F>,
    #[serde(with = "wire::poly")]
    psi: Poly<F>,
}

impl<F: Field> TryFrom<RawPearson<F>> for PearsonData<F> {
    type Error = Error;

    fn try_from(raw: RawPearson<F>) -> Result<Self> {
        PearsonData::new(raw.phi, raw.psi)
    }
}

impl<F: Field> PearsonData<F> {
    pub fn new(phi: Poly<F>, psi: Poly<F>) -> Result<Self> {
        if phi.degree().is_some_and(|d| d > 2) {
            return Err(Error::Invalid("phi must have degree at most 2".into()));
        }
        if psi.degree() != Some(1) {
            return Err(Error::Invalid("psi must have exact degree 1".into()));
        }
        Ok(PearsonData { phi, psi })
    }

    pub fn phi(&self) -> &Poly<F> {
        &self.phi
    }

    pub fn psi(&self) -> &Poly<F> {
        &self.psi
    }

    /// Rescaled so that `psi` is monic.
    pub fn normalized(&self) -> Self {
        let d = self.psi.coeff(1).recip();
        PearsonData { phi: self.phi.scale(&d), psi: self.psi.scale(&d) }
    }
}

/// `residual_j = <D_x(phi u) - S_x(psi u), z^j> = -<u, phi D_x z^j> - <u, psi S_x z^j>`
/// for `j <= test_degree`. Requires `test_degree + 2 <= window`.
pub fn pearson_check<F: Field>(
    pd: &PearsonData<F>,
    u: &MomentFunctional<F>,
    test_degree: usize,
    table: &OperatorTable<F>,
) -> Result<Vec<F>> {
    if test_degree + 2 > u.window() {
        return Err(Error::WindowExhausted { needed: test_degree + 2, window: u.window() });
    }
    (0..=test_degree)
        .map(|j| {
            let d = u.pair(&(&pd.phi * &table.d_monomial(j)?))?;
            let s = u.pair(&(&pd.psi * &table.s_monomial(j)?))?;
            Ok(-d - s)
        })
        .collect()
}

/// `phi D_x^2 P + psi S_x D_x P - lambda P`.
pub fn sturm_liouville_residual<F: Field>(
    phi: &Poly<F>,
    psi: &Poly<F>,
    lambda: &F,
    p: &Poly<F>,
    table: &OperatorTable<F>,
) -> Result<Poly<F>> {
    let dp = table.dx(p)?;
    let lhs = &(phi * &table.dx(&dp)?) + &(psi * &table.sx(&dp)?);
    Ok(&lhs - &p.scale(lambda))
}

/// `lambda_n = n(1 + (n - 1) a)`.
pub fn sl_eigenvalue<F: Field>(n: usize, frak_a: &F) -> F {
    let nf = F::int(n as i64);
    nf.clone() * (F::one() + (nf - F::one()) * frak_a.clone())
}

/// Residual polynomials for `n = 0..=n_max` with `lambda_n = n(1 + (n-1) a)`.
pub fn sturm_liouville_check<F: Field>(
    phi: &Poly<F>,
    psi: &Poly<F>,
    frak_a: &F,
    polys: &[Poly<F>],
    table: &OperatorTable<F>,
    n_max: usize,
) -> Result<Vec<Poly<F>>> {
    if polys.len() <= n_max {
        return Err(Error::InsufficientDepth { needed: n_max, available: polys.len().saturating_sub(1) });
    }
    (0..=n_max)
        .map(|n| sturm_liouville_residual(phi, psi, &sl_eigenvalue(n, frak_a), &polys[n], table))
        .collect()
}

/// Normalizes `psi` to be monic (so `lambda_1 = 1`) and fits `a` exactly from
/// `lambda_2 = 2(1 + a)`, the leading coefficient of the `n = 2` image.
pub fn fit_sl_parameter<F: Field>(
    pd: &PearsonData<F>,
    polys: &[Poly<F>],
    table: &OperatorTable<F>,
) -> Result<(PearsonData<F>, F)> {
    let p2 = polys.get(2).ok_or(Error::InsufficientDepth { needed: 2, available: polys.len().saturating_sub(1) })?;
    let pd = pd.normalized();
    let image = sturm_liouville_residual(&pd.phi, &pd.psi, &F::zero(), p2, table)?;
    let lambda2 = image.coeff(2);
    Ok((pd, lambda2 / F::int(2) - F::one()))
}

/// `a = a C_3 / (r_3 C_1)` with `r_3 = c_3 + 2 a C_3`, from the relation's
/// `pi = a z^2 + b z + c` and solved coefficients.
pub fn sl_parameter_from_relation<F: Field>(
    r: &RecurrenceData<F>,
    pi: &Poly<F>,
    rel: &[Deg2Coeffs<F>],
) -> Result<F> {
    let a = pi.coeff(2);
    let c3 = r.c(3)?;
    let c3_rel = rel.get(3).ok_or_else(|| Error::MissingData("relation coefficients at n = 3".into()))?;
    let r3 = c3_rel.c.clone() + F::int(2) * a.clone() * c3.clone();
    if r3.is_zero() {
        return Err(Error::ConstraintViolation("r_3 = 0".into()));
    }
    Ok(a * c3 / (r3 * r.c(1)?))
}

/// `phi = (B_0 - z)(a z + b - a B_1) - (a + 1) C_1`, `psi = z - B_0`,
/// `b = (B_1 - B_0 + 4 beta)/2`, for a given `a`.
pub fn theorem_pearson<F: Field>(r: &RecurrenceData<F>, frak_a: &F, beta: &F) -> Result<PearsonData<F>> {
    let (b0, b1, c1) = (r.b(0)?.clone(), r.b(1)?.clone(), r.c(1)?);
    let frak_b = (b1.clone() - b0.clone() + F::int(4) * beta.clone()) / F::int(2);
    let left = Poly::from_coeffs(vec![b0.clone(), -F::one()]);
    let right = Poly::from_coeffs(vec![frak_b - frak_a.clone() * b1, frak_a.clone()]);
    let phi = &(&left * &right) - &Poly::constant((frak_a.clone() + F::one()) * c1);
    PearsonData::new(phi, Poly::linear_factor(b0))
}

/// Outcome of [`recover_pearson`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredPearson<F: Field> {
    pub data: PearsonData<F>,
    /// Dimension of the solution space of the moment equations.
    pub null_dim: usize,
}

/// Solves `<D_x(phi u) - S_x(psi u), z^j> = 0` for every `j` the window
/// supports, unknowns `(phi_0, phi_1, phi_2, psi_0, psi_1)`. Among solutions
/// with `psi_1 = 1`, the one of least `deg phi` with remaining free unknowns
/// zero is returned. Requires `window >= 8`.
pub fn recover_pearson<F: Field>(u: &MomentFunctional<F>, table: &OperatorTable<F>) -> Result<RecoveredPearson<F>> {
    if u.window() < 8 {
        return Err(Error::WindowExhausted { needed: 8, window: u.window() });
    }
    let rows = (0..u.window())
        .map(|j| {
            let dz = table.d_monomial(j)?;
            let sz = table.s_monomial(j)?;
            let mut row = Vec::with_capacity(5);
            for i in 0..3 {
                row.push(-u.pair(&dz.shift(i))?);
            }
            for i in 0..2 {
                row.push(-u.pair(&sz.shift(i))?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<Vec<F>>>>()?;
    let null_dim = linalg::null_space(&rows, 5).len();
    if null_dim == 0 {
        return Err(Error::NoneFound);
    }
    let unit = |k: usize| (0..5).map(|i| if i == k { F::one() } else { F::zero() }).collect::<Vec<F>>();
    for pinned in [&[1usize, 2][..], &[2], &[]] {
        let mut m = rows.clone();
        let mut rhs = vec![F::zero(); rows.len()];
        for &k in pinned {
            m.push(unit(k));
            rhs.push(F::zero());
        }
        m.push(unit(4));
        rhs.push(F::one());
        if let Some(x) = linalg::solve(&m, &rhs, 5) {
            let data = PearsonData::new(Poly::from_coeffs(x[..3].to_vec()), Poly::from_coeffs(x[3..].to_vec()))?;
            return Ok(RecoveredPearson { data, null_dim });
        }
    }
    Err(Error::NoneFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cdh_recurrence, corollary_branch1, corollary_branch2, wilson_recurrence};
    use crate::lattice::LatticeSpec;
    use crate::recurrence::{generate_ops, moments_from_recurrence};
    use crate::structure::relation::solve_deg2_relation;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::frac(n, d)
    }

    fn p(c: &[(i64, i64)]) -> Poly<Q> {
        Poly::from_coeffs(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    fn quad(beta: Q, c5: Q, deg: usize) -> OperatorTable<Q> {
        OperatorTable::new(&LatticeSpec::quadratic(beta, c5, q(0, 1)).unwrap(), deg).unwrap()
    }

    fn golden() -> (PearsonData<Q>, MomentFunctional<Q>, Vec<Poly<Q>>) {
        let inst = corollary_branch1(&q(1, 4), &q(0, 1), &q(1, 1), &q(1, 2), 12).unwrap();
        let pd = PearsonData::new(inst.phi.clone(), inst.psi.clone()).unwrap();
        let u = moments_from_recurrence(&inst.recurrence, 22).unwrap();
        (pd, u, generate_ops(&inst.recurrence, 13).unwrap())
    }

    #[test]
    fn golden_pearson_pair() {
        let (pd, u, _) = golden();
        assert_eq!(pd.phi(), &p(&[(1, 4), (2, 1)]));
        assert_eq!(pd.psi(), &p(&[(5, 4), (1, 1)]));
        let t = quad(q(1, 4), q(0, 1), 22);
        let res = pearson_check(&pd, &u, 20, &t).unwrap();
        assert_eq!(res.len(), 21);
        assert!(res.iter().all(|r| r == &q(0, 1)));
        let wrong = PearsonData::new(pd.phi().clone(), Poly::x()).unwrap();
        assert_eq!(pearson_check(&wrong, &u, 3, &t).unwrap()[0], q(5, 4));
        assert_eq!(
            pearson_check(&pd, &u, 21, &t),
            Err(Error::WindowExhausted { needed: 23, window: 22 })
        );
    }

    #[test]
    fn golden_sturm_liouville() {
        let (pd, _, polys) = golden();
        let t = quad(q(1, 4), q(0, 1), 14);
        let res = sturm_liouville_check(pd.phi(), pd.psi(), &q(0, 1), &polys, &t, 12).unwrap();
        assert!(res.iter().all(Poly::is_zero));
        let dp2 = t.dx(&polys[2]).unwrap();
        assert_eq!(t.sx(&dp2).unwrap(), p(&[(17, 2), (2, 1)]));
        let bumped = sturm_liouville_residual(pd.phi(), pd.psi(), &q(3, 1), &polys[2], &t).unwrap();
        assert_eq!(bumped, polys[2].scale(&q(-1, 1)));
        let (_, frak_a) = fit_sl_parameter(&pd, &polys, &t).unwrap();
        assert_eq!(frak_a, q(0, 1));
    }

    #[test]
    fn golden_recovery_is_unique() {
        let (pd, u, _) = golden();
        let t = quad(q(1, 4), q(0, 1), 22);
        let rec = recover_pearson(&u, &t).unwrap();
        assert_eq!(rec.null_dim, 1);
        assert_eq!(rec.data, pd);
    }

    #[test]
    fn generic_moments_are_not_semiclassical() {
        let u = MomentFunctional::new((0..12).map(|j| q(j * j * j - 3 * j + 7, j + 2)).collect()).unwrap();
        let t = quad(q(1, 4), q(0, 1), 13);
        assert_eq!(recover_pearson(&u, &t), Err(Error::NoneFound));
    }

    #[test]
    fn branch2_and_cdh_recovery() {
        let (beta, c5, d) = (q(1, 2), q(2, 1), q(1, 3));
        let e = q(-1, 1) + q(3, 4) / (d.clone() + q(1, 1));
        let inst = corollary_branch2(&beta, &c5, &d, &e, 10).unwrap();
        let u = moments_from_recurrence(&inst.recurrence, 18).unwrap();
        let t = quad(beta, c5, 19);
        let rec = recover_pearson(&u, &t).unwrap();
        assert_eq!(rec.data, PearsonData::new(inst.phi.clone(), inst.psi.clone()).unwrap().normalized());
        assert!(pearson_check(&rec.data, &u, 16, &t).unwrap().iter().all(|r| r == &q(0, 1)));

        let r = cdh_recurrence(&q(1, 3), &q(2, 5), &q(3, 4), 10).unwrap();
        let u = moments_from_recurrence(&r, 18).unwrap();
        let t = quad(q(-1, 4), q(0, 1), 19);
        let rec = recover_pearson(&u, &t).unwrap();
        assert!(pearson_check(&rec.data, &u, 16, &t).unwrap().iter().all(|r| r == &q(0, 1)));
    }

    #[test]
    fn wilson_recovery_and_fitted_parameter() {
        let r = wilson_recurrence(&q(1, 2), &q(1, 2), &q(1, 2), &q(1, 2), 12).unwrap();
        let u = moments_from_recurrence(&r, 18).unwrap();
        let polys = generate_ops(&r, 13).unwrap();
        let t = quad(q(-1, 4), q(0, 1), 19);
        let rec = recover_pearson(&u, &t).unwrap();
        assert_eq!(rec.data.phi().degree(), Some(2));
        let (pd, frak_a) = fit_sl_parameter(&rec.data, &polys, &t).unwrap();
        let res = sturm_liouville_check(pd.phi(), pd.psi(), &frak_a, &polys, &t, 12).unwrap();
        assert!(res.iter().all(Poly::is_zero));
    }

    #[test]
    fn relation_parameter_gives_the_pearson_pair() {
        let gold = corollary_branch1(&q(1, 4), &q(0, 1), &q(1, 1), &q(1, 2), 12).unwrap();
        let other = corollary_branch1(&q(-2, 3), &q(3, 5), &q(1, 7), &q(4, 3), 12).unwrap();
        let cases = [
            (q(1, 4), q(0, 1), gold.recurrence.clone(), gold.pi()),
            (q(-2, 3), q(3, 5), other.recurrence.clone(), other.pi()),
            (q(-1, 4), q(0, 1), cdh_recurrence(&q(1, 3), &q(2, 5), &q(1, 2), 12).unwrap(), Poly::x()),
        ];
        for (beta, c5, r, pi) in cases {
            let polys = generate_ops(&r, 13).unwrap();
            let t = quad(beta.clone(), c5, 16);
            let rel = solve_deg2_relation(&polys, &t, &pi, 4).unwrap();
            let frak_a = sl_parameter_from_relation(&r, &pi, &rel).unwrap();
            assert_eq!(frak_a, q(0, 1));
            let pd = theorem_pearson(&r, &frak_a, &beta).unwrap();
            let u = moments_from_recurrence(&r, 16).unwrap();
            assert!(pearson_check(&pd, &u, 14, &t).unwrap().iter().all(|x| x == &q(0, 1)));
            let res = sturm_liouville_check(pd.phi(), pd.psi(), &frak_a, &polys, &t, 10).unwrap();
            assert!(res.iter().all(Poly::is_zero));
        }
        let pd = theorem_pearson(&gold.recurrence, &q(0, 1), &q(1, 4)).unwrap();
        assert_eq!(pd.phi(), &p(&[(1, 4), (2, 1)]));
    }

    #[test]
    fn json_form() {
        let pd = PearsonData::new(p(&[(1, 4), (2, 1)]), p(&[(5, 4), (1, 1)])).unwrap();
        let text = serde_json::to_string(&pd).unwrap();
        assert_eq!(text, r#"{"phi":["1/4","2"],"psi":["5/4","1"]}"#);
        assert_eq!(serde_json::from_str::<PearsonData<Q>>(&text).unwrap(), pd);
        assert!(serde_json::from_str::<PearsonData<Q>>(r#"{"phi":["1"],"psi":["1"]}"#).is_err());
    }
}
