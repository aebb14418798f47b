//! The operator and functional identities of the calculus, each returned as
//! a residual (left side minus right side). A zero polynomial, or a
//! functional whose moments all vanish, means the identity holds.

use crate::algebra::{Field, Poly};
use crate::error::Result;
use crate::functionals::{compare, dual_basis, MomentFunctional};
use crate::lattice::LatticeSpec;
use crate::operators::OperatorTable;
use crate::structure::derived_sequence;

/// Window compared and first nonzero moment of a functional residual.
pub type WindowResidual<F> = (usize, Option<(usize, F)>);

/// `D_x(fg) - [D_x f S_x g + S_x f D_x g]`.
pub fn product_rule_d<F: Field>(f: &Poly<F>, g: &Poly<F>, t: &OperatorTable<F>) -> Result<Poly<F>> {
    let lhs = t.dx(&(f * g))?;
    let rhs = &(&t.dx(f)? * &t.sx(g)?) + &(&t.sx(f)? * &t.dx(g)?);
    Ok(&lhs - &rhs)
}

/// `S_x(fg) - [D_x f D_x g U_2 + S_x f S_x g]`.
pub fn product_rule_s<F: Field>(f: &Poly<F>, g: &Poly<F>, t: &OperatorTable<F>) -> Result<Poly<F>> {
    let (_, u2) = t.lattice().u_polys();
    let lhs = t.sx(&(f * g))?;
    let rhs = &(&(&t.dx(f)? * &t.dx(g)?) * &u2) + &(&t.sx(f)? * &t.sx(g)?);
    Ok(&lhs - &rhs)
}

/// `f D_x g - D_x[(S_x f - U_1/alpha D_x f) g] + alpha^{-1} S_x(g D_x f)`.
pub fn f_times_dx<F: Field>(f: &Poly<F>, g: &Poly<F>, t: &OperatorTable<F>) -> Result<Poly<F>> {
    let lat = t.lattice();
    let ainv = lat.alpha().recip();
    let (u1, _) = lat.u_polys();
    let df = t.dx(f)?;
    let weight = &t.sx(f)? - &(&u1 * &df).scale(&ainv);
    let rhs = &t.dx(&(&weight * g))? - &t.sx(&(g * &df))?.scale(&ainv);
    Ok(&(f * &t.dx(g)?) - &rhs)
}

/// `D_x(f u)` against `(S_x f - alpha^{-1} U_1 D_x f) D_x u + alpha^{-1} D_x f S_x u`.
pub fn functional_d_product<F: Field>(
    f: &Poly<F>,
    u: &MomentFunctional<F>,
    t: &OperatorTable<F>,
) -> Result<WindowResidual<F>> {
    let lat = t.lattice();
    let ainv = lat.alpha().recip();
    let (u1, _) = lat.u_polys();
    let df = t.dx(f)?;
    let lhs = u.poly_mul(f)?.d_with(t)?;
    let first = u.d_with(t)?.poly_mul(&(&t.sx(f)? - &(&u1 * &df).scale(&ainv)))?;
    let second = u.s_with(t)?.poly_mul(&df.scale(&ainv))?;
    Ok(compare(&lhs, &first.add(&second)))
}

/// `S_x(f u)` against
/// `(alpha U_2 - alpha^{-1} U_1^2) D_x f D_x u + (S_x f + alpha^{-1} U_1 D_x f) S_x u`.
pub fn functional_s_product<F: Field>(
    f: &Poly<F>,
    u: &MomentFunctional<F>,
    t: &OperatorTable<F>,
) -> Result<WindowResidual<F>> {
    let lat = t.lattice();
    let alpha = lat.alpha().clone();
    let ainv = alpha.recip();
    let (u1, u2) = lat.u_polys();
    let df = t.dx(f)?;
    let lhs = u.poly_mul(f)?.s_with(t)?;
    let c1 = &(&u2.scale(&alpha) - &(&u1 * &u1).scale(&ainv)) * &df;
    let c2 = &t.sx(f)? + &(&u1 * &df).scale(&ainv);
    let rhs = u.d_with(t)?.poly_mul(&c1)?.add(&u.s_with(t)?.poly_mul(&c2)?);
    Ok(compare(&lhs, &rhs))
}

/// `f D_x u` against `D_x(S_x f u) - S_x(D_x f u)`.
pub fn functional_f_times_d<F: Field>(
    f: &Poly<F>,
    u: &MomentFunctional<F>,
    t: &OperatorTable<F>,
) -> Result<WindowResidual<F>> {
    let lhs = u.d_with(t)?.poly_mul(f)?;
    let rhs = u.poly_mul(&t.sx(f)?)?.d_with(t)?.sub(&u.poly_mul(&t.dx(f)?)?.s_with(t)?);
    Ok(compare(&lhs, &rhs))
}

/// `alpha D_x^n S_x u` against `alpha_{n+1} S_x D_x^n u + gamma_n U_1 D_x^{n+1} u`.
pub fn functional_commutation<F: Field>(
    n: usize,
    u: &MomentFunctional<F>,
    t: &OperatorTable<F>,
) -> Result<WindowResidual<F>> {
    let lat = t.lattice();
    let (u1, _) = lat.u_polys();
    let ni = n as i64;
    let lhs = u.s_with(t)?.d_power(t, n)?.scale(lat.alpha());
    let dn = u.d_power(t, n)?;
    let rhs = dn.s_with(t)?.scale(&lat.alpha_n(ni + 1)).add(&dn.d_with(t)?.poly_mul(&u1)?.scale(&lat.gamma_n(ni)));
    Ok(compare(&lhs, &rhs))
}

/// `D_x^k r^[k]_n` against `(-1)^k (gamma_{n+k}!/gamma_n!) r_{n+k}`, where
/// `r^[k]` is the dual basis of the `k`-th derived sequence of `seq`, taken
/// on `window`. `seq` must reach degree `window + k`.
pub fn dual_basis_derivative<F: Field>(
    seq: &[Poly<F>],
    k: usize,
    n: usize,
    window: usize,
    t: &OperatorTable<F>,
) -> Result<WindowResidual<F>> {
    let lat = t.lattice();
    let derived = derived_sequence(seq, k, t)?;
    let lhs = dual_basis(&derived, n, window)?.d_power(t, k)?;
    let sign = if k % 2 == 0 { F::one() } else { -F::one() };
    let factor = sign * lat.gamma_factorial(n + k) / lat.gamma_factorial(n);
    let rhs = dual_basis(seq, n + k, window + k)?.scale(&factor);
    Ok(compare(&lhs, &rhs))
}

/// First `n <= n_max` where the monomial laws
/// `D_x z^n = n z^{n-1} + v_n z^{n-2} + ...`, `S_x z^n = z^n + w_n z^{n-1} + ...`
/// with `v_n = beta n(n-1)(2n-1)/3`, `w_n = beta n(2n-1)` fail on a quadratic lattice.
pub fn monomial_laws<F: Field>(lat: &LatticeSpec<F>, n_max: usize) -> Result<Option<usize>> {
    lat.require_theorem_quadratic()?;
    let beta = lat.beta().clone();
    let t = OperatorTable::new(lat, n_max)?;
    for n in 1..=n_max {
        let ni = n as i64;
        let d = t.d_monomial(n)?;
        let s = t.s_monomial(n)?;
        let v = beta.clone() * F::int(ni * (ni - 1) * (2 * ni - 1)) / F::int(3);
        let w = beta.clone() * F::int(ni * (2 * ni - 1));
        let d_ok = d.degree() == Some(n - 1) && d.coeff(n - 1) == F::int(ni) && (n < 2 || d.coeff(n - 2) == v);
        let s_ok = s.degree() == Some(n) && s.coeff(n).is_one() && s.coeff(n - 1) == w;
        if !(d_ok && s_ok) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// First `n <= n_max` where `lead(D_x z^n) = gamma_n` or `lead(S_x z^n) = alpha_n` fails.
pub fn leading_laws<F: Field>(lat: &LatticeSpec<F>, n_max: usize) -> Result<Option<usize>> {
    leading_laws_in(&OperatorTable::new(lat, n_max)?, n_max)
}

/// [`leading_laws`] against an existing table.
pub fn leading_laws_in<F: Field>(t: &OperatorTable<F>, n_max: usize) -> Result<Option<usize>> {
    let lat = t.lattice();
    for n in 0..=n_max {
        let ni = n as i64;
        let d = t.d_monomial(n)?;
        let s = t.s_monomial(n)?;
        let d_ok = if n == 0 { d.is_zero() } else { d.degree() == Some(n - 1) && d.coeff(n - 1) == lat.gamma_n(ni) };
        let s_ok = s.degree() == Some(n) && s.coeff(n) == lat.alpha_n(ni);
        if !(d_ok && s_ok) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
