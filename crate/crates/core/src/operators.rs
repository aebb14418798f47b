//! The divided-difference operator `D_x` and the averaging operator `S_x`.
//!
//! Both are computed in the carrier domain: `f(x(s +/- 1/2))` is built as a
//! polynomial in `s` (or a Laurent polynomial in `t = q^s`), the difference
//! is divided exactly by `x(s + 1/2) - x(s - 1/2)`, and the quotient is
//! interpolated back to a polynomial in `z` at the lattice points. The result
//! is then recomposed with `x(s)` and compared with the quotient term by term.

use rayon::prelude::*;

use crate::algebra::{compose, interpolate, Carrier, Field, Poly};
use crate::error::{Error, Result};
use crate::lattice::{LatticeKind, LatticeSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    D,
    S,
}

/// `D_x p`.
pub fn dx<F: Field>(p: &Poly<F>, lat: &LatticeSpec<F>) -> Result<Poly<F>> {
    apply(p, lat, Which::D)
}

/// `S_x p`.
pub fn sx<F: Field>(p: &Poly<F>, lat: &LatticeSpec<F>) -> Result<Poly<F>> {
    apply(p, lat, Which::S)
}

/// `D_x^k p`; `k = 0` is the identity.
pub fn dx_power<F: Field>(p: &Poly<F>, lat: &LatticeSpec<F>, k: usize) -> Result<Poly<F>> {
    let mut out = p.clone();
    for _ in 0..k {
        if out.is_zero() {
            break;
        }
        out = dx(&out, lat)?;
    }
    Ok(out)
}

/// `Q^[k]_n = (gamma_n! / gamma_{n+k}!) D_x^k P` for a monic `P` of degree `n + k`.
pub fn monic_kth<F: Field>(p: &Poly<F>, lat: &LatticeSpec<F>, k: usize) -> Result<Poly<F>> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let total = p.degree().unwrap_or(0);
    if total < k {
        return Err(Error::Invalid(format!("degree {total} is below the derivative order {k}")));
    }
    let n = total - k;
    let factor = lat.gamma_factorial(n) / lat.gamma_factorial(total);
    Ok(dx_power(p, lat, k)?.scale(&factor))
}

/// Images `D_x z^j` and `S_x z^j` for `j <= max_degree`, computed once per
/// lattice. Operators on polynomials inside the table's range become linear
/// combinations of stored images; higher degrees fall back to the carrier.
#[derive(Clone, Debug)]
pub struct OperatorTable<F: Field> {
    lattice: LatticeSpec<F>,
    d: Vec<Poly<F>>,
    s: Vec<Poly<F>>,
}

impl<F: Field> OperatorTable<F> {
    pub fn new(lat: &LatticeSpec<F>, max_degree: usize) -> Result<Self> {
        let images: Vec<(Poly<F>, Poly<F>)> = (0..=max_degree)
            .into_par_iter()
            .map(|j| {
                let zj = Poly::monomial(F::one(), j);
                Ok((dx(&zj, lat)?, sx(&zj, lat)?))
            })
            .collect::<Result<_>>()?;
        let (d, s) = images.into_iter().unzip();
        Ok(OperatorTable { lattice: lat.clone(), d, s })
    }

    pub fn lattice(&self) -> &LatticeSpec<F> {
        &self.lattice
    }

    pub fn max_degree(&self) -> usize {
        self.d.len() - 1
    }

    /// `D_x z^j`.
    pub fn d_monomial(&self, j: usize) -> Result<Poly<F>> {
        match self.d.get(j) {
            Some(p) => Ok(p.clone()),
            None => dx(&Poly::monomial(F::one(), j), &self.lattice),
        }
    }

    /// `S_x z^j`.
    pub fn s_monomial(&self, j: usize) -> Result<Poly<F>> {
        match self.s.get(j) {
            Some(p) => Ok(p.clone()),
            None => sx(&Poly::monomial(F::one(), j), &self.lattice),
        }
    }

    pub fn dx(&self, p: &Poly<F>) -> Result<Poly<F>> {
        self.combine(p, &self.d, dx)
    }

    pub fn sx(&self, p: &Poly<F>) -> Result<Poly<F>> {
        self.combine(p, &self.s, sx)
    }

    pub fn dx_power(&self, p: &Poly<F>, k: usize) -> Result<Poly<F>> {
        (0..k).try_fold(p.clone(), |acc, _| self.dx(&acc))
    }

    fn combine(
        &self,
        p: &Poly<F>,
        images: &[Poly<F>],
        direct: fn(&Poly<F>, &LatticeSpec<F>) -> Result<Poly<F>>,
    ) -> Result<Poly<F>> {
        if p.degree().is_some_and(|d| d >= images.len()) {
            return direct(p, &self.lattice);
        }
        Ok(p.coeffs()
            .iter()
            .zip(images)
            .filter(|(c, _)| !c.is_zero())
            .fold(Poly::zero(), |acc, (c, img)| &acc + &img.scale(c)))
    }
}

fn apply<F: Field>(p: &Poly<F>, lat: &LatticeSpec<F>, which: Which) -> Result<Poly<F>> {
    let Some(deg) = p.degree() else {
        return Ok(Poly::zero());
    };
    if deg == 0 {
        return Ok(match which {
            Which::D => Poly::zero(),
            Which::S => p.clone(),
        });
    }
    let target = match which {
        Which::D => deg - 1,
        Which::S => deg,
    };
    match lat.kind() {
        LatticeKind::Quadratic { .. } => {
            let half = F::frac(1, 2);
            let plus = lat.x_step(half.clone());
            let minus = lat.x_step(-half);
            let centre = lat.x_step(F::zero());
            in_carrier(p, which, target, &plus, &minus, &centre, |s| lat.carrier_point(s))
        }
        LatticeKind::QQuadratic { .. } => {
            let plus = lat.x_exp(1);
            let minus = lat.x_exp(-1);
            let centre = lat.x_exp(0);
            in_carrier(p, which, target, &plus, &minus, &centre, |s| lat.carrier_point(s))
        }
    }
}

fn in_carrier<F: Field, C: Carrier<F>>(
    p: &Poly<F>,
    which: Which,
    target: usize,
    plus: &C,
    minus: &C,
    centre: &C,
    point: impl Fn(i64) -> F,
) -> Result<Poly<F>> {
    let up = compose(p, plus);
    let down = compose(p, minus);
    let quotient = match which {
        Which::D => {
            let step = plus.minus(minus);
            up.minus(&down).divide_exact(&step).map_err(|e| {
                Error::InternalSymmetryViolation(format!("difference quotient is not exact: {e}"))
            })?
        }
        Which::S => up.plus(&down).scaled(&F::frac(1, 2)),
    };

    let needed = target + 1;
    let mut samples: Vec<(F, F)> = Vec::with_capacity(needed);
    let cap = 4 * needed as i64 + 16;
    let mut s = 0i64;
    while samples.len() < needed {
        if s >= cap {
            return Err(Error::InternalSymmetryViolation(format!(
                "only {} distinct lattice points among s < {cap}",
                samples.len()
            )));
        }
        let at = point(s);
        let node = centre.evaluate(&at);
        if !samples.iter().any(|(x, _)| *x == node) {
            samples.push((node, quotient.evaluate(&at)));
        }
        s += 1;
    }
    let result = interpolate(&samples)?;
    if compose(&result, centre) != quotient {
        return Err(Error::InternalSymmetryViolation(
            "quotient is not a polynomial in x(s)".into(),
        ));
    }
    Ok(result)
}
