//! Linear functionals on polynomials, stored as a finite moment window.

use serde::{Deserialize, Serialize};

use crate::algebra::linalg;
use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::operators::OperatorTable;
use crate::wire;

/// `<u, z^j>` for `j = 0..=window`. The lattice is supplied to the dual
/// operators as an argument rather than stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "RawFunctional<F>")]
pub struct MomentFunctional<F: Field> {
    #[serde(with = "wire::scalars")]
    moments: Vec<F>,
}

#[derive(Deserialize)]
#[serde(bound = "", deny_unknown_fields)]
struct RawFunctional<F: Field> {
    #[serde(with = "wire::scalars")]
    moments: Vec<F>,
}

impl<F: Field> TryFrom<RawFunctional<F>> for MomentFunctional<F> {
    type Error = Error;

    fn try_from(raw: RawFunctional<F>) -> Result<Self> {
        MomentFunctional::new(raw.moments)
    }
}

/// The dual operators `D_x` and `S_x` acting on functionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionalOp {
    D,
    S,
}

impl<F: Field> MomentFunctional<F> {
    pub fn new(moments: Vec<F>) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::Invalid("a functional needs at least one moment".into()));
        }
        Ok(MomentFunctional { moments })
    }

    pub fn moments(&self) -> &[F] {
        &self.moments
    }

    pub fn moment(&self, j: usize) -> Result<&F> {
        self.moments.get(j).ok_or(Error::WindowExhausted { needed: j, window: self.window() })
    }

    pub fn window(&self) -> usize {
        self.moments.len() - 1
    }

    /// Restriction to a smaller window.
    pub fn truncate(&self, window: usize) -> Result<Self> {
        if window > self.window() {
            return Err(Error::WindowExhausted { needed: window, window: self.window() });
        }
        Ok(MomentFunctional { moments: self.moments[..=window].to_vec() })
    }

    /// `<u, p>`.
    pub fn pair(&self, p: &Poly<F>) -> Result<F> {
        let Some(deg) = p.degree() else {
            return Ok(F::zero());
        };
        if deg > self.window() {
            return Err(Error::WindowExhausted { needed: deg, window: self.window() });
        }
        Ok(p.coeffs().iter().zip(&self.moments).fold(F::zero(), |acc, (c, m)| acc + c.clone() * m.clone()))
    }

    /// `pi u`, defined by `<pi u, p> = <u, pi p>`.
    pub fn poly_mul(&self, pi: &Poly<F>) -> Result<Self> {
        let deg = pi.degree().unwrap_or(0);
        if deg > self.window() {
            return Err(Error::WindowExhausted { needed: deg, window: self.window() });
        }
        let moments = (0..=self.window() - deg)
            .map(|j| self.pair(&pi.shift(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentFunctional { moments })
    }

    /// `<D u, f> = -<u, D_x f>` (window grows by one) or
    /// `<S u, f> = <u, S_x f>` (window unchanged).
    pub fn functional_op(&self, which: FunctionalOp, lat: &LatticeSpec<F>) -> Result<Self> {
        self.apply(which, &OperatorTable::new(lat, self.window() + 1)?)
    }

    /// As [`Self::functional_op`], reading monomial images from a table.
    pub fn apply(&self, which: FunctionalOp, table: &OperatorTable<F>) -> Result<Self> {
        let top = match which {
            FunctionalOp::D => self.window() + 1,
            FunctionalOp::S => self.window(),
        };
        let moments = (0..=top)
            .map(|j| match which {
                FunctionalOp::D => self.pair(&table.d_monomial(j)?).map(|v| -v),
                FunctionalOp::S => self.pair(&table.s_monomial(j)?),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentFunctional { moments })
    }

    pub fn d(&self, lat: &LatticeSpec<F>) -> Result<Self> {
        self.functional_op(FunctionalOp::D, lat)
    }

    pub fn s(&self, lat: &LatticeSpec<F>) -> Result<Self> {
        self.functional_op(FunctionalOp::S, lat)
    }

    pub fn d_with(&self, table: &OperatorTable<F>) -> Result<Self> {
        self.apply(FunctionalOp::D, table)
    }

    pub fn s_with(&self, table: &OperatorTable<F>) -> Result<Self> {
        self.apply(FunctionalOp::S, table)
    }

    /// `D^k u`.
    pub fn d_power(&self, table: &OperatorTable<F>, k: usize) -> Result<Self> {
        (0..k).try_fold(self.clone(), |u, _| u.d_with(table))
    }

    pub fn scale(&self, c: &F) -> Self {
        MomentFunctional { moments: self.moments.iter().map(|m| m.clone() * c.clone()).collect() }
    }

    /// `self + other` on the common window.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    /// `self - other` on the common window.
    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(F, F) -> F) -> Self {
        let moments = self
            .moments
            .iter()
            .zip(&other.moments)
            .map(|(a, b)| op(a.clone(), b.clone()))
            .collect();
        MomentFunctional { moments }
    }

    /// Common window of `self` and `other`.
    pub fn common_window(&self, other: &Self) -> usize {
        self.window().min(other.window())
    }

    /// `true` when every stored moment vanishes.
    pub fn vanishes(&self) -> bool {
        self.moments.iter().all(|m| m.is_zero())
    }

    /// Index and value of the first nonzero moment.
    pub fn first_nonzero(&self) -> Option<(usize, &F)> {
        self.moments.iter().enumerate().find(|(_, m)| !m.is_zero())
    }
}

/// Moment-window comparison of two functionals: the window actually
/// compared and the first moment index where they differ, if any.
pub fn compare<F: Field>(lhs: &MomentFunctional<F>, rhs: &MomentFunctional<F>) -> (usize, Option<(usize, F)>) {
    let diff = lhs.sub(rhs);
    (diff.window(), diff.first_nonzero().map(|(j, v)| (j, v.clone())))
}

/// The functional `r_n` of the dual basis of a simple set, i.e.
/// `<r_n, Q_m> = delta_{n,m}` for `m <= window`.
pub fn dual_basis<F: Field>(seq: &[Poly<F>], n: usize, window: usize) -> Result<MomentFunctional<F>> {
    if seq.len() <= window {
        return Err(Error::Invalid(format!("{} polynomials given, window {window} needs {}", seq.len(), window + 1)));
    }
    if n > window {
        return Err(Error::Invalid(format!("index {n} exceeds window {window}")));
    }
    let cols = window + 1;
    let mut matrix = Vec::with_capacity(cols);
    for q in &seq[..cols] {
        if q.degree().is_some_and(|d| d > window) {
            return Err(Error::SingularBasis);
        }
        matrix.push((0..cols).map(|j| q.coeff(j)).collect::<Vec<_>>());
    }
    if linalg::determinant(&matrix).is_zero() {
        return Err(Error::SingularBasis);
    }
    let rhs: Vec<F> = (0..cols).map(|m| if m == n { F::one() } else { F::zero() }).collect();
    let moments = linalg::solve(&matrix, &rhs, cols).ok_or(Error::SingularBasis)?;
    MomentFunctional::new(moments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::frac(n, d)
    }

    fn s2() -> LatticeSpec<Q> {
        LatticeSpec::quadratic(q(1, 4), q(0, 1), q(0, 1)).unwrap()
    }

    fn sample() -> MomentFunctional<Q> {
        MomentFunctional::new(vec![q(1, 1), q(-5, 4), q(61, 16), q(3, 7), q(-2, 1)]).unwrap()
    }

    #[test]
    fn pairing() {
        let u = sample();
        assert_eq!(u.pair(&Poly::one()).unwrap(), q(1, 1));
        assert_eq!(u.pair(&Poly::from_coeffs(vec![q(5, 4), q(1, 1)])).unwrap(), q(0, 1));
        assert_eq!(
            u.pair(&Poly::monomial(q(1, 1), 5)),
            Err(Error::WindowExhausted { needed: 5, window: 4 })
        );
    }

    #[test]
    fn multiplication_shifts_and_shrinks() {
        let u = sample();
        assert_eq!(u.poly_mul(&Poly::one()).unwrap(), u);
        let shifted = u.poly_mul(&Poly::x()).unwrap();
        assert_eq!(shifted.moments(), &u.moments()[1..]);
        let p1 = u.poly_mul(&Poly::from_coeffs(vec![q(5, 4), q(1, 1)])).unwrap();
        assert_eq!(p1.moments()[0], q(0, 1));
        assert_eq!(p1.window(), 3);
    }

    #[test]
    fn dual_operators() {
        let u = sample();
        let lat = s2();
        let du = u.d(&lat).unwrap();
        assert_eq!(du.window(), u.window() + 1);
        assert_eq!(du.moments()[0], q(0, 1));
        assert_eq!(du.moments()[2], -(q(2, 1) * u.moments()[1].clone() + q(1, 2) * u.moments()[0].clone()));
        let su = u.s(&lat).unwrap();
        assert_eq!(su.window(), u.window());
        assert_eq!(su.moments()[1], u.moments()[1].clone() + q(1, 4) * u.moments()[0].clone());
    }

    #[test]
    fn monomial_dual_basis() {
        let mono: Vec<Poly<Q>> = (0..3).map(|k| Poly::monomial(q(1, 1), k)).collect();
        assert_eq!(dual_basis(&mono, 0, 2).unwrap().moments(), &[q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(dual_basis(&mono, 2, 2).unwrap().moments(), &[q(0, 1), q(0, 1), q(1, 1)]);
        let degenerate: Vec<Poly<Q>> = vec![Poly::one(), Poly::one(), Poly::x()];
        assert_eq!(dual_basis(&degenerate, 0, 2), Err(Error::SingularBasis));
    }

    #[test]
    fn json_form() {
        let u = MomentFunctional::new(vec![q(1, 1), q(-5, 4)]).unwrap();
        let text = serde_json::to_string(&u).unwrap();
        assert_eq!(text, r#"{"moments":["1","-5/4"]}"#);
        assert_eq!(serde_json::from_str::<MomentFunctional<Q>>(&text).unwrap(), u);
        assert!(serde_json::from_str::<MomentFunctional<Q>>(r#"{"moments":[]}"#).is_err());
    }
}
