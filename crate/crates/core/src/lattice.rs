//! Quadratic and q-quadratic lattices and their derived constants.
//!
//! A quadratic lattice is `x(s) = 4*beta*s^2 + c5*s + c6`; a q-quadratic one is
//! `x(s) = c1*q^(-s) + c2*q^s + c3`. For the latter the primitive parameter is
//! `p = q^(1/2)`, which keeps every half-integer shift rational; `q` itself is
//! never stored.

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Laurent, Poly};
use crate::error::{Error, Result};
use crate::wire;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeKind<F> {
    Quadratic { beta: F, c5: F, c6: F },
    QQuadratic { p: F, c1: F, c2: F, c3: F },
}

/// A lattice together with its constants `alpha` and `beta`, where
/// `x(s + 1/2) + x(s - 1/2) = 2 alpha x(s) + 2 beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec<F> {
    kind: LatticeKind<F>,
    alpha: F,
    beta: F,
}

/// Half-step used when building `f(x(s +/- 1/2))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfShift {
    Plus,
    Minus,
}

impl HalfShift {
    fn sign(self) -> i64 {
        match self {
            HalfShift::Plus => 1,
            HalfShift::Minus => -1,
        }
    }
}

/// `p(x(s + shift))` in the lattice's carrier variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CarrierValue<F> {
    /// polynomial in `s` (quadratic lattices)
    Step(Poly<F>),
    /// Laurent polynomial in `t = q^s` (q-quadratic lattices)
    Exponential(Laurent<F>),
}

impl<F: Field> LatticeSpec<F> {
    /// `x(s) = 4 beta s^2 + c5 s + c6`.
    pub fn quadratic(beta: F, c5: F, c6: F) -> Result<Self> {
        if beta.is_zero() && c5.is_zero() {
            return Err(Error::InvalidLattice("beta and c5 both vanish (constant lattice)".into()));
        }
        Ok(LatticeSpec { alpha: F::one(), beta: beta.clone(), kind: LatticeKind::Quadratic { beta, c5, c6 } })
    }

    /// `x(s) = c1 p^(-2s) + c2 p^(2s) + c3` with `p = q^(1/2)`.
    pub fn q_quadratic(p: F, c1: F, c2: F, c3: F) -> Result<Self> {
        if !p.is_positive() || p.is_one() {
            return Err(Error::InvalidLattice(format!("p = q^(1/2) must be positive and different from 1, got {p}")));
        }
        if c1.is_zero() && c2.is_zero() {
            return Err(Error::InvalidLattice("(c1, c2) = (0, 0)".into()));
        }
        let alpha = (p.clone() + p.recip()) / F::int(2);
        let beta = (F::one() - alpha.clone()) * c3.clone();
        Ok(LatticeSpec { alpha, beta, kind: LatticeKind::QQuadratic { p, c1, c2, c3 } })
    }

    pub fn kind(&self) -> &LatticeKind<F> {
        &self.kind
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.kind, LatticeKind::Quadratic { .. })
    }

    pub fn alpha(&self) -> &F {
        &self.alpha
    }

    pub fn beta(&self) -> &F {
        &self.beta
    }

    /// `c5` of a quadratic lattice (zero for q-quadratic ones).
    pub fn c5(&self) -> F {
        match &self.kind {
            LatticeKind::Quadratic { c5, .. } => c5.clone(),
            LatticeKind::QQuadratic { .. } => F::zero(),
        }
    }

    pub fn c6(&self) -> F {
        match &self.kind {
            LatticeKind::Quadratic { c6, .. } => c6.clone(),
            LatticeKind::QQuadratic { .. } => F::zero(),
        }
    }

    /// Quadratic lattice of the form `4 beta s^2 + c5 s` (no constant term),
    /// as required by the quadratic-lattice theorem checkers.
    pub fn require_theorem_quadratic(&self) -> Result<()> {
        match &self.kind {
            LatticeKind::Quadratic { c6, .. } if c6.is_zero() => Ok(()),
            LatticeKind::Quadratic { .. } => Err(Error::InvalidLattice("checker requires c6 = 0".into())),
            LatticeKind::QQuadratic { .. } => Err(Error::InvalidLattice("checker requires a quadratic lattice".into())),
        }
    }

    /// `(alpha_n, gamma_n)` for `n >= -1`, with `alpha_{-1} = alpha` and
    /// `gamma_{-1} = -1`.
    pub fn alpha_gamma(&self, n: i64) -> (F, F) {
        assert!(n >= -1, "alpha_n / gamma_n are defined for n >= -1");
        match &self.kind {
            LatticeKind::Quadratic { .. } => (F::one(), F::int(n)),
            LatticeKind::QQuadratic { p, .. } => {
                let up = p.powi(n);
                let down = p.powi(-n);
                let alpha_n = (up.clone() + down.clone()) / F::int(2);
                let gamma_n = (up - down) / (p.clone() - p.recip());
                (alpha_n, gamma_n)
            }
        }
    }

    pub fn alpha_n(&self, n: i64) -> F {
        self.alpha_gamma(n).0
    }

    pub fn gamma_n(&self, n: i64) -> F {
        self.alpha_gamma(n).1
    }

    /// `gamma_n! = gamma_1 gamma_2 ... gamma_n`, with `gamma_0! = 1`.
    pub fn gamma_factorial(&self, n: usize) -> F {
        (1..=n as i64).fold(F::one(), |acc, k| acc * self.gamma_n(k))
    }

    /// `(U1, U2)` as polynomials in `z`.
    pub fn u_polys(&self) -> (Poly<F>, Poly<F>) {
        match &self.kind {
            LatticeKind::Quadratic { beta, c5, c6 } => {
                let u1 = Poly::constant(F::int(2) * beta.clone());
                let four_beta = F::int(4) * beta.clone();
                let u2 = Poly::from_coeffs(vec![
                    c5.clone() * c5.clone() / F::int(4) - four_beta.clone() * c6.clone(),
                    four_beta,
                ]);
                (u1, u2)
            }
            LatticeKind::QQuadratic { c1, c2, c3, .. } => {
                let k = self.alpha.clone() * self.alpha.clone() - F::one();
                let centred = Poly::linear_factor(c3.clone());
                let u1 = centred.scale(&k);
                let sq = &(&centred * &centred) - &Poly::constant(F::int(4) * c1.clone() * c2.clone());
                (u1, sq.scale(&k))
            }
        }
    }

    /// `x(s + h)` as a polynomial in `s` (quadratic lattices only).
    pub(crate) fn x_step(&self, h: F) -> Poly<F> {
        let LatticeKind::Quadratic { beta, c5, c6 } = &self.kind else {
            unreachable!("x_step on a q-quadratic lattice")
        };
        let arg = Poly::from_coeffs(vec![h, F::one()]);
        let four_beta = F::int(4) * beta.clone();
        &(&(&arg * &arg).scale(&four_beta) + &arg.scale(c5)) + &Poly::constant(c6.clone())
    }

    /// `x(s + sign/2)` as a Laurent polynomial in `t = q^s` (q-quadratic only).
    pub(crate) fn x_exp(&self, sign: i64) -> Laurent<F> {
        let LatticeKind::QQuadratic { p, c1, c2, c3 } = &self.kind else {
            unreachable!("x_exp on a quadratic lattice")
        };
        Laurent::from_terms([
            (-1, c1.clone() * p.powi(-sign)),
            (1, c2.clone() * p.powi(sign)),
            (0, c3.clone()),
        ])
    }

    /// Value of the carrier variable at integer `s`: `s` itself, or `q^s`.
    pub(crate) fn carrier_point(&self, s: i64) -> F {
        match &self.kind {
            LatticeKind::Quadratic { .. } => F::int(s),
            LatticeKind::QQuadratic { p, .. } => p.powi(2 * s),
        }
    }

    /// The lattice point `x(s)` for integer `s`.
    pub fn x_at(&self, s: i64) -> F {
        match &self.kind {
            LatticeKind::Quadratic { .. } => self.x_step(F::zero()).eval(&F::int(s)),
            LatticeKind::QQuadratic { .. } => self.x_exp(0).eval(&self.carrier_point(s)),
        }
    }

    /// `p(x(s + shift))` in the carrier variable.
    pub fn shifted_carrier(&self, p: &Poly<F>, shift: HalfShift) -> CarrierValue<F> {
        match &self.kind {
            LatticeKind::Quadratic { .. } => {
                let h = F::frac(shift.sign(), 2);
                CarrierValue::Step(crate::algebra::compose(p, &self.x_step(h)))
            }
            LatticeKind::QQuadratic { .. } => {
                CarrierValue::Exponential(crate::algebra::compose(p, &self.x_exp(shift.sign())))
            }
        }
    }

    pub fn to_wire(&self) -> LatticeWire {
        match &self.kind {
            LatticeKind::Quadratic { beta, c5, c6 } => LatticeWire::Quadratic {
                beta: beta.to_string(),
                c5: c5.to_string(),
                c6: c6.to_string(),
            },
            LatticeKind::QQuadratic { p, c1, c2, c3 } => LatticeWire::QQuadratic {
                p: p.to_string(),
                c1: c1.to_string(),
                c2: c2.to_string(),
                c3: c3.to_string(),
            },
        }
    }

    pub fn from_wire(w: &LatticeWire) -> Result<Self> {
        match w {
            LatticeWire::Quadratic { beta, c5, c6 } => {
                Self::quadratic(wire::parse(beta)?, wire::parse(c5)?, wire::parse(c6)?)
            }
            LatticeWire::QQuadratic { p, c1, c2, c3 } => {
                Self::q_quadratic(wire::parse(p)?, wire::parse(c1)?, wire::parse(c2)?, wire::parse(c3)?)
            }
        }
    }
}

fn zero_str() -> String {
    "0".into()
}

/// JSON form of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum LatticeWire {
    #[serde(rename = "quadratic")]
    Quadratic {
        beta: String,
        #[serde(default = "zero_str")]
        c5: String,
        #[serde(default = "zero_str")]
        c6: String,
    },
    #[serde(rename = "q-quadratic")]
    QQuadratic {
        p: String,
        c1: String,
        c2: String,
        #[serde(default = "zero_str")]
        c3: String,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::frac(n, d)
    }

    fn s_squared() -> LatticeSpec<Q> {
        LatticeSpec::quadratic(q(1, 4), q(0, 1), q(0, 1)).unwrap()
    }

    fn qq() -> LatticeSpec<Q> {
        LatticeSpec::q_quadratic(q(2, 1), q(1, 2), q(1, 2), q(0, 1)).unwrap()
    }

    #[test]
    fn alpha_gamma_values() {
        assert_eq!(s_squared().alpha_gamma(7), (q(1, 1), q(7, 1)));
        assert_eq!(qq().alpha_gamma(2), (q(17, 8), q(5, 2)));
        assert_eq!(s_squared().alpha_gamma(-1), (q(1, 1), q(-1, 1)));
        assert_eq!(qq().alpha_gamma(-1), (qq().alpha().clone(), q(-1, 1)));
        assert_eq!(qq().alpha(), &q(5, 4));
    }

    #[test]
    fn u_poly_values() {
        let (u1, u2) = s_squared().u_polys();
        assert_eq!(u1, Poly::constant(q(1, 2)));
        assert_eq!(u2, Poly::x());

        let lin = LatticeSpec::quadratic(q(0, 1), q(1, 1), q(0, 1)).unwrap();
        let (u1, u2) = lin.u_polys();
        assert!(u1.is_zero());
        assert_eq!(u2, Poly::constant(q(1, 4)));

        let (u1, u2) = qq().u_polys();
        assert_eq!(u1, Poly::monomial(q(9, 16), 1));
        assert_eq!(u2, Poly::from_coeffs(vec![q(-9, 16), q(0, 1), q(9, 16)]));
    }

    #[test]
    fn shifted_carrier_values() {
        let lat = s_squared();
        let plus_half = Poly::from_coeffs(vec![q(1, 2), q(1, 1)]);
        let minus_half = Poly::from_coeffs(vec![q(-1, 2), q(1, 1)]);
        assert_eq!(lat.shifted_carrier(&Poly::x(), HalfShift::Plus), CarrierValue::Step(plus_half.pow(2)));
        assert_eq!(
            lat.shifted_carrier(&Poly::monomial(q(1, 1), 3), HalfShift::Minus),
            CarrierValue::Step(minus_half.pow(6))
        );
        assert_eq!(
            qq().shifted_carrier(&Poly::x(), HalfShift::Plus),
            CarrierValue::Exponential(Laurent::from_terms([(-1, q(1, 4)), (1, q(1, 1))]))
        );
    }

    #[test]
    fn recurrences_of_alpha_and_gamma() {
        for lat in [s_squared(), qq(), LatticeSpec::q_quadratic(q(1, 3), q(2, 1), q(0, 1), q(5, 1)).unwrap()] {
            let two_alpha = q(2, 1) * lat.alpha().clone();
            for n in 0..=20 {
                let (a_up, g_up) = lat.alpha_gamma(n + 1);
                let (a_dn, g_dn) = lat.alpha_gamma(n - 1);
                let (a, g) = lat.alpha_gamma(n);
                assert_eq!(a_up + a_dn, two_alpha.clone() * a);
                assert_eq!(g_up + g_dn, two_alpha.clone() * g);
            }
        }
    }

    #[test]
    fn leading_coefficient_identities() {
        // alpha_{m+1} alpha_{m+j} + k (alpha_{m+1} + gamma_m) gamma_{m+j} = alpha_{2m+j+1}
        // (alpha alpha_{m+1} - k (alpha_{m+1} + gamma_m)) gamma_{m+j} + gamma_m alpha_{m+j} = gamma_{2m+j}
        // with k = (alpha^2 - 1) / alpha.
        for lat in [s_squared(), qq(), LatticeSpec::q_quadratic(q(3, 2), q(1, 1), q(-2, 1), q(1, 3)).unwrap()] {
            let alpha = lat.alpha().clone();
            let k = (alpha.clone() * alpha.clone() - q(1, 1)) / alpha.clone();
            for m in 0..=8i64 {
                for j in 0..=8i64 {
                    let (am1, _) = lat.alpha_gamma(m + 1);
                    let (amj, gmj) = lat.alpha_gamma(m + j);
                    let (_, gm) = lat.alpha_gamma(m);
                    let lhs1 = am1.clone() * amj.clone() + k.clone() * (am1.clone() + gm.clone()) * gmj.clone();
                    assert_eq!(lhs1, lat.alpha_n(2 * m + j + 1), "first identity m={m} j={j}");
                    let lhs2 = (alpha.clone() * am1.clone() - k.clone() * (am1.clone() + gm.clone())) * gmj + gm * amj;
                    assert_eq!(lhs2, lat.gamma_n(2 * m + j), "second identity m={m} j={j}");
                }
            }
        }
    }

    #[test]
    fn invalid_lattices() {
        assert!(LatticeSpec::quadratic(q(0, 1), q(0, 1), q(3, 1)).is_err());
        assert!(LatticeSpec::q_quadratic(q(1, 1), q(1, 1), q(1, 1), q(0, 1)).is_err());
        assert!(LatticeSpec::q_quadratic(q(-2, 1), q(1, 1), q(1, 1), q(0, 1)).is_err());
        assert!(LatticeSpec::q_quadratic(q(2, 1), q(0, 1), q(0, 1), q(0, 1)).is_err());
    }

    #[test]
    fn wire_roundtrip() {
        let text = r#"{"kind":"q-quadratic","p":"2","c1":"1/2","c2":"1/2","c3":"0"}"#;
        let w: LatticeWire = serde_json::from_str(text).unwrap();
        let lat = LatticeSpec::<Q>::from_wire(&w).unwrap();
        assert_eq!(lat, qq());
        assert_eq!(serde_json::to_string(&lat.to_wire()).unwrap(), text);
        let w: LatticeWire = serde_json::from_str(r#"{"kind":"quadratic","beta":"1/4"}"#).unwrap();
        assert_eq!(LatticeSpec::<Q>::from_wire(&w).unwrap(), s_squared());
    }
}
