#![allow(dead_code)]

use proptest::prelude::*;

use lattice_ops::algebra::{Field, Poly};
use lattice_ops::{DensePoly, Lattice, Scalar};

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::frac(n, d)
}

pub fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero() -> impl Strategy<Value = Scalar> {
    rational().prop_filter("nonzero", |x| *x != q(0, 1))
}

pub fn poly(max_degree: usize) -> impl Strategy<Value = DensePoly> {
    prop::collection::vec(rational(), 0..=max_degree + 1).prop_map(Poly::from_coeffs)
}

pub fn quadratic() -> impl Strategy<Value = Lattice> {
    (nonzero(), rational(), rational()).prop_map(|(b, c5, c6)| Lattice::quadratic(b, c5, c6).unwrap())
}

/// `c6 = 0`, the form the structure theorems assume.
pub fn theorem_quadratic() -> impl Strategy<Value = Lattice> {
    (nonzero(), rational()).prop_map(|(b, c5)| Lattice::quadratic(b, c5, q(0, 1)).unwrap())
}

pub fn q_quadratic() -> impl Strategy<Value = Lattice> {
    let p = prop::sample::select(vec![(2, 1), (3, 1), (1, 2), (1, 3), (3, 2), (2, 3)]);
    (p, nonzero(), rational(), rational()).prop_map(|((n, d), c1, c2, c3)| Lattice::q_quadratic(q(n, d), c1, c2, c3).unwrap())
}

pub fn lattice() -> impl Strategy<Value = Lattice> {
    prop_oneof![quadratic(), q_quadratic()]
}

/// `x(s)` at `s = k/2`, computed from the defining formula.
pub fn x_half(kind: &Params, k: i64) -> Scalar {
    match kind {
        Params::Quadratic(beta, c5, c6) => {
            let s = q(k, 2);
            Scalar::int(4) * beta.clone() * s.clone() * s.clone() + c5.clone() * s + c6.clone()
        }
        Params::Q(p, c1, c2, c3) => c1.clone() * p.powi(-k) + c2.clone() * p.powi(k) + c3.clone(),
    }
}

#[derive(Clone, Debug)]
pub enum Params {
    Quadratic(Scalar, Scalar, Scalar),
    Q(Scalar, Scalar, Scalar, Scalar),
}

impl Params {
    pub fn lattice(&self) -> Lattice {
        match self.clone() {
            Params::Quadratic(b, c5, c6) => Lattice::quadratic(b, c5, c6).unwrap(),
            Params::Q(p, c1, c2, c3) => Lattice::q_quadratic(p, c1, c2, c3).unwrap(),
        }
    }
}

pub fn params() -> impl Strategy<Value = Params> {
    let p = prop::sample::select(vec![(2, 1), (3, 1), (1, 2), (1, 3), (3, 2), (2, 3), (5, 4)]);
    prop_oneof![
        (nonzero(), rational(), rational()).prop_map(|(b, c5, c6)| Params::Quadratic(b, c5, c6)),
        (p, nonzero(), rational(), rational()).prop_map(|((n, d), c1, c2, c3)| Params::Q(q(n, d), c1, c2, c3)),
    ]
}
