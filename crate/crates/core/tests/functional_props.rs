mod common;

use common::*;
use proptest::prelude::*;

use lattice_ops::families::corollary_branch1;
use lattice_ops::functionals::{compare, MomentFunctional};
use lattice_ops::identities::dual_basis_derivative;
use lattice_ops::operators::OperatorTable;
use lattice_ops::recurrence::{generate_ops, moments_from_recurrence, recurrence_from_moments, RecurrenceData};
use lattice_ops::{Lattice, Scalar};

const WINDOW: usize = 12;

fn functional() -> impl Strategy<Value = MomentFunctional<Scalar>> {
    prop::collection::vec(rational(), WINDOW + 1).prop_map(|m| MomentFunctional::new(m).unwrap())
}

fn assert_same(lhs: &MomentFunctional<Scalar>, rhs: &MomentFunctional<Scalar>, min_window: usize) -> Result<(), TestCaseError> {
    let (w, first) = compare(lhs, rhs);
    prop_assert!(w >= min_window, "window {w}");
    prop_assert!(first.is_none(), "moment {:?}", first);
    Ok(())
}

fn regular_recurrence() -> impl Strategy<Value = RecurrenceData<Scalar>> {
    (prop::collection::vec(rational(), 10), prop::collection::vec(nonzero(), 9))
        .prop_map(|(b, c)| RecurrenceData::new(b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn functional_product_and_commutation_rules(lat in lattice(), u in functional(), f in poly(4), n in 0usize..=4) {
        let t = OperatorTable::new(&lat, WINDOW + 1).unwrap();
        let alpha = lat.alpha().clone();
        let ainv = alpha.recip();
        let (u1, u2) = lat.u_polys();
        let (df, sf) = (t.dx(&f).unwrap(), t.sx(&f).unwrap());
        let (du, su) = (u.d_with(&t).unwrap(), u.s_with(&t).unwrap());
        let fu = u.poly_mul(&f).unwrap();
        let min = WINDOW - 6;

        let rhs = du.poly_mul(&(&sf - &(&u1 * &df).scale(&ainv))).unwrap().add(&su.poly_mul(&df.scale(&ainv)).unwrap());
        assert_same(&fu.d_with(&t).unwrap(), &rhs, min)?;

        let c1 = &(&u2.scale(&alpha) - &(&u1 * &u1).scale(&ainv)) * &df;
        let c2 = &sf + &(&u1 * &df).scale(&ainv);
        let rhs = du.poly_mul(&c1).unwrap().add(&su.poly_mul(&c2).unwrap());
        assert_same(&fu.s_with(&t).unwrap(), &rhs, min)?;

        let rhs = u.poly_mul(&sf).unwrap().d_with(&t).unwrap().sub(&u.poly_mul(&df).unwrap().s_with(&t).unwrap());
        assert_same(&du.poly_mul(&f).unwrap(), &rhs, min)?;

        let lhs = su.d_power(&t, n).unwrap().scale(&alpha);
        let dn = u.d_power(&t, n).unwrap();
        let rhs = dn
            .s_with(&t)
            .unwrap()
            .scale(&lat.alpha_n(n as i64 + 1))
            .add(&dn.d_with(&t).unwrap().poly_mul(&u1).unwrap().scale(&lat.gamma_n(n as i64)));
        assert_same(&lhs, &rhs, WINDOW - n - 2)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn orthogonality_and_moment_roundtrip(r in regular_recurrence()) {
        let u = moments_from_recurrence(&r, 17).unwrap();
        prop_assert_eq!(u.moment(0).unwrap().clone(), q(1, 1));
        let polys = generate_ops(&r, 9).unwrap();
        let mut norm = q(1, 1);
        for n in 0..=8 {
            if n > 0 {
                norm = norm * r.c(n).unwrap();
            }
            for m in 0..=8 {
                let v = u.pair(&(&polys[n] * &polys[m])).unwrap();
                prop_assert_eq!(v, if n == m { norm.clone() } else { q(0, 1) });
            }
        }
        prop_assert_eq!(recurrence_from_moments(&u, 8).unwrap(), r.truncated(8).unwrap());
    }
}

#[test]
fn golden_orthogonality() {
    let inst = corollary_branch1(&q(1, 4), &q(0, 1), &q(1, 1), &q(1, 2), 9).unwrap();
    let u = moments_from_recurrence(&inst.recurrence, 17).unwrap();
    let polys = generate_ops(&inst.recurrence, 9).unwrap();
    for n in 0..=8 {
        for m in 0..n {
            assert_eq!(u.pair(&(&polys[n] * &polys[m])).unwrap(), q(0, 1));
        }
        assert_eq!(u.pair(&(&polys[n] * &polys[n])).unwrap(), inst.recurrence.norm(n).unwrap());
    }
}

#[test]
fn dual_basis_derivatives_on_golden_instance() {
    let lat = Lattice::quadratic(q(1, 4), q(0, 1), q(0, 1)).unwrap();
    let inst = corollary_branch1(&q(1, 4), &q(0, 1), &q(1, 1), &q(1, 2), 14).unwrap();
    let seq = generate_ops(&inst.recurrence, 14).unwrap();
    let t = OperatorTable::new(&lat, 14).unwrap();
    for k in 1..=2 {
        for n in 0..=4 {
            let (w, first) = dual_basis_derivative(&seq, k, n, 9, &t).unwrap();
            assert!(w > n + k, "k={k} n={n} window {w}");
            assert!(first.is_none(), "k={k} n={n}: {first:?}");
        }
    }
}

#[test]
fn dual_basis_pairs_to_kronecker_delta() {
    let inst = corollary_branch1(&q(1, 4), &q(0, 1), &q(1, 1), &q(1, 2), 8).unwrap();
    let seq = generate_ops(&inst.recurrence, 8).unwrap();
    for n in 0..=5 {
        let r = lattice_ops::functionals::dual_basis(&seq, n, 7).unwrap();
        for (m, p) in seq.iter().enumerate().take(7) {
            let want = if m == n { q(1, 1) } else { q(0, 1) };
            assert_eq!(r.pair(p).unwrap(), want, "n={n} m={m}");
        }
    }
}
