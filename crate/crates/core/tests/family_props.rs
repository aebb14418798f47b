mod common;

use common::*;
use proptest::prelude::*;

use lattice_ops::algebra::{compose, Field, Poly};
use lattice_ops::families::{
    affine_conjugate, cdh_recurrence, corollary_branch1, corollary_branch2, wilson_recurrence,
};
use lattice_ops::operators::OperatorTable;
use lattice_ops::recurrence::{generate_ops, moments_from_recurrence, RecurrenceData};
use lattice_ops::structure::pearson::{pearson_check, recover_pearson, sturm_liouville_check};
use lattice_ops::structure::relation::{corollary_display, solve_deg2_relation};
use lattice_ops::{Lattice, Scalar};

fn sixths() -> impl Strategy<Value = Scalar> {
    (1i64..=12).prop_map(|k| q(k, 6))
}

fn same_coefficients(x: &RecurrenceData<Scalar>, y: &RecurrenceData<Scalar>) -> bool {
    x.b_all() == y.b_all() && x.c_all() == y.c_all()
}

fn branch2_params() -> impl Strategy<Value = (Scalar, Scalar, Scalar, Scalar)> {
    (nonzero(), rational(), (1i64..=8).prop_map(|k| q(k, 4))).prop_map(|(beta, c5, d)| {
        let rhs = q(1, 1) - c5.clone() * c5.clone() / (Scalar::int(64) * beta.clone() * beta.clone());
        let e = rhs / (d.clone() + q(1, 1)) - q(1, 1);
        (beta, c5, d, e)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn branch1_closed_forms_and_conjugation(beta in nonzero(), c5 in rational(), a in sixths(), b in sixths()) {
        let inst = corollary_branch1(&beta, &c5, &a, &b, 12);
        prop_assume!(inst.is_ok());
        let inst = inst.unwrap();
        let r = &inst.recurrence;
        let (b0, b1) = (r.b(0).unwrap().clone(), r.b(1).unwrap().clone());
        for n in 0..=12i64 {
            let nf = Scalar::int(n);
            let want = -Scalar::int(8) * beta.clone() * nf.clone() * nf.clone()
                + (b1.clone() - b0.clone() + Scalar::int(8) * beta.clone()) * nf
                + b0.clone();
            prop_assert_eq!(r.b(n as usize).unwrap().clone(), want);
        }
        let lambda = -Scalar::int(4) * beta.clone();
        let tau = -c5.clone() * c5.clone() / (Scalar::int(16) * beta.clone());
        let cdh = cdh_recurrence(&a, &b, &q(1, 2), 12).unwrap();
        prop_assert!(same_coefficients(&affine_conjugate(&cdh, &lambda, &tau).unwrap(), r));
    }

    #[test]
    fn branch2_conjugation((beta, c5, d, e) in branch2_params()) {
        let inst = corollary_branch2(&beta, &c5, &d, &e, 12);
        prop_assume!(inst.is_ok());
        let lambda = -Scalar::int(4) * beta.clone();
        let tau = -c5.clone() * c5.clone() / (Scalar::int(16) * beta.clone());
        let half = q(1, 2);
        let cdh = cdh_recurrence(&(d - half.clone()), &(e - half.clone()), &half, 12).unwrap();
        prop_assert!(same_coefficients(&affine_conjugate(&cdh, &lambda, &tau).unwrap(), &inst.unwrap().recurrence));
    }

    /// `P~_n(z) = lambda^n P_n((z - tau)/lambda)`.
    #[test]
    fn affine_conjugate_rescales_polynomials(
        b in prop::collection::vec(rational(), 7),
        c in prop::collection::vec(nonzero(), 6),
        lambda in nonzero(),
        tau in rational(),
    ) {
        let r = RecurrenceData::new(b, c).unwrap();
        let conj = affine_conjugate(&r, &lambda, &tau).unwrap();
        let arg = Poly::from_coeffs(vec![-tau.clone() / lambda.clone(), lambda.recip()]);
        let (orig, new) = (generate_ops(&r, 7).unwrap(), generate_ops(&conj, 7).unwrap());
        for (n, (p, pt)) in orig.iter().zip(&new).enumerate() {
            prop_assert_eq!(compose(p, &arg).scale(&lambda.powi(n as i64)), pt.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn branch1_relation_and_displays(beta in nonzero(), c5 in rational(), a in sixths(), b in sixths()) {
        let inst = corollary_branch1(&beta, &c5, &a, &b, 17);
        prop_assume!(inst.is_ok());
        let inst = inst.unwrap();
        let lat = Lattice::quadratic(beta.clone(), c5.clone(), q(0, 1)).unwrap();
        let polys = generate_ops(&inst.recurrence, 17).unwrap();
        let t = OperatorTable::new(&lat, 17).unwrap();
        let rel = solve_deg2_relation(&polys, &t, &inst.pi(), 15).unwrap();
        for (n, c) in rel.iter().enumerate() {
            prop_assert_eq!(&c.a, &q(0, 1));
            prop_assert_eq!(&c.b, &inst.b_seq[n]);
            prop_assert_eq!(&c.c, &inst.c_seq[n]);
        }
        let shown = corollary_display(&inst.recurrence, &lat).unwrap();
        let direct = [t.dx(&polys[2]).unwrap(), t.sx(&polys[2]).unwrap(), t.dx(&polys[3]).unwrap(), t.sx(&polys[3]).unwrap()];
        prop_assert_eq!(shown, direct);
        let sl = sturm_liouville_check(&inst.phi, &inst.psi, &q(0, 1), &polys, &t, 12).unwrap();
        prop_assert!(sl.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn branch2_sturm_liouville((beta, c5, d, e) in branch2_params()) {
        let inst = corollary_branch2(&beta, &c5, &d, &e, 14);
        prop_assume!(inst.is_ok());
        let inst = inst.unwrap();
        let lat = Lattice::quadratic(beta, c5, q(0, 1)).unwrap();
        let polys = generate_ops(&inst.recurrence, 14).unwrap();
        let t = OperatorTable::new(&lat, 14).unwrap();
        let sl = sturm_liouville_check(&inst.phi, &inst.psi, &q(0, 1), &polys, &t, 12).unwrap();
        prop_assert!(sl.iter().all(|p| p.is_zero()));
    }
}

#[test]
fn recovered_pearson_pairs_annihilate_their_windows() {
    let golden = Lattice::quadratic(q(1, 4), q(0, 1), q(0, 1)).unwrap();
    let minus_s2 = Lattice::quadratic(q(-1, 4), q(0, 1), q(0, 1)).unwrap();
    let b2 = Lattice::quadratic(q(-2, 1), q(0, 1), q(0, 1)).unwrap();
    let cases = [
        (corollary_branch1(&q(1, 4), &q(0, 1), &q(1, 1), &q(1, 2), 12).unwrap().recurrence, golden),
        (corollary_branch2(&q(-2, 1), &q(0, 1), &q(1, 4), &q(-1, 5), 12).unwrap().recurrence, b2),
        (cdh_recurrence(&q(1, 2), &q(1, 3), &q(1, 2), 12).unwrap(), minus_s2.clone()),
        (wilson_recurrence(&q(1, 2), &q(1, 2), &q(1, 2), &q(1, 2), 12).unwrap(), minus_s2),
    ];
    for (r, lat) in cases {
        let u = moments_from_recurrence(&r, 14).unwrap();
        let t = OperatorTable::new(&lat, 16).unwrap();
        let rec = recover_pearson(&u, &t).unwrap();
        let res = pearson_check(&rec.data, &u, 12, &t).unwrap();
        assert!(res.iter().all(|v| *v == q(0, 1)), "{:?}: {res:?}", r.family());
    }
}
