//! The built-in verification suite run by `verify` without a config.
//!
//! Every record carries a `criterion` param (1 to 9) and an `instance`
//! label. Parameter sets beyond the fixed ones are drawn from the seed.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use super::checks::run_check;
use super::config::{CheckName, CheckOptions, CheckSpec, Family, InstanceSpec, Pairing, ParamValue};
use super::instance::{build_on, DEFAULT_N_MAX};
use super::report::{CheckRecord, Report, Status};
use super::sweeps::{nonzero_rational, rng, small_rational};
use crate::algebra::Field;
use num_traits::One;
use crate::families::{corollary_branch1, corollary_branch2};
use crate::lattice::LatticeWire;
use crate::{Lattice, Scalar};

#[derive(Clone, Debug)]
pub struct SuiteCase {
    pub criterion: u8,
    pub lattice: LatticeWire,
    pub instance: InstanceSpec,
    pub check: CheckSpec,
}

fn quadratic(beta: &Scalar, c5: &Scalar) -> LatticeWire {
    LatticeWire::Quadratic { beta: beta.to_string(), c5: c5.to_string(), c6: "0".into() }
}

/// `x(s) = -s^2`, the lattice on which the raw dual Hahn and Wilson data live.
fn minus_s_squared() -> LatticeWire {
    quadratic(&Scalar::frac(-1, 4), &Scalar::int(0))
}

fn instance(family: Family, params: &[(&str, &Scalar)]) -> InstanceSpec {
    InstanceSpec {
        family,
        params: params.iter().map(|(k, v)| (k.to_string(), ParamValue::Scalar(v.to_string()))).collect(),
        n_max: None,
        overrides: Vec::new(),
    }
}

/// `(beta, c5, a, b)` sets; the first is the golden instance.
pub fn branch1_sets(seed: u64, count: usize) -> Vec<[Scalar; 4]> {
    let mut r = rng(seed ^ 0xb1);
    let mut out = vec![[Scalar::frac(1, 4), Scalar::int(0), Scalar::int(1), Scalar::frac(1, 2)]];
    while out.len() < count {
        let beta = nonzero_rational(&mut r);
        let c5 = small_rational(&mut r);
        let a = Scalar::frac(r.gen_range(1..=12), 6);
        let b = Scalar::frac(r.gen_range(1..=12), 6);
        if corollary_branch1(&beta, &c5, &a, &b, DEFAULT_N_MAX).is_ok() {
            out.push([beta, c5, a, b]);
        }
    }
    out
}

/// `(beta, c5, d, e)` sets with `(d+1)(e+1) = 1 - c5^2/(64 beta^2)`.
pub fn branch2_sets(seed: u64, count: usize) -> Vec<[Scalar; 4]> {
    let mut r = rng(seed ^ 0xb2);
    let mut out = Vec::new();
    while out.len() < count {
        let beta = nonzero_rational(&mut r);
        let c5 = if out.len() % 2 == 0 { Scalar::int(0) } else { small_rational(&mut r) };
        let d = Scalar::frac(r.gen_range(1..=8), 4);
        let rhs = Scalar::one() - c5.clone() * c5.clone() / (Scalar::int(64) * beta.clone() * beta.clone());
        let e = rhs / (d.clone() + Scalar::one()) - Scalar::one();
        if corollary_branch2(&beta, &c5, &d, &e, DEFAULT_N_MAX).is_ok() {
            out.push([beta, c5, d, e]);
        }
    }
    out
}

fn b1(set: &[Scalar; 4]) -> (LatticeWire, InstanceSpec) {
    (quadratic(&set[0], &set[1]), instance(Family::Branch1, &[("a", &set[2]), ("b", &set[3])]))
}

fn b2(set: &[Scalar; 4]) -> (LatticeWire, InstanceSpec) {
    (quadratic(&set[0], &set[1]), instance(Family::Branch2, &[("d", &set[2]), ("e", &set[3])]))
}

fn wilson(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> (LatticeWire, InstanceSpec) {
    let f = |(n, m): (i64, i64)| Scalar::frac(n, m);
    let (a, b, c, d) = (f(a), f(b), f(c), f(d));
    (minus_s_squared(), instance(Family::Wilson, &[("a", &a), ("b", &b), ("c", &c), ("d", &d)]))
}

fn cdh(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> (LatticeWire, InstanceSpec) {
    let f = |(n, m): (i64, i64)| Scalar::frac(n, m);
    let (a, b, c) = (f(a), f(b), f(c));
    (minus_s_squared(), instance(Family::Cdh, &[("a", &a), ("b", &b), ("c", &c)]))
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

/// The full list of cases, in report order.
pub fn full_suite(seed: u64) -> Vec<SuiteCase> {
    let golden = b1(&branch1_sets(seed, 1)[0]);
    let b1s = branch1_sets(seed, 5);
    let b2s = branch2_sets(seed, 5);
    let mut cases = Vec::new();
    let mut add = |criterion: u8, (lattice, instance): (LatticeWire, InstanceSpec), name: CheckName, o: CheckOptions| {
        cases.push(SuiteCase { criterion, lattice, instance, check: CheckSpec::with(name, o) });
    };

    add(1, golden.clone(), CheckName::Operators, CheckOptions { cases: Some(200), lattices: Some(10), n_max: Some(12), ..opts() });
    add(2, golden.clone(), CheckName::Functionals, CheckOptions { cases: Some(100), ..opts() });
    add(2, golden.clone(), CheckName::DualBasis, CheckOptions { n_max: Some(4), ..opts() });

    add(3, golden.clone(), CheckName::Structure, CheckOptions { n_max: Some(15), ..opts() });
    add(3, golden.clone(), CheckName::Conditions, opts());

    add(4, golden.clone(), CheckName::Pearson, CheckOptions { test_degree: Some(20), ..opts() });

    for set in b1s.iter().take(2) {
        add(5, b1(set), CheckName::Sl, CheckOptions { n_max: Some(12), ..opts() });
    }
    for set in b2s.iter().take(2) {
        add(5, b2(set), CheckName::Sl, CheckOptions { n_max: Some(12), ..opts() });
    }
    add(5, wilson((1, 2), (1, 2), (1, 2), (1, 2)), CheckName::Sl, CheckOptions { n_max: Some(12), ..opts() });
    add(5, wilson((1, 1), (1, 2), (3, 2), (1, 3)), CheckName::Sl, CheckOptions { n_max: Some(12), ..opts() });

    add(6, golden.clone(), CheckName::Thm41, CheckOptions { n_max: Some(12), ..opts() });

    for set in &b1s {
        add(7, b1(set), CheckName::Conjugation, CheckOptions { n_max: Some(12), ..opts() });
    }
    for set in &b2s {
        add(7, b2(set), CheckName::Conjugation, CheckOptions { n_max: Some(12), ..opts() });
    }

    let ten = CheckOptions { n_max: Some(10), ..opts() };
    add(8, golden.clone(), CheckName::Structure, ten.clone());
    add(8, b1(&b1s[1]), CheckName::Structure, ten.clone());
    add(8, b2(&b2s[0]), CheckName::Structure, ten.clone());
    add(8, cdh((1, 2), (1, 3), (1, 2)), CheckName::Structure, ten.clone());
    add(8, wilson((1, 2), (1, 2), (1, 2), (1, 2)), CheckName::Structure, ten.clone());
    add(8, wilson((1, 1), (1, 2), (3, 2), (1, 3)), CheckName::Structure, ten);
    for set in &b1s {
        add(8, b1(set), CheckName::Display, opts());
    }

    for k in 0..=1 {
        for pairing in [Pairing::SelfPair, Pairing::Derived] {
            let o = CheckOptions { k: Some(k), pairing: Some(pairing), band_max: Some(4), n_max: Some(12), ..opts() };
            add(9, golden.clone(), CheckName::Lemma1, o.clone());
            add(9, golden.clone(), CheckName::Thm32, o);
        }
    }
    cases
}

fn label(inst: &InstanceSpec, lattice: &LatticeWire) -> String {
    let lat = match lattice {
        LatticeWire::Quadratic { beta, c5, .. } => format!("beta={beta},c5={c5}"),
        LatticeWire::QQuadratic { p, c1, c2, c3 } => format!("p={p},c1={c1},c2={c2},c3={c3}"),
    };
    let params: Vec<String> = inst
        .params
        .iter()
        .map(|(k, v)| match v {
            ParamValue::Scalar(s) => format!("{k}={s}"),
            ParamValue::List(xs) => format!("{k}=[{}]", xs.join(",")),
        })
        .collect();
    format!("{}({};{})", inst.family.name(), lat, params.join(","))
}

pub fn run_case(case: &SuiteCase, seed: u64, timings: bool) -> CheckRecord {
    let built = Lattice::from_wire(&case.lattice)
        .map_err(|e| e.to_string())
        .and_then(|lat| build_on(&lat, &case.instance).map_err(|e| e.to_string()));
    let mut rec = match built {
        Ok(inst) => run_check(&case.check, &inst, seed, timings),
        Err(e) => CheckRecord::new(case.check.name.name()).with_status(Status::Error, e),
    };
    rec.set_param("criterion", case.criterion);
    rec.set_param("instance", label(&case.instance, &case.lattice));
    rec
}

pub fn run_suite(seed: u64, timings: bool) -> Report {
    full_suite(seed).par_iter().map(|c| run_case(c, seed, timings)).collect()
}

/// Records grouped by criterion, in report order.
pub fn by_criterion(report: &Report) -> BTreeMap<u8, Vec<&CheckRecord>> {
    let mut out: BTreeMap<u8, Vec<&CheckRecord>> = BTreeMap::new();
    for r in report {
        if let Some(c) = r.params.get("criterion").and_then(|c| c.parse().ok()) {
            out.entry(c).or_default().push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_sets_are_valid_and_seeded() {
        let a = branch2_sets(5, 5);
        assert_eq!(a, branch2_sets(5, 5));
        for s in &a {
            let rhs = Scalar::one() - s[1].clone() * s[1].clone() / (Scalar::int(64) * s[0].clone() * s[0].clone());
            assert_eq!((s[2].clone() + Scalar::one()) * (s[3].clone() + Scalar::one()), rhs);
        }
        assert_eq!(branch1_sets(9, 3)[0][3], Scalar::frac(1, 2));
        assert_ne!(branch1_sets(1, 3), branch1_sets(2, 3));
    }

    #[test]
    fn suite_covers_every_criterion() {
        let cases = full_suite(0);
        for c in 1..=9 {
            assert!(cases.iter().any(|k| k.criterion == c), "criterion {c}");
        }
        assert_eq!(cases.iter().filter(|k| k.check.name == CheckName::Conjugation).count(), 10);
    }
}
