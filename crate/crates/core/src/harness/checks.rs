//! One runner per named check. Each fills a [`CheckRecord`]; module errors
//! are absorbed into the record by [`run_check`].

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use super::config::{CheckName, CheckOptions, CheckSpec, Family, Pairing};
use super::instance::Instance;
use super::report::{CheckRecord, Status};
use super::sweeps;
use crate::algebra::{Field, Poly};
use num_traits::Zero;
use crate::error::{Error, Result};
use crate::families::{affine_conjugate, cdh_recurrence, thm41_recurrence};
use crate::identities::dual_basis_derivative;
use crate::operators::OperatorTable;
use crate::recurrence::{moments_from_recurrence, RecurrenceData};
use crate::structure::lemma::{
    discover_banded, expected_degrees, lemma1_matrix, lemma1_polys, lemma1_relation_check, stated_degrees,
    thm32_residuals, LemmaPolys, RelationWitness,
};
use crate::structure::pearson::{
    fit_sl_parameter, pearson_check, recover_pearson, sl_parameter_from_relation, sturm_liouville_check,
    theorem_pearson, PearsonData,
};
use crate::structure::relation::{
    condition_residual, corollary_display, discover_deg2_pi, solve_deg2_relation, thm35_expansion, Condition,
    ConditionData,
};
use crate::structure::{derived_sequence, Ops};
use crate::{wire, DensePoly, Scalar};

/// Runs one check; never panics and never returns a module error.
pub fn run_check(spec: &CheckSpec, inst: &Instance, seed: u64, timings: bool) -> CheckRecord {
    let mut rec = CheckRecord::new(spec.name.name());
    let start = Instant::now();
    let o = &spec.options;
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let r = &mut rec;
        match spec.name {
            CheckName::Structure => structure(inst, o, r),
            CheckName::Pearson => pearson(inst, o, r),
            CheckName::Sl => sl(inst, o, r),
            CheckName::Conditions => conditions(inst, o, r),
            CheckName::Lemma1 => lemma1(inst, o, r),
            CheckName::Thm32 => thm32(inst, o, r),
            CheckName::Thm41 => thm41(inst, o, r),
            CheckName::Conjugation => conjugation(inst, o, r),
            CheckName::Display => display(inst, r),
            CheckName::Operators => sweeps::operators(o, seed, r),
            CheckName::Functionals => sweeps::functionals(o, seed, r),
            CheckName::DualBasis => dual_basis(inst, o, r),
        }
    }));
    match outcome {
        Ok(Ok(())) => {}
        Ok(Err(e)) => rec.absorb(&e),
        Err(_) => {
            rec.status = Status::Error;
            rec.note("internal error: check panicked");
        }
    }
    if timings {
        rec.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

fn is_zero_all(xs: &[Scalar]) -> Option<usize> {
    xs.iter().position(|x| !x.is_zero())
}

fn show_pair(pd: &PearsonData<Scalar>) -> (String, String) {
    (pd.phi().to_string(), pd.psi().to_string())
}

fn parse_pi(o: &CheckOptions) -> Result<Option<DensePoly>> {
    o.pi.as_ref().map(|c| Ok(Poly::from_coeffs(wire::parse_all(c)?))).transpose()
}

/// `pi` from the options, else the family's claim, else the first basis
/// element of the solution space (made monic). `None` records not-found.
fn resolve_pi(
    inst: &Instance,
    o: &CheckOptions,
    polys: &[DensePoly],
    table: &OperatorTable<Scalar>,
    n_max: usize,
    rec: &mut CheckRecord,
) -> Result<Option<DensePoly>> {
    if let Some(pi) = parse_pi(o)? {
        rec.set_param("pi_source", "options");
        return Ok(Some(pi));
    }
    if let Some(pi) = &inst.pi {
        rec.set_param("pi_source", "family");
        return Ok(Some(pi.clone()));
    }
    let space = discover_deg2_pi(polys, table, n_max)?;
    rec.set_param("pi_space_dim", space.len());
    match space.first() {
        Some(pi) => {
            rec.set_param("pi_source", "discovered");
            Ok(Some(pi.monic()))
        }
        None => {
            rec.status = Status::NotFound;
            rec.note(format!("no pi of degree <= 2 admits the relation for every n <= {n_max}"));
            Ok(None)
        }
    }
}

fn structure(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let n_max = o.n_max.unwrap_or(15);
    rec.set_param("n_max", n_max);
    rec.set_param("family", inst.family.name());
    let ops = Ops::from_recurrence(&inst.recurrence, 2)?;
    let table = OperatorTable::new(&inst.lattice, n_max + 3)?;
    let Some(pi) = resolve_pi(inst, o, ops.polys(), &table, n_max, rec)? else {
        return Ok(());
    };
    rec.set_param("pi", &pi);
    rec.set_param("a", pi.coeff(2));
    let rel = solve_deg2_relation(ops.polys(), &table, &pi, n_max)?;
    if let (Some((bs, cs)), true) = (&inst.relation, inst.pi.as_ref() == Some(&pi)) {
        for (n, r) in rel.iter().enumerate() {
            let checks = [("a_n", &r.a, Scalar::int(0)), ("b_n", &r.b, bs[n].clone()), ("c_n", &r.c, cs[n].clone())];
            for (name, solved, closed) in checks {
                if solved != &closed {
                    rec.fail(Some(n), solved.clone() - closed.clone());
                    rec.note(format!("{name}: solved {solved}, family closed form {closed}"));
                    return Ok(());
                }
            }
        }
    }
    inst.lattice.require_theorem_quadratic()?;
    for n in 0..=n_max {
        thm35_expansion(n, &ops, &table, &pi, &rel)?;
    }
    Ok(())
}

fn pearson(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let td = o.test_degree.unwrap_or(20);
    let window = o.window.unwrap_or(td + 2);
    rec.set_param("test_degree", td);
    let u = moments_from_recurrence(&inst.recurrence, window)?;
    let table = OperatorTable::new(&inst.lattice, window + 2)?;
    let got = match recover_pearson(&u, &table) {
        Err(Error::NoneFound) => {
            rec.status = Status::NotFound;
            rec.note("the moment equations admit no Pearson pair with deg phi <= 2, deg psi = 1");
            return Ok(());
        }
        other => other?,
    };
    let data = got.data.normalized();
    let (phi, psi) = show_pair(&data);
    rec.set_param("phi", phi);
    rec.set_param("psi", psi);
    rec.set_param("null_dim", got.null_dim);
    rec.window_used = Some(window);
    if let Some(claimed) = &inst.pearson {
        let claimed = claimed.normalized();
        if claimed != data {
            let (cphi, cpsi) = show_pair(&claimed);
            rec.fail(None, data.phi() - claimed.phi());
            rec.note(format!("recovered pair differs from the family's ({cphi}, {cpsi})"));
            return Ok(());
        }
    }
    let res = pearson_check(&data, &u, td, &table)?;
    if let Some(j) = is_zero_all(&res) {
        rec.fail(Some(j), &res[j]);
    }
    Ok(())
}

fn sl(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let n_max = o.n_max.unwrap_or(12);
    rec.set_param("n_max", n_max);
    let r = &inst.recurrence;
    let lat = &inst.lattice;
    let ops = Ops::from_recurrence(r, 2)?;
    let table = OperatorTable::new(lat, n_max.max(4) + 2)?;
    let (pd, frak_a, source) = match (&inst.pearson, &inst.pi) {
        (Some(_), Some(pi)) => {
            let rel = solve_deg2_relation(ops.polys(), &table, pi, 3)?;
            let frak_a = sl_parameter_from_relation(r, pi, &rel)?;
            (theorem_pearson(r, &frak_a, lat.beta())?, frak_a, "relation")
        }
        (Some(pd), None) => {
            let (pd, a) = fit_sl_parameter(pd, ops.polys(), &table)?;
            (pd, a, "fitted")
        }
        (None, _) => {
            let window = o.window.unwrap_or(12);
            let u = moments_from_recurrence(r, window)?;
            let wide = OperatorTable::new(lat, window + 2)?;
            let got = match recover_pearson(&u, &wide) {
                Err(Error::NoneFound) => {
                    rec.status = Status::NotFound;
                    rec.note("no Pearson pair recovered from the moments");
                    return Ok(());
                }
                other => other?,
            };
            rec.window_used = Some(window);
            let (pd, a) = fit_sl_parameter(&got.data, ops.polys(), &table)?;
            (pd, a, "recovered")
        }
    };
    let (phi, psi) = show_pair(&pd);
    rec.set_param("phi", phi);
    rec.set_param("psi", psi);
    rec.set_param("frak_a", &frak_a);
    rec.set_param("source", source);
    let res = sturm_liouville_check(pd.phi(), pd.psi(), &frak_a, ops.polys(), &table, n_max)?;
    if let Some(n) = res.iter().position(|p| !p.is_zero()) {
        rec.fail(Some(n), &res[n]);
    }
    Ok(())
}

fn parse_conditions(o: &CheckOptions, pi: &DensePoly) -> Result<Vec<Condition>> {
    match &o.conditions {
        Some(names) => names.iter().map(|s| s.parse()).collect(),
        None if pi.coeff(2).is_zero() => Ok(vec![Condition::Deg1, Condition::C1Relation]),
        None => Ok(Condition::ALL.to_vec()),
    }
}

fn conditions(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let ops = Ops::from_recurrence(&inst.recurrence, 2)?;
    let table = OperatorTable::new(&inst.lattice, 8)?;
    let Some(pi) = resolve_pi(inst, o, ops.polys(), &table, 5, rec)? else {
        return Ok(());
    };
    inst.lattice.require_theorem_quadratic()?;
    let which = parse_conditions(o, &pi)?;
    let names: Vec<_> = which.iter().map(|c| c.name()).collect();
    rec.set_param("conditions", names.join(","));
    rec.set_param("pi", &pi);
    let needs_relation = which.iter().any(|c| matches!(c, Condition::Deg2First | Condition::Deg2Second));
    let rel = if needs_relation { solve_deg2_relation(ops.polys(), &table, &pi, 3)? } else { Vec::new() };
    let data = ConditionData {
        recurrence: &inst.recurrence,
        beta: inst.lattice.beta().clone(),
        c5: inst.lattice.c5(),
        pi,
        relation: &rel,
    };
    for c in which {
        let res = condition_residual(c, &data)?;
        if !res.is_zero() {
            rec.fail(None, &res);
            rec.note(format!("condition {} does not hold", c.name()));
            return Ok(());
        }
    }
    Ok(())
}

struct Pipeline {
    pops: Ops<Scalar>,
    qops: Ops<Scalar>,
    table: OperatorTable<Scalar>,
    witness: RelationWitness<Scalar>,
}

/// Searches a banded `S_x`-expansion between `P^[k]` and `Q^[k]` and
/// records the search; `None` means not-found (transcript in the detail).
fn banded(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<Option<Pipeline>> {
    let k = o.k.unwrap_or(0);
    let pairing = o.pairing.unwrap_or_default();
    let band = o.band_max.unwrap_or(4);
    let n_hi = o.n_max.unwrap_or(12);
    let window = o.window.unwrap_or(24);
    rec.set_param("k", k);
    rec.set_param("m", k);
    rec.set_param("pairing", pairing.name());
    rec.set_param("band_max", band);
    rec.set_param("n_max", n_hi);
    let r = &inst.recurrence;
    let table = OperatorTable::new(&inst.lattice, (r.n_max() + 3).max(window + 3))?;
    let pops = Ops::from_recurrence(r, window)?;
    let qops = match pairing {
        Pairing::SelfPair => pops.clone(),
        Pairing::Derived => Ops::from_polys(derived_sequence(pops.polys(), 1, &table)?, window)?,
    };
    let search = discover_banded(pops.polys(), qops.polys(), k, k, band, band, n_hi, &table)?;
    match search.witness {
        None => {
            rec.status = Status::NotFound;
            rec.note(format!("search transcript: {}", search.transcript.join("; ")));
            Ok(None)
        }
        Some(w) => {
            rec.set_param("M", w.big_m);
            rec.set_param("N", w.big_n);
            Ok(Some(Pipeline { pops, qops, table, witness: w }))
        }
    }
}

fn lemma_list(p: &Pipeline, count: usize) -> Result<Vec<LemmaPolys<Scalar>>> {
    (0..count).map(|n| lemma1_polys(n, &p.witness, &p.pops, &p.qops, &p.table)).collect()
}

fn lemma1(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let Some(p) = banded(inst, o, rec)? else {
        return Ok(());
    };
    let w = &p.witness;
    let (_, det) = lemma1_matrix(w)?;
    rec.set_param("det_A", &det);
    if det.is_zero() {
        rec.status = Status::Skipped;
        rec.note("det A_(M+N) = 0");
        return Ok(());
    }
    w.check_corners()?;
    let lat = p.table.lattice();
    let mut used = usize::MAX;
    let mut stated_fails = Vec::new();
    for lp in lemma_list(&p, 4)? {
        let n = lp.n;
        let (dpsi, dphi, drho) = expected_degrees(lat, w, n);
        let got = (lp.psi.degree(), lp.phi.degree(), lp.rho.degree());
        if got != (Some(dpsi), dphi, Some(drho)) {
            rec.fail(Some(n), format!("{:?}", got));
            rec.note(format!("degrees (psi, phi, rho) = {got:?}, expected ({dpsi}, {dphi:?}, {drho})"));
            return Ok(());
        }
        let (spsi, sphi, srho) = stated_degrees(w, n);
        if got != (Some(spsi), Some(sphi), Some(srho)) {
            stated_fails.push(n);
        }
        let (wd, res) = lemma1_relation_check(&lp, p.pops.functional(), p.qops.functional(), w.k, w.m, &p.table, None)?;
        used = used.min(wd);
        if let Some(j) = is_zero_all(&res) {
            rec.fail(Some(n), &res[j]);
            rec.note(format!("relation residual at moment {j}"));
            return Ok(());
        }
    }
    rec.window_used = Some(used);
    if stated_fails.is_empty() {
        rec.set_param("stated_degrees", "hold");
    } else {
        rec.set_param("stated_degrees", "fail");
        rec.note(format!(
            "deg phi = M+m+n+1 fails at n = {stated_fails:?}; the leading term cancels on quadratic lattices"
        ));
    }
    Ok(())
}

fn thm32(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let Some(p) = banded(inst, o, rec)? else {
        return Ok(());
    };
    let list = lemma_list(&p, 4)?;
    let cert = thm32_residuals(&list, p.pops.functional(), p.qops.functional(), &p.table)?;
    rec.set_param("phi2", &cert.phi2);
    rec.set_param("psi2", &cert.psi2);
    rec.set_param("pi", &cert.pi);
    rec.set_param("rho", &cert.rho);
    rec.window_used = Some(cert.pearson_v.0.min(cert.link_uv.0));
    let parts = [("phi2 D_x v - psi2 S_x v", &cert.pearson_v.1), ("pi u - rho S_x v", &cert.link_uv.1)];
    for (name, res) in parts {
        if let Some(j) = is_zero_all(res) {
            rec.fail(Some(j), &res[j]);
            rec.note(format!("{name} at moment {j}"));
            return Ok(());
        }
    }
    for (i, row) in cert.b4_system.iter().enumerate() {
        if let Some(j) = is_zero_all(row) {
            rec.fail(Some(j), &row[j]);
            rec.note(format!("B4 system row {i} at moment {j}"));
            return Ok(());
        }
    }
    match &cert.degenerate {
        Some(why) => {
            rec.set_param("hypotheses", "fail");
            rec.note(format!("residuals vanish but a nondegeneracy hypothesis fails: {why}"));
        }
        None => rec.set_param("hypotheses", "hold"),
    }
    Ok(())
}

/// First index where two recurrences differ, as `(n, residual, label)`.
fn first_difference(
    got: &RecurrenceData<Scalar>,
    want: &RecurrenceData<Scalar>,
    n_max: usize,
) -> Result<Option<(usize, Scalar, String)>> {
    for n in 0..=n_max {
        let (g, w) = (got.b(n)?, want.b(n)?);
        if g != w {
            return Ok(Some((n, g - w, format!("B_{n}: {g} vs {w}"))));
        }
        if n >= 1 {
            let (g, w) = (got.c(n)?, want.c(n)?);
            if g != w {
                return Ok(Some((n, g.clone() - w.clone(), format!("C_{n}: {g} vs {w}"))));
            }
        }
    }
    Ok(None)
}

fn thm41(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let n_max = o.n_max.unwrap_or(12);
    rec.set_param("n_max", n_max);
    let pd = match &inst.pearson {
        Some(pd) => {
            rec.set_param("source", "family");
            pd.clone()
        }
        None => {
            let window = o.window.unwrap_or(12);
            let u = moments_from_recurrence(&inst.recurrence, window)?;
            let t = OperatorTable::new(&inst.lattice, window + 2)?;
            rec.window_used = Some(window);
            rec.set_param("source", "recovered");
            recover_pearson(&u, &t)?.data
        }
    };
    let (phi, psi) = show_pair(&pd);
    rec.set_param("phi", phi);
    rec.set_param("psi", psi);
    let got = thm41_recurrence(pd.phi(), pd.psi(), &inst.lattice, n_max)?;
    if let Some((n, res, what)) = first_difference(&got, &inst.recurrence, n_max)? {
        rec.fail(Some(n), &res);
        rec.note(what);
    }
    Ok(())
}

/// Branch instances as affine images `B_n = lambda B'_n + tau`,
/// `C_n = lambda^2 C'_n` of continuous dual Hahn data, with
/// `lambda = -4 beta` and `tau = -c5^2/(16 beta)`.
fn conjugation(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let n_max = o.n_max.unwrap_or(12);
    rec.set_param("n_max", n_max);
    let lat = &inst.lattice;
    lat.require_theorem_quadratic()?;
    let half = Scalar::frac(1, 2);
    let (a, b) = match inst.family {
        Family::Branch1 => (inst.param("a").clone(), inst.param("b").clone()),
        Family::Branch2 => (inst.param("d") - &half, inst.param("e") - &half),
        _ => {
            rec.status = Status::Skipped;
            rec.note("conjugation applies to branch1 and branch2 instances");
            return Ok(());
        }
    };
    let beta = lat.beta().clone();
    let c5 = lat.c5();
    let lambda = -Scalar::int(4) * beta.clone();
    let tau = -(c5.clone() * c5) / (Scalar::int(16) * beta);
    rec.set_param("cdh", format!("({a}, {b}, {half})"));
    rec.set_param("lambda", &lambda);
    rec.set_param("tau", &tau);
    let image = affine_conjugate(&cdh_recurrence(&a, &b, &half, n_max)?, &lambda, &tau)?;
    if let Some((n, res, what)) = first_difference(&image, &inst.recurrence, n_max)? {
        rec.fail(Some(n), &res);
        rec.note(what);
    }
    Ok(())
}

fn display(inst: &Instance, rec: &mut CheckRecord) -> Result<()> {
    let shown = corollary_display(&inst.recurrence, &inst.lattice)?;
    let ops = Ops::from_recurrence(&inst.recurrence, 2)?;
    let t = OperatorTable::new(&inst.lattice, 4)?;
    let (p2, p3) = (ops.poly(2)?, ops.poly(3)?);
    let direct = [t.dx(p2)?, t.sx(p2)?, t.dx(p3)?, t.sx(p3)?];
    let names = ["D_x P_2", "S_x P_2", "D_x P_3", "S_x P_3"];
    for i in 0..4 {
        if shown[i] != direct[i] {
            rec.fail(Some(2 + i / 2), &shown[i] - &direct[i]);
            rec.note(format!("{}: displayed {}, computed {}", names[i], shown[i], direct[i]));
            return Ok(());
        }
    }
    Ok(())
}

fn dual_basis(inst: &Instance, o: &CheckOptions, rec: &mut CheckRecord) -> Result<()> {
    let n_max = o.n_max.unwrap_or(4);
    let window = o.window.unwrap_or(8);
    rec.set_param("n_max", n_max);
    rec.set_param("k", "1,2");
    let ops = Ops::from_recurrence(&inst.recurrence, 2)?;
    let t = OperatorTable::new(&inst.lattice, window + n_max + 4)?;
    let mut used = usize::MAX;
    for k in 1..=2 {
        for n in 0..=n_max {
            let (wd, first) = dual_basis_derivative(ops.polys(), k, n, window, &t)?;
            used = used.min(wd);
            if let Some((j, v)) = first {
                rec.fail(Some(n), &v);
                rec.note(format!("k = {k}, moment {j}"));
                return Ok(());
            }
        }
    }
    rec.window_used = Some(used);
    Ok(())
}
