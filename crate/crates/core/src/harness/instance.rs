//! Turning a configuration's lattice and instance into exact data.

use std::collections::BTreeMap;

use super::config::{CheckConfig, Coeff, ConfigError, Family, InstanceSpec, ParamValue};
use crate::algebra::Poly;
use crate::families::{
    cdh_recurrence, corollary_branch1, corollary_branch2, thm41_recurrence, wilson_recurrence, CorollaryInstance,
};
use crate::recurrence::RecurrenceData;
use crate::structure::pearson::PearsonData;
use crate::{wire, DensePoly, Lattice, Recurrence, Scalar};

pub const DEFAULT_N_MAX: usize = 24;

/// An instance ready for checking. `pi`, `pearson` and `relation` hold what
/// the family claims; overrides change only the recurrence.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub lattice: Lattice,
    pub recurrence: Recurrence,
    /// Scalar parameters by name.
    pub params: BTreeMap<String, Scalar>,
    /// `pi` of a known degree-one structure relation.
    pub pi: Option<DensePoly>,
    /// `(b_n, c_n)` of that relation.
    pub relation: Option<(Vec<Scalar>, Vec<Scalar>)>,
    pub pearson: Option<PearsonData<Scalar>>,
}

impl Instance {
    pub fn param(&self, name: &str) -> &Scalar {
        &self.params[name]
    }
}

fn scalar(location: &str, text: &str) -> Result<Scalar, ConfigError> {
    wire::parse(text).map_err(|e| ConfigError::new(location, e.to_string()))
}

fn scalars(location: &str, items: &[String]) -> Result<Vec<Scalar>, ConfigError> {
    items.iter().enumerate().map(|(i, t)| scalar(&format!("{location}[{i}]"), t)).collect()
}

pub fn build_instance(cfg: &CheckConfig) -> Result<Instance, ConfigError> {
    let lattice = Lattice::from_wire(&cfg.lattice).map_err(|e| ConfigError::new("lattice", e.to_string()))?;
    build_on(&lattice, &cfg.instance)
}

pub fn build_on(lattice: &Lattice, spec: &InstanceSpec) -> Result<Instance, ConfigError> {
    let family = spec.family;
    let (scalar_names, list_names) = family.param_names();
    let mut params = BTreeMap::new();
    let mut lists = BTreeMap::new();
    for (key, value) in &spec.params {
        let loc = format!("instance.params.{key}");
        match value {
            ParamValue::Scalar(t) if scalar_names.contains(&key.as_str()) => {
                params.insert(key.clone(), scalar(&loc, t)?);
            }
            ParamValue::List(items) if list_names.contains(&key.as_str()) => {
                lists.insert(key.clone(), scalars(&loc, items)?);
            }
            _ if scalar_names.contains(&key.as_str()) => {
                return Err(ConfigError::new(loc, "expected a rational string"));
            }
            _ if list_names.contains(&key.as_str()) => {
                return Err(ConfigError::new(loc, "expected a list of rational strings"));
            }
            _ => return Err(ConfigError::new(loc, format!("unknown parameter for family {}", family.name()))),
        }
    }
    for name in scalar_names.iter().chain(list_names) {
        if !params.contains_key(*name) && !lists.contains_key(*name) {
            return Err(ConfigError::new("instance.params", format!("missing parameter {name:?}")));
        }
    }
    let n_max = spec.n_max.unwrap_or(DEFAULT_N_MAX);
    let fam_err = |e: crate::error::Error| ConfigError::new("instance", e.to_string());
    let p = |k: &str| params[k].clone();
    let mut pi = None;
    let mut relation = None;
    let mut pearson = None;
    let mut corollary = |inst: CorollaryInstance<Scalar>| -> Result<Recurrence, ConfigError> {
        pi = Some(inst.pi());
        relation = Some((inst.b_seq.clone(), inst.c_seq.clone()));
        pearson = Some(PearsonData::new(inst.phi.clone(), inst.psi.clone()).map_err(fam_err)?);
        Ok(inst.recurrence)
    };
    let theorem_lattice = || {
        lattice
            .require_theorem_quadratic()
            .map_err(|e| ConfigError::new("lattice", format!("family {}: {e}", family.name())))
    };
    let recurrence = match family {
        Family::Cdh => cdh_recurrence(&p("a"), &p("b"), &p("c"), n_max).map_err(fam_err)?,
        Family::Wilson => wilson_recurrence(&p("a"), &p("b"), &p("c"), &p("d"), n_max).map_err(fam_err)?,
        Family::Branch1 => {
            theorem_lattice()?;
            corollary(
                corollary_branch1(lattice.beta(), &lattice.c5(), &p("a"), &p("b"), n_max).map_err(fam_err)?,
            )?
        }
        Family::Branch2 => {
            theorem_lattice()?;
            corollary(
                corollary_branch2(lattice.beta(), &lattice.c5(), &p("d"), &p("e"), n_max).map_err(fam_err)?,
            )?
        }
        Family::Thm41 => {
            theorem_lattice()?;
            let phi = Poly::from_coeffs(lists["phi"].clone());
            let psi = Poly::from_coeffs(lists["psi"].clone());
            let r = thm41_recurrence(&phi, &psi, lattice, n_max).map_err(fam_err)?;
            pearson = Some(PearsonData::new(phi, psi).map_err(fam_err)?);
            r
        }
        Family::Recurrence => {
            let r = RecurrenceData::new(lists["B"].clone(), lists["C"].clone()).map_err(fam_err)?;
            match spec.n_max {
                Some(n) => r.truncated(n).map_err(fam_err)?,
                None => r,
            }
        }
    };
    let mut recurrence = recurrence;
    for (i, o) in spec.overrides.iter().enumerate() {
        let loc = format!("instance.overrides[{i}]");
        let value = scalar(&format!("{loc}.value"), &o.value)?;
        let which = match o.coeff {
            Coeff::B => 'B',
            Coeff::C => 'C',
        };
        recurrence = recurrence.with_override(which, o.n, value).map_err(|e| ConfigError::new(loc, e.to_string()))?;
    }
    Ok(Instance { family, lattice: lattice.clone(), recurrence, params, pi, relation, pearson })
}
