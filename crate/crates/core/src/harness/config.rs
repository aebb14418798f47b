//! Check configurations: one JSON document naming a lattice, an instance
//! and the checks to run on it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::LatticeWire;

/// A rejected configuration, with the JSON path (and position, when known)
/// of the offending value.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("config error at {location}: {message}")]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { location: location.into(), message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub lattice: LatticeWire,
    pub instance: InstanceSpec,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    /// Seed of the ChaCha8 generator behind every randomized sweep.
    #[serde(default)]
    pub seed: u64,
}

impl CheckConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let location = if inner.line() > 0 {
                format!("{path} (line {}, column {})", inner.line(), inner.column())
            } else {
                path
            };
            ConfigError::new(location, inner.to_string())
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cdh,
    Wilson,
    Branch1,
    Branch2,
    Thm41,
    Recurrence,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cdh => "cdh",
            Family::Wilson => "wilson",
            Family::Branch1 => "branch1",
            Family::Branch2 => "branch2",
            Family::Thm41 => "thm41",
            Family::Recurrence => "recurrence",
        }
    }

    /// Scalar parameters, then list-valued parameters.
    pub fn param_names(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Family::Cdh => (&["a", "b", "c"], &[]),
            Family::Wilson => (&["a", "b", "c", "d"], &[]),
            Family::Branch1 => (&["a", "b"], &[]),
            Family::Branch2 => (&["d", "e"], &[]),
            Family::Thm41 => (&[], &["phi", "psi"]),
            Family::Recurrence => (&[], &["B", "C"]),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| {
            format!("unknown family {s:?} (expected cdh, wilson, branch1, branch2, thm41 or recurrence)")
        })
    }
}

/// A parameter value: one rational, or a coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Scalar(String),
    List(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub family: Family,
    #[serde(default)]
    pub params: BTreeMap<String, ParamValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<Override>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coeff {
    B,
    C,
}

/// Replaces one recurrence coefficient after the family is generated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Override {
    pub coeff: Coeff,
    pub n: usize,
    pub value: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Structure,
    Pearson,
    Sl,
    Conditions,
    Lemma1,
    Thm32,
    Thm41,
    Conjugation,
    Display,
    Operators,
    Functionals,
    DualBasis,
}

impl CheckName {
    pub const ALL: [CheckName; 12] = [
        CheckName::Structure,
        CheckName::Pearson,
        CheckName::Sl,
        CheckName::Conditions,
        CheckName::Lemma1,
        CheckName::Thm32,
        CheckName::Thm41,
        CheckName::Conjugation,
        CheckName::Display,
        CheckName::Operators,
        CheckName::Functionals,
        CheckName::DualBasis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::Structure => "structure",
            CheckName::Pearson => "pearson",
            CheckName::Sl => "sl",
            CheckName::Conditions => "conditions",
            CheckName::Lemma1 => "lemma1",
            CheckName::Thm32 => "thm32",
            CheckName::Thm41 => "thm41",
            CheckName::Conjugation => "conjugation",
            CheckName::Display => "display",
            CheckName::Operators => "operators",
            CheckName::Functionals => "functionals",
            CheckName::DualBasis => "dual-basis",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        CheckName::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let known: Vec<_> = CheckName::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check {s:?} (known: {})", known.join(", "))
        })
    }
}

/// Which second sequence the banded search pairs with `P`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `Q = P`.
    #[serde(rename = "self")]
    SelfPair,
    /// `Q = P^[1]`.
    #[default]
    Derived,
}

impl Pairing {
    pub fn name(self) -> &'static str {
        match self {
            Pairing::SelfPair => "self",
            Pairing::Derived => "derived",
        }
    }
}

/// Per-check options; each check reads the ones it understands and falls
/// back to its own defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_degree: Option<usize>,
    /// Maximum polynomial degree in randomized sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Pairing>,
    /// Coefficients of `pi`, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCheck", into = "RawCheck")]
pub struct CheckSpec {
    pub name: CheckName,
    pub options: CheckOptions,
}

impl CheckSpec {
    pub fn new(name: CheckName) -> Self {
        CheckSpec { name, options: CheckOptions::default() }
    }

    pub fn with(name: CheckName, options: CheckOptions) -> Self {
        CheckSpec { name, options }
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawCheck {
    Name(String),
    Full {
        name: String,
        #[serde(default)]
        options: CheckOptions,
    },
}

impl TryFrom<RawCheck> for CheckSpec {
    type Error = String;

    fn try_from(raw: RawCheck) -> Result<Self, String> {
        Ok(match raw {
            RawCheck::Name(n) => CheckSpec::new(n.parse()?),
            RawCheck::Full { name, options } => CheckSpec { name: name.parse()?, options },
        })
    }
}

impl From<CheckSpec> for RawCheck {
    fn from(c: CheckSpec) -> Self {
        if c.options == CheckOptions::default() {
            RawCheck::Name(c.name.name().into())
        } else {
            RawCheck::Full { name: c.name.name().into(), options: c.options }
        }
    }
}
