//! Check records and their JSON / text renderings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotFound,
    Skipped,
    /// Window exhaustion or an internal error; the check could not decide.
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotFound => "NOT-FOUND",
            Status::Skipped => "SKIP",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FirstFailure {
    pub n: Option<usize>,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub first_failure: Option<FirstFailure>,
    pub window_used: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            first_failure: None,
            window_used: None,
            elapsed_ms: None,
            detail: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.into(), value.to_string());
    }

    pub fn fail(&mut self, n: Option<usize>, residual: impl ToString) {
        self.status = Status::Fail;
        self.first_failure = Some(FirstFailure { n, residual: residual.to_string() });
    }

    pub fn with_status(mut self, status: Status, detail: impl Into<String>) -> Self {
        self.status = status;
        self.detail = Some(detail.into());
        self
    }

    pub fn note(&mut self, text: impl AsRef<str>) {
        match &mut self.detail {
            Some(d) => {
                d.push_str("; ");
                d.push_str(text.as_ref());
            }
            None => self.detail = Some(text.as_ref().to_string()),
        }
    }

    /// Records a module error: mismatches and unsolvable relations are
    /// failures, window and depth exhaustion are errors.
    pub fn absorb(&mut self, e: &Error) {
        match e {
            Error::NoSolution { n, residual } => self.fail(Some(*n), residual),
            Error::Mismatch { n, detail, .. } => {
                self.fail(Some(*n), detail);
            }
            Error::NoneFound => self.status = Status::NotFound,
            Error::WindowExhausted { .. }
            | Error::InsufficientDepth { .. }
            | Error::InternalSymmetryViolation(_)
            | Error::MissingData(_) => self.status = Status::Error,
            _ => self.status = Status::Fail,
        }
        self.note(e.to_string());
    }
}

impl fmt::Display for CheckRecord {
    /// `PASS structure n_max=15 pi=z`, then the first failure and detail.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.status.label(), self.name)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        if let Some(w) = self.window_used {
            write!(f, " window={w}")?;
        }
        if let Some(ff) = &self.first_failure {
            match ff.n {
                Some(n) => write!(f, " first_failure: n={n} residual={}", ff.residual)?,
                None => write!(f, " first_failure: residual={}", ff.residual)?,
            }
        }
        if let Some(ms) = self.elapsed_ms {
            write!(f, " elapsed_ms={ms}")?;
        }
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

pub type Report = Vec<CheckRecord>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Serializes a report; JSON keys come out in a fixed order.
pub fn emit(report: &[CheckRecord], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => report.iter().map(|r| format!("{r}\n")).collect(),
    }
}

pub fn parse_report(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

/// 3 if any check errored, else 1 if any failed, else 0.
pub fn exit_code(report: &[CheckRecord]) -> i32 {
    if report.iter().any(|r| r.status == Status::Error) {
        3
    } else if report.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}
