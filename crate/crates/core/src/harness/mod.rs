//! Batch front end: configurations, named checks, reports.

pub mod checks;
pub mod config;
pub mod instance;
pub mod report;
pub mod suite;
pub mod sweeps;

use rayon::prelude::*;

pub use checks::run_check;
pub use config::{CheckConfig, CheckName, CheckOptions, CheckSpec, ConfigError};
pub use instance::{build_instance, Instance};
pub use report::{emit, exit_code, parse_report, CheckRecord, Format, Report, Status};

use crate::structure::relation::Condition;
use crate::wire;
use crate::Scalar;

/// Validates the option values a config names, then builds its instance.
/// Nothing is computed on a config that fails here.
pub fn prepare(cfg: &CheckConfig) -> Result<Instance, ConfigError> {
    for (i, c) in cfg.checks.iter().enumerate() {
        let loc = format!("checks[{i}].options");
        if let Some(pi) = &c.options.pi {
            wire::parse_all::<Scalar, _>(pi).map_err(|e| ConfigError::new(format!("{loc}.pi"), e.to_string()))?;
            if pi.len() > 3 {
                return Err(ConfigError::new(format!("{loc}.pi"), "pi must have degree at most two"));
            }
        }
        for (j, name) in c.options.conditions.iter().flatten().enumerate() {
            name.parse::<Condition>()
                .map_err(|e| ConfigError::new(format!("{loc}.conditions[{j}]"), e.to_string()))?;
        }
    }
    build_instance(cfg)
}

/// Runs every check of the config; records come back in config order
/// whatever the scheduling.
pub fn run(cfg: &CheckConfig, timings: bool) -> Result<Report, ConfigError> {
    let inst = prepare(cfg)?;
    Ok(cfg.checks.par_iter().map(|c| run_check(c, &inst, cfg.seed, timings)).collect())
}
