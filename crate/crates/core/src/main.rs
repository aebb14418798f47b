use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lattice_ops::algebra::{Field, Poly};
use lattice_ops::error::Error;
use lattice_ops::harness::config::{Family, InstanceSpec, ParamValue};
use lattice_ops::harness::instance::build_on;
use lattice_ops::harness::{self, suite, CheckConfig, CheckName, CheckSpec, ConfigError, Format, Report};
use lattice_ops::lattice::LatticeWire;
use lattice_ops::operators::OperatorTable;
use lattice_ops::recurrence::{generate_ops, moments_from_recurrence};
use lattice_ops::{wire, DensePoly, Lattice, Scalar};

#[derive(Parser)]
#[command(name = "lattice-ops", version, about = "Exact checks for orthogonal polynomials on quadratic and q-quadratic lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Config file (JSON); "-" reads stdin.
    #[arg(long, global = true)]
    config: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized sweeps; overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Add elapsed_ms to every record (makes reports run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family's recurrence, polynomials or moments.
    Family {
        /// cdh, wilson, branch1, branch2, thm41 or recurrence.
        name: String,
        /// Parameter as key=value; lists are comma separated (phi=1/4,2).
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Emit::Ttrr)]
        emit: Emit,
        /// Lattice JSON; defaults to x(s) = -s^2 for cdh and wilson.
        #[arg(long)]
        lattice: Option<String>,
        /// Moment window for --emit moments (default 2 n_max + 1).
        #[arg(long)]
        window: Option<usize>,
    },
    /// Apply D_x or S_x (or a power of D_x) to a polynomial.
    Op {
        #[arg(value_enum)]
        which: OpName,
        /// Coefficients, constant term first, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// Run the named checks against the config's instance.
    Check {
        /// Check names; options come from the config entry of the same name.
        #[arg(required = true)]
        names: Vec<String>,
    },
    /// Run every check of the config, or the built-in suite without one.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Ttrr,
    Polys,
    Moments,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OpName {
    Dx,
    Sx,
}

enum Failure {
    Config(ConfigError),
    Compute(Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Compute(
                Error::WindowExhausted { .. } | Error::InsufficientDepth { .. } | Error::InternalSymmetryViolation(_),
            ) => 3,
            Failure::Compute(_) => 2,
        }
    }
}

fn read_config(path: &str) -> Result<CheckConfig, ConfigError> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| ConfigError::new("<stdin>", e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| ConfigError::new(path, e.to_string()))?
    };
    CheckConfig::from_json(&text)
}

fn parse_lattice(text: &str) -> Result<Lattice, ConfigError> {
    let w: LatticeWire = serde_json::from_str(text).map_err(|e| ConfigError::new("--lattice", e.to_string()))?;
    Lattice::from_wire(&w).map_err(|e| ConfigError::new("--lattice", e.to_string()))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn family(
    name: &str,
    params: &[String],
    n_max: usize,
    emit: Emit,
    lattice: Option<&str>,
    window: Option<usize>,
    format: Format,
) -> Result<String, Failure> {
    let fam: Family = name.parse().map_err(|e: String| ConfigError::new("family", e))?;
    let mut spec = InstanceSpec { family: fam, params: Default::default(), n_max: Some(n_max), overrides: Vec::new() };
    let (_, lists) = fam.param_names();
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| ConfigError::new("--param", format!("expected key=value, got {p:?}")))?;
        let value = if lists.contains(&k) {
            ParamValue::List(v.split(',').map(|s| s.trim().to_string()).collect())
        } else {
            ParamValue::Scalar(v.to_string())
        };
        spec.params.insert(k.to_string(), value);
    }
    let lat = match lattice {
        Some(text) => parse_lattice(text)?,
        None if matches!(fam, Family::Cdh | Family::Wilson | Family::Recurrence) => {
            Lattice::quadratic(Scalar::frac(-1, 4), Scalar::int(0), Scalar::int(0)).expect("beta is nonzero")
        }
        None => return Err(ConfigError::new("--lattice", format!("family {name} needs a lattice")).into()),
    };
    let inst = build_on(&lat, &spec)?;
    let r = &inst.recurrence;
    Ok(match emit {
        Emit::Ttrr => match format {
            Format::Json => to_json(r),
            Format::Text => {
                let mut out = String::new();
                for n in 0..=r.n_max() {
                    out += &format!("B_{n} = {}\n", r.b(n).map_err(Failure::Compute)?);
                }
                for n in 1..=r.n_max() {
                    out += &format!("C_{n} = {}\n", r.c(n).map_err(Failure::Compute)?);
                }
                out
            }
        },
        Emit::Polys => {
            let polys = generate_ops(r, r.n_max() + 1).map_err(Failure::Compute)?;
            match format {
                Format::Json => to_json(&polys.iter().map(wire::render_poly).collect::<Vec<_>>()),
                Format::Text => polys.iter().enumerate().map(|(n, p)| format!("P_{n} = {p}\n")).collect(),
            }
        }
        Emit::Moments => {
            let u = moments_from_recurrence(r, window.unwrap_or(2 * r.n_max() + 1)).map_err(Failure::Compute)?;
            match format {
                Format::Json => to_json(&wire::render_all(u.moments())),
                Format::Text => u.moments().iter().enumerate().map(|(j, m)| format!("mu_{j} = {m}\n")).collect(),
            }
        }
    })
}

#[derive(Serialize)]
struct OpOutput {
    op: OpName,
    power: usize,
    lattice: LatticeWire,
    input: Vec<String>,
    result: Vec<String>,
}

fn op(which: OpName, poly: &str, lattice: &str, power: usize, format: Format) -> Result<String, Failure> {
    let lat = parse_lattice(lattice)?;
    let coeffs: Vec<&str> = poly.split(',').map(str::trim).collect();
    let p: DensePoly =
        Poly::from_coeffs(wire::parse_all(&coeffs).map_err(|e| ConfigError::new("--poly", e.to_string()))?);
    let t = OperatorTable::new(&lat, p.degree().unwrap_or(0) + 1).map_err(Failure::Compute)?;
    let out = match which {
        OpName::Dx => t.dx_power(&p, power),
        OpName::Sx => (0..power).try_fold(p.clone(), |acc, _| t.sx(&acc)),
    }
    .map_err(Failure::Compute)?;
    Ok(match format {
        Format::Json => to_json(&OpOutput {
            op: which,
            power,
            lattice: lat.to_wire(),
            input: wire::render_poly(&p),
            result: wire::render_poly(&out),
        }),
        Format::Text => format!("{out}\n"),
    })
}

fn check(names: &[String], cli: &Cli) -> Result<Report, Failure> {
    let path = cli.config.as_deref().ok_or_else(|| ConfigError::new("--config", "check needs --config FILE"))?;
    let mut cfg = read_config(path)?;
    let mut specs = Vec::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        let name: CheckName = n.parse().map_err(|e: String| ConfigError::new(format!("names[{i}]"), e))?;
        let spec = cfg.checks.iter().find(|c| c.name == name).cloned().unwrap_or_else(|| CheckSpec::new(name));
        specs.push(spec);
    }
    cfg.checks = specs;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(harness::run(&cfg, cli.timings)?)
}

fn verify(cli: &Cli) -> Result<Report, Failure> {
    match cli.config.as_deref() {
        Some(path) => {
            let mut cfg = read_config(path)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            Ok(harness::run(&cfg, cli.timings)?)
        }
        None => Ok(suite::run_suite(cli.seed.unwrap_or(0), cli.timings)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Family { name, params, n_max, emit, lattice, window } => {
            family(name, params, *n_max, *emit, lattice.as_deref(), *window, cli.format).map(|s| (s, 0))
        }
        Command::Op { which, poly, lattice, power } => op(*which, poly, lattice, *power, cli.format).map(|s| (s, 0)),
        Command::Check { names } => check(names, &cli).map(|r| (harness::emit(&r, cli.format), harness::exit_code(&r))),
        Command::Verify => verify(&cli).map(|r| (harness::emit(&r, cli.format), harness::exit_code(&r))),
    };
    match result {
        Ok((out, code)) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::from(code as u8)
        }
        Err(f) => {
            match &f {
                Failure::Config(e) => eprintln!("lattice-ops: {e}"),
                Failure::Compute(e) => eprintln!("lattice-ops: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
