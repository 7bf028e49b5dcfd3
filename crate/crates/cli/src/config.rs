//! Flag parsing and per-command validation.
//!
//! Everything handed to [`crate::run`] has already been checked, so a
//! [`RunConfig`] never reaches the solvers with a malformed value.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use coorbital_core::opposite::OppositeParams;
use coorbital_core::system::{AngleConfig, MassVector};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "coorbital",
    version,
    about = "Central configurations of the planar 1+n coorbital problem"
)]
pub struct Cli {
    /// Read and write angles in degrees (JSON only; CSV stays in radians).
    #[arg(long, global = true)]
    pub degrees: bool,

    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Evaluate the interaction kernel and its first three derivatives.
    EvalF {
        /// Comma-separated angles in (0, 2pi).
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Solve the two-opposite-satellite configuration for one mass choice.
    Solve(ParamArgs),
    /// Count configuration classes at one point or over a grid of ratios.
    Count(CountArgs),
    /// Sweep the symmetric mass ratio across the kite bifurcation.
    Sweep(SweepArgs),
    /// Check the epsilon scaling of the full Newtonian residual.
    Verify(VerifyArgs),
    /// Nullspace of the mass equations for a fixed angle configuration.
    Masses {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Run one of the numerical audits.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Four masses m1,m2,m3,m4 with m2 = m4.
    #[arg(long, conflicts_with = "ratios", allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Mass ratios a2,a3 (mu2/mu1 and mu3/mu1).
    #[arg(long, allow_hyphen_values = true)]
    pub ratios: Option<String>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Grid over a2 as lo,hi,n.
    #[arg(long, requires = "a3_range", allow_hyphen_values = true)]
    pub a2_range: Option<String>,
    /// Grid over a3 as lo,hi,n.
    #[arg(long, requires = "a2_range", allow_hyphen_values = true)]
    pub a3_range: Option<String>,
    /// CSV output path for grid runs.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a_max: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Four consecutive arcs summing to 2pi.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
    /// Satellite masses, one per arc.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    /// Strictly decreasing epsilon values.
    #[arg(long, default_value = "1e-2,1e-3,1e-4")]
    pub eps: String,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// 1 scans collinear neighbours; 2 checks the symmetry of opposite pairs.
    #[arg(long)]
    pub theorem: u8,
    /// Grid steps (audit 1) or sample count (audit 2).
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
}

/// Inclusive linear grid `lo..=hi` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridRange {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Audit {
    CollinearNeighbours,
    Symmetry,
}

#[derive(Debug, Clone)]
pub enum Command {
    EvalF {
        xs: Vec<f64>,
    },
    Solve {
        params: OppositeParams,
    },
    Count {
        params: OppositeParams,
    },
    CountGrid {
        a2: GridRange,
        a3: GridRange,
        out: Option<PathBuf>,
    },
    Sweep {
        a_min: f64,
        a_max: f64,
        steps: usize,
        out: Option<PathBuf>,
    },
    Verify {
        thetas: Vec<f64>,
        mus: Vec<f64>,
        eps: Vec<f64>,
    },
    Masses {
        thetas: Vec<f64>,
    },
    Audit {
        audit: Audit,
        grid: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EvalF { .. } => "eval-f",
            Command::Solve { .. } => "solve",
            Command::Count { .. } | Command::CountGrid { .. } => "count",
            Command::Sweep { .. } => "sweep",
            Command::Verify { .. } => "verify",
            Command::Masses { .. } => "masses",
            Command::Audit { .. } => "audit",
        }
    }
}

/// A validated command plus the output unit flag. Angles inside are radians.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub degrees: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let deg = cli.degrees;
        let command = match cli.command {
            CliCommand::EvalF { x } => {
                let xs = parse_angles("--x", &x, deg)?;
                for &v in &xs {
                    if !(v > 0.0 && v < 2.0 * PI) {
                        return Err(CliError::invalid(
                            "--x",
                            format!("angle {v} rad is outside (0, 2pi)"),
                        ));
                    }
                }
                Command::EvalF { xs }
            }
            CliCommand::Solve(p) => Command::Solve {
                params: params_from(&p)?,
            },
            CliCommand::Count(c) => match (c.a2_range, c.a3_range) {
                (Some(r2), Some(r3)) => {
                    if c.params.mu.is_some() || c.params.ratios.is_some() {
                        return Err(CliError::invalid(
                            "--a2-range",
                            "cannot be combined with --mu or --ratios",
                        ));
                    }
                    Command::CountGrid {
                        a2: parse_range("--a2-range", &r2)?,
                        a3: parse_range("--a3-range", &r3)?,
                        out: c.out,
                    }
                }
                _ => {
                    if c.out.is_some() {
                        return Err(CliError::invalid(
                            "--out",
                            "only valid with --a2-range and --a3-range",
                        ));
                    }
                    Command::Count {
                        params: params_from(&c.params)?,
                    }
                }
            },
            CliCommand::Sweep(s) => {
                if !(s.a_min > 0.0) || !s.a_min.is_finite() {
                    return Err(CliError::invalid("--a-min", "must be positive and finite"));
                }
                if !(s.a_max > s.a_min) || !s.a_max.is_finite() {
                    return Err(CliError::invalid(
                        "--a-max",
                        "must be finite and greater than --a-min",
                    ));
                }
                if s.steps < 2 {
                    return Err(CliError::invalid("--steps", "must be at least 2"));
                }
                Command::Sweep {
                    a_min: s.a_min,
                    a_max: s.a_max,
                    steps: s.steps,
                    out: s.out,
                }
            }
            CliCommand::Verify(v) => {
                let thetas = parse_angles("--theta", &v.theta, deg)?;
                AngleConfig::new(thetas.clone())
                    .map_err(|e| CliError::invalid("--theta", e.to_string()))?;
                let mus = parse_list("--mu", &v.mu)?;
                if mus.len() != thetas.len() {
                    return Err(CliError::invalid(
                        "--mu",
                        format!(
                            "expected {} masses to match --theta, got {}",
                            thetas.len(),
                            mus.len()
                        ),
                    ));
                }
                MassVector::new(mus.clone())
                    .map_err(|e| CliError::invalid("--mu", e.to_string()))?;
                let eps = parse_list("--eps", &v.eps)?;
                if eps.len() < 3 {
                    return Err(CliError::invalid("--eps", "need at least 3 values"));
                }
                if eps.iter().any(|&e| !(e > 0.0 && e <= 0.1)) {
                    return Err(CliError::invalid(
                        "--eps",
                        "every value must lie in (0, 0.1]",
                    ));
                }
                if eps.windows(2).any(|w| !(w[1] < w[0])) {
                    return Err(CliError::invalid(
                        "--eps",
                        "values must be strictly decreasing",
                    ));
                }
                Command::Verify { thetas, mus, eps }
            }
            CliCommand::Masses { theta } => {
                let thetas = parse_angles("--theta", &theta, deg)?;
                AngleConfig::new(thetas.clone())
                    .map_err(|e| CliError::invalid("--theta", e.to_string()))?;
                if thetas.len() < 3 {
                    return Err(CliError::invalid("--theta", "need at least 3 arcs"));
                }
                Command::Masses { thetas }
            }
            CliCommand::Audit(a) => {
                let audit = match a.theorem {
                    1 => Audit::CollinearNeighbours,
                    2 => Audit::Symmetry,
                    t => {
                        return Err(CliError::invalid(
                            "--theorem",
                            format!("must be 1 or 2, got {t}"),
                        ))
                    }
                };
                if a.grid < 100 {
                    return Err(CliError::invalid("--grid", "must be at least 100"));
                }
                Command::Audit {
                    audit,
                    grid: a.grid,
                }
            }
        };
        Ok(RunConfig {
            command,
            degrees: deg,
        })
    }

    /// Parses an argument vector (program name first) and validates it.
    pub fn try_parse_from<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli =
            Cli::try_parse_from(args).map_err(|e| CliError::invalid("arguments", e.to_string()))?;
        Self::from_cli(cli)
    }
}

fn params_from(p: &ParamArgs) -> Result<OppositeParams, CliError> {
    match (&p.mu, &p.ratios) {
        (Some(mu), None) => {
            let v = parse_list("--mu", mu)?;
            let arr: [f64; 4] = v.try_into().map_err(|v: Vec<f64>| {
                CliError::invalid("--mu", format!("expected 4 masses, got {}", v.len()))
            })?;
            OppositeParams::from_masses(arr).map_err(|e| CliError::invalid("--mu", e.to_string()))
        }
        (None, Some(r)) => {
            let v = parse_list("--ratios", r)?;
            if v.len() != 2 {
                return Err(CliError::invalid(
                    "--ratios",
                    format!("expected a2,a3, got {} values", v.len()),
                ));
            }
            OppositeParams::new(v[0], v[1])
                .map_err(|e| CliError::invalid("--ratios", e.to_string()))
        }
        _ => Err(CliError::invalid(
            "--mu",
            "one of --mu or --ratios is required",
        )),
    }
}

fn parse_range(flag: &str, s: &str) -> Result<GridRange, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::invalid(flag, "expected lo,hi,n"));
    }
    let lo = parse_number(flag, parts[0])?;
    let hi = parse_number(flag, parts[1])?;
    let n: usize = parts[2].parse().map_err(|_| {
        CliError::invalid(
            flag,
            format!("grid size {:?} is not a positive integer", parts[2]),
        )
    })?;
    if n == 0 {
        return Err(CliError::invalid(flag, "grid size must be at least 1"));
    }
    if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
        return Err(CliError::invalid(flag, "need 0 < lo <= hi, both finite"));
    }
    Ok(GridRange { lo, hi, n })
}

pub(crate) fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    let v = s
        .split(',')
        .map(|t| parse_number(flag, t.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err(CliError::invalid(flag, "empty list"));
    }
    Ok(v)
}

fn parse_number(flag: &str, t: &str) -> Result<f64, CliError> {
    let v: f64 = t
        .parse()
        .map_err(|_| CliError::invalid(flag, format!("{t:?} is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::invalid(flag, format!("{t:?} is not finite")));
    }
    Ok(v)
}

/// Angle list; tokens containing `pi` (`pi/3`, `2pi/3`, `2*pi/3`) are always
/// radians, plain numbers are degrees when `degrees` is set.
pub(crate) fn parse_angles(flag: &str, s: &str, degrees: bool) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if t.contains("pi") {
                parse_pi_multiple(t)
                    .ok_or_else(|| CliError::invalid(flag, format!("cannot read angle {t:?}")))
            } else {
                let v = parse_number(flag, t)?;
                Ok(if degrees { v.to_radians() } else { v })
            }
        })
        .collect()
}

fn parse_pi_multiple(t: &str) -> Option<f64> {
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().ok()?),
        None => (t, 1.0),
    };
    let coef = num.strip_suffix("pi")?.trim_end_matches('*').trim();
    let c = match coef {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    let v = c * PI / den;
    v.is_finite().then_some(v)
}
