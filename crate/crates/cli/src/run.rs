use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use coorbital_core::bifurcation::{critical_ratio, sweep, Regime};
use coorbital_core::opposite::{
    audit_theorem1, audit_theorem2, solve_opposite, OppositeParams, POSITIVE_FLOOR,
};
use coorbital_core::system::{solve_masses, AngleConfig};
use coorbital_core::{kernel, newtonian};
use serde::Serialize;

use crate::config::{Audit, Command, GridRange, RunConfig};
use crate::csv::{self, CountRow};
use crate::error::CliError;
use crate::report::*;

/// Executes `config`, writing the JSON report to `out` and any table to its
/// `--out` path.
pub fn run<W: Write>(config: &RunConfig, out: &mut W) -> Result<(), CliError> {
    let units = Units::from_flag(config.degrees);
    match &config.command {
        Command::EvalF { xs } => emit(out, &eval_f(xs, units)?),
        Command::Solve { params } => {
            let set = solve_opposite(params)?;
            emit(out, &SolutionReport::new(&set, units))
        }
        Command::Count { params } => {
            let set = solve_opposite(params)?;
            let report = CountReport {
                params: Params {
                    a2: params.a2(),
                    a3: params.a3(),
                },
                root_count: set.root_count(),
                class_count: set.class_count,
            };
            emit(out, &report)
        }
        Command::CountGrid { a2, a3, out: path } => {
            emit(out, &count_grid(a2, a3, path.as_deref())?)
        }
        Command::Sweep {
            a_min,
            a_max,
            steps,
            out: path,
        } => emit(
            out,
            &sweep_report(*a_min, *a_max, *steps, path.as_deref(), units)?,
        ),
        Command::Verify { thetas, mus, eps } => {
            let s = newtonian::epsilon_scaling_check(thetas, mus, eps)?;
            let report = VerifyReport {
                units,
                thetas: thetas.iter().map(|&t| units.angle(t)).collect(),
                mus: mus.clone(),
                slope: s.slope,
                fits: s
                    .fits
                    .iter()
                    .map(|f| FitEntry {
                        epsilon: f.epsilon,
                        lambda_fit: f.lambda_fit,
                        lambda_abs: f.lambda_fit.abs(),
                        residual_norm: f.residual_norm,
                    })
                    .collect(),
            };
            emit(out, &report)
        }
        Command::Masses { thetas } => {
            let ns = solve_masses(&AngleConfig::new(thetas.clone())?)?;
            let report = MassesReport {
                units,
                thetas: thetas.iter().map(|&t| units.angle(t)).collect(),
                dimension: ns.dimension(),
                positive_solution: ns.positive_direction(POSITIVE_FLOOR),
                singular_values: ns.singular_values,
                basis: ns.basis,
            };
            emit(out, &report)
        }
        Command::Audit {
            audit: Audit::CollinearNeighbours,
            grid,
        } => {
            let a = audit_theorem1(*grid)?;
            let report = CollinearAuditReport {
                units,
                grid_steps: a.grid_steps,
                points_scanned: a.points_scanned,
                points_skipped: a.points_skipped,
                degenerate_points: a.degenerate_points,
                min_relative_singular_value: a.min_relative_singular_value,
                counterexample_found: a.counterexample_found(),
                counterexamples: a
                    .counterexamples
                    .iter()
                    .map(|c| c.map(|t| units.angle(t)))
                    .collect(),
            };
            emit(out, &report)
        }
        Command::Audit {
            audit: Audit::Symmetry,
            grid,
        } => {
            let a = audit_theorem2(*grid)?;
            let report = SymmetryAuditReport {
                units,
                samples: a.samples,
                p_grid_points: a.p_grid_points,
                p_min: a.p_min,
                p_min_at: units.angle(a.p_min_at),
                asymmetric_solutions: a
                    .asymmetric_solutions
                    .iter()
                    .map(|&(t1, t4)| [units.angle(t1), units.angle(t4)])
                    .collect(),
                holds: a.holds(),
            };
            emit(out, &report)
        }
    }
}

fn emit<W: Write, R: Serialize>(out: &mut W, report: &R) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, report)?;
    writeln!(out)?;
    Ok(())
}

fn eval_f(xs: &[f64], units: Units) -> Result<KernelReport, CliError> {
    let evaluations = xs
        .iter()
        .map(|&x| {
            let e = kernel::eval_f_derivatives(x)?;
            Ok(KernelPoint {
                x: units.angle(e.x),
                f: e.f,
                f1: e.f1,
                f2: e.f2,
                f3: e.f3,
            })
        })
        .collect::<Result<Vec<_>, coorbital_core::Error>>()?;
    Ok(KernelReport {
        units,
        critical_point: units.angle(kernel::critical_point()),
        max_value: kernel::max_value(),
        roots: kernel::roots_of_f().map(|r| units.angle(r)),
        evaluations,
    })
}

fn count_grid(
    a2: &GridRange,
    a3: &GridRange,
    path: Option<&Path>,
) -> Result<GridCountReport, CliError> {
    let mut rows = Vec::with_capacity(a2.n * a3.n);
    let mut histogram = BTreeMap::new();
    for &x in &a2.points() {
        for &y in &a3.points() {
            let set = solve_opposite(&OppositeParams::new(x, y)?)?;
            *histogram.entry(set.class_count).or_insert(0) += 1;
            rows.push(CountRow {
                a2: x,
                a3: y,
                root_count: set.root_count(),
                class_count: set.class_count,
                roots: set.roots,
            });
        }
    }
    if let Some(p) = path {
        let mut w = BufWriter::new(File::create(p)?);
        csv::write_count(&mut w, &rows)?;
        w.flush()?;
    }
    Ok(GridCountReport {
        a2_points: a2.n,
        a3_points: a3.n,
        rows: rows.len(),
        class_count_histogram: histogram,
        out: path.map(|p| p.display().to_string()),
    })
}

fn sweep_report(
    a_min: f64,
    a_max: f64,
    steps: usize,
    path: Option<&Path>,
    units: Units,
) -> Result<SweepReport, CliError> {
    let results = sweep(a_min, a_max, steps)?;
    let rows: Vec<SweepRow> = results
        .iter()
        .map(|r| SweepRow {
            a: r.a,
            regime: r.regime.into(),
            kite_theta1: r.kite_theta1,
        })
        .collect();
    if let Some(p) = path {
        let mut w = BufWriter::new(File::create(p)?);
        csv::write_sweep(&mut w, &rows)?;
        w.flush()?;
    }
    let transition = results
        .windows(2)
        .find(|w| w[0].regime == Regime::SquareOnly && w[1].regime != Regime::SquareOnly)
        .map(|w| Transition {
            a_below: w[0].a,
            a_above: w[1].a,
        });
    Ok(SweepReport {
        units,
        critical_ratio: critical_ratio(),
        rows: rows
            .into_iter()
            .map(|r| SweepRow {
                kite_theta1: r.kite_theta1.map(|t| units.angle(t)),
                ..r
            })
            .collect(),
        transition,
        out: path.map(|p| p.display().to_string()),
    })
}
