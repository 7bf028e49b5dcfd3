//! Acceptance criteria 1-9. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line, even when an earlier one fails.

// `ensure!` negates comparisons on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use common::{f, fd_derivative, grid_roots};
use coorbital::report::*;
use coorbital_core::bifurcation::{classify, critical_ratio, eval_h, kite_angle_for_ratio, Regime};
use coorbital_core::kernel::*;
use coorbital_core::newtonian::epsilon_scaling_check;
use coorbital_core::opposite::*;
use coorbital_core::sampling::Rd;
use coorbital_core::system::{solve_masses, AngleConfig};
use rand::{rngs::StdRng, Rng, SeedableRng};

/// Outcome of one criterion: a short summary, or the first failed check.
type Outcome = Result<String, String>;

type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !($cond) {
            return Err(format!($($fmt)+));
        }
    };
}

fn criterion_1_kernel_exactness() -> Outcome {
    for x in [FRAC_PI_3, PI, 5.0 * FRAC_PI_3] {
        let v = eval_f(x).map_err(|e| e.to_string())?;
        ensure!(v.abs() < 1e-12, "f({x}) = {v:e}");
    }
    let d = eval_f1(PI).map_err(|e| e.to_string())?;
    ensure!((d + 7.0 / 8.0).abs() < 1e-14, "f'(pi) = {d:.17}");
    Ok(format!("roots zero to 1e-12, f'(pi) = {d}"))
}

fn criterion_2_kernel_inequalities() -> Outcome {
    const N: usize = 1000;
    // antisymmetry about pi, tolerance scaled by |f| near the pole at 2pi
    for k in 0..N {
        let x = PI * (k as f64 + 0.5) / N as f64;
        let (a, b) = (f(PI - x), f(PI + x));
        ensure!(
            (a + b).abs() < 1e-12 * a.abs().max(1.0),
            "f(pi-x)+f(pi+x) = {:e} at x = {x}",
            a + b
        );
    }
    for k in 0..N {
        let x = TWO_PI * (k as f64 + 0.5) / N as f64;
        let e = eval_f_derivatives(x).map_err(|e| e.to_string())?;
        ensure!(e.f1 >= -7.0 / 8.0 - 1e-12, "f'({x}) = {} below -7/8", e.f1);
        ensure!(e.f3 > 0.0, "f'''({x}) = {}", e.f3);
    }
    // higher level pairs sit inside lower ones and have the smaller sum
    let fmax = max_value();
    let tc = critical_point();
    let mut pairs = 0;
    for [u, v] in Rd::<2>::new().take(4 * N) {
        if pairs == N {
            break;
        }
        if (u - v).abs() < 1e-3 {
            continue;
        }
        let level = |w: f64| fmax * (2.0 * w - 1.0) * 0.999;
        let (f1, f2) = (level(u.min(v)), level(u.max(v)));
        let (a_l, a_r) = level_preimages(f1).map_err(|e| e.to_string())?;
        let (b_l, b_r) = level_preimages(f2).map_err(|e| e.to_string())?;
        for (t, lv) in [(a_l, f1), (a_r, f1), (b_l, f2), (b_r, f2)] {
            ensure!((f(t) - lv).abs() < 1e-9, "preimage {t} misses level {lv}");
        }
        ensure!(
            a_l < b_l && b_l < tc && tc < b_r && b_r < a_r,
            "pairs not nested: {f1} < {f2}"
        );
        ensure!(
            b_l + b_r < a_l + a_r,
            "sum order fails for levels {f1} < {f2}"
        );
        pairs += 1;
    }
    ensure!(pairs == N, "only {pairs} level pairs sampled");
    let mut hits = 0;
    for [u, v] in Rd::<2>::new().skip(7).take(20 * N) {
        if hits == N {
            break;
        }
        let t1 = 1e-3 + u * (tc - 2e-3);
        let t2 = tc + 1e-3 + v * (TWO_PI - tc - 2e-3);
        if let Some(sum) = corollary_sum(t1, t2).map_err(|e| e.to_string())? {
            // independent restatement of the hypothesis
            ensure!(f(t1) >= f(t2), "hypothesis violated at ({t1}, {t2})");
            ensure!(
                sum > 2.0 * tc,
                "t1 + t2 = {sum} <= 2 theta_c at ({t1}, {t2})"
            );
            hits += 1;
        }
    }
    ensure!(hits == N, "only {hits} crossing pairs met the hypothesis");
    ensure!(
        2.0 * tc > 6.0 * PI / 5.0,
        "2 theta_c = {} <= 6pi/5",
        2.0 * tc
    );
    Ok(format!("{N} points each; theta_c = {tc:.9}"))
}

fn criterion_3_derivative_certification() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let x = 0.3 + (TWO_PI - 0.6) * (k as f64 + 0.5) / 200.0;
        let e = eval_f_derivatives(x).map_err(|e| e.to_string())?;
        let scale = x.min(TWO_PI - x);
        let fd = [
            fd_derivative(f, x, 1, 2e-3 * scale),
            fd_derivative(f, x, 2, 5e-3 * scale),
            fd_derivative(f, x, 3, 5e-3 * scale),
        ];
        for (order, (a, n)) in [e.f1, e.f2, e.f3].into_iter().zip(fd).enumerate() {
            // f'' vanishes at pi, so the error is relative to max(|value|, 1)
            let err = (a - n).abs() / a.abs().max(1.0);
            ensure!(
                err < 1e-6,
                "order {} at x = {x}: analytic {a}, finite difference {n}",
                order + 1
            );
            worst = worst.max(err);
        }
    }
    Ok(format!("200 points, worst relative error {worst:.2e}"))
}

fn criterion_4_opposite_classes() -> Outcome {
    let (lo, hi, n) = (0.05, 20.0, 50);
    let mut axis: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    axis[n - 1] = hi;
    // the grid never lands on 1, so add both mass lines explicitly
    let mut with_lines = axis.clone();
    with_lines.push(1.0);
    let mut counts = [0usize; 4];
    for &a2 in &with_lines {
        for &a3 in &with_lines {
            let p = OppositeParams::new(a2, a3).map_err(|e| e.to_string())?;
            let s = solve_opposite(&p).map_err(|e| e.to_string())?;
            ensure!(
                (1..=3).contains(&s.class_count),
                "class_count {} at ({a2}, {a3})",
                s.class_count
            );
            counts[s.class_count] += 1;
            let square = s.has_root_near(FRAC_PI_2, SPECIAL_ROOT_TOL);
            ensure!(
                square == ((a3 - 1.0).abs() < 1e-12),
                "square root presence wrong at ({a2}, {a3})"
            );
            let kite = s.has_root_near(2.0 * FRAC_PI_3, SPECIAL_ROOT_TOL);
            ensure!(
                kite == ((a2 - 1.0).abs() < 1e-12),
                "2pi/3 root presence wrong at ({a2}, {a3})"
            );
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    for _ in 0..500 {
        let (a2, a3) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        let p = OppositeParams::new(a2, a3).map_err(|e| e.to_string())?;
        let s = solve_opposite(&p).map_err(|e| e.to_string())?;
        let oracle = grid_roots(&p, 100_000);
        ensure!(
            s.root_count() == oracle.len(),
            "({a2}, {a3}): {} roots, grid scan finds {}",
            s.root_count(),
            oracle.len()
        );
        for (r, o) in s.roots.iter().zip(&oracle) {
            ensure!((r - o).abs() < 1e-7, "({a2}, {a3}): root {r} vs grid {o}");
        }
    }
    Ok(format!(
        "51x51 grid with mass lines, class counts 1/2/3 = {}/{}/{}; 500 random pairs match the grid scan",
        counts[1], counts[2], counts[3]
    ))
}

fn criterion_5_bifurcation() -> Outcome {
    let ac = critical_ratio();
    ensure!(
        (ac - 3.0 * 2f64.sqrt() / 7.0).abs() < 1e-15,
        "critical ratio {ac}"
    );
    let below = classify(0.6060).map_err(|e| e.to_string())?;
    ensure!(
        below.regime == Regime::SquareOnly,
        "a = 0.6060 gives {:?}",
        below.regime
    );
    let above = classify(0.6062).map_err(|e| e.to_string())?;
    ensure!(
        above.regime == Regime::SquareAndKite,
        "a = 0.6062 gives {:?}",
        above.regime
    );
    let t = kite_angle_for_ratio(1.0).map_err(|e| e.to_string())?;
    ensure!((t - FRAC_PI_3).abs() < 1e-10, "kite angle for a = 1 is {t}");
    let mut worst: f64 = 0.0;
    for [u] in Rd::<1>::new().take(200) {
        // log-uniform over (ac, 50)
        let a = (ac + 1e-6) * (50.0 / ac).powf(u);
        let x = kite_angle_for_ratio(a).map_err(|e| e.to_string())?;
        let back = eval_h(x).map_err(|e| e.to_string())?;
        ensure!((back - a).abs() < 1e-9, "h(kite_angle({a})) = {back}");
        worst = worst.max((back - a).abs());
    }
    let (lo, hi) = (FRAC_PI_6 + 1e-6, FRAC_PI_2 - 1e-6);
    for [u, v] in Rd::<2>::new().take(1000) {
        let (x, y) = (lo + (hi - lo) * u.min(v), lo + (hi - lo) * u.max(v));
        if x == y {
            continue;
        }
        let (hx, hy) = (
            eval_h(x).map_err(|e| e.to_string())?,
            eval_h(y).map_err(|e| e.to_string())?,
        );
        ensure!(hx > hy, "h({x}) = {hx} <= h({y}) = {hy}");
    }
    Ok(format!(
        "critical ratio {ac:.10}, round trip worst {worst:.1e}"
    ))
}

fn criterion_6_collinear_neighbours() -> Outcome {
    let a = audit_theorem1(500).map_err(|e| e.to_string())?;
    ensure!(
        !a.counterexample_found(),
        "{} positive-mass configurations, first {:?}",
        a.counterexamples.len(),
        a.counterexamples[0]
    );
    Ok(format!(
        "{} grid points scanned, min relative singular value {:.2e}",
        a.points_scanned, a.min_relative_singular_value
    ))
}

fn criterion_7_symmetry() -> Outcome {
    let a = audit_theorem2(500).map_err(|e| e.to_string())?;
    ensure!(
        a.p_grid_points == 2000,
        "p checked on {} points",
        a.p_grid_points
    );
    ensure!(a.p_min > 0.0, "p({}) = {}", a.p_min_at, a.p_min);
    ensure!(
        a.asymmetric_solutions.is_empty(),
        "asymmetric solutions {:?}",
        a.asymmetric_solutions
    );
    // p re-derived from the finite-difference oracle on its own grid
    for k in 1..=2000 {
        let x = PI * k as f64 / 2001.0;
        let h = 1e-4 * x.min(PI - x);
        let p = fd_derivative(f, x, 1, h) * f(PI - x) + f(x) * fd_derivative(f, PI - x, 1, h);
        ensure!(p > 0.0, "oracle p({x}) = {p}");
    }
    let sq = solve_masses(&AngleConfig::new(vec![FRAC_PI_2; 4]).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure!(
        sq.dimension() == 2,
        "square nullspace dimension {}",
        sq.dimension()
    );
    for v in &sq.basis {
        ensure!(
            (v[0] - v[2]).abs() < 1e-10 && (v[1] - v[3]).abs() < 1e-10,
            "basis vector {v:?}"
        );
    }
    Ok(format!(
        "p_min = {:.6} at {:.4}; 500 asymmetric samples rigid; square nullity 2",
        a.p_min, a.p_min_at
    ))
}

fn criterion_8_newtonian() -> Outcome {
    let eps = [1e-2, 1e-3, 1e-4];
    let mut notes = Vec::new();
    for (name, thetas) in [
        ("square", [FRAC_PI_2; 4]),
        (
            "kite",
            [FRAC_PI_3, 2.0 * FRAC_PI_3, 2.0 * FRAC_PI_3, FRAC_PI_3],
        ),
    ] {
        let r = epsilon_scaling_check(&thetas, &[1.0; 4], &eps).map_err(|e| e.to_string())?;
        ensure!((r.slope - 1.0).abs() <= 0.2, "{name} slope {}", r.slope);
        let gaps: Vec<f64> = r
            .fits
            .iter()
            .map(|f| (f.lambda_fit.abs() - 1.0).abs())
            .collect();
        ensure!(
            gaps.windows(2).all(|w| w[1] < w[0]),
            "{name}: |lambda| not monotone toward 1: {gaps:?}"
        );
        notes.push(format!("{name} slope {:.4}", r.slope));
    }
    let off = [1.0, 1.2, 2.0, TWO_PI - 4.2];
    let r = epsilon_scaling_check(&off, &[1.0; 4], &eps).map_err(|e| e.to_string())?;
    notes.push(format!("non-central slope {:.4}", r.slope));
    ensure!(
        r.slope < 0.3,
        "{}; non-central slope {:.4} is not below 0.3",
        notes[..2].join(", "),
        r.slope
    );
    Ok(notes.join(", "))
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_coorbital"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

/// Parsed, validated and re-emitted JSON must equal the original byte for byte.
fn round_trips<R: Report>(text: &str) -> Result<R, String> {
    let r = R::from_json(text)?;
    let again = serde_json::to_string_pretty(&r).map_err(|e| e.to_string())? + "\n";
    ensure!(again == text, "re-emitted JSON differs from the original");
    Ok(r)
}

fn criterion_9_end_to_end() -> Outcome {
    let solve = run_cli(&["solve", "--mu", "1,1,1,1"])?;
    let s: SolutionReport = round_trips(&solve)?;
    ensure!(s.class_count == 2, "class_count {}", s.class_count);
    ensure!(s.roots.len() == 3, "roots {:?}", s.roots);
    for (r, want) in s.roots.iter().zip([FRAC_PI_3, FRAC_PI_2, 2.0 * FRAC_PI_3]) {
        ensure!((r - want).abs() < 1e-12, "root {r} vs {want}");
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let csv_path = dir.path().join("sweep.csv");
    let csv_arg = csv_path.to_str().ok_or("temp path is not UTF-8")?;
    let sweep = run_cli(&[
        "sweep", "--a-min", "0.5", "--a-max", "0.7", "--steps", "21", "--out", csv_arg,
    ])?;
    let sw: SweepReport = round_trips(&sweep)?;
    let csv = std::fs::read_to_string(&csv_path).map_err(|e| e.to_string())?;
    let mut lines = csv.split_terminator('\n');
    ensure!(
        lines.next() == Some("a,regime,kite_theta1"),
        "bad CSV header"
    );
    let rows: Vec<(f64, String)> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].parse().unwrap_or(f64::NAN), cols[1].to_string())
        })
        .collect();
    ensure!(
        rows.len() == 21 && !csv.contains('\r'),
        "CSV has {} rows",
        rows.len()
    );
    let ac = critical_ratio();
    let flip = rows
        .windows(2)
        .position(|w| w[0].1 != w[1].1)
        .ok_or("no regime change in CSV")?;
    let (below, above) = (&rows[flip], &rows[flip + 1]);
    ensure!(
        below.1 == "square_only" && above.1 == "square_and_kite",
        "transition {below:?} -> {above:?}"
    );
    ensure!(
        below.0 < ac && ac < above.0,
        "bracket [{}, {}] misses {ac}",
        below.0,
        above.0
    );
    let t = sw.transition.ok_or("JSON summary lacks the transition")?;
    ensure!(t.a_below < ac && ac < t.a_above, "JSON transition {t:?}");

    // remaining commands: each must emit a report that survives the round trip
    round_trips::<KernelReport>(&run_cli(&["eval-f", "--x", "pi/3,pi,1.891"])?)?;
    round_trips::<CountReport>(&run_cli(&["count", "--ratios", "0.3,2"])?)?;
    round_trips::<GridCountReport>(&run_cli(&[
        "count",
        "--a2-range",
        "0.5,2,4",
        "--a3-range",
        "0.5,2,4",
    ])?)?;
    round_trips::<VerifyReport>(&run_cli(&[
        "verify",
        "--theta",
        "pi/2,pi/2,pi/2,pi/2",
        "--mu",
        "1,1,1,1",
    ])?)?;
    round_trips::<MassesReport>(&run_cli(&["masses", "--theta", "2pi/3,pi/3,pi/3,2pi/3"])?)?;
    round_trips::<CollinearAuditReport>(&run_cli(&["audit", "--theorem", "1"])?)?;
    round_trips::<SymmetryAuditReport>(&run_cli(&["audit", "--theorem", "2"])?)?;
    round_trips::<SolutionReport>(&run_cli(&["--degrees", "solve", "--ratios", "0.7,1"])?)?;
    Ok(format!(
        "solve roots {:?}; sweep flips between a = {} and {}",
        s.roots, below.0, above.0
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("kernel exactness", criterion_1_kernel_exactness),
        ("kernel inequalities", criterion_2_kernel_inequalities),
        (
            "derivative certification",
            criterion_3_derivative_certification,
        ),
        ("opposite-pair class counts", criterion_4_opposite_classes),
        (
            "equal collinear masses bifurcation",
            criterion_5_bifurcation,
        ),
        (
            "collinear neighbours audit",
            criterion_6_collinear_neighbours,
        ),
        ("symmetry audit", criterion_7_symmetry),
        ("newtonian cross-check", criterion_8_newtonian),
        ("end-to-end CLI", criterion_9_end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
