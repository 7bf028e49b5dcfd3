//! Four satellites with satellites 1 and 3 diametrically opposite.
//!
//! Every such central configuration is symmetric, `(θ1, π-θ1, π-θ1, θ1)`, with
//! `μ2 = μ4`. With `a2 = μ2/μ1` and `a3 = μ3/μ1` the angular equations reduce
//! to the scalar equation
//!
//! ```text
//! g(x) = f(x) + a2 f(2x) + a3 f(π + x) = 0,    x in (0, π).
//! ```
//!
//! `g → -∞` at `0+` and `g → +∞` at `π-`, and `g''' > 0`, so `g` has one to
//! three roots. [`solve_opposite`] isolates them constructively: the unique
//! zero of the increasing `g''`, then the zeros of `g'` on each side of it,
//! then one bracketed search per monotone piece of `g`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::kernel::{eval_f, eval_f1, eval_f2, eval_f3, eval_f_derivatives, DOMAIN_GUARD};
use crate::roots::brent_default;
use crate::sampling::Rd;
use crate::system::{solve_masses, solve_masses_equilibrated, AngleConfig};

/// Roots closer than this are one (tangential) root.
pub const MERGE_TOL: f64 = 1e-8;
/// Mass ratios within this distance of 1 are treated as equal.
pub const EQUAL_RATIO_TOL: f64 = 1e-12;
/// Tolerance for recognising the square (π/2) and the 2π/3 kite among roots.
pub const SPECIAL_ROOT_TOL: f64 = 1e-9;
/// Minimum component of a unit mass vector to count as physically positive.
pub const POSITIVE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OppositeParams {
    a2: f64,
    a3: f64,
}

impl OppositeParams {
    pub fn new(a2: f64, a3: f64) -> Result<Self> {
        for (name, v) in [("a2", a2), ("a3", a3)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be positive and finite"
                )));
            }
        }
        Ok(Self { a2, a3 })
    }

    /// Ratios from a full mass vector; requires `μ2 = μ4`.
    pub fn from_masses(mus: [f64; 4]) -> Result<Self> {
        let [m1, m2, m3, m4] = mus;
        if let Some((i, m)) = mus
            .iter()
            .enumerate()
            .find(|(_, m)| !(m.is_finite() && **m > 0.0))
        {
            return Err(Error::InvalidMasses(format!(
                "mu{} = {m} must be positive",
                i + 1
            )));
        }
        if (m2 - m4).abs() > EQUAL_RATIO_TOL * m2.max(m4).max(1.0) {
            return Err(Error::InvalidMasses(format!(
                "mu2 = {m2} must equal mu4 = {m4} when satellites 1 and 3 are opposite"
            )));
        }
        Self::new(m2 / m1, m3 / m1)
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn a3(&self) -> f64 {
        self.a3
    }

    /// Equal opposite masses: roots `r` and `π - r` describe one configuration.
    pub fn opposite_masses_equal(&self) -> bool {
        (self.a3 - 1.0).abs() < EQUAL_RATIO_TOL
    }

    /// Mass vector `(1, a2, a3, a2)`.
    pub fn masses(&self) -> [f64; 4] {
        [1.0, self.a2, self.a3, self.a2]
    }
}

fn check_open_half_turn(x: f64) -> Result<()> {
    if (DOMAIN_GUARD..=PI - DOMAIN_GUARD).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            value: x,
            lo: DOMAIN_GUARD,
            hi: PI - DOMAIN_GUARD,
        })
    }
}

pub fn eval_g(x: f64, p: &OppositeParams) -> Result<f64> {
    check_open_half_turn(x)?;
    Ok(eval_f(x)? + p.a2 * eval_f(2.0 * x)? + p.a3 * eval_f(PI + x)?)
}

pub fn eval_g1(x: f64, p: &OppositeParams) -> Result<f64> {
    check_open_half_turn(x)?;
    Ok(eval_f1(x)? + 2.0 * p.a2 * eval_f1(2.0 * x)? + p.a3 * eval_f1(PI + x)?)
}

pub fn eval_g2(x: f64, p: &OppositeParams) -> Result<f64> {
    check_open_half_turn(x)?;
    Ok(eval_f2(x)? + 4.0 * p.a2 * eval_f2(2.0 * x)? + p.a3 * eval_f2(PI + x)?)
}

pub fn eval_g3(x: f64, p: &OppositeParams) -> Result<f64> {
    check_open_half_turn(x)?;
    Ok(eval_f3(x)? + 8.0 * p.a2 * eval_f3(2.0 * x)? + p.a3 * eval_f3(PI + x)?)
}

/// Symmetric configuration class of a root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfigClass {
    /// θ1 = π/2; requires a3 = 1.
    Square { theta1: f64 },
    /// Roots θ1 and π - θ1 identified (a3 = 1); θ1 is the one below π/2.
    Kite { theta1: f64 },
    /// Any other root, its own class.
    Generic { theta1: f64 },
}

impl ConfigClass {
    pub fn theta1(&self) -> f64 {
        match *self {
            ConfigClass::Square { theta1 }
            | ConfigClass::Kite { theta1 }
            | ConfigClass::Generic { theta1 } => theta1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConfigClass::Square { .. } => "square",
            ConfigClass::Kite { .. } => "kite",
            ConfigClass::Generic { .. } => "generic",
        }
    }

    /// Angles `(θ1, π-θ1, π-θ1, θ1)`.
    pub fn angles(&self) -> [f64; 4] {
        let t = self.theta1();
        [t, PI - t, PI - t, t]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub params: OppositeParams,
    /// Roots of g in (0, π), ascending.
    pub roots: Vec<f64>,
    /// `tangent[i]` marks a root obtained by merging a cluster (multiple root).
    pub tangent: Vec<bool>,
    pub classes: Vec<ConfigClass>,
    pub class_count: usize,
}

impl SolutionSet {
    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn has_root_near(&self, target: f64, tol: f64) -> bool {
        self.roots.iter().any(|r| (r - target).abs() < tol)
    }
}

// Walks from `start` towards the boundary of (0, π) in the given direction,
// halving the distance to it, until `pred` holds.
fn search_toward_edge<F>(
    mut func: F,
    start: f64,
    toward_pi: bool,
    mut pred: impl FnMut(f64) -> bool,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x = start;
    loop {
        x = if toward_pi {
            PI - 0.5 * (PI - x)
        } else {
            0.5 * x
        };
        let clamped = x.clamp(DOMAIN_GUARD, PI - DOMAIN_GUARD);
        if pred(func(clamped)?) {
            return Ok(clamped);
        }
        if clamped != x || x <= DOMAIN_GUARD || x >= PI - DOMAIN_GUARD {
            return Err(Error::NoBracket {
                lo: DOMAIN_GUARD,
                hi: PI - DOMAIN_GUARD,
            });
        }
    }
}

pub fn solve_opposite(params: &OppositeParams) -> Result<SolutionSet> {
    let p = *params;
    let g = |x: f64| eval_g(x, &p);
    let g1 = |x: f64| eval_g1(x, &p);
    let g2 = |x: f64| eval_g2(x, &p);

    // g'' increases from -∞ to +∞.
    let inflection = {
        let mid = FRAC_PI_2;
        let v = g2(mid)?;
        if v == 0.0 {
            mid
        } else if v < 0.0 {
            let hi = search_toward_edge(g2, mid, true, |y| y > 0.0)?;
            brent_default(g2, mid, hi)?
        } else {
            let lo = search_toward_edge(g2, mid, false, |y| y < 0.0)?;
            brent_default(g2, lo, mid)?
        }
    };

    let mut candidates: Vec<f64> = Vec::with_capacity(3);
    let slope_min = g1(inflection)?;
    if slope_min >= 0.0 {
        // g increasing on the whole interval.
        candidates.push(root_on_increasing(g, inflection)?);
    } else {
        // g' decreasing then increasing; both ends +∞.
        let lo = search_toward_edge(g1, inflection, false, |y| y > 0.0)?;
        let peak = brent_default(g1, lo, inflection)?;
        let hi = search_toward_edge(g1, inflection, true, |y| y > 0.0)?;
        let trough = brent_default(g1, inflection, hi)?;
        let g_peak = g(peak)?;
        let g_trough = g(trough)?;

        // (0, peak]: increasing from -∞ to g_peak
        if g_peak == 0.0 {
            candidates.push(peak);
        } else if g_peak > 0.0 {
            let lo = search_toward_edge(g, peak, false, |y| y < 0.0)?;
            candidates.push(brent_default(g, lo, peak)?);
        }
        // (peak, trough): decreasing
        if g_peak > 0.0 && g_trough < 0.0 {
            candidates.push(brent_default(g, peak, trough)?);
        }
        // [trough, π): increasing from g_trough to +∞
        if g_trough == 0.0 {
            candidates.push(trough);
        } else if g_trough < 0.0 {
            let hi = search_toward_edge(g, trough, true, |y| y > 0.0)?;
            candidates.push(brent_default(g, trough, hi)?);
        }
    }
    candidates.sort_by(f64::total_cmp);

    let (roots, tangent) = merge_clusters(&candidates, |x| g(x).map(f64::abs))?;
    let classes = classify_roots(&p, &roots);
    Ok(SolutionSet {
        params: p,
        class_count: classes.len(),
        roots,
        tangent,
        classes,
    })
}

fn root_on_increasing<F>(g: F, start: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Copy,
{
    let v = g(start)?;
    if v == 0.0 {
        return Ok(start);
    }
    if v < 0.0 {
        let hi = search_toward_edge(g, start, true, |y| y > 0.0)?;
        brent_default(g, start, hi)
    } else {
        let lo = search_toward_edge(g, start, false, |y| y < 0.0)?;
        brent_default(g, lo, start)
    }
}

fn merge_clusters<F>(sorted: &[f64], abs_g: F) -> Result<(Vec<f64>, Vec<bool>)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut roots = Vec::new();
    let mut tangent = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] - sorted[j - 1] < MERGE_TOL {
            j += 1;
        }
        let cluster = &sorted[i..j];
        let mut best = cluster[0];
        let mut best_val = abs_g(best)?;
        for &r in &cluster[1..] {
            let v = abs_g(r)?;
            if v < best_val {
                best = r;
                best_val = v;
            }
        }
        roots.push(best);
        tangent.push(cluster.len() > 1);
        i = j;
    }
    Ok((roots, tangent))
}

fn classify_roots(p: &OppositeParams, roots: &[f64]) -> Vec<ConfigClass> {
    if !p.opposite_masses_equal() {
        return roots
            .iter()
            .map(|&theta1| ConfigClass::Generic { theta1 })
            .collect();
    }
    let mut classes: Vec<ConfigClass> = Vec::new();
    for &r in roots {
        let class = if (r - FRAC_PI_2).abs() < SPECIAL_ROOT_TOL {
            ConfigClass::Square { theta1: r }
        } else {
            ConfigClass::Kite {
                theta1: r.min(PI - r),
            }
        };
        let duplicate = classes.iter().any(|c| {
            c.kind() == class.kind() && (c.theta1() - class.theta1()).abs() < MERGE_TOL.max(1e-7)
        });
        if !duplicate {
            classes.push(class);
        }
    }
    classes.sort_by(|a, b| a.theta1().total_cmp(&b.theta1()));
    classes
}

pub fn count_classes(params: &OppositeParams) -> Result<usize> {
    Ok(solve_opposite(params)?.class_count)
}

/// `l(x) = f(x) / f(π - x)`.
pub fn eval_l(x: f64) -> Result<f64> {
    const POLE: f64 = 2.0 * PI / 3.0;
    if (x - POLE).abs() <= 1e-6 {
        return Err(Error::Domain {
            value: x,
            lo: POLE - 1e-6,
            hi: POLE + 1e-6,
        });
    }
    check_open_half_turn(x)?;
    Ok(eval_f(x)? / eval_f(PI - x)?)
}

/// Numerator of `l'`: `p(x) = f'(x) f(π - x) + f(x) f'(π - x)`.
pub fn eval_p(x: f64) -> Result<f64> {
    check_open_half_turn(x)?;
    let a = eval_f_derivatives(x)?;
    let b = eval_f_derivatives(PI - x)?;
    Ok(a.f1 * b.f + a.f * b.f1)
}

/// Scan of configurations with two consecutive satellites collinear with the
/// big mass (θ4 = π).
#[derive(Debug, Clone, PartialEq)]
pub struct CollinearNeighboursAudit {
    pub grid_steps: usize,
    pub points_scanned: usize,
    pub points_skipped: usize,
    /// Grid points whose angular equations admit any nonzero mass vector.
    pub degenerate_points: usize,
    /// Smallest `σ_min / σ_max` of the equilibrated coefficient matrix over the grid.
    pub min_relative_singular_value: f64,
    /// Configurations admitting a positive mass vector (must stay empty).
    pub counterexamples: Vec<[f64; 4]>,
}

impl CollinearNeighboursAudit {
    pub fn counterexample_found(&self) -> bool {
        !self.counterexamples.is_empty()
    }
}

/// Grid over `θ1 = πi/N`, `θ2 = πj/N`, `θ3 = π - θ1 - θ2`, `θ4 = π`, checking
/// that no positive masses make the configuration central. The rank decision
/// uses [`solve_masses_equilibrated`]: grid rows next to a collision are badly
/// scaled enough to fool the plain threshold.
pub fn audit_theorem1(grid_steps: usize) -> Result<CollinearNeighboursAudit> {
    if grid_steps < 100 {
        return Err(Error::InvalidParameter(format!(
            "grid_steps must be >= 100, got {grid_steps}"
        )));
    }
    let h = PI / grid_steps as f64;
    let mut audit = CollinearNeighboursAudit {
        grid_steps,
        points_scanned: 0,
        points_skipped: 0,
        degenerate_points: 0,
        min_relative_singular_value: f64::INFINITY,
        counterexamples: Vec::new(),
    };
    for i in 1..grid_steps {
        for j in 1..grid_steps {
            let (t1, t2) = (i as f64 * h, j as f64 * h);
            let t3 = PI - t1 - t2;
            if t3 <= DOMAIN_GUARD {
                audit.points_skipped += 1;
                continue;
            }
            let config = AngleConfig::new(alloc::vec![t1, t2, t3, PI])?;
            let ns = solve_masses_equilibrated(&config)?;
            audit.points_scanned += 1;
            let smax = ns.singular_values.last().copied().unwrap_or(0.0);
            let smin = ns.singular_values.first().copied().unwrap_or(0.0);
            if smax > 0.0 {
                audit.min_relative_singular_value =
                    audit.min_relative_singular_value.min(smin / smax);
            }
            if ns.dimension() > 0 {
                audit.degenerate_points += 1;
                if ns.positive_direction(POSITIVE_FLOOR).is_some() {
                    audit.counterexamples.push([t1, t2, t3, PI]);
                }
            }
        }
    }
    Ok(audit)
}

/// Number of grid points on which `p` is checked by [`audit_theorem2`].
pub const P_GRID_POINTS: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryAudit {
    pub samples: usize,
    /// Asymmetric `(θ1, θ4)` pairs whose equations admit positive masses.
    pub asymmetric_solutions: Vec<(f64, f64)>,
    pub p_grid_points: usize,
    pub p_min: f64,
    pub p_min_at: f64,
}

impl SymmetryAudit {
    pub fn holds(&self) -> bool {
        self.asymmetric_solutions.is_empty() && self.p_min > 0.0
    }
}

/// Samples asymmetric opposite configurations `(θ1, π-θ1, π-θ4, θ4)`, θ1 ≠ θ4,
/// and checks none admits positive masses; checks `p > 0` on a grid of (0, π).
pub fn audit_theorem2(samples: usize) -> Result<SymmetryAudit> {
    if samples < 100 {
        return Err(Error::InvalidParameter(format!(
            "samples must be >= 100, got {samples}"
        )));
    }
    const EDGE: f64 = 0.01;
    const MIN_GAP: f64 = 1e-3;
    let span = PI - 2.0 * EDGE;
    let mut asymmetric_solutions = Vec::new();
    let mut taken = 0;
    for [u, v] in Rd::<2>::new() {
        if taken == samples {
            break;
        }
        let (t1, t4) = (EDGE + span * u, EDGE + span * v);
        if (t1 - t4).abs() < MIN_GAP {
            continue;
        }
        taken += 1;
        let ns = solve_masses(&AngleConfig::opposite(t1, t4)?)?;
        if ns.positive_direction(POSITIVE_FLOOR).is_some() {
            asymmetric_solutions.push((t1, t4));
        }
    }

    let mut p_min = f64::INFINITY;
    let mut p_min_at = f64::NAN;
    for k in 1..=P_GRID_POINTS {
        let x = PI * k as f64 / (P_GRID_POINTS + 1) as f64;
        let v = eval_p(x)?;
        if v < p_min {
            p_min = v;
            p_min_at = x;
        }
    }
    Ok(SymmetryAudit {
        samples,
        asymmetric_solutions,
        p_grid_points: P_GRID_POINTS,
        p_min,
        p_min_at,
    })
}
