//! JSON report types. Each one validates its own internal consistency so a
//! parsed report can be checked before use.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use coorbital_core::bifurcation::Regime;
use coorbital_core::opposite::{ConfigClass, SolutionSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Rad,
    Deg,
}

impl Units {
    pub fn from_flag(degrees: bool) -> Self {
        if degrees {
            Units::Deg
        } else {
            Units::Rad
        }
    }

    /// Converts an angle held in radians to these units.
    pub fn angle(self, rad: f64) -> f64 {
        match self {
            Units::Rad => rad,
            Units::Deg => rad.to_degrees(),
        }
    }

    fn half_turn(self) -> f64 {
        self.angle(std::f64::consts::PI)
    }
}

pub trait Report: Serialize + DeserializeOwned {
    fn validate(&self) -> Result<(), String>;

    /// Parses and validates an emitted report.
    fn from_json(s: &str) -> Result<Self, String> {
        let r: Self = serde_json::from_str(s).map_err(|e| e.to_string())?;
        r.validate()?;
        Ok(r)
    }
}

fn check(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a2: f64,
    pub a3: f64,
}

impl Params {
    fn validate(&self) -> Result<(), String> {
        check(
            self.a2 > 0.0 && self.a2.is_finite(),
            "params.a2 must be positive",
        )?;
        check(
            self.a3 > 0.0 && self.a3.is_finite(),
            "params.a3 must be positive",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Square,
    Kite,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub kind: ClassKind,
    pub theta1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub params: Params,
    pub units: Units,
    pub roots: Vec<f64>,
    pub tangent: Vec<bool>,
    pub classes: Vec<ClassEntry>,
    pub root_count: usize,
    pub class_count: usize,
}

impl SolutionReport {
    pub fn new(set: &SolutionSet, units: Units) -> Self {
        let mut classes: Vec<ClassEntry> = set
            .classes
            .iter()
            .map(|c| ClassEntry {
                kind: match c {
                    ConfigClass::Square { .. } => ClassKind::Square,
                    ConfigClass::Kite { .. } => ClassKind::Kite,
                    ConfigClass::Generic { .. } => ClassKind::Generic,
                },
                theta1: units.angle(c.theta1()),
            })
            .collect();
        classes.sort_by(|a, b| a.theta1.total_cmp(&b.theta1));
        SolutionReport {
            params: Params {
                a2: set.params.a2(),
                a3: set.params.a3(),
            },
            units,
            roots: set.roots.iter().map(|&r| units.angle(r)).collect(),
            tangent: set.tangent.clone(),
            classes,
            root_count: set.root_count(),
            class_count: set.class_count,
        }
    }
}

impl Report for SolutionReport {
    fn validate(&self) -> Result<(), String> {
        self.params.validate()?;
        let half = self.units.half_turn();
        check(
            self.root_count == self.roots.len(),
            "root_count must equal roots.len()",
        )?;
        check(
            self.tangent.len() == self.roots.len(),
            "tangent must have one flag per root",
        )?;
        check(
            self.class_count == self.classes.len(),
            "class_count must equal classes.len()",
        )?;
        check(self.root_count <= 3, "at most three roots")?;
        check(
            self.roots.iter().all(|&r| r > 0.0 && r < half),
            "roots must lie in (0, pi)",
        )?;
        check(
            self.roots.windows(2).all(|w| w[0] < w[1]),
            "roots must be strictly increasing",
        )?;
        check(
            self.classes.windows(2).all(|w| w[0].theta1 <= w[1].theta1),
            "classes must be sorted by theta1",
        )?;
        for c in &self.classes {
            check(
                c.theta1 > 0.0 && c.theta1 < half,
                "class theta1 must lie in (0, pi)",
            )?;
            let matched = self.roots.contains(&c.theta1);
            check(matched, "every class must sit on a root")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub params: Params,
    pub root_count: usize,
    pub class_count: usize,
}

impl Report for CountReport {
    fn validate(&self) -> Result<(), String> {
        self.params.validate()?;
        check(self.root_count <= 3, "at most three roots")?;
        check(
            self.class_count <= self.root_count,
            "class_count cannot exceed root_count",
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCountReport {
    pub a2_points: usize,
    pub a3_points: usize,
    pub rows: usize,
    /// class_count -> number of grid points.
    pub class_count_histogram: BTreeMap<usize, usize>,
    pub out: Option<String>,
}

impl Report for GridCountReport {
    fn validate(&self) -> Result<(), String> {
        check(
            self.rows == self.a2_points * self.a3_points,
            "rows must equal a2_points * a3_points",
        )?;
        check(
            self.class_count_histogram.values().sum::<usize>() == self.rows,
            "histogram must cover every row",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub x: f64,
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub units: Units,
    pub critical_point: f64,
    pub max_value: f64,
    pub roots: [f64; 3],
    pub evaluations: Vec<KernelPoint>,
}

impl Report for KernelReport {
    fn validate(&self) -> Result<(), String> {
        check(
            self.critical_point.is_finite() && self.max_value.is_finite(),
            "non-finite kernel constants",
        )?;
        check(
            self.roots.windows(2).all(|w| w[0] < w[1]),
            "roots must be increasing",
        )?;
        check(
            self.evaluations
                .iter()
                .all(|e| all_finite(&[e.x, e.f, e.f1, e.f2, e.f3])),
            "non-finite evaluation",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeName {
    SquareOnly,
    Critical,
    SquareAndKite,
}

impl From<Regime> for RegimeName {
    fn from(r: Regime) -> Self {
        match r {
            Regime::SquareOnly => RegimeName::SquareOnly,
            Regime::Critical => RegimeName::Critical,
            Regime::SquareAndKite => RegimeName::SquareAndKite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub regime: RegimeName,
    pub kite_theta1: Option<f64>,
}

/// Consecutive sweep values between which the kite appears.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub a_below: f64,
    pub a_above: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub units: Units,
    pub critical_ratio: f64,
    pub rows: Vec<SweepRow>,
    pub transition: Option<Transition>,
    pub out: Option<String>,
}

impl Report for SweepReport {
    fn validate(&self) -> Result<(), String> {
        check(self.rows.len() >= 2, "a sweep has at least two rows")?;
        check(
            self.rows.windows(2).all(|w| w[0].a < w[1].a),
            "a must be strictly increasing",
        )?;
        for r in &self.rows {
            let has_kite = r.kite_theta1.is_some();
            check(
                has_kite == (r.regime == RegimeName::SquareAndKite),
                "kite_theta1 present iff square_and_kite",
            )?;
        }
        if let Some(t) = self.transition {
            check(t.a_below < t.a_above, "transition bracket must be ordered")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitEntry {
    pub epsilon: f64,
    pub lambda_fit: f64,
    pub lambda_abs: f64,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub units: Units,
    pub thetas: Vec<f64>,
    pub mus: Vec<f64>,
    pub slope: f64,
    pub fits: Vec<FitEntry>,
}

impl Report for VerifyReport {
    fn validate(&self) -> Result<(), String> {
        check(self.thetas.len() == self.mus.len(), "one mass per arc")?;
        check(self.fits.len() >= 3, "need at least three fits")?;
        check(self.slope.is_finite(), "slope must be finite")?;
        for f in &self.fits {
            check(
                f.lambda_abs == f.lambda_fit.abs(),
                "lambda_abs must equal |lambda_fit|",
            )?;
            check(f.residual_norm > 0.0, "residuals must be positive")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassesReport {
    pub units: Units,
    pub thetas: Vec<f64>,
    pub dimension: usize,
    pub singular_values: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
    pub positive_solution: Option<Vec<f64>>,
}

impl Report for MassesReport {
    fn validate(&self) -> Result<(), String> {
        let n = self.thetas.len();
        check(
            self.dimension == self.basis.len(),
            "dimension must equal basis.len()",
        )?;
        check(
            self.basis.iter().all(|v| v.len() == n),
            "basis vectors have one entry per arc",
        )?;
        check(
            self.singular_values.iter().all(|&s| s >= 0.0),
            "singular values are non-negative",
        )?;
        if let Some(p) = &self.positive_solution {
            check(
                p.len() == n && p.iter().all(|&m| m > 0.0),
                "positive_solution must be positive",
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollinearAuditReport {
    pub units: Units,
    pub grid_steps: usize,
    pub points_scanned: usize,
    pub points_skipped: usize,
    pub degenerate_points: usize,
    pub min_relative_singular_value: f64,
    pub counterexample_found: bool,
    pub counterexamples: Vec<[f64; 4]>,
}

impl Report for CollinearAuditReport {
    fn validate(&self) -> Result<(), String> {
        check(
            self.counterexample_found == !self.counterexamples.is_empty(),
            "flag must match counterexamples",
        )?;
        check(
            self.degenerate_points <= self.points_scanned,
            "degenerate points are a subset of scanned points",
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryAuditReport {
    pub units: Units,
    pub samples: usize,
    pub p_grid_points: usize,
    pub p_min: f64,
    pub p_min_at: f64,
    pub asymmetric_solutions: Vec<[f64; 2]>,
    pub holds: bool,
}

impl Report for SymmetryAuditReport {
    fn validate(&self) -> Result<(), String> {
        let expect = self.p_min > 0.0 && self.asymmetric_solutions.is_empty();
        check(
            self.holds == expect,
            "holds must equal p_min > 0 with no asymmetric solutions",
        )
    }
}
