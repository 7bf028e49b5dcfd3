//! Angular equations of the planar 1+n body problem.
//!
//! Satellite `k` (zero-based here) balances the tangential pulls of the others:
//!
//! ```text
//! sum_{m=1}^{n-1} mu_{k+m} f(theta_k + ... + theta_{k+m-1}) = 0     (indices mod n)
//! ```
//!
//! The system is linear and homogeneous in the masses. Its coefficient matrix
//! `A[k][j] = f(arc k -> j)` is skew-symmetric because the arc from `j` to `k`
//! is `2π` minus the arc from `k` to `j` and `f(2π - x) = -f(x)`.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernel::{eval_f, DOMAIN_GUARD, TWO_PI};

/// Allowed deviation of `Σθ` from `2π`.
pub const SIMPLEX_TOL: f64 = 1e-12;
/// Default tolerance of [`is_central_configuration`].
pub const DEFAULT_CC_TOL: f64 = 1e-10;
/// Singular values below this fraction of the largest count as zero.
pub const RANK_RTOL: f64 = 1e-10;

/// Angles between consecutive satellites on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleConfig {
    thetas: Vec<f64>,
}

impl AngleConfig {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        let n = thetas.len();
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 angles, got {n}"
            )));
        }
        for (i, &t) in thetas.iter().enumerate() {
            if !t.is_finite() || t <= 0.0 || t >= TWO_PI {
                return Err(Error::InvalidConfig(format!(
                    "theta{} = {t} is not in (0, 2π)",
                    i + 1
                )));
            }
            if t < DOMAIN_GUARD {
                return Err(Error::Collision {
                    from: i,
                    to: (i + 1) % n,
                    arc: t,
                });
            }
        }
        let sum: f64 = thetas.iter().sum();
        if (sum - TWO_PI).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidConfig(format!(
                "angles sum to {sum}, expected 2π"
            )));
        }
        Ok(Self { thetas })
    }

    /// The configuration with two diametrically opposite satellites 1 and 3,
    /// `(θ1, π - θ1, π - θ4, θ4)`.
    pub fn opposite(theta1: f64, theta4: f64) -> Result<Self> {
        use core::f64::consts::PI;
        Self::new(alloc::vec![theta1, PI - theta1, PI - theta4, theta4])
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Angle swept going counterclockwise from satellite `from` through
    /// `steps` gaps.
    pub fn arc(&self, from: usize, steps: usize) -> f64 {
        let n = self.len();
        (0..steps).map(|m| self.thetas[(from + m) % n]).sum()
    }

    /// Polar angle of each satellite with satellite 1 at angle 0.
    pub fn polar_angles(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.thetas
            .iter()
            .map(|t| {
                let a = acc;
                acc += t;
                a
            })
            .collect()
    }

    /// Cyclic relabeling: satellite `shift + 1` becomes satellite 1.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.len();
        Self {
            thetas: (0..n).map(|i| self.thetas[(i + shift) % n]).collect(),
        }
    }
}

/// Positive mass parameters of the satellites (actual masses are `μ·ε`).
#[derive(Debug, Clone, PartialEq)]
pub struct MassVector {
    mus: Vec<f64>,
}

impl MassVector {
    pub fn new(mus: Vec<f64>) -> Result<Self> {
        for (i, &m) in mus.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::InvalidMasses(format!(
                    "mu{} = {m} must be positive",
                    i + 1
                )));
            }
        }
        Ok(Self { mus })
    }

    pub fn mus(&self) -> &[f64] {
        &self.mus
    }

    pub fn len(&self) -> usize {
        self.mus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mus.is_empty()
    }

    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.len();
        Self {
            mus: (0..n).map(|i| self.mus[(i + shift) % n]).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.mus.iter().map(|m| m * c).collect())
    }
}

/// Left-hand sides of the n angular equations.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualVector {
    pub values: Vec<f64>,
}

impl ResidualVector {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

fn f_of_arc(config: &AngleConfig, from: usize, steps: usize) -> Result<f64> {
    let n = config.len();
    let arc = config.arc(from, steps);
    if !(DOMAIN_GUARD..=TWO_PI - DOMAIN_GUARD).contains(&arc) {
        return Err(Error::Collision {
            from,
            to: (from + steps) % n,
            arc,
        });
    }
    eval_f(arc)
}

/// Coefficient matrix `A` with `(A μ)_k` the k-th angular equation.
pub fn coefficient_matrix(config: &AngleConfig) -> Result<DMatrix<f64>> {
    let n = config.len();
    let mut a = DMatrix::zeros(n, n);
    for k in 0..n {
        for m in 1..n {
            a[(k, (k + m) % n)] = f_of_arc(config, k, m)?;
        }
    }
    Ok(a)
}

/// Residuals of the general 1+n system, one per satellite.
pub fn residuals(config: &AngleConfig, masses: &MassVector) -> Result<ResidualVector> {
    let n = config.len();
    if masses.len() != n {
        return Err(Error::DimensionMismatch {
            angles: n,
            masses: masses.len(),
        });
    }
    let mus = masses.mus();
    let values = (0..n)
        .map(|k| {
            (1..n).try_fold(0.0, |acc, m| {
                Ok(acc + mus[(k + m) % n] * f_of_arc(config, k, m)?)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualVector { values })
}

/// Residuals of the four-satellite system written with `f(2π - x) = -f(x)`:
///
/// ```text
/// mu2 f1 + mu3 f12 - mu4 f4
/// mu3 f2 + mu4 f23 - mu1 f1
/// mu4 f3 + mu1 f34 - mu2 f2
/// mu1 f4 + mu2 f14 - mu3 f3
/// ```
pub fn residuals_1p4(thetas: [f64; 4], masses: [f64; 4]) -> Result<ResidualVector> {
    AngleConfig::new(thetas.to_vec())?;
    MassVector::new(masses.to_vec())?;
    let [t1, t2, t3, t4] = thetas;
    let [m1, m2, m3, m4] = masses;
    let (f1, f2, f3, f4) = (eval_f(t1)?, eval_f(t2)?, eval_f(t3)?, eval_f(t4)?);
    let (f12, f23, f34, f14) = (
        eval_f(t1 + t2)?,
        eval_f(t2 + t3)?,
        eval_f(t3 + t4)?,
        eval_f(t1 + t4)?,
    );
    Ok(ResidualVector {
        values: alloc::vec![
            m2 * f1 + m3 * f12 - m4 * f4,
            m3 * f2 + m4 * f23 - m1 * f1,
            m4 * f3 + m1 * f34 - m2 * f2,
            m1 * f4 + m2 * f14 - m3 * f3,
        ],
    })
}

pub fn is_central_configuration(
    config: &AngleConfig,
    masses: &MassVector,
    tol: f64,
) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(residuals(config, masses)?.max_abs() < tol)
}

/// Orthonormal basis of the mass vectors annihilated by the angular equations.
#[derive(Debug, Clone, PartialEq)]
pub struct MassNullspace {
    pub basis: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
}

impl MassNullspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// A unit vector in the nullspace whose components all exceed `floor`.
    pub fn positive_direction(&self, floor: f64) -> Option<Vec<f64>> {
        let accept = |v: Vec<f64>| v.iter().all(|&c| c > floor).then_some(v);
        match self.basis.as_slice() {
            [] => None,
            [v] => accept(v.clone()).or_else(|| accept(v.iter().map(|c| -c).collect())),
            [u, v] => positive_in_plane(u, v, floor),
            _ => positive_by_perceptron(&self.basis, floor),
        }
    }
}

/// Nullspace of the coefficient matrix via SVD.
pub fn solve_masses(config: &AngleConfig) -> Result<MassNullspace> {
    let a = coefficient_matrix(checked_for_mass_solve(config)?)?;
    Ok(svd_nullspace(a))
}

/// Like [`solve_masses`], but the rank decision is made on `D A D`, with
/// `D = diag(1/sqrt(|column_j|))`; columns below `RANK_RTOL` of the largest
/// are left at the largest column's scale.
///
/// A positive diagonal congruence keeps the matrix skew, maps the nullspace
/// by `D` and preserves positivity of null vectors, so the answer to "is
/// there a positive mass solution" is unchanged. Near a collision one entry
/// pair dominates and the plain relative threshold reports nullity that is
/// not there; the scaled matrix does not. Singular values are those of the
/// scaled matrix. The basis is re-orthonormalised in the original coordinates.
pub fn solve_masses_equilibrated(config: &AngleConfig) -> Result<MassNullspace> {
    let a = coefficient_matrix(checked_for_mass_solve(config)?)?;
    let n = a.ncols();
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let top = norms.iter().fold(0.0_f64, |m, &x| m.max(x));
    if !(top > 0.0) {
        return Ok(svd_nullspace(a));
    }
    // a column that is already zero at working precision keeps the largest
    // column's scale; inflating it would turn round-off into rank
    let d: Vec<f64> = norms
        .iter()
        .map(|&x| 1.0 / libm::sqrt(if x > RANK_RTOL * top { x } else { top }))
        .collect();
    let scaled = DMatrix::from_fn(n, n, |i, j| d[i] * a[(i, j)] * d[j]);
    let ns = svd_nullspace(scaled);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(ns.basis.len());
    for u in &ns.basis {
        let mut w: Vec<f64> = u.iter().zip(&d).map(|(x, s)| x * s).collect();
        for b in &basis {
            let dot: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = libm::sqrt(w.iter().map(|x| x * x).sum());
        w.iter_mut().for_each(|x| *x /= norm);
        basis.push(w);
    }
    Ok(MassNullspace {
        basis,
        singular_values: ns.singular_values,
    })
}

fn checked_for_mass_solve(config: &AngleConfig) -> Result<&AngleConfig> {
    let n = config.len();
    if n < 3 {
        return Err(Error::InvalidConfig(format!(
            "mass solve needs n >= 3, got {n}"
        )));
    }
    Ok(config)
}

fn svd_nullspace(a: DMatrix<f64>) -> MassNullspace {
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let sigma_max = sigma.iter().fold(0.0_f64, |m, &s| m.max(s));
    let cutoff = RANK_RTOL * sigma_max;

    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&i, &j| sigma[i].total_cmp(&sigma[j]));
    let basis = order
        .iter()
        .filter(|&&i| sigma_max == 0.0 || sigma[i] < cutoff)
        .map(|&i| v_t.row(i).iter().copied().collect())
        .collect();
    let singular_values = order.iter().map(|&i| sigma[i]).collect();
    MassNullspace {
        basis,
        singular_values,
    }
}

fn wrap_angle(x: f64) -> f64 {
    let r = libm::fmod(x, TWO_PI);
    if r < 0.0 {
        r + TWO_PI
    } else {
        r
    }
}

// Component i of cos(t) u + sin(t) v is r_i cos(t - φ_i). Each positivity
// constraint is an open arc around φ_i; the feasible set is an intersection of
// arcs, so if nonempty it contains a midpoint of two consecutive endpoints.
fn positive_in_plane(u: &[f64], v: &[f64], floor: f64) -> Option<Vec<f64>> {
    use core::f64::consts::PI;
    let mut cuts = Vec::with_capacity(2 * u.len());
    for (&a, &b) in u.iter().zip(v) {
        let r = libm::hypot(a, b);
        if r <= floor {
            return None;
        }
        let phi = libm::atan2(b, a);
        let w = libm::acos(floor / r);
        cuts.push(wrap_angle(phi - w));
        cuts.push(wrap_angle(phi + w));
    }
    cuts.sort_by(f64::total_cmp);
    let candidates = (0..cuts.len()).map(|i| {
        let lo = cuts[i];
        let hi = if i + 1 < cuts.len() {
            cuts[i + 1]
        } else {
            cuts[0] + TWO_PI
        };
        0.5 * (lo + hi)
    });
    for t in candidates.chain(core::iter::once(PI)) {
        let (s, c) = (libm::sin(t), libm::cos(t));
        let w: Vec<f64> = u.iter().zip(v).map(|(&a, &b)| c * a + s * b).collect();
        if w.iter().all(|&x| x > floor) {
            return Some(w);
        }
    }
    None
}

// Rosenblatt perceptron on the rows of the basis matrix: finds coefficients y
// with (B y)_i > 0 for every i when such y exists with a reasonable margin.
fn positive_by_perceptron(basis: &[Vec<f64>], floor: f64) -> Option<Vec<f64>> {
    let d = basis.len();
    let n = basis[0].len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| basis.iter().map(|b| b[i]).collect())
        .collect();
    let mut y = alloc::vec![0.0; d];
    for _ in 0..20_000 {
        let mut updated = false;
        for row in &rows {
            let dot: f64 = row.iter().zip(&y).map(|(a, b)| a * b).sum();
            if dot <= 0.0 {
                let norm = libm::sqrt(row.iter().map(|a| a * a).sum::<f64>());
                if norm == 0.0 {
                    return None;
                }
                y.iter_mut().zip(row).for_each(|(yi, a)| *yi += a / norm);
                updated = true;
            }
        }
        if !updated {
            break;
        }
    }
    let w: Vec<f64> = (0..n)
        .map(|i| rows[i].iter().zip(&y).map(|(a, b)| a * b).sum())
        .collect();
    let norm = libm::sqrt(w.iter().map(|a| a * a).sum::<f64>());
    if norm == 0.0 {
        return None;
    }
    let w: Vec<f64> = w.into_iter().map(|a| a / norm).collect();
    w.iter().all(|&x| x > floor).then_some(w)
}
