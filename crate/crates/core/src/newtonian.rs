//! Full Newtonian check of a 1+n configuration at small ε.
//!
//! The big unit mass and the satellites (masses `ε μ_i`) are placed on the unit
//! circle and shifted so the center of mass is at the origin. The acceleration
//! `M⁻¹ ∂V/∂q` is compared with `λ q` for the least-squares `λ`.
//!
//! With `V = Σ m_i m_j / |q_i - q_j|` the acceleration points inward, so the
//! fitted `λ` is negative (close to -1 on the unit circle).

use alloc::format;
use alloc::vec::Vec;

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::system::{AngleConfig, MassVector};

pub type Point = Vector2<f64>;

/// Minimum distance between two bodies.
pub const COLLISION_GUARD: f64 = 1e-9;

/// Planar positions and masses of all bodies; index 0 is the big mass.
#[derive(Debug, Clone, PartialEq)]
pub struct FullBodyState {
    pub positions: Vec<Point>,
    pub masses: Vec<f64>,
    pub epsilon: f64,
}

impl FullBodyState {
    pub fn center_of_mass(&self) -> Point {
        let total: f64 = self.masses.iter().sum();
        self.positions
            .iter()
            .zip(&self.masses)
            .fold(Point::zeros(), |acc, (q, m)| acc + q * *m)
            / total
    }

    /// The same state rotated rigidly about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        let positions = self
            .positions
            .iter()
            .map(|q| Point::new(c * q.x - s * q.y, s * q.x + c * q.y))
            .collect();
        Self {
            positions,
            masses: self.masses.clone(),
            epsilon: self.epsilon,
        }
    }
}

/// Big mass at the origin, satellite 1 at `(1, 0)`, satellite k at polar angle
/// `θ1 + … + θ(k-1)`, then the whole system translated to its center of mass.
pub fn embed_positions(thetas: &[f64], mus: &[f64], epsilon: f64) -> Result<FullBodyState> {
    let config = AngleConfig::new(thetas.to_vec())?;
    let masses = MassVector::new(mus.to_vec())?;
    if config.len() != masses.len() {
        return Err(Error::DimensionMismatch {
            angles: config.len(),
            masses: masses.len(),
        });
    }
    if !(epsilon > 0.0 && epsilon <= 0.1) {
        return Err(Error::InvalidParameter(format!(
            "epsilon = {epsilon} must be in (0, 0.1]"
        )));
    }
    let mut positions = Vec::with_capacity(config.len() + 1);
    positions.push(Point::zeros());
    positions.extend(
        config
            .polar_angles()
            .into_iter()
            .map(|a| Point::new(libm::cos(a), libm::sin(a))),
    );
    let mut all_masses = Vec::with_capacity(config.len() + 1);
    all_masses.push(1.0);
    all_masses.extend(masses.mus().iter().map(|m| m * epsilon));

    let mut state = FullBodyState {
        positions,
        masses: all_masses,
        epsilon,
    };
    let com = state.center_of_mass();
    state.positions.iter_mut().for_each(|q| *q -= com);
    Ok(state)
}

fn check_separations(state: &FullBodyState) -> Result<()> {
    let q = &state.positions;
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let d = (q[i] - q[j]).norm();
            if d < COLLISION_GUARD {
                return Err(Error::Collision {
                    from: i,
                    to: j,
                    arc: d,
                });
            }
        }
    }
    Ok(())
}

/// `V = Σ_{i<j} m_i m_j / |q_i - q_j|`.
pub fn potential(state: &FullBodyState) -> Result<f64> {
    check_separations(state)?;
    let (q, m) = (&state.positions, &state.masses);
    let mut v = 0.0;
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            v += m[i] * m[j] / (q[i] - q[j]).norm();
        }
    }
    Ok(v)
}

/// `∂V/∂q_i = Σ_j m_i m_j (q_j - q_i) / |q_j - q_i|³`.
pub fn potential_gradient(state: &FullBodyState) -> Result<Vec<Point>> {
    check_separations(state)?;
    let (q, m) = (&state.positions, &state.masses);
    let mut grad = alloc::vec![Point::zeros(); q.len()];
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let d = q[j] - q[i];
            let r = d.norm();
            let pull = d * (m[i] * m[j] / (r * r * r));
            grad[i] += pull;
            grad[j] -= pull;
        }
    }
    Ok(grad)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcFitReport {
    pub lambda_fit: f64,
    /// `max_i |a_i - λ q_i|` with `a = M⁻¹ ∂V/∂q`.
    pub residual_norm: f64,
    pub epsilon: f64,
}

pub fn cc_fit(state: &FullBodyState) -> Result<CcFitReport> {
    let grad = potential_gradient(state)?;
    let accel: Vec<Point> = grad
        .iter()
        .zip(&state.masses)
        .map(|(g, m)| g / *m)
        .collect();
    let qq: f64 = state.positions.iter().map(|q| q.norm_squared()).sum();
    if qq == 0.0 {
        return Err(Error::InvalidParameter("all bodies at the origin".into()));
    }
    let aq: f64 = accel
        .iter()
        .zip(&state.positions)
        .map(|(a, q)| a.dot(q))
        .sum();
    let lambda_fit = aq / qq;
    let residual_norm = accel
        .iter()
        .zip(&state.positions)
        .map(|(a, q)| (a - q * lambda_fit).norm())
        .fold(0.0, f64::max);
    Ok(CcFitReport {
        lambda_fit,
        residual_norm,
        epsilon: state.epsilon,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    /// Least-squares slope of `ln residual_norm` against `ln ε`.
    pub slope: f64,
    pub fits: Vec<CcFitReport>,
}

pub fn epsilon_scaling_check(
    thetas: &[f64],
    mus: &[f64],
    eps_list: &[f64],
) -> Result<ScalingReport> {
    if eps_list.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 epsilons, got {}",
            eps_list.len()
        )));
    }
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter(
            "epsilons must be strictly decreasing".into(),
        ));
    }
    let span = eps_list[0] / eps_list[eps_list.len() - 1];
    if !(span >= 100.0 * (1.0 - 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "epsilons span a factor {span}, need at least 100"
        )));
    }
    let fits = eps_list
        .iter()
        .map(|&eps| cc_fit(&embed_positions(thetas, mus, eps)?))
        .collect::<Result<Vec<_>>>()?;
    if let Some(zero) = fits.iter().find(|r| !(r.residual_norm > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "residual vanishes at epsilon = {}; slope undefined",
            zero.epsilon
        )));
    }
    let xs: Vec<f64> = fits.iter().map(|r| libm::log(r.epsilon)).collect();
    let ys: Vec<f64> = fits.iter().map(|r| libm::log(r.residual_norm)).collect();
    Ok(ScalingReport {
        slope: ols_slope(&xs, &ys),
        fits,
    })
}

fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    const SQUARE: [f64; 4] = [FRAC_PI_2; 4];

    #[test]
    fn square_embedding() {
        let s = embed_positions(&SQUARE, &[1.0; 4], 1e-3).unwrap();
        let want = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (q, (x, y)) in s.positions.iter().zip(want) {
            assert!((q.x - x).abs() < 1e-15 && (q.y - y).abs() < 1e-15, "{q:?}");
        }
        assert!(s.center_of_mass().norm() < 1e-16);
    }

    #[test]
    fn kite_has_opposite_satellites() {
        let s = embed_positions(
            &[PI / 3.0, 2.0 * PI / 3.0, 2.0 * PI / 3.0, PI / 3.0],
            &[1.0, 2.0, 5.0, 2.0],
            0.01,
        )
        .unwrap();
        let big = s.positions[0];
        let (u1, u3) = (s.positions[1] - big, s.positions[3] - big);
        assert!((u1 + u3).norm() < 1e-15);
        let weighted = s
            .positions
            .iter()
            .zip(&s.masses)
            .fold(Point::zeros(), |acc, (q, m)| acc + q * *m);
        assert!(weighted.norm() < 1e-14);
        for q in &s.positions[1..] {
            assert!(((q - big).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_body_force() {
        let s = FullBodyState {
            positions: alloc::vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)],
            masses: alloc::vec![1.0, 1.0],
            epsilon: 1.0,
        };
        let g = potential_gradient(&s).unwrap();
        assert!((g[0] - Point::new(1.0, 0.0)).norm() < 1e-15);
        assert!((g[1] - Point::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn collisions_are_rejected() {
        let s = FullBodyState {
            positions: alloc::vec![Point::new(0.0, 0.0), Point::new(1e-12, 0.0)],
            masses: alloc::vec![1.0, 1.0],
            epsilon: 1.0,
        };
        assert!(matches!(
            potential_gradient(&s),
            Err(Error::Collision { .. })
        ));
    }

    #[test]
    fn input_validation() {
        assert!(embed_positions(&SQUARE, &[1.0; 4], 0.0).is_err());
        assert!(embed_positions(&SQUARE, &[1.0; 4], 0.5).is_err());
        assert!(embed_positions(&SQUARE, &[1.0; 3], 0.01).is_err());
        assert!(epsilon_scaling_check(&SQUARE, &[1.0; 4], &[1e-2, 1e-3]).is_err());
        assert!(epsilon_scaling_check(&SQUARE, &[1.0; 4], &[1e-2, 1e-3, 1e-3]).is_err());
        assert!(epsilon_scaling_check(&SQUARE, &[1.0; 4], &[1e-2, 5e-3, 2e-3]).is_err());
    }

    #[test]
    fn lambda_is_negative_and_near_minus_one() {
        let r =
            cc_fit(&embed_positions(&[1.0, 1.2, 2.0, 2.0 * PI - 4.2], &[1.0; 4], 1e-4).unwrap())
                .unwrap();
        assert!(r.lambda_fit < 0.0);
        assert!((r.lambda_fit + 1.0).abs() < 1e-3);
    }
}
