//! Independent oracles shared by the integration and acceptance tests.
//!
//! Everything here is built only from pointwise evaluations of `f` and `g`;
//! none of it touches the root-isolation cascade or the analytic derivatives.
#![allow(dead_code)]

use coorbital_core::kernel::eval_f;
use coorbital_core::opposite::{eval_g, OppositeParams};
use std::f64::consts::PI;

/// Central-difference derivative of order 1..=3 of `func` at `x`, with
/// Richardson extrapolation over the steps `h` and `h/2`.
pub fn fd_derivative(func: impl Fn(f64) -> f64, x: f64, order: u8, h: f64) -> f64 {
    let d = |h: f64| match order {
        1 => (func(x + h) - func(x - h)) / (2.0 * h),
        2 => (func(x + h) - 2.0 * func(x) + func(x - h)) / (h * h),
        3 => {
            (func(x + 2.0 * h) - 2.0 * func(x + h) + 2.0 * func(x - h) - func(x - 2.0 * h))
                / (2.0 * h * h * h)
        }
        _ => unreachable!(),
    };
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

pub fn f(x: f64) -> f64 {
    eval_f(x).unwrap()
}

/// Roots of `g` by sign changes on a uniform grid of `points` interior points,
/// each refined by bisection.
pub fn grid_roots(p: &OppositeParams, points: usize) -> Vec<f64> {
    let g = |x: f64| eval_g(x, p).unwrap();
    let lo = 1e-6;
    let hi = PI - 1e-6;
    let step = (hi - lo) / (points - 1) as f64;
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut g0 = g(x0);
    for k in 1..points {
        let x1 = if k + 1 == points {
            hi
        } else {
            lo + step * k as f64
        };
        let g1 = g(x1);
        if g0 == 0.0 {
            roots.push(x0);
        } else if g0.signum() != g1.signum() && g1 != 0.0 {
            let (mut a, mut b, mut ga) = (x0, x1, g0);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                let gm = g(m);
                if gm.signum() == ga.signum() {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        g0 = g1;
    }
    roots
}
