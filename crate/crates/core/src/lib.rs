//! Central configurations of the planar 1+4 body problem in which two of the
//! four satellites are diametrically opposite.
//!
//! A unit mass sits at the origin and four satellites of masses `ε μ_i`
//! (`ε → 0`) lie on the unit circle, separated by the angles `θ1..θ4`.
//!
//! - [`kernel`]: the pair kernel `f`, its derivatives, roots and maximum.
//! - [`system`]: the angular equations for 1+n satellites and the linear solve
//!   for the masses that make a given configuration central.
//! - [`opposite`]: the reduced equation `g = 0` when satellites 1 and 3 are
//!   opposite, with certified root isolation and configuration classes.
//! - [`bifurcation`]: equal opposite masses; square versus kite and the
//!   critical ratio `3√2/7`.
//! - [`newtonian`]: residual of the full Newtonian equations at finite `ε`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bifurcation;
pub mod error;
pub mod kernel;
pub mod newtonian;
pub mod opposite;
pub mod roots;
pub mod sampling;
pub mod system;

pub use error::{Error, Result};
