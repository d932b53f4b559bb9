//! Numerical Riemann-Hilbert boundary value problems for analytic functions on
//! circular domains.
//!
//! Given a unimodular coefficient `λ` and real data `φ` on the boundary, the
//! crate builds an analytic `f` with `Re{conj(λ(ζ))·f(z)} → φ(ζ)` along
//! nontangential paths, away from a finite set of exceptional (jump) points.
//!
//! The disk construction runs in five steps:
//!
//! 1. lift the argument of `λ` into `(−π, π]` ([`boundary::argument_lift`]);
//! 2. take the Schwarz integral `g` of that argument ([`schwarz::schwarz_spectral`]);
//! 3. read off the conjugate boundary function `β = Im g` ([`schwarz::conjugate_boundary`]);
//! 4. build `B` with `Re B → φ·e^β`;
//! 5. return `f = exp(i·g)·B` ([`disk::solve_disk`]).
//!
//! The annulus `r < |z| < 1` is handled by pulling the data back along an
//! explicit universal covering map of the disk, solving there, and composing
//! with the multivalued inverse ([`annulus`]).
//!
//! Residuals against the boundary condition are measured by
//! [`verify::nontangential_limit_check`].

pub mod annulus;
pub mod boundary;
pub mod cli;
pub mod config;
pub mod disk;
mod error;
mod fft;
pub mod schwarz;
pub mod verify;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// `2π`.
pub const TAU: f64 = std::f64::consts::TAU;

/// Samples at or below this distance from `1` on the unit circle are rejected
/// by the quadrature evaluator.
pub const RESOLUTION_THRESHOLD: f64 = 1e-6;

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Unsigned distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}
