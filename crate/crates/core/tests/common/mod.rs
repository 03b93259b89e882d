//! Shared helpers for the integration tests: a component-wise propagator
//! for the companion (P, Q, R) system built on the same exact kernels as
//! the scalar integrator, and a log-log slope fitter for convergence-order
//! measurements.

// each test target uses its own subset
#![allow(dead_code)]

use sldens::ivp::kernel;
use sldens::Potential;

/// One scalar step map over [x, x+h] with q frozen at the midpoint:
/// y+ = t[0][0] y + t[0][1] y', y'+ = t[1][0] y + t[1][1] y'.
pub fn step_matrix(p: &Potential, lambda: f64, x: f64, h: f64) -> [[f64; 2]; 2] {
    let qbar = p.q(x + 0.5 * h);
    let z = (lambda - qbar) * h * h;
    let (c, s) = kernel(z);
    [[c, h * s], [-(z / h) * s, c]]
}

/// det-1 inverse of a 2x2 step matrix.
pub fn inv(t: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[t[1][1], -t[0][1]], [-t[1][0], t[0][0]]]
}

/// Transports the quadratic form (P, Q, R) by congruence with m:
/// S -> m^T S m where S = [[P, Q/2], [Q/2, R]].
pub fn congruence(m: [[f64; 2]; 2], u: (f64, f64, f64)) -> (f64, f64, f64) {
    let (p, q, r) = u;
    (
        m[0][0] * m[0][0] * p + m[0][0] * m[1][0] * q + m[1][0] * m[1][0] * r,
        2.0 * m[0][0] * m[0][1] * p + (m[0][0] * m[1][1] + m[0][1] * m[1][0]) * q
            + 2.0 * m[1][0] * m[1][1] * r,
        m[0][1] * m[0][1] * p + m[0][1] * m[1][1] * q + m[1][1] * m[1][1] * r,
    )
}

/// Advances the (P, Q, R) system forward over [x, x+h]; the same scheme
/// as the scalar step, applied component-wise through the form transport.
pub fn appell_step_forward(
    p: &Potential,
    lambda: f64,
    x: f64,
    h: f64,
    u: (f64, f64, f64),
) -> (f64, f64, f64) {
    congruence(inv(step_matrix(p, lambda, x, h)), u)
}

/// Transports (P, Q, R) backward from x+h to x.
pub fn appell_step_backward(
    p: &Potential,
    lambda: f64,
    x: f64,
    h: f64,
    u: (f64, f64, f64),
) -> (f64, f64, f64) {
    congruence(step_matrix(p, lambda, x, h), u)
}

/// Least-squares slope of ln(err) against ln(x).
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, e) in points {
        let lx = x.ln();
        let le = e.ln();
        sx += lx;
        sy += le;
        sxx += lx * lx;
        sxy += lx * le;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Max absolute error over a small multiplicative cluster of matching
/// points; dodges the oscillation nodes of the error curve.
pub fn cluster_max<F: Fn(f64) -> f64>(err_at: &F, x: f64) -> f64 {
    [1.0, 1.15, 1.3, 1.45]
        .iter()
        .map(|&c| err_at(c * x).abs())
        .fold(0.0f64, f64::max)
}
