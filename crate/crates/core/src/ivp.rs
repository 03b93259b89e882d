//! Shooting for -y'' + q(x) y = lambda y with exact constant-coefficient
//! kernels.
//!
//! Each step freezes q at the midpoint and advances with the exact
//! trigonometric (lambda > q) or hyperbolic (lambda < q) propagator, so a
//! step is exact to roundoff whenever q is constant across it, and the
//! solution can oscillate arbitrarily fast without stability loss. The
//! coefficient approximation is second order; steps are controlled by
//! doubling (one h-step against two h/2-steps).

use crate::potential::Potential;
use crate::{Error, Result};

/// State of the scalar problem at one point.
#[derive(Debug, Clone, Copy)]
pub struct IvpState {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
    pub lambda: f64,
}

/// Constant-coefficient propagator basis over a step.
///
/// With z = (lambda - q) h^2 the update reads
/// y+  = C y + h S y',
/// y'+ = -(z/h) S y + C y',
/// where (C, S) = (cos t, sin t / t), t = sqrt(z), for z > 0 and the
/// hyperbolic pair for z < 0. Near z = 0 a 4-term Taylor kernel in z
/// avoids cancellation. C^2 + z S^2 = 1 holds in all branches, so the
/// Wronskian of two solutions is preserved to roundoff.
pub fn kernel(z: f64) -> (f64, f64) {
    if z.abs() < 1e-8 {
        let c = 1.0 + z * (-0.5 + z * (1.0 / 24.0 - z / 720.0));
        let s = 1.0 + z * (-1.0 / 6.0 + z * (1.0 / 120.0 - z / 5040.0));
        (c, s)
    } else if z > 0.0 {
        let t = z.sqrt();
        (t.cos(), t.sin() / t)
    } else {
        let t = (-z).sqrt();
        (t.cosh(), t.sinh() / t)
    }
}

/// One exact-kernel step of size h > 0 with q frozen at the midpoint.
pub fn step_exact_kernel(p: &Potential, s: &IvpState, h: f64) -> IvpState {
    let qbar = p.q(s.x + 0.5 * h);
    let z = (s.lambda - qbar) * h * h;
    let (c, sk) = kernel(z);
    IvpState {
        x: s.x + h,
        y: c * s.y + h * sk * s.dy,
        dy: -(z / h) * sk * s.y + c * s.dy,
        lambda: s.lambda,
    }
}

/// Propagates `from` to x_end with adaptive step doubling.
///
/// Local error (one step vs. two half steps) is kept below
/// tol * max(1, |component|); the advanced state is the extrapolated
/// combination fine + (fine - coarse)/3, which removes the leading h^3
/// defect of the pair while leaving constant-q steps exact.
pub fn integrate(p: &Potential, from: &IvpState, x_end: f64, tol: f64) -> Result<IvpState> {
    if !(tol >= 1e-14 && tol <= 1e-2) {
        return Err(Error::ToleranceRange {
            tol,
            min: 1e-14,
            max: 1e-2,
        });
    }
    if !(x_end > from.x) {
        return Err(Error::Domain("integration requires x_end > from.x"));
    }

    let sqrt_lam = from.lambda.max(0.0).sqrt();
    let mut h = (0.1f64.min((x_end - from.x) / 16.0)) / (1.0 + sqrt_lam);
    let mut s = *from;

    while s.x < x_end {
        if h < 1e-12 * s.x {
            return Err(Error::StepUnderflow { x: s.x, h });
        }
        let remaining = x_end - s.x;
        let is_last = h >= remaining;
        let h_step = if is_last { remaining } else { h };

        let coarse = step_exact_kernel(p, &s, h_step);
        let half = step_exact_kernel(p, &s, 0.5 * h_step);
        let fine = step_exact_kernel(p, &half, 0.5 * h_step);

        let err = ((coarse.y - fine.y) / fine.y.abs().max(1.0))
            .abs()
            .max(((coarse.dy - fine.dy) / fine.dy.abs().max(1.0)).abs());

        if err <= tol {
            s = IvpState {
                x: fine.x,
                y: fine.y + (fine.y - coarse.y) / 3.0,
                dy: fine.dy + (fine.dy - coarse.dy) / 3.0,
                lambda: fine.lambda,
            };
            // deep classically-forbidden growth: give up before the
            // quadratic forms downstream overflow
            if !(s.y.abs() < 1e120 && s.dy.abs() < 1e120) {
                return Err(Error::SolutionOverflow { x: s.x });
            }
            if is_last {
                s.x = x_end; // absorb roundoff in the endpoint
                break;
            }
        } else if !err.is_finite() {
            return Err(Error::SolutionOverflow { x: s.x });
        }
        let factor = if err > 0.0 {
            (0.9 * (tol / err).powf(1.0 / 3.0)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = h_step * factor;
    }
    Ok(s)
}
