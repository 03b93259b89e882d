//! Spectral density evaluation
//!
//! ```text
//!   f_x(lambda) = 1 / (pi [P(x) y(x)^2 + Q(x) y(x) y'(x) + R(x) y'(x)^2])
//! ```
//!
//! where y is the principal solution shot from the series region and
//! (P, Q, R) comes from an approximant at the matching point x. The
//! quadratic form is constant in x along the exact solution pair, so
//! increasing x only improves the approximant; `auto_density` doubles the
//! matching point until two successive estimates agree.

use crate::appell::{self, AppellState, AsymptoticCoeffs, Method};
use crate::frobenius::{series_cutoff, FrobeniusExpansion, DEFAULT_N_MAX};
use crate::ivp::{integrate, IvpState};
use crate::potential::Potential;
use crate::{Error, Result};
use std::f64::consts::PI;

/// A density value with the matching data that produced it.
#[derive(Debug, Clone, Copy)]
pub struct DensityEstimate {
    pub lambda: f64,
    pub value: f64,
    pub x_match: f64,
    pub method: Method,
    /// Difference of the last two refinements; None for single-shot calls.
    pub err_est: Option<f64>,
    pub n_refinements: u32,
}

/// First matching point for q ~ A/x + B/x^2:
/// x = |A|/(2 lambda) + sqrt(A^2/(4 lambda^2) + |B|/lambda).
/// Degenerates to 0 for A = B = 0; callers clamp.
pub fn matching_heuristic(a: f64, b: f64, lambda: f64) -> f64 {
    let t = a.abs() / (2.0 * lambda);
    t + (t * t + b.abs() / lambda).sqrt()
}

/// Expansion order used by the automatic driver: N = ceil(-log10 tol) + 2.
pub fn default_order(tol: f64) -> usize {
    (-tol.log10()).ceil().max(1.0) as usize + 2
}

/// Combines an approximant state with (y, y') into the density value.
pub fn density_from_state(state: &AppellState, y: f64, dy: f64) -> Result<f64> {
    let form = state.p * y * y + state.q * y * dy + state.r * dy * dy;
    let denom = PI * form;
    if !(denom > 0.0) {
        return Err(Error::NonpositiveDenominator {
            x: state.x,
            denom,
        });
    }
    Ok(1.0 / denom)
}

fn appell_at(
    p: &Potential,
    lambda: f64,
    x: f64,
    method: Method,
    coeffs: Option<&AsymptoticCoeffs>,
) -> Result<AppellState> {
    match method {
        Method::F1 => {
            let mut s = appell::f1(lambda)?;
            s.x = x;
            Ok(s)
        }
        Method::F2 => appell::f2(p, lambda, x),
        Method::F3 => appell::f3(p, lambda, x),
        Method::FN(n) => match coeffs {
            Some(c) => appell::f_n(c, x),
            None => {
                if !p.is_rational() {
                    return Err(Error::MethodNeedsRational("fN"));
                }
                let c = appell::asymptotic_coeffs(p.q1(), p.q0(), lambda, n)?;
                appell::f_n(&c, x)
            }
        },
    }
}

/// Largest tolerated cancellation in the series evaluation; keeps about
/// 13 significant digits in the take-off values, which the density needs
/// because a wrong phi normalization rescales f uniformly and is
/// invisible to matching-point refinement.
const CANCEL_LIMIT: f64 = 1e3;

/// Shoots phi from the series region to x_start. Returns the state at
/// x_start; if x_start falls inside the series region the series is
/// evaluated there directly. The take-off point retreats below the
/// nominal cutoff whenever the series loses too much precision there
/// (large |q1| x makes the sum strongly alternating).
fn shoot(p: &Potential, lambda: f64, x_start: f64, ivp_tol: f64) -> Result<IvpState> {
    let fe = FrobeniusExpansion::build(p, lambda, DEFAULT_N_MAX)?;
    let mut x0 = series_cutoff(p, lambda)?.min(x_start);
    let ev = loop {
        if x0 < 1e-290 {
            return Err(Error::Domain("series take-off point underflowed"));
        }
        match fe.eval(x0) {
            Ok(ev) if ev.cancellation <= CANCEL_LIMIT => break ev,
            Ok(_) | Err(Error::SeriesNotConverged { .. }) => x0 *= 0.5,
            Err(e) => return Err(e),
        }
    };
    let state = IvpState {
        x: x0,
        y: ev.phi,
        dy: ev.dphi,
        lambda,
    };
    if x0 < x_start {
        integrate(p, &state, x_start, ivp_tol)
    } else {
        Ok(state)
    }
}

/// Single-shot density at a fixed matching point.
///
/// The initial value problem is integrated at tolerance 1e-14.
pub fn density_at(p: &Potential, lambda: f64, x_match: f64, method: Method) -> Result<DensityEstimate> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("density requires lambda > 0"));
    }
    if !(x_match > 0.0) {
        return Err(Error::Domain("density requires x_match > 0"));
    }
    let y = shoot(p, lambda, x_match, 1e-14)?;
    let state = appell_at(p, lambda, x_match, method, None)?;
    let value = density_from_state(&state, y.y, y.dy)?;
    Ok(DensityEstimate {
        lambda,
        value,
        x_match,
        method,
        err_est: None,
        n_refinements: 0,
    })
}

/// Automatic driver: picks the method (inverse-power expansion for
/// rational potentials, F3 otherwise), starts at
/// max(heuristic, 1.25 x0, 1) and doubles the matching point until
/// |f_{2x} - f_x| <= max(1, |f_{2x}|) tol / 2.
pub fn auto_density(p: &Potential, lambda: f64, tol: f64) -> Result<DensityEstimate> {
    auto_density_with(p, lambda, tol, None)
}

/// As [`auto_density`] with an explicit method override.
pub fn auto_density_with(
    p: &Potential,
    lambda: f64,
    tol: f64,
    method: Option<Method>,
) -> Result<DensityEstimate> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("density requires lambda > 0"));
    }
    if !(tol >= 1e-12 && tol <= 1e-2) {
        return Err(Error::ToleranceRange {
            tol,
            min: 1e-12,
            max: 1e-2,
        });
    }
    let method = method.unwrap_or(if p.is_rational() {
        Method::FN(default_order(tol))
    } else {
        Method::F3
    });
    if matches!(method, Method::FN(_)) && !p.is_rational() {
        return Err(Error::MethodNeedsRational("fN"));
    }
    let coeffs = match method {
        Method::FN(n) => Some(appell::asymptotic_coeffs(p.q1(), p.q0(), lambda, n)?),
        _ => None,
    };

    let x0 = series_cutoff(p, lambda)?;
    let x_start = matching_heuristic(p.q1(), p.q0(), lambda)
        .max(1.25 * x0)
        .max(1.0);
    // two orders below the stop threshold: the refinement compares
    // successive shots along a shared integration path, so integration
    // noise enters the differences and must sit well under tol
    let ivp_tol = (tol / 100.0).clamp(1e-14, 1e-3);

    // a solution still growing like exp(2 sqrt(q1 x)) at the matching
    // point pushes the density below the underflow threshold
    let underflowed = |k: u32, x: f64| DensityEstimate {
        lambda,
        value: 0.0,
        x_match: x,
        method,
        err_est: Some(0.0),
        n_refinements: k,
    };

    // the shot is extended from the previous matching point, never redone
    let mut state = match shoot(p, lambda, x_start, ivp_tol) {
        Ok(s) => s,
        Err(Error::SolutionOverflow { x }) => return Ok(underflowed(0, x)),
        Err(e) => return Err(e),
    };
    let mut f_prev = try_density(p, lambda, state.x, method, coeffs.as_ref(), &state);

    let mut trace: Vec<(f64, f64)> = Vec::new();
    if let Some(f) = f_prev {
        trace.push((state.x, f));
    }
    const MAX_DOUBLINGS: u32 = 24;
    for k in 1..=MAX_DOUBLINGS {
        let x_next = 2.0 * state.x;
        state = match integrate(p, &state, x_next, ivp_tol) {
            Ok(s) => s,
            Err(Error::SolutionOverflow { x }) => return Ok(underflowed(k, x)),
            Err(e) => return Err(e),
        };
        let f_new = try_density(p, lambda, x_next, method, coeffs.as_ref(), &state);
        if let Some(f) = f_new {
            trace.push((x_next, f));
        }
        if let (Some(fp), Some(fnew)) = (f_prev, f_new) {
            let err_est = (fnew - fp).abs();
            if err_est <= fnew.abs().max(1.0) * tol / 2.0 {
                return Ok(DensityEstimate {
                    lambda,
                    value: fnew,
                    x_match: x_next,
                    method,
                    err_est: Some(err_est),
                    n_refinements: k,
                });
            }
        }
        f_prev = f_new;
    }
    let tail = trace.split_off(trace.len().saturating_sub(4));
    Err(Error::RefinementFailure {
        lambda,
        doublings: MAX_DOUBLINGS,
        trace: tail,
    })
}

/// Density at one matching point, treating approximant domain errors
/// (turning point, nonpositive form) as "not yet usable".
fn try_density(
    p: &Potential,
    lambda: f64,
    x: f64,
    method: Method,
    coeffs: Option<&AsymptoticCoeffs>,
    state: &IvpState,
) -> Option<f64> {
    let appell = appell_at(p, lambda, x, method, coeffs).ok()?;
    density_from_state(&appell, state.y, state.dy).ok()
}
