//! Spectral function accumulation over a lambda grid:
//!
//! ```text
//!   rho(lambda_j) = rho(lambda_{j-1}) + int_{lambda_{j-1}}^{lambda_j} f(mu) dmu
//! ```
//!
//! with rho(lambda_1) = rho0 + int_0^{lambda_1} f. Each interval integral
//! uses the adaptive Gauss-Kronrod rule with budget tol/m; the first
//! interval is computed under the substitution mu = t^2, which softens the
//! mu^nu behaviour of the density near the spectral edge.

use crate::appell::Method;
use crate::density::auto_density_with;
use crate::potential::Potential;
use crate::quad::{adaptive_gk15_panels, geometric_panels};
use crate::reference::ExactExample;
use crate::{Error, Result};

/// The standard sixteen-point benchmark grid used by the `rho` presets.
pub const PAPER16: [f64; 16] = [
    0.1, 0.2, 0.4, 1.0, 2.0, 4.0, 10.0, 20.0, 40.0, 100.0, 200.0, 400.0, 1000.0, 2000.0, 4000.0,
    10000.0,
];

/// Per-interval quadrature record.
#[derive(Debug, Clone)]
pub struct IntervalRecord {
    pub from: f64,
    pub to: f64,
    pub integral: f64,
    pub est_error: f64,
    pub subintervals: usize,
    pub f_evals: usize,
    pub converged: bool,
    /// Set when the integrand itself failed inside the interval.
    pub failure: Option<String>,
}

/// Accumulated spectral function values over an ordered grid.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    pub lambdas: Vec<f64>,
    pub rho0: f64,
    pub rho: Vec<f64>,
    pub intervals: Vec<IntervalRecord>,
}

impl SpectralGrid {
    pub fn all_converged(&self) -> bool {
        self.intervals
            .iter()
            .all(|r| r.converged && r.failure.is_none())
    }
}

/// Integrates the density over the grid intervals and accumulates rho.
pub fn rho_grid(p: &Potential, grid: &[f64], rho0: f64, tol: f64) -> Result<SpectralGrid> {
    rho_grid_with(p, grid, rho0, tol, None)
}

/// As [`rho_grid`] with an explicit density method override.
pub fn rho_grid_with(
    p: &Potential,
    grid: &[f64],
    rho0: f64,
    tol: f64,
    method: Option<Method>,
) -> Result<SpectralGrid> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty lambda grid"));
    }
    if !(grid[0] > 0.0) {
        return Err(Error::InvalidGrid("grid values must be positive"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing"));
    }
    if !(tol >= 1e-10 && tol <= 1e-3) {
        return Err(Error::ToleranceRange {
            tol,
            min: 1e-10,
            max: 1e-3,
        });
    }

    let m = grid.len();
    let budget = tol / m as f64;
    let mut intervals = Vec::with_capacity(m);
    for j in 0..m {
        let (lo, hi) = if j == 0 {
            (0.0, grid[0])
        } else {
            (grid[j - 1], grid[j])
        };
        let len = hi - lo;
        let f_tol = (budget / (10.0 * len.max(1.0))).clamp(1e-11, 1e-2);
        let mut eval = |mu: f64| -> Result<f64> {
            auto_density_with(p, mu, f_tol, method)
                .map(|d| d.value)
                .map_err(|e| Error::Integrand {
                    at: mu,
                    source: Box::new(e),
                })
        };
        let result = if j == 0 {
            // mu = t^2 softens f ~ mu^nu near the spectral edge
            let mut g = |t: f64| eval(t * t).map(|f| 2.0 * t * f);
            adaptive_gk15_panels(&mut g, &[0.0, hi.sqrt()], budget, budget, 2000)
        } else {
            adaptive_gk15_panels(&mut eval, &geometric_panels(lo, hi), budget, budget, 2000)
        };

        match result {
            Ok(q) => intervals.push(IntervalRecord {
                from: lo,
                to: hi,
                integral: q.value,
                est_error: q.est_error,
                subintervals: q.subintervals,
                f_evals: q.f_evals,
                converged: q.converged,
                failure: None,
            }),
            Err(e) => intervals.push(IntervalRecord {
                from: lo,
                to: hi,
                integral: f64::NAN,
                est_error: f64::NAN,
                subintervals: 0,
                f_evals: 0,
                converged: false,
                failure: Some(e.to_string()),
            }),
        }
    }

    let mut rho = Vec::with_capacity(m);
    let mut acc = rho0;
    for rec in &intervals {
        acc += rec.integral;
        rho.push(acc);
    }
    Ok(SpectralGrid {
        lambdas: grid.to_vec(),
        rho0,
        rho,
        intervals,
    })
}

/// Closed-form (or high-precision quadrature) value of
/// rho(lambda) - rho(0) for the reference examples.
///
/// Bessel examples integrate in closed form:
/// rho = lambda^{nu+1} / (2^{2 nu + 1} (nu+1) Gamma(nu+1)^2).
/// Coulomb-type examples are integrated adaptively at tolerance 1e-12.
pub fn rho_closed_form_oracle(example: &ExactExample, lambda: f64) -> f64 {
    oracle_between(example, 0.0, lambda)
}

/// Oracle for rho(b) - rho(a); used for difference comparisons on
/// problems whose rho(0) carries a discrete-spectrum contribution.
pub fn oracle_between(example: &ExactExample, a: f64, b: f64) -> f64 {
    match example {
        ExactExample::BesselFrac { .. } | ExactExample::BesselInt { .. } => {
            bessel_rho(example, b) - if a > 0.0 { bessel_rho(example, a) } else { 0.0 }
        }
        _ => {
            let mut f = |mu: f64| -> Result<f64> { Ok(example.density(mu)) };
            let r = adaptive_gk15_panels(&mut f, &geometric_panels(a, b), 1e-12, 1e-12, 4000)
                .expect("closed-form density cannot fail");
            r.value
        }
    }
}

fn bessel_rho(example: &ExactExample, lambda: f64) -> f64 {
    let nu = match example {
        ExactExample::BesselFrac { nu } => *nu,
        ExactExample::BesselInt { n } => *n as f64,
        _ => unreachable!(),
    };
    let g = crate::reference::gamma_fn(nu + 1.0).expect("nu + 1 > 0");
    lambda.powf(nu + 1.0) / (2f64.powf(2.0 * nu + 1.0) * (nu + 1.0) * g * g)
}
