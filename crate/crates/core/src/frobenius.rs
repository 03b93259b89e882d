//! Principal Frobenius solution phi(x, lambda) near the regular singular
//! point x = 0.
//!
//! With q = q0/x^2 + q1/x + sum q_{k+2} x^k and the larger indicial root
//! nu, the solution phi = sum_n a_n x^{n+nu} (a_0 = 1) follows from the
//! recurrence
//!
//! ```text
//!   a_1 = q1 a_0 / (nu(nu+1) - q0),
//!   a_n = (-lambda a_{n-2} + q1 a_{n-1} + sum_{k=0}^{n-2} q_{k+2} a_{n-2-k})
//!         / ((nu+n-1)(nu+n) - q0),     n > 1.
//! ```
//!
//! The a_0 = 1 normalization is load-bearing: the density formula is
//! quadratic in phi, so any rescaling here rescales every density value.

use crate::potential::Potential;
use crate::{Error, Result};

/// Default truncation length for coefficient construction.
pub const DEFAULT_N_MAX: usize = 200;

/// Larger root nu = 1/2 + sqrt(1 + 4 q0)/2 of r^2 - r - q0 = 0.
pub fn indicial_root(q0: f64) -> Result<f64> {
    if !(q0 >= -0.25) {
        return Err(Error::Domain("indicial root requires q0 >= -1/4"));
    }
    Ok(0.5 + 0.5 * (1.0 + 4.0 * q0).sqrt())
}

/// Point below which the truncated series is evaluated directly:
/// x0(lambda) = |q0|/sqrt(lambda), with fallback
/// max(|q0|, |q1|, 1/2)/sqrt(lambda) when q0 = 0.
pub fn series_cutoff(p: &Potential, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("series cutoff requires lambda > 0"));
    }
    let q0 = p.q0().abs();
    let scale = if q0 != 0.0 {
        q0
    } else {
        p.q1().abs().max(0.5)
    };
    Ok(scale / lambda.sqrt())
}

/// Coefficients of phi(x, lambda) for one fixed lambda.
#[derive(Debug, Clone)]
pub struct FrobeniusExpansion {
    nu: f64,
    lambda: f64,
    coeffs: Vec<f64>,
}

/// Result of evaluating a truncated expansion at one point.
#[derive(Debug, Clone, Copy)]
pub struct PhiEval {
    pub phi: f64,
    pub dphi: f64,
    /// Number of series terms actually summed.
    pub n_used: usize,
    /// Largest partial sum over the final value: the factor by which
    /// cancellation has eaten into the working precision. Drives the
    /// shooting layer's retreat to smaller evaluation points.
    pub cancellation: f64,
}

impl FrobeniusExpansion {
    /// Builds a_0..a_{n_max} for the given potential and lambda.
    ///
    /// lambda = 0 is accepted (the coefficients are defined for every real
    /// lambda); only the density drivers insist on lambda > 0.
    pub fn build(p: &Potential, lambda: f64, n_max: usize) -> Result<Self> {
        assert!(n_max >= 2, "n_max must be at least 2");
        let q0 = p.q0();
        let q1 = p.q1();
        let nu = indicial_root(q0)?;

        let tail: Vec<f64> = (0..n_max.saturating_sub(1))
            .map(|k| p.series_coeff(k))
            .collect();

        let mut a = Vec::with_capacity(n_max + 1);
        a.push(1.0);
        for n in 1..=n_max {
            let nf = n as f64;
            let denom = (nu + nf - 1.0) * (nu + nf) - q0;
            if denom.abs() < 1e-12 {
                // cannot happen for the larger root (denom = n(2 nu + n - 1) >= n)
                return Err(Error::Resonance { n, nu });
            }
            let num = if n == 1 {
                q1 * a[0]
            } else {
                let mut conv = 0.0;
                for k in 0..=(n - 2) {
                    let qk = tail[k];
                    if qk != 0.0 {
                        conv += qk * a[n - 2 - k];
                    }
                }
                -lambda * a[n - 2] + q1 * a[n - 1] + conv
            };
            a.push(num / denom);
        }
        Ok(FrobeniusExpansion {
            nu,
            lambda,
            coeffs: a,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluates phi and phi' at x > 0.
    ///
    /// Truncates once the last three terms of both sums are below 1e-16 of
    /// the running magnitude; three consecutive small terms guard against
    /// the accidental zeros of an alternating series.
    pub fn eval(&self, x: f64) -> Result<PhiEval> {
        if !(x > 0.0) {
            return Err(Error::Domain("phi evaluation requires x > 0"));
        }
        const EPS: f64 = 1e-16;
        let xp = x.powf(self.nu);
        let mut pow = xp; // a_n x^{n+nu} accumulator
        let mut phi = 0.0;
        let mut dphi = 0.0;
        let mut scale_phi = 0.0f64;
        let mut scale_dphi = 0.0f64;
        let mut small_run = 0usize;
        for (n, &an) in self.coeffs.iter().enumerate() {
            let t = an * pow;
            let dt = (n as f64 + self.nu) * t / x;
            phi += t;
            dphi += dt;
            scale_phi = scale_phi.max(phi.abs());
            scale_dphi = scale_dphi.max(dphi.abs());
            pow *= x;
            if !pow.is_finite() || !phi.is_finite() {
                break; // numerically unusable this far out
            }

            let small = t.abs() <= EPS * scale_phi.max(f64::MIN_POSITIVE)
                && dt.abs() <= EPS * scale_dphi.max(f64::MIN_POSITIVE);
            small_run = if small { small_run + 1 } else { 0 };
            if small_run >= 3 {
                let cancellation = (scale_phi / phi.abs().max(f64::MIN_POSITIVE))
                    .max(scale_dphi / dphi.abs().max(f64::MIN_POSITIVE));
                return Ok(PhiEval {
                    phi,
                    dphi,
                    n_used: n + 1,
                    cancellation,
                });
            }
        }
        Err(Error::SeriesNotConverged {
            x,
            n_max: self.coeffs.len(),
        })
    }
}
