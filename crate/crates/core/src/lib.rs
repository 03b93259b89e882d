//! Spectral density functions for Sturm-Liouville problems on the half line.
//!
//! This crate computes the spectral density f(lambda) and the spectral
//! function rho(lambda) for problems
//!
//! ```text
//!     -y'' + q(x) y = lambda y,        0 < x < infinity,
//! ```
//!
//! where x = 0 is a regular singular point (q = q0/x^2 + q1/x + analytic
//! tail, q0 >= -1/4) and q -> 0 at infinity, so the spectrum is absolutely
//! continuous on (0, infinity).
//!
//! The computation combines three pieces:
//!
//! 1. [`frobenius`] builds the principal series solution phi(x, lambda)
//!    near x = 0 to machine precision,
//! 2. [`ivp`] propagates (phi, phi') to a matching point with exact
//!    trigonometric/hyperbolic kernels on piecewise-constant coefficients,
//! 3. [`appell`] supplies closed-form approximants (P, Q, R) to the
//!    companion first-order system fixed by its value at infinity,
//!
//! after which
//!
//! ```text
//!     f(lambda) = 1 / (pi [P phi^2 + Q phi phi' + R phi'^2])
//! ```
//!
//! evaluated at the matching point ([`density`]). Integrating f over a
//! lambda grid with adaptive quadrature yields rho ([`spectral`]).
//! [`reference`] holds the closed-form densities and special-function
//! oracles used by the test suite.

pub mod appell;
pub mod density;
pub mod frobenius;
pub mod ivp;
pub mod potential;
pub mod quad;
pub mod reference;
pub mod spectral;

pub use appell::{AppellState, AsymptoticCoeffs, Method};
pub use density::{auto_density, density_at, DensityEstimate};
pub use frobenius::FrobeniusExpansion;
pub use ivp::IvpState;
pub use potential::Potential;
pub use spectral::{rho_grid, SpectralGrid, PAPER16};

/// Errors reported by the solvers in this crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid potential: q0 = {q0} violates q0 >= -1/4")]
    InvalidPotential { q0: f64 },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("resonant Frobenius denominator at n = {n} (nu = {nu})")]
    Resonance { n: usize, nu: f64 },
    #[error("Frobenius series not converged within {n_max} terms at x = {x}")]
    SeriesNotConverged { x: f64, n_max: usize },
    #[error("step size underflow at x = {x} (h = {h})")]
    StepUnderflow { x: f64, h: f64 },
    #[error("solution magnitude overflowed safe range at x = {x}")]
    SolutionOverflow { x: f64 },
    #[error("turning point: lambda = {lambda} <= q({x}) = {q}")]
    TurningPoint { lambda: f64, x: f64, q: f64 },
    #[error("matching point x = {x} too small: R = {r} is not positive")]
    MatchingPointTooSmall { x: f64, r: f64 },
    #[error("density denominator {denom} not positive at x = {x}")]
    NonpositiveDenominator { x: f64, denom: f64 },
    #[error("tolerance {tol} outside supported range [{min}, {max}]")]
    ToleranceRange { tol: f64, min: f64, max: f64 },
    #[error("method {0} requires a rational potential A/x + B/x^2")]
    MethodNeedsRational(&'static str),
    #[error("matching refinement failed after {doublings} doublings at lambda = {lambda}; last (x, f): {trace:?}")]
    RefinementFailure {
        lambda: f64,
        doublings: u32,
        trace: Vec<(f64, f64)>,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("integrand failure at {at}: {source}")]
    Integrand {
        at: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
