//! Closed-form approximants to the solution (P, Q, R) of the companion
//! first-order system
//!
//! ```text
//!   P' = (lambda - q) Q
//!   Q' = -2 P + 2 (lambda - q) R
//!   R' = -Q
//! ```
//!
//! fixed by (P, Q, R) -> (sqrt(lambda), 0, 1/sqrt(lambda)) as x -> infinity.
//! Two families are provided: the derivative-based corrections F1/F2/F3
//! (orders 1/x, 1/x^3, 1/x^5 in the density for Coulomb-type tails) and,
//! for rational potentials q = A/x + B/x^2, inverse-power expansions of
//! order N with known residuals (density error O(1/x^{N+1})).

use crate::potential::Potential;
use crate::{Error, Result};

/// Which approximant produced a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    F1,
    F2,
    F3,
    /// Inverse-power expansion of the given order.
    FN(usize),
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::F1 => write!(f, "F1"),
            Method::F2 => write!(f, "F2"),
            Method::F3 => write!(f, "F3"),
            Method::FN(n) => write!(f, "f{n}"),
        }
    }
}

/// (P, Q, R) values at one point, tagged with their origin.
#[derive(Debug, Clone, Copy)]
pub struct AppellState {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub x: f64,
    pub lambda: f64,
    pub method: Method,
}

impl AppellState {
    /// 4PR - Q^2; constant along exact solutions, equal to 4 for the
    /// solution normalized at infinity.
    pub fn conservation_defect(&self) -> f64 {
        4.0 * self.p * self.r - self.q * self.q - 4.0
    }
}

/// Zeroth approximation: the value at infinity itself.
pub fn f1(lambda: f64) -> Result<AppellState> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("f1 requires lambda > 0"));
    }
    let s = lambda.sqrt();
    Ok(AppellState {
        p: s,
        q: 0.0,
        r: 1.0 / s,
        x: f64::INFINITY,
        lambda,
        method: Method::F1,
    })
}

/// First correction: freeze the local wavenumber sqrt(lambda - q(x)).
pub fn f2(pot: &Potential, lambda: f64, x: f64) -> Result<AppellState> {
    let (u, qp) = above_turning_point(pot, lambda, x)?;
    let su = u.sqrt();
    Ok(AppellState {
        p: su,
        q: -qp / (2.0 * u * su),
        r: 1.0 / su,
        x,
        lambda,
        method: Method::F2,
    })
}

/// Third-order corrections built from gamma_k = d^k/dx^k (lambda - q)^{-1/2}:
///
/// ```text
///   P3 = P2 + gamma_2/4 + gamma_1^2/(8 gamma_0)
///   Q3 = Q2 - d/dx [ -gamma_0^2 gamma_2 / 4 + gamma_0 gamma_1^2 / 8 ]
///   R3 = R2 - gamma_0^2 gamma_2 / 4 + gamma_0 gamma_1^2 / 8
/// ```
///
/// With these corrections the P- and R-rows of the system hold exactly
/// and the Q-row residual moves two orders down; the tests pin the
/// resulting O(1/x^5) density convergence.
pub fn f3(pot: &Potential, lambda: f64, x: f64) -> Result<AppellState> {
    let (u, qp) = above_turning_point(pot, lambda, x)?;
    let qpp = pot.d2q(x);
    let qppp = pot.d3q(x);
    let su = u.sqrt();

    let g0 = 1.0 / su;
    let g1 = qp / (2.0 * u * su);
    let g2 = qpp / (2.0 * u * su) + 0.75 * qp * qp / (u * u * su);
    let g3 = qppp / (2.0 * u * su) + 2.25 * qp * qpp / (u * u * su)
        + 1.875 * qp * qp * qp / (u * u * u * su);

    Ok(AppellState {
        p: su + 0.25 * g2 + 0.125 * g1 * g1 / g0,
        q: -g1 + 0.25 * (g0 * g0 * g3 + g0 * g1 * g2) - 0.125 * g1 * g1 * g1,
        r: g0 - 0.25 * g0 * g0 * g2 + 0.125 * g0 * g1 * g1,
        x,
        lambda,
        method: Method::F3,
    })
}

fn above_turning_point(pot: &Potential, lambda: f64, x: f64) -> Result<(f64, f64)> {
    let q = pot.q(x);
    let u = lambda - q;
    if !(u > 0.0) {
        return Err(Error::TurningPoint { lambda, x, q });
    }
    Ok((u, pot.dq(x)))
}

/// Coefficients of the order-N inverse-power expansion
///
/// ```text
///   P_N = sqrt(lambda) + sum_{j=1}^N a_j / x^j
///   Q_N =                sum_{j=1}^N b_j / x^{j+1}
///   R_N = 1/sqrt(lambda) + sum_{j=1}^N c_j / x^j
/// ```
///
/// for q = A/x + B/x^2, depending on lambda but not x.
#[derive(Debug, Clone)]
pub struct AsymptoticCoeffs {
    pot_a: f64,
    pot_b: f64,
    lambda: f64,
    // index j stored at [j]; [0] is the zero convention slot
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

/// Matching inverse powers in the system gives, per order j (coefficients
/// with nonpositive subscripts are zero):
///
/// ```text
///   t1 = (A b_{j-1} + B b_{j-2}) / j
///   t2 = (j-1) b_{j-2} / 2 - A c_{j-1} - B c_{j-2}
///        - (A delta_{j1} + B delta_{j2}) / sqrt(lambda)
///   a_j = (t1 + t2)/2,   c_j = (t1 - t2)/(2 lambda),   b_j = j c_j.
/// ```
pub fn asymptotic_coeffs(
    pot_a: f64,
    pot_b: f64,
    lambda: f64,
    n: usize,
) -> Result<AsymptoticCoeffs> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("asymptotic coefficients require lambda > 0"));
    }
    if n < 1 {
        return Err(Error::Domain("expansion order must be at least 1"));
    }
    let sqrt_lam = lambda.sqrt();
    let mut a = vec![0.0; n + 1];
    let mut b = vec![0.0; n + 1];
    let mut c = vec![0.0; n + 1];
    for j in 1..=n {
        let jf = j as f64;
        let b1 = b[j - 1];
        let b2 = if j >= 2 { b[j - 2] } else { 0.0 };
        let c1 = c[j - 1];
        let c2 = if j >= 2 { c[j - 2] } else { 0.0 };
        let delta = match j {
            1 => pot_a,
            2 => pot_b,
            _ => 0.0,
        };
        let t1 = (pot_a * b1 + pot_b * b2) / jf;
        let t2 = 0.5 * (jf - 1.0) * b2 - pot_a * c1 - pot_b * c2 - delta / sqrt_lam;
        a[j] = 0.5 * (t1 + t2);
        c[j] = (t1 - t2) / (2.0 * lambda);
        b[j] = jf * c[j];
    }
    Ok(AsymptoticCoeffs {
        pot_a,
        pot_b,
        lambda,
        a,
        b,
        c,
    })
}

impl AsymptoticCoeffs {
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn pot_a(&self) -> f64 {
        self.pot_a
    }

    pub fn pot_b(&self) -> f64 {
        self.pot_b
    }

    /// a_j, with the zero convention for j outside 1..=N.
    pub fn a(&self, j: usize) -> f64 {
        self.a.get(j).copied().unwrap_or(0.0)
    }

    pub fn b(&self, j: usize) -> f64 {
        self.b.get(j).copied().unwrap_or(0.0)
    }

    pub fn c(&self, j: usize) -> f64 {
        self.c.get(j).copied().unwrap_or(0.0)
    }
}

/// Evaluates the order-N expansion at x > 0.
pub fn f_n(coeffs: &AsymptoticCoeffs, x: f64) -> Result<AppellState> {
    if !(x > 0.0) {
        return Err(Error::Domain("f_n requires x > 0"));
    }
    let n = coeffs.order();
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut sum_c = 0.0;
    for j in (1..=n).rev() {
        sum_a = (sum_a + coeffs.a[j]) / x;
        sum_b = (sum_b + coeffs.b[j]) / x;
        sum_c = (sum_c + coeffs.c[j]) / x;
    }
    let sqrt_lam = coeffs.lambda.sqrt();
    let r = 1.0 / sqrt_lam + sum_c;
    if !(r > 0.0) {
        return Err(Error::MatchingPointTooSmall { x, r });
    }
    Ok(AppellState {
        p: sqrt_lam + sum_a,
        q: sum_b / x,
        r,
        x,
        lambda: coeffs.lambda,
        method: Method::FN(n),
    })
}

/// Exact residuals of the order-N expansion in the system: substituting
/// (P_N, Q_N, R_N) leaves
///
/// ```text
///   rP = (A b_N + B b_{N-1})/x^{N+2} + B b_N/x^{N+3}
///   rQ = (-N b_{N-1} + 2A c_N + 2B c_{N-1})/x^{N+1}
///        + (2B c_N - (N+1) b_N)/x^{N+2}
///   rR = 0
/// ```
pub fn residuals(coeffs: &AsymptoticCoeffs, x: f64) -> (f64, f64, f64) {
    let n = coeffs.order();
    let nf = n as f64;
    let (aa, bb) = (coeffs.pot_a, coeffs.pot_b);
    let rp = (aa * coeffs.b(n) + bb * coeffs.b(n - 1)) / x.powi(n as i32 + 2)
        + bb * coeffs.b(n) / x.powi(n as i32 + 3);
    let rq = (-nf * coeffs.b(n - 1) + 2.0 * aa * coeffs.c(n) + 2.0 * bb * coeffs.c(n - 1))
        / x.powi(n as i32 + 1)
        + (2.0 * bb * coeffs.c(n) - (nf + 1.0) * coeffs.b(n)) / x.powi(n as i32 + 2);
    (rp, rq, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_examples() {
        let s = f1(4.0).unwrap();
        assert_eq!((s.p, s.q, s.r), (2.0, 0.0, 0.5));
        assert_eq!(4.0 * s.p * s.r - s.q * s.q, 4.0);
        let s = f1(1.0).unwrap();
        assert_eq!((s.p, s.q, s.r), (1.0, 0.0, 1.0));
        let s = f1(100.0).unwrap();
        assert_eq!((s.p, s.q, s.r), (10.0, 0.0, 0.1));
        assert!(f1(0.0).is_err());
        assert!(f1(-1.0).is_err());
    }

    #[test]
    fn f2_hydrogen_point() {
        let p = Potential::rational(-1.0, 2.0).unwrap();
        let s = f2(&p, 1.0, 10.0).unwrap();
        assert!((s.p - 1.0392304845413264).abs() < 1e-15);
        assert!((s.q - (-0.002672917912914934)).abs() < 1e-17);
        assert!((s.r - 0.9622504486493763).abs() < 1e-15);
    }

    #[test]
    fn f2_reduces_to_f1_for_free_potential() {
        let p = Potential::rational(0.0, 0.0).unwrap();
        for &x in &[0.5, 3.0, 25.0] {
            let s = f2(&p, 2.0, x).unwrap();
            let base = f1(2.0).unwrap();
            assert_eq!(s.p, base.p);
            assert_eq!(s.q, 0.0);
            assert_eq!(s.r, base.r);
        }
    }

    #[test]
    fn f2_limit_at_large_x() {
        let p = Potential::rational(0.0, 0.75).unwrap();
        let s = f2(&p, 1.0, 1e8).unwrap();
        assert!((s.p - 1.0).abs() < 1e-15);
        assert!(s.q.abs() < 1e-15);
        assert!((s.r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn f3_reduces_to_f1_for_free_potential() {
        let p = Potential::rational(0.0, 0.0).unwrap();
        let s = f3(&p, 9.0, 7.0).unwrap();
        assert_eq!((s.p, s.q, s.r), (3.0, 0.0, 1.0 / 3.0));
    }

    #[test]
    fn turning_point_rejected() {
        let p = Potential::rational(-1.0, 2.0).unwrap();
        // q(0.5) = -2 + 8 = 6 > lambda = 1
        match f2(&p, 1.0, 0.5) {
            Err(Error::TurningPoint { .. }) => {}
            other => panic!("expected turning point, got {other:?}"),
        }
        assert!(f3(&p, 1.0, 0.5).is_err());
    }

    #[test]
    fn coeffs_zero_potential() {
        let c = asymptotic_coeffs(0.0, 0.0, 3.0, 6).unwrap();
        for j in 1..=6 {
            assert_eq!(c.a(j), 0.0);
            assert_eq!(c.b(j), 0.0);
            assert_eq!(c.c(j), 0.0);
        }
        let s = f_n(&c, 5.0).unwrap();
        let base = f1(3.0).unwrap();
        assert_eq!(s.p, base.p);
        assert_eq!(s.q, 0.0);
        assert_eq!(s.r, base.r);
    }

    #[test]
    fn coeffs_bessel_order_two() {
        // A = 0, B = 0.75, lambda = 1: a2 = -3/8, c2 = 3/8, b2 = 3/4
        let c = asymptotic_coeffs(0.0, 0.75, 1.0, 2).unwrap();
        assert_eq!(c.a(1), 0.0);
        assert_eq!(c.b(1), 0.0);
        assert_eq!(c.c(1), 0.0);
        assert!((c.a(2) - (-0.375)).abs() < 1e-16);
        assert!((c.c(2) - 0.375).abs() < 1e-16);
        assert!((c.b(2) - 0.75).abs() < 1e-16);
    }

    #[test]
    fn coeffs_first_order_matches_binomial_expansion() {
        // a1 = -A/(2 sqrt(lam)), c1 = A/(2 lam^{3/2}), b1 = c1
        let (aa, lam) = (3.0, 2.0);
        let c = asymptotic_coeffs(aa, 0.0, lam, 1).unwrap();
        assert!((c.a(1) - (-aa / (2.0 * lam.sqrt()))).abs() < 1e-16);
        assert!((c.c(1) - aa / (2.0 * lam.powf(1.5))).abs() < 1e-16);
        assert_eq!(c.b(1), c.c(1));
        // and the one-term P agrees with sqrt(lam - A/x) to O(1/x^2)
        let x = 1e4;
        let p1 = lam.sqrt() + c.a(1) / x;
        let exact = (lam - aa / x).sqrt();
        assert!((p1 - exact).abs() < 1.5 * aa * aa / (8.0 * lam.powf(1.5) * x * x));
    }

    #[test]
    fn coefficient_conditions_hold() {
        let c = asymptotic_coeffs(-1.0, 2.0, 0.37, 8).unwrap();
        let lam = 0.37;
        for j in 1..=8usize {
            let jf = j as f64;
            let b1 = c.b(j - 1);
            let b2 = if j >= 2 { c.b(j - 2) } else { 0.0 };
            let lhs_p = jf * c.a(j) + lam * c.b(j);
            let rhs_p = -1.0 * b1 + 2.0 * b2;
            assert!(
                (lhs_p - rhs_p).abs() <= 1e-12 * rhs_p.abs().max(1.0),
                "P condition at j = {j}"
            );
            assert_eq!(c.b(j), jf * c.c(j), "R condition at j = {j}");
        }
    }

    #[test]
    fn f_n_bessel_point() {
        let c = asymptotic_coeffs(0.0, 0.75, 1.0, 2).unwrap();
        let s = f_n(&c, 10.0).unwrap();
        assert!((s.p - 0.99625).abs() < 1e-16);
        assert!((s.q - 0.00075).abs() < 1e-19);
        assert!((s.r - 1.00375).abs() < 1e-16);
    }

    #[test]
    fn f_n_coulomb_first_order() {
        let c = asymptotic_coeffs(-1.0, 0.0, 1.0, 1).unwrap();
        let s = f_n(&c, 100.0).unwrap();
        assert!((s.p - 1.005).abs() < 1e-15);
        assert!((s.q - (-5.0e-5)).abs() < 1e-19);
        assert!((s.r - 0.995).abs() < 1e-15);
    }

    #[test]
    fn f_n_tends_to_infinity_value() {
        let c = asymptotic_coeffs(-1.0, 2.0, 2.0, 6).unwrap();
        let s = f_n(&c, 1e9).unwrap();
        assert!((s.p - 2.0f64.sqrt()).abs() < 1e-8);
        assert!(s.q.abs() < 1e-9);
        assert!((s.r - 1.0 / 2.0f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn f_n_rejects_tiny_matching_point() {
        // R_N <= 0 once x is far inside the expansion's validity range
        let c = asymptotic_coeffs(-8.0, 0.0, 0.01, 1).unwrap();
        match f_n(&c, 1e-3) {
            Err(Error::MatchingPointTooSmall { .. }) => {}
            other => panic!("expected matching-point error, got {other:?}"),
        }
    }

    #[test]
    fn residual_examples() {
        let c = asymptotic_coeffs(0.0, 0.75, 1.0, 2).unwrap();
        let (rp, rq, rr) = residuals(&c, 10.0);
        assert_eq!(rr, 0.0);
        assert!((rq - (-1.6875e-4)).abs() < 1e-18);
        // rP = B b_1 / x^4 + B b_2 / x^5 with b_1 = 0
        assert!((rp - 0.75 * 0.75 / 1e5).abs() < 1e-19);

        let z = asymptotic_coeffs(0.0, 0.0, 1.0, 4).unwrap();
        for &x in &[0.5, 2.0, 40.0] {
            let (rp, rq, rr) = residuals(&z, x);
            assert_eq!((rp, rq, rr), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn residuals_match_numeric_substitution() {
        // analytic power-rule derivative of (P_N, Q_N, R_N) minus the
        // right-hand side reproduces the closed-form residuals
        let p = Potential::rational(-1.0, 2.0).unwrap();
        let c = asymptotic_coeffs(p.q1(), p.q0(), 1.7, 5).unwrap();
        let n = c.order();
        for &x in &[4.0, 9.0, 33.0] {
            let s = f_n(&c, x).unwrap();
            let mut dp = 0.0;
            let mut dq = 0.0;
            let mut dr = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                dp += -jf * c.a(j) / x.powi(j as i32 + 1);
                dq += -(jf + 1.0) * c.b(j) / x.powi(j as i32 + 2);
                dr += -jf * c.c(j) / x.powi(j as i32 + 1);
            }
            let u = 1.7 - p.q(x);
            let rp_num = dp - u * s.q;
            let rq_num = dq + 2.0 * s.p - 2.0 * u * s.r;
            let rr_num = dr + s.q;
            let (rp, rq, rr) = residuals(&c, x);
            // agreement is relative to the magnitudes being cancelled
            let scale_p = dp.abs() + (u * s.q).abs();
            let scale_q = dq.abs() + 2.0 * s.p.abs() + 2.0 * (u * s.r).abs();
            let scale_r = dr.abs() + s.q.abs();
            assert!((rp_num - rp).abs() <= 1e-12 * scale_p, "rP at x={x}");
            assert!((rq_num - rq).abs() <= 1e-12 * scale_q, "rQ at x={x}");
            assert!((rr_num - rr).abs() <= 1e-12 * scale_r, "rR at x={x}");
        }
    }

    #[test]
    fn conservation_defect_decays() {
        let p = Potential::rational(-1.0, 2.0).unwrap();
        let c = asymptotic_coeffs(-1.0, 2.0, 1.0, 6).unwrap();
        let mut prev_f2 = f64::INFINITY;
        let mut prev_f3 = f64::INFINITY;
        let mut prev_fn = f64::INFINITY;
        for k in 0..6 {
            let x = 10.0 * 2f64.powi(k);
            let d2 = f2(&p, 1.0, x).unwrap().conservation_defect().abs();
            let d3 = f3(&p, 1.0, x).unwrap().conservation_defect().abs();
            let dn = f_n(&c, x).unwrap().conservation_defect().abs();
            assert!(d2 < prev_f2);
            assert!(d3 < prev_f3);
            assert!(dn < prev_fn || dn < 1e-15);
            prev_f2 = d2;
            prev_f3 = d3;
            prev_fn = dn;
        }
    }
}
