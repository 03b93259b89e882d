//! Closed-form densities and special-function oracles for the four
//! standard test problems: the attractive and repulsive Coulomb potentials
//! and the Bessel potentials of fractional and integer order. These are
//! independent of the production pipeline and anchor the test suite.

use crate::potential::Potential;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Gamma function via the 9-term Lanczos approximation (g = 7).
///
/// Relative error below 1e-13 on (0, 30]. Poles are out of scope: x <= 0
/// is a domain error.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain("gamma_fn requires x > 0"));
    }
    Ok(lanczos(x))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the argument of the rational part >= 0.5
        PI / ((PI * x).sin() * lanczos(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_P[0];
        for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
            acc += p / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Bessel function J_nu(z) for nu >= 0, z > 0.
///
/// Ascending series for z <= 12, Hankel asymptotic expansion beyond.
pub fn bessel_j(nu: f64, z: f64) -> f64 {
    if z <= 12.0 {
        bessel_j_series(nu, z)
    } else {
        bessel_j_asymptotic(nu, z)
    }
}

fn bessel_j_series(nu: f64, z: f64) -> f64 {
    let mut term = (0.5 * z).powf(nu) / lanczos(nu + 1.0);
    let mut sum = term;
    let w = -0.25 * z * z;
    for k in 1..200 {
        let k = k as f64;
        term *= w / (k * (nu + k));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-280) {
            break;
        }
    }
    sum
}

fn bessel_j_asymptotic(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = z - (0.5 * nu + 0.25) * PI;
    // P ~ sum (-1)^k a_{2k}, Q ~ sum (-1)^k a_{2k+1},
    // a_m = prod_{i=1}^{m} (mu - (2i-1)^2) / (m! (8z)^m)
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for m in 1..40 {
        let mf = m as f64;
        a *= (mu - (2.0 * mf - 1.0).powi(2)) / (mf * 8.0 * z);
        if a.abs() > prev {
            break; // divergent tail of the asymptotic series
        }
        prev = a.abs();
        match m % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// k_ell(lambda) = prod_{j=1}^{ell} (4 lambda j^2 + a^2) / [(2 ell + 1)!]^2.
pub fn k_ell(ell: u32, a: f64, lambda: f64) -> f64 {
    let mut prod = 1.0;
    for j in 1..=ell {
        let j = j as f64;
        prod *= 4.0 * lambda * j * j + a * a;
    }
    let mut fact = 1.0;
    for i in 2..=(2 * ell + 1) {
        fact *= i as f64;
    }
    prod / (fact * fact)
}

/// Principal solution of the Bessel potential, normalized so that
/// phi ~ x^{nu + 1/2} at 0:
/// phi = 2^nu Gamma(nu+1) lambda^{-nu/2} x^{1/2} J_nu(sqrt(lambda) x).
pub fn exact_phi_bessel(nu: f64, lambda: f64, x: f64) -> f64 {
    2f64.powf(nu) * lanczos(nu + 1.0) * lambda.powf(-0.5 * nu) * x.sqrt()
        * bessel_j(nu, lambda.sqrt() * x)
}

/// The four test problems with closed-form spectral densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactExample {
    /// -a/x + ell(ell+1)/x^2 with a > 0 (attractive Coulomb).
    Hydrogen { ell: u32, a: f64 },
    /// -a/x + ell(ell+1)/x^2 with a < 0 (repulsive Coulomb).
    Coulomb { ell: u32, a: f64 },
    /// (nu^2 - 1/4)/x^2, nu > 0 fractional.
    BesselFrac { nu: f64 },
    /// (n^2 - 1/4)/x^2, integer order.
    BesselInt { n: u32 },
}

impl ExactExample {
    pub fn label(&self) -> String {
        match self {
            ExactExample::Hydrogen { ell, a } => format!("hydrogen(ell={ell},a={a})"),
            ExactExample::Coulomb { ell, a } => format!("coulomb(ell={ell},a={a})"),
            ExactExample::BesselFrac { nu } => format!("bessel(nu={nu})"),
            ExactExample::BesselInt { n } => format!("bessel(N={n})"),
        }
    }

    /// Order parameter nu of the Frobenius exponent nu + 1/2.
    pub fn nu(&self) -> f64 {
        match self {
            ExactExample::Hydrogen { ell, .. } | ExactExample::Coulomb { ell, .. } => {
                *ell as f64 + 0.5
            }
            ExactExample::BesselFrac { nu } => *nu,
            ExactExample::BesselInt { n } => *n as f64,
        }
    }

    pub fn potential(&self) -> Potential {
        match self {
            ExactExample::Hydrogen { ell, a } | ExactExample::Coulomb { ell, a } => {
                let l = *ell as f64;
                Potential::rational(-a, l * (l + 1.0)).expect("ell(ell+1) >= 0")
            }
            ExactExample::BesselFrac { nu } => {
                Potential::rational(0.0, nu * nu - 0.25).expect("nu > 0")
            }
            ExactExample::BesselInt { n } => {
                let n = *n as f64;
                Potential::rational(0.0, n * n - 0.25).expect("integer order")
            }
        }
    }

    /// Closed-form spectral density at lambda > 0.
    pub fn density(&self, lambda: f64) -> f64 {
        match self {
            ExactExample::Hydrogen { ell, a } => {
                k_ell(*ell, *a, lambda) * a / (1.0 - (-PI * a / lambda.sqrt()).exp())
            }
            ExactExample::Coulomb { ell, a } => {
                let aa = a.abs();
                k_ell(*ell, aa, lambda) * aa / ((aa * PI / lambda.sqrt()).exp() - 1.0)
            }
            ExactExample::BesselFrac { nu } => bessel_density(*nu, lambda),
            ExactExample::BesselInt { n } => bessel_density(*n as f64, lambda),
        }
    }
}

fn bessel_density(nu: f64, lambda: f64) -> f64 {
    let g = lanczos(nu + 1.0);
    lambda.powf(nu) / (2f64.powf(2.0 * nu + 1.0) * g * g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_factorials_and_half() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() < 24.0 * 1e-14);
        assert!((gamma_fn(0.5).unwrap() - 1.7724538509055160273).abs() < 1e-14);
        // high-precision value of Gamma(4/3)
        assert!((gamma_fn(4.0 / 3.0).unwrap() - 0.8929795115692492112).abs() < 1e-14);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn gamma_recurrence() {
        let mut x = 0.05;
        while x <= 29.0 {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-13 * lhs.abs(),
                "recurrence fails at x = {x}: {lhs} vs {rhs}"
            );
            x += 0.173;
        }
    }

    #[test]
    fn bessel_j_reference_values() {
        let cases = [
            (1.0, 0.1, 0.04993752603624199756),
            (1.0, 2.0, 0.5767248077568733872),
            (1.0, 6.0, -0.2766838581275656082),
            (1.0, 11.5, -0.2283786206653234746),
            (1.0, 12.5, -0.1654838046147597185),
            (1.0, 20.0, 0.06683312417585004558),
            (1.0 / 3.0, 0.1, 0.4117818596612182096),
            (1.0 / 3.0, 2.0, 0.4429398181485762123),
            (1.0 / 3.0, 11.5, -0.1704636468295444641),
            (1.0 / 3.0, 12.5, 0.04258737280722329302),
            (1.0 / 3.0, 20.0, 0.1760605800129389976),
            (2.5, 0.1, 1.680887190033412703e-4),
            (2.5, 2.0, 0.2239245314689157658),
            (2.5, 11.5, 0.1716423927426921093),
            (2.5, 12.5, -0.03936307170800345359),
            (2.5, 20.0, -0.1725801938438764242),
        ];
        for (nu, z, expect) in cases {
            let got = bessel_j(nu, z);
            assert!(
                (got - expect).abs() < 2e-11,
                "J_{nu}({z}) = {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn exact_phi_bessel_values() {
        // leading behaviour: phi ~ x^{nu + 1/2} as x -> 0
        let phi = exact_phi_bessel(1.0, 1.0, 1e-4);
        assert!((phi / 1e-4f64.powf(1.5) - 1.0).abs() < 1e-8);

        let phi = exact_phi_bessel(1.0, 1.0, 0.1);
        assert!((phi - 0.03158326459769697330).abs() < 1e-15);

        let phi = exact_phi_bessel(1.0 / 3.0, 4.0, 1.0);
        assert!((phi - 0.3955361824648876535).abs() < 1e-13);
    }

    #[test]
    fn k_ell_values() {
        assert_eq!(k_ell(0, 3.0, 17.0), 1.0); // empty product over [(1)!]^2
        assert!((k_ell(1, 1.0, 1.0) - 5.0 / 36.0).abs() < 1e-16);
        assert!((k_ell(2, 1.0, 0.0) - 1.0 / 14400.0).abs() < 1e-19);
    }

    #[test]
    fn density_values() {
        let b1 = ExactExample::BesselInt { n: 1 };
        assert!((b1.density(4.0) - 0.5).abs() < 1e-15); // lambda/8
        let b13 = ExactExample::BesselFrac { nu: 1.0 / 3.0 };
        assert!((b13.density(1.0) - 0.3950029611793404237).abs() < 1e-14);
        let h = ExactExample::Hydrogen { ell: 1, a: 1.0 };
        assert!((h.density(1.0) - 0.1451619035227339049).abs() < 1e-15);
        // lambda -> 0+: the exponential factor tends to 1
        assert!((h.density(1e-12) - k_ell(1, 1.0, 1e-12)).abs() < 1e-16);
        let c = ExactExample::Coulomb { ell: 1, a: -1.0 };
        assert!((c.density(1.0) - 6.273014633845016e-3).abs() < 1e-15);
    }

    #[test]
    fn hydrogen_minus_coulomb_identity() {
        // 1/(1-e^{-u}) - 1/(e^u - 1) = 1, so f_hyd - f_cou = a k_ell exactly.
        let h = ExactExample::Hydrogen { ell: 1, a: 1.0 };
        let c = ExactExample::Coulomb { ell: 1, a: -1.0 };
        for &lam in &[0.1, 1.0, 7.0, 100.0, 5000.0] {
            let diff = h.density(lam) - c.density(lam);
            let expect = k_ell(1, 1.0, lam);
            assert!((diff - expect).abs() < 1e-12 * expect.max(1.0));
            assert!(h.density(lam) >= c.density(lam));
        }
    }

    #[test]
    fn example_potentials() {
        let h = ExactExample::Hydrogen { ell: 1, a: 1.0 }.potential();
        assert_eq!(h.q0(), 2.0);
        assert_eq!(h.q1(), -1.0);
        let c = ExactExample::Coulomb { ell: 1, a: -1.0 }.potential();
        assert_eq!(c.q1(), 1.0);
        let b = ExactExample::BesselFrac { nu: 1.0 / 3.0 }.potential();
        assert!((b.q0() - (1.0 / 9.0 - 0.25)).abs() < 1e-16);
    }
}
