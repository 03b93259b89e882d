//! Admissible potentials q(x) = q0/x^2 + q1/x + analytic tail.
//!
//! The tail is analytic at 0 with known Maclaurin coefficients, so the
//! Frobenius recurrence can ask for any q_{k+2} while q, q', q'', q''' are
//! evaluated in closed form away from 0.

use crate::{Error, Result};

/// Analytic part of the potential beyond the singular terms.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    /// No tail: q(x) = q0/x^2 + q1/x.
    Zero,
    /// Polynomial tail sum_k c[k] x^k with c[k] = q_{k+2}.
    PowerSeries(Vec<f64>),
    /// amp * x^2 * exp(-x): a smooth barrier peaking near x = 2.
    ExpBarrier { amp: f64 },
}

/// A potential with a regular singular point at x = 0.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    q0: f64,
    q1: f64,
    tail: Tail,
}

impl Potential {
    /// q(x) = A/x + B/x^2, i.e. q1 = A and q0 = B.
    ///
    /// Requires B >= -1/4 so that the indicial roots at 0 are real.
    pub fn rational(a: f64, b: f64) -> Result<Self> {
        Self::with_tail(b, a, Tail::Zero)
    }

    /// q(x) = ell(ell+1)/x^2 - a/x + 15 x^2 exp(-x).
    pub fn barrier(ell: u32, a: f64) -> Self {
        let ell = ell as f64;
        Potential {
            q0: ell * (ell + 1.0),
            q1: -a,
            tail: Tail::ExpBarrier { amp: 15.0 },
        }
    }

    /// q(x) = q0/x^2 + q1/x + sum_k coeffs[k] x^k.
    pub fn power_series(q0: f64, q1: f64, coeffs: Vec<f64>) -> Result<Self> {
        Self::with_tail(q0, q1, Tail::PowerSeries(coeffs))
    }

    fn with_tail(q0: f64, q1: f64, tail: Tail) -> Result<Self> {
        if !(q0 >= -0.25) {
            return Err(Error::InvalidPotential { q0 });
        }
        Ok(Potential { q0, q1, tail })
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn q1(&self) -> f64 {
        self.q1
    }

    /// True when the potential is exactly A/x + B/x^2 (no tail), the form
    /// required by the asymptotic-coefficient approximants.
    pub fn is_rational(&self) -> bool {
        self.tail == Tail::Zero
    }

    /// Maclaurin coefficient q_{k+2} of the tail.
    ///
    /// Every representable tail carries a coefficient rule, so this is
    /// total: Zero yields 0 for all k, a polynomial yields 0 past its
    /// degree.
    pub fn series_coeff(&self, k: usize) -> f64 {
        match &self.tail {
            Tail::Zero => 0.0,
            Tail::PowerSeries(c) => c.get(k).copied().unwrap_or(0.0),
            // x^2 e^{-x} = sum_{k>=2} (-1)^k x^k / (k-2)!
            Tail::ExpBarrier { amp } => {
                if k < 2 {
                    0.0
                } else {
                    let mut inv_fact = 1.0;
                    for i in 1..=(k - 2) {
                        inv_fact /= i as f64;
                    }
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    amp * sign * inv_fact
                }
            }
        }
    }

    pub fn q(&self, x: f64) -> f64 {
        self.q0 / (x * x) + self.q1 / x + self.tail_value(x)
    }

    pub fn dq(&self, x: f64) -> f64 {
        let x2 = x * x;
        -2.0 * self.q0 / (x2 * x) - self.q1 / x2 + self.tail_d1(x)
    }

    pub fn d2q(&self, x: f64) -> f64 {
        let x2 = x * x;
        6.0 * self.q0 / (x2 * x2) + 2.0 * self.q1 / (x2 * x) + self.tail_d2(x)
    }

    pub fn d3q(&self, x: f64) -> f64 {
        let x2 = x * x;
        -24.0 * self.q0 / (x2 * x2 * x) - 6.0 * self.q1 / (x2 * x2) + self.tail_d3(x)
    }

    fn tail_value(&self, x: f64) -> f64 {
        match &self.tail {
            Tail::Zero => 0.0,
            Tail::PowerSeries(c) => horner(c, x),
            Tail::ExpBarrier { amp } => amp * x * x * (-x).exp(),
        }
    }

    fn tail_d1(&self, x: f64) -> f64 {
        match &self.tail {
            Tail::Zero => 0.0,
            Tail::PowerSeries(c) => horner_deriv(c, x, 1),
            Tail::ExpBarrier { amp } => amp * (2.0 * x - x * x) * (-x).exp(),
        }
    }

    fn tail_d2(&self, x: f64) -> f64 {
        match &self.tail {
            Tail::Zero => 0.0,
            Tail::PowerSeries(c) => horner_deriv(c, x, 2),
            Tail::ExpBarrier { amp } => amp * (2.0 - 4.0 * x + x * x) * (-x).exp(),
        }
    }

    fn tail_d3(&self, x: f64) -> f64 {
        match &self.tail {
            Tail::Zero => 0.0,
            Tail::PowerSeries(c) => horner_deriv(c, x, 3),
            Tail::ExpBarrier { amp } => amp * (-6.0 + 6.0 * x - x * x) * (-x).exp(),
        }
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

/// d-th derivative of sum c[k] x^k, evaluated by Horner on the shifted
/// coefficient sequence k(k-1)...(k-d+1) c[k].
fn horner_deriv(c: &[f64], x: f64, d: usize) -> f64 {
    let mut acc = 0.0;
    for k in (d..c.len()).rev() {
        let mut fall = 1.0;
        for i in 0..d {
            fall *= (k - i) as f64;
        }
        acc = acc * x + fall * c[k];
    }
    acc
}
