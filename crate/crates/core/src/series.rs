//! Log-scaled accumulation for series whose terms over- or underflow `f64`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Running sum Σ exp(ln_mag_k) · u_k with |u_k| = 1, stored as
/// `acc · exp(scale)` so that no intermediate exceeds the `f64` range.
#[derive(Debug, Clone, Copy)]
pub struct ScaledSum {
    acc: Complex64,
    scale: f64,
    abs_acc: f64,
}

impl Default for ScaledSum {
    fn default() -> Self {
        Self::new()
    }
}

impl ScaledSum {
    pub fn new() -> Self {
        Self { acc: Complex64::new(0.0, 0.0), scale: f64::NEG_INFINITY, abs_acc: 0.0 }
    }

    /// Adds exp(ln_mag) · unit.
    pub fn add(&mut self, ln_mag: f64, unit: Complex64) {
        if ln_mag == f64::NEG_INFINITY {
            return;
        }
        if ln_mag > self.scale {
            let f = (self.scale - ln_mag).exp();
            self.acc *= f;
            self.abs_acc *= f;
            self.scale = ln_mag;
        }
        let t = (ln_mag - self.scale).exp();
        self.acc += unit * t;
        self.abs_acc += t;
    }

    /// Adds a positive term exp(ln_mag).
    pub fn add_real(&mut self, ln_mag: f64) {
        self.add(ln_mag, Complex64::new(1.0, 0.0));
    }

    /// ln of the modulus of the sum.
    pub fn ln_norm(&self) -> f64 {
        self.acc.norm().ln() + self.scale
    }

    /// ln of the sum of term moduli.
    pub fn ln_abs_sum(&self) -> f64 {
        self.abs_acc.ln() + self.scale
    }

    /// The sum as a plain complex number (may overflow to infinity).
    pub fn value(&self) -> Complex64 {
        if self.scale == f64::NEG_INFINITY {
            return Complex64::new(0.0, 0.0);
        }
        self.acc * self.scale.exp()
    }

    /// The mantissa and log scale: sum = mantissa · exp(scale).
    pub fn parts(&self) -> (Complex64, f64) {
        (self.acc, self.scale)
    }
}

/// Outcome of [`sum_log_terms`].
#[derive(Debug, Clone, Copy)]
pub struct LogSeries {
    pub sum: ScaledSum,
    pub terms: usize,
    /// ln of the bound on the neglected tail.
    pub ln_tail: f64,
}

/// Sums terms given as (ln|tₙ|, tₙ/|tₙ|) until the remaining tail is below
/// `tol · |sum|`.
///
/// Once n exceeds `monotone_from` the term ratio rₙ is assumed monotone with
/// limit `limit`, so the tail after tₙ is at most |tₙ| ρ / (1 − ρ) with
/// ρ = max(rₙ, limit).
pub fn sum_log_terms<F>(mut term: F, limit: f64, monotone_from: usize, tol: f64, max_terms: usize) -> Result<LogSeries>
where
    F: FnMut(usize) -> (f64, Complex64),
{
    let mut sum = ScaledSum::new();
    let mut prev = f64::NAN;
    for n in 0..max_terms {
        let (ln_t, unit) = term(n);
        if ln_t.is_nan() || ln_t == f64::INFINITY {
            return Err(Error::Domain(format!("series term {n} is not finite")));
        }
        sum.add(ln_t, unit);
        if n > 0 && ln_t == f64::NEG_INFINITY {
            return Ok(LogSeries { sum, terms: n + 1, ln_tail: f64::NEG_INFINITY });
        }
        if n > monotone_from && n > 0 {
            let rho = (ln_t - prev).exp().max(limit);
            if rho < 1.0 {
                let ln_tail = ln_t + rho.ln() - (-rho).ln_1p();
                if ln_tail <= tol.ln() + sum.ln_norm() {
                    return Ok(LogSeries { sum, terms: n + 1, ln_tail });
                }
            }
        }
        prev = ln_t;
    }
    Err(Error::Convergence(format!("series did not converge within {max_terms} terms")))
}
