//! Generalized hypergeometric series ₚFq(a; b; w) with complex argument.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A series value with its truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    /// Bound on the neglected tail of the series.
    pub abs_error_estimate: f64,
    /// Estimate of accumulated floating-point rounding, ε · Σ|tₙ|.
    pub rounding_error: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesResult {
    pub fn exact(value: Complex64, terms_used: usize) -> Self {
        Self { value, abs_error_estimate: 0.0, rounding_error: 0.0, terms_used, converged: true }
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Iterator over the terms [Π(aᵢ)ₙ / Π(bⱼ)ₙ] wⁿ/n!, generated by the
/// term-ratio recurrence.
#[derive(Debug, Clone)]
pub struct PfqTerms<'a> {
    a: &'a [f64],
    b: &'a [f64],
    w: Complex64,
    n: usize,
    term: Complex64,
}

impl<'a> PfqTerms<'a> {
    pub fn new(a: &'a [f64], b: &'a [f64], w: Complex64) -> Self {
        Self { a, b, w, n: 0, term: Complex64::new(1.0, 0.0) }
    }

    /// Ratio t_{n+1}/t_n without the factor w.
    fn coefficient_ratio(&self, n: usize) -> f64 {
        let nf = n as f64;
        let num: f64 = self.a.iter().map(|a| a + nf).product();
        let den: f64 = self.b.iter().map(|b| b + nf).product();
        num / (den * (nf + 1.0))
    }
}

impl Iterator for PfqTerms<'_> {
    type Item = Complex64;

    fn next(&mut self) -> Option<Complex64> {
        let t = self.term;
        self.term = t * self.w * self.coefficient_ratio(self.n);
        self.n += 1;
        Some(t)
    }
}

/// ₚFq(a; b; w) = Σₙ [Π(aᵢ)ₙ / Π(bⱼ)ₙ] wⁿ/n!.
///
/// Summation stops once the bound on the remaining tail falls below
/// `tol · |partial sum|`. A series that terminates because some aᵢ is a
/// nonpositive integer is summed exactly. If `max_terms` is reached first the
/// partial sum is returned with `converged = false`.
pub fn pfq(a: &[f64], b: &[f64], w: Complex64, tol: f64, max_terms: usize) -> Result<SeriesResult> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    if let Some(bad) = b.iter().find(|&&x| is_nonpositive_integer(x)) {
        return Err(Error::Parameter(format!("lower parameter {bad} is a nonpositive integer")));
    }
    let terminating = a
        .iter()
        .filter(|&&x| is_nonpositive_integer(x))
        .map(|&x| (-x) as usize)
        .min();
    let (p, q) = (a.len(), b.len());
    if terminating.is_none() {
        if p > q + 1 && w != Complex64::new(0.0, 0.0) {
            return Err(Error::Divergence(format!("{p}F{q} has zero radius of convergence")));
        }
        if p == q + 1 && w.norm() >= 1.0 {
            return Err(Error::Divergence(format!("{p}F{q} requires |w| < 1, got |w| = {}", w.norm())));
        }
    }
    if w == Complex64::new(0.0, 0.0) {
        return Ok(SeriesResult::exact(Complex64::new(1.0, 0.0), 1));
    }

    let limit = if p == q + 1 { w.norm() } else { 0.0 };
    let max_param = a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs()));
    let monotone_from = (2.0 * max_param + 2.0).ceil() as usize;

    let mut terms = PfqTerms::new(a, b, w);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut n = 0usize;
    while n < max_terms {
        let t = terms.next().expect("infinite iterator");
        sum += t;
        abs_sum += t.norm();
        n += 1;
        if !sum.is_finite() {
            return Err(Error::Convergence(format!("{p}F{q} overflowed after {n} terms")));
        }
        if let Some(k) = terminating {
            if n > k {
                return Ok(SeriesResult {
                    value: sum,
                    abs_error_estimate: 0.0,
                    rounding_error: f64::EPSILON * abs_sum,
                    terms_used: n,
                    converged: true,
                });
            }
            continue;
        }
        if t == Complex64::new(0.0, 0.0) {
            // Only happens if a term underflowed; everything after is zero too.
            return Ok(SeriesResult {
                value: sum,
                abs_error_estimate: 0.0,
                rounding_error: f64::EPSILON * abs_sum,
                terms_used: n,
                converged: true,
            });
        }
        if n > monotone_from {
            let r = (terms.coefficient_ratio(n) * w.norm()).max(limit);
            if r < 1.0 {
                let tail = terms.term.norm() / (1.0 - r);
                if tail <= tol * sum.norm() {
                    return Ok(SeriesResult {
                        value: sum,
                        abs_error_estimate: tail,
                        rounding_error: f64::EPSILON * abs_sum,
                        terms_used: n,
                        converged: true,
                    });
                }
            }
        }
    }
    let r = (terms.coefficient_ratio(n) * w.norm()).max(limit);
    let tail = if r < 1.0 { terms.term.norm() / (1.0 - r) } else { f64::INFINITY };
    Ok(SeriesResult {
        value: sum,
        abs_error_estimate: tail,
        rounding_error: f64::EPSILON * abs_sum,
        terms_used: n,
        converged: false,
    })
}

/// Real-argument ₚFq that fails unless the series converged.
pub fn pfq_real(a: &[f64], b: &[f64], x: f64, tol: f64, max_terms: usize) -> Result<f64> {
    let r = pfq(a, b, Complex64::new(x, 0.0), tol, max_terms)?;
    if !r.converged {
        return Err(Error::Convergence(format!(
            "pFq at x = {x} did not converge in {max_terms} terms"
        )));
    }
    Ok(r.value.re)
}
