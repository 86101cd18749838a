//! Meijer G-functions G^{q,0}_{p,q}(x | a; b) by Mellin–Barnes contour
//! integration.
//!
//! G^{q,0}_{p,q}(y | a; b) = (1/2πi) ∫ Πⱼ Γ(bⱼ + s) / Πᵢ Γ(aᵢ + s) y^{−s} ds
//!
//! The contour crosses the real axis at the saddle point c of the integrand
//! and runs along s(u) = c + w(iu − λu²). For q > p the line is vertical
//! (λ = 0) and the integrand decays exponentially in Im s. For p = q the
//! contour bends to the left so that y^{−s} supplies the decay when y < 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::gamma::{digamma, lgamma, ln_gamma_complex, trigamma};
use crate::specfun::hypergeometric::{pfq, SeriesResult};

/// Parameters of G^{q,0}_{p,q}(scale · x | a; b).
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub scale: f64,
}

impl MeijerGSpec {
    pub fn new(a: Vec<f64>, b: Vec<f64>, scale: f64) -> Result<Self> {
        if b.is_empty() || b.len() < a.len() {
            return Err(Error::Parameter(format!(
                "G^{{q,0}}_{{p,q}} needs q ≥ p and q ≥ 1, got p = {}, q = {}",
                a.len(),
                b.len()
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Parameter(format!("argument scale must be positive, got {scale}")));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("non-finite G parameter".into()));
        }
        Ok(Self { a, b, scale })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    /// Mellin transform ∫₀^∞ x^{s−1} G(scale·x) dx = scale^{−s} Π Γ(bⱼ+s) / Π Γ(aᵢ+s),
    /// returned as a logarithm. Requires s > −min(b) and aᵢ + s > 0.
    pub fn ln_mellin(&self, s: f64) -> f64 {
        let num: f64 = self.b.iter().map(|b| lgamma(b + s)).sum();
        let den: f64 = self.a.iter().map(|a| lgamma(a + s)).sum();
        num - den - s * self.scale.ln()
    }
}

/// Contour placement and accuracy controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    /// Abscissa c where the contour crosses the real axis. `None` selects
    /// the saddle point of the integrand.
    pub real_shift: Option<f64>,
    /// Fixed truncation |Im s| ≤ im_cutoff. `None` extends the contour by
    /// doubling until the last panel is negligible.
    pub im_cutoff: Option<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_doublings: usize,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self { real_shift: None, im_cutoff: None, rel_tol: 1e-12, abs_tol: 0.0, max_doublings: 40 }
    }
}

fn same(x: f64, y: f64) -> bool {
    (x - y).abs() <= 4.0 * f64::EPSILON * x.abs().max(y.abs()).max(1.0)
}

/// Removes aᵢ = bⱼ pairs, which cancel in the Mellin–Barnes integrand.
fn cancel_pairs(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut a_left = Vec::new();
    let mut b_left: Vec<f64> = b.to_vec();
    for &x in a {
        if let Some(k) = b_left.iter().position(|&y| same(x, y)) {
            b_left.swap_remove(k);
        } else {
            a_left.push(x);
        }
    }
    (a_left, b_left)
}

fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    let (lg, sign) = crate::specfun::gamma::ln_gamma_signed(x).expect("not a pole");
    sign * (-lg).exp()
}

struct Integrand<'a> {
    a: &'a [f64],
    b: &'a [f64],
    ln_y: f64,
    c: f64,
    w: f64,
    lambda: f64,
    ln_scale: f64,
}

impl Integrand<'_> {
    fn phi(&self, s: Complex64) -> Complex64 {
        let mut v = -s * self.ln_y;
        for &b in self.b {
            v += ln_gamma_complex(s + b);
        }
        for &a in self.a {
            v -= ln_gamma_complex(s + a);
        }
        v
    }

    /// Re[F(s(u)) ds/du / i] · e^{−ln_scale}
    fn eval(&self, u: f64) -> f64 {
        let s = Complex64::new(self.c - self.w * self.lambda * u * u, self.w * u);
        let f = (self.phi(s) - self.ln_scale).exp();
        let ds = Complex64::new(1.0, 2.0 * self.lambda * u) * self.w;
        (f * ds).re
    }

    fn envelope(&self, u: f64) -> f64 {
        let s = Complex64::new(self.c - self.w * self.lambda * u * u, self.w * u);
        (self.phi(s).re - self.ln_scale).exp() * self.w * (1.0 + 2.0 * self.lambda * u).abs()
    }
}

/// φ′(s) on the real axis.
fn dphi(a: &[f64], b: &[f64], ln_y: f64, s: f64) -> f64 {
    -ln_y + b.iter().map(|b| digamma(b + s)).sum::<f64>() - a.iter().map(|a| digamma(a + s)).sum::<f64>()
}

fn d2phi(a: &[f64], b: &[f64], s: f64) -> f64 {
    b.iter().map(|b| trigamma(b + s)).sum::<f64>() - a.iter().map(|a| trigamma(a + s)).sum::<f64>()
}

/// Real saddle point of the integrand to the right of all Γ(bⱼ + s) poles.
fn saddle(a: &[f64], b: &[f64], ln_y: f64) -> Option<f64> {
    let b_min = b.iter().copied().fold(f64::INFINITY, f64::min);
    let a_min = a.iter().copied().fold(f64::INFINITY, f64::min);
    if a_min < b_min {
        return None;
    }
    let f = |t: f64| dphi(a, b, ln_y, t - b_min);
    let mut lo = 1e-12 * b_min.abs().max(1.0);
    if !(f(lo) < 0.0) {
        return None;
    }
    let mut hi = 1.0;
    while !(f(hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi) - b_min)
}

/// G^{q,0}_{p,q}(scale · x | a; b) for x > 0.
///
/// Pairs aᵢ = bⱼ are cancelled first. G^{1,0}_{0,1} and G^{1,0}_{1,1}, and
/// G^{q,0}_{q,q} at arguments ≥ 1 (where it vanishes), are returned in
/// closed form; everything else is a contour integral. Repeated b
/// parameters (double poles) need no special treatment because the contour
/// never touches a pole.
pub fn meijer_g_q0(spec: &MeijerGSpec, x: f64, contour: &ContourConfig) -> Result<SeriesResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Meijer G requires x > 0, got {x}")));
    }
    let y = spec.scale * x;
    evaluate(spec, y, 1.0 - y, y.ln(), contour)
}

/// G^{q,0}_{p,q}(1 − u | a; b) for 0 < u ≤ 1, ignoring `spec.scale`.
///
/// The distance u to the endpoint is used as given, so (1 − y)-type factors
/// keep full relative precision when y = 1 − u rounds to 1.
pub fn meijer_g_q0_complement(spec: &MeijerGSpec, u: f64, contour: &ContourConfig) -> Result<SeriesResult> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain(format!("complement argument must lie in (0, 1], got {u}")));
    }
    evaluate(spec, 1.0 - u, u, (-u).ln_1p(), contour)
}

/// `y` is the scaled argument, `w1` = 1 − y and `ln_y` = ln y, each as
/// accurately as the caller knows them.
fn evaluate(spec: &MeijerGSpec, y: f64, w1: f64, ln_y: f64, contour: &ContourConfig) -> Result<SeriesResult> {
    if !(contour.rel_tol > 0.0) || contour.abs_tol < 0.0 {
        return Err(Error::Parameter("contour tolerances must be positive".into()));
    }
    let (a, b) = cancel_pairs(&spec.a, &spec.b);
    let (p, q) = (a.len(), b.len());
    let real = |v: f64| SeriesResult::exact(Complex64::new(v, 0.0), 0);
    match (p, q) {
        (0, 0) => {
            return Err(Error::Parameter("all parameters cancel; G reduces to a distribution".into()))
        }
        (0, 1) => return Ok(real(y.powf(b[0]) * (-y).exp())),
        (1, 1) => {
            let d = a[0] - b[0];
            if w1 <= 0.0 {
                return Ok(real(0.0));
            }
            return Ok(real((b[0] * ln_y).exp() * w1.powf(d - 1.0) * rgamma(d)));
        }
        _ => {}
    }
    if q < p {
        return Err(Error::Parameter(format!("G^{{q,0}}_{{p,q}} with q < p (p = {p}, q = {q})")));
    }
    let delta: f64 = a.iter().sum::<f64>() - b.iter().sum::<f64>();
    if p == q {
        if delta <= 0.0 {
            return Err(Error::Parameter(format!(
                "G^{{q,0}}_{{q,q}} with Σa − Σb = {delta} ≤ 0 is not an ordinary function"
            )));
        }
        if w1 <= 0.0 {
            return Ok(real(0.0));
        }
        if p == 2 && w1 <= 0.5 {
            return g22_near_one(&a, &b, w1, ln_y, delta, contour.rel_tol);
        }
    }
    let b_min = b.iter().copied().fold(f64::INFINITY, f64::min);
    let c = match contour.real_shift {
        Some(c) => {
            if c <= -b_min {
                return Err(Error::Parameter(format!(
                    "contour abscissa {c} must lie right of −min(b) = {}",
                    -b_min
                )));
            }
            c
        }
        None => saddle(&a, &b, ln_y).unwrap_or(1.0 - b_min),
    };
    let curv = d2phi(&a, &b, c);
    let w = if curv > 0.0 && curv.is_finite() { curv.sqrt().recip() } else { 1.0 };
    let lambda = if p == q { 0.5 } else { 0.0 };
    let mut integrand = Integrand { a: &a, b: &b, ln_y, c, w, lambda, ln_scale: 0.0 };
    integrand.ln_scale = integrand.phi(Complex64::new(c, 0.0)).re;

    // Integrate u ∈ [0, ∞) in panels [0,1], [1,2], [2,4], ...
    let f = |u: f64| integrand.eval(u);
    let mut sum = 0.0f64;
    let mut err = 0.0f64;
    let mut evals = 0usize;
    let abs_scaled = contour.abs_tol * std::f64::consts::PI * (-integrand.ln_scale).exp();
    let u_stop = contour.im_cutoff.map(|t| t / w);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut converged = false;
    for _ in 0..=contour.max_doublings {
        if let Some(us) = u_stop {
            hi = hi.min(us);
        }
        let tol = (contour.rel_tol * sum.abs()).max(abs_scaled);
        let (v, e, n) = adaptive_panel(&f, lo, hi, contour.rel_tol, tol * 0.1);
        sum += v;
        err += e;
        evals += n;
        if let Some(us) = u_stop {
            if hi >= us {
                converged = true;
                break;
            }
        } else {
            let tol = (contour.rel_tol * sum.abs()).max(abs_scaled);
            let env = integrand.envelope(hi) * hi;
            if lo > 0.0 && v.abs() < 0.1 * tol && env < 0.1 * tol {
                converged = true;
                break;
            }
        }
        lo = hi;
        hi *= 2.0;
    }
    let factor = integrand.ln_scale.exp() / std::f64::consts::PI;
    let value = sum * factor;
    let abs_err = err * factor;
    if !converged {
        return Err(Error::Convergence(format!(
            "Meijer G contour tail did not decay below tolerance at y = {y}"
        )));
    }
    Ok(SeriesResult {
        value: Complex64::new(value, 0.0),
        abs_error_estimate: abs_err,
        rounding_error: f64::EPSILON * value.abs(),
        terms_used: evals,
        converged: true,
    })
}

/// G^{2,0}_{2,2}(y) = y^{b₂} (1 − y)^{δ−1} / Γ(δ) · ₂F₁(a₂ − b₁, a₁ − b₁; δ; 1 − y)
/// with δ = a₁ + a₂ − b₁ − b₂, used for 1/2 ≤ y < 1 where the contour decays slowly.
fn g22_near_one(a: &[f64], b: &[f64], w: f64, ln_y: f64, delta: f64, rel_tol: f64) -> Result<SeriesResult> {
    let f = pfq(&[a[1] - b[0], a[0] - b[0]], &[delta], Complex64::new(w, 0.0), rel_tol.min(1e-15), 10_000)?;
    if !f.converged {
        return Err(Error::Convergence(format!("₂F₁ expansion of G at 1 − y = {w} did not converge")));
    }
    let pref = (b[1] * ln_y + (delta - 1.0) * w.ln() - lgamma(delta)).exp();
    let value = pref * f.value.re;
    Ok(SeriesResult {
        value: Complex64::new(value, 0.0),
        abs_error_estimate: pref * f.abs_error_estimate,
        rounding_error: pref * f.rounding_error + 4.0 * f64::EPSILON * value.abs(),
        terms_used: f.terms_used,
        converged: true,
    })
}

/// Adaptive Gauss–Kronrod on one panel: (value, error, evaluations).
fn adaptive_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> (f64, f64, usize) {
    let r = crate::quadrature::integrate(f, a, b, rel_tol, abs_tol.max(f64::MIN_POSITIVE), 200);
    (r.values[0], r.abs_errors[0], r.evaluations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma;

    fn g(a: &[f64], b: &[f64], x: f64) -> f64 {
        let spec = MeijerGSpec::new(a.to_vec(), b.to_vec(), 1.0).unwrap();
        meijer_g_q0(&spec, x, &ContourConfig::default()).unwrap().value.re
    }

    #[test]
    fn exponential_pair() {
        assert!((g(&[], &[0.0], 1.0) - (-1f64).exp()).abs() < 1e-15);
        // through the contour: G^{2,0}_{1,2}(x | 1; 0, 1) = G^{1,0}_{0,1}(x | ; 0)
        assert!((g(&[1.0], &[0.0, 1.0], 1.0) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn beta_type_closed_form() {
        assert!((g(&[1.0], &[0.0], 0.3) - 1.0).abs() < 1e-15);
        assert_eq!(g(&[1.0], &[0.0], 1.5), 0.0);
        let v = g(&[2.5], &[0.5], 0.25);
        let expected = 0.25f64.sqrt() * 0.75 / 1.0;
        assert!((v - expected).abs() < 1e-14);
    }

    #[test]
    fn bessel_k_form() {
        // G^{2,0}_{0,2}(x | ; 1/2, 0) = 2 x^{1/4} K_{1/2}(2√x) = √π e^{−2√x}
        for &x in &[1e-6, 0.01, 0.7, 5.0, 60.0] {
            let v = g(&[], &[0.5, 0.0], x);
            let expected = std::f64::consts::PI.sqrt() * (-2.0 * x.sqrt()).exp();
            assert!((v - expected).abs() < 1e-11 * expected, "x = {x}: {v} vs {expected}");
        }
    }

    #[test]
    fn double_pole_integral_representation() {
        // G^{2,0}_{1,2}(x | 1; 0, 0) = E₁(x) = ∫₁^∞ e^{−xt}/t dt
        for &x in &[0.01, 0.5, 3.0, 30.0] {
            let v = g(&[1.0], &[0.0, 0.0], x);
            let r = crate::quadrature::integrate(
                |s: f64| {
                    // t = 1/s
                    (-x / s).exp() / s
                },
                0.0,
                1.0,
                1e-13,
                1e-300,
                500,
            );
            let expected = r.values[0];
            assert!((v - expected).abs() < 1e-10 * expected, "x = {x}: {v} vs {expected}");
        }
    }

    #[test]
    fn square_case_with_finite_support() {
        // ∫₀¹ x^{s−1} G^{2,0}_{2,2}(x | 2, 2; 0, 0) dx = Γ(s)²/Γ(s+2)²
        let spec = MeijerGSpec::new(vec![2.0, 2.0], vec![0.0, 0.0], 1.0).unwrap();
        let cfg = ContourConfig::default();
        for s in 1..4 {
            let r = crate::quadrature::integrate(
                |x: f64| x.powi(s - 1) * meijer_g_q0(&spec, x, &cfg).unwrap().value.re,
                0.0,
                1.0,
                1e-11,
                1e-300,
                500,
            );
            let expected = spec.ln_mellin(s as f64).exp();
            assert!((r.values[0] - expected).abs() < 1e-8 * expected, "s = {s}");
        }
        assert_eq!(meijer_g_q0(&spec, 1.2, &cfg).unwrap().value.re, 0.0);
    }

    #[test]
    fn square_case_near_one() {
        // leading behaviour (1 − y)^{δ−1}/Γ(δ) with δ = 1.5
        let spec = MeijerGSpec::new(vec![1.0, 0.5], vec![0.0, 0.0], 1.0).unwrap();
        let y = 1.0 - 1e-12;
        let w = 1.0 - y;
        let g = meijer_g_q0(&spec, y, &ContourConfig::default()).unwrap().value.re;
        let lead = w.sqrt() / gamma(1.5).unwrap();
        assert!((g / lead - 1.0).abs() < 1e-11);
        // continuity across the switch at y = 1/2
        let below = meijer_g_q0(&spec, 0.5 - 1e-13, &ContourConfig::default()).unwrap().value.re;
        let above = meijer_g_q0(&spec, 0.5, &ContourConfig::default()).unwrap().value.re;
        assert!((below - above).abs() < 1e-11 * above);
    }

    #[test]
    fn multiplication_by_power() {
        let a = [1.5, 2.0];
        let b = [0.0, 0.3, 0.7];
        let alpha = 0.45;
        let shifted_a: Vec<f64> = a.iter().map(|v| v + alpha).collect();
        let shifted_b: Vec<f64> = b.iter().map(|v| v + alpha).collect();
        for &x in &[0.05, 0.4, 1.0, 3.5, 12.0] {
            let lhs = g(&shifted_a, &shifted_b, x);
            let rhs = x.powf(alpha) * g(&a, &b, x);
            assert!((lhs - rhs).abs() < 1e-10 * rhs.abs(), "x = {x}");
        }
    }

    #[test]
    fn errors_and_validation() {
        assert!(MeijerGSpec::new(vec![1.0, 2.0], vec![0.0], 1.0).is_err());
        assert!(MeijerGSpec::new(vec![], vec![0.0], -1.0).is_err());
        let spec = MeijerGSpec::new(vec![], vec![0.0, 0.5], 1.0).unwrap();
        let cfg = ContourConfig::default();
        assert!(matches!(meijer_g_q0(&spec, 0.0, &cfg), Err(Error::Domain(_))));
        let bad = ContourConfig { real_shift: Some(-1.0), ..cfg };
        assert!(matches!(meijer_g_q0(&spec, 1.0, &bad), Err(Error::Parameter(_))));
        let fixed = ContourConfig { real_shift: Some(2.0), im_cutoff: Some(60.0), ..cfg };
        let v = meijer_g_q0(&spec, 1.0, &fixed).unwrap().value.re;
        assert!((v - std::f64::consts::PI.sqrt() * (-2.0f64).exp()).abs() < 1e-10);
    }
}
