//! Gram series, normalization, state coefficients, overlaps and the
//! reproducing kernel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::series::{sum_log_terms, LogSeries};
use crate::specfun::gamma::lgamma;
use crate::specfun::hypergeometric::{pfq, SeriesResult};
use crate::systems::{Family, PacsPoint, SipSystem};

/// Stopping rule for the direct series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Relative bound on the neglected tail.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { tol: 1e-15, max_terms: 100_000 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_terms == 0 {
            return Err(Error::Parameter(format!("invalid truncation policy {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    /// Direct summation of xⁿ/|K_n^m|².
    Series,
    /// Γ prefactor times a generalized hypergeometric function.
    Closed,
}

/// Closed form of the Gram series: S(x) = exp(ln_prefactor) · ₚFq(a; b; arg_scale · x).
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct GramParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub arg_scale: f64,
    pub ln_prefactor: f64,
}

pub(crate) fn gram_params(system: &SipSystem, m: usize) -> GramParams {
    let mf = m as f64;
    let ln_fact_m = lgamma(mf + 1.0);
    match system.family() {
        Family::DType => GramParams {
            a: vec![mf + 1.0],
            b: vec![1.0],
            arg_scale: system.c() * system.c() / system.gamma(),
            ln_prefactor: mf * system.gamma().ln() + ln_fact_m,
        },
        Family::CType => GramParams {
            a: vec![mf - system.rho(), mf + 1.0],
            b: vec![1.0],
            arg_scale: 1.0,
            ln_prefactor: mf * system.gamma().ln() + ln_fact_m,
        },
        Family::AType1 => {
            let r = system.rho();
            GramParams {
                a: vec![mf + 1.0, 2.0 * mf + 2.0 * r, 2.0 * mf + 2.0 * r],
                b: vec![1.0, mf + r, mf + r + 0.5, mf + 2.0 * r],
                arg_scale: 0.25,
                ln_prefactor: 2.0 * mf * system.kappa().ln() + ln_fact_m + lgamma(2.0 * mf + 2.0 * r)
                    - lgamma(mf + 2.0 * r),
            }
        }
        Family::AType2 => {
            let v = system.nu() + 1.0;
            GramParams {
                a: vec![mf + 1.0, 2.0 * mf + v, 2.0 * mf + v],
                b: vec![1.0, mf + v],
                arg_scale: 1.0,
                ln_prefactor: 2.0 * mf * system.kappa().ln() + ln_fact_m + lgamma(2.0 * mf + v)
                    - lgamma(mf + v),
            }
        }
    }
}

/// Index beyond which the term ratios of the direct series are monotone.
pub(crate) fn monotone_from(system: &SipSystem, m: usize) -> usize {
    let p = system.rho().abs() + system.nu().abs();
    (2.0 * (m as f64 + p) + 4.0).ceil() as usize
}

fn series_limit(system: &SipSystem, w_abs: f64) -> f64 {
    if system.convergence_radius().is_finite() {
        w_abs
    } else {
        0.0
    }
}

fn check_argument(system: &SipSystem, w_abs: f64) -> Result<()> {
    let r = system.convergence_radius();
    if !w_abs.is_finite() || w_abs >= r * r {
        return Err(Error::Divergence(format!(
            "|w| = {w_abs} outside the convergence disc of radius {}",
            r * r
        )));
    }
    Ok(())
}

pub(crate) fn gram_log_series(system: &SipSystem, m: usize, w: Complex64, trunc: &TruncationPolicy) -> Result<LogSeries> {
    trunc.validate()?;
    let w_abs = w.norm();
    check_argument(system, w_abs)?;
    let ln_w = w_abs.ln();
    let unit = if w_abs > 0.0 { w / w_abs } else { Complex64::new(1.0, 0.0) };
    let mut phase = Complex64::new(1.0, 0.0);
    sum_log_terms(
        |n| {
            let ln_t = if n == 0 { 0.0 } else { n as f64 * ln_w } + system.ln_inv_k_sq(n, m);
            let u = phase;
            phase *= unit;
            (ln_t, u)
        },
        series_limit(system, w_abs),
        monotone_from(system, m),
        trunc.tol,
        trunc.max_terms,
    )
}

/// S(w) = Σₙ wⁿ / |K_n^m|², summed directly.
pub fn gram_series(system: &SipSystem, m: usize, w: Complex64, trunc: &TruncationPolicy) -> Result<SeriesResult> {
    let r = gram_log_series(system, m, w, trunc)?;
    let value = r.sum.value();
    Ok(SeriesResult {
        value,
        abs_error_estimate: r.ln_tail.exp(),
        rounding_error: f64::EPSILON * r.terms as f64 * r.sum.ln_abs_sum().exp(),
        terms_used: r.terms,
        converged: true,
    })
}

/// ln S(x) for real x ≥ 0 by direct summation.
pub(crate) fn ln_gram_series_real(system: &SipSystem, m: usize, x: f64, trunc: &TruncationPolicy) -> Result<f64> {
    Ok(gram_log_series(system, m, Complex64::new(x, 0.0), trunc)?.sum.ln_norm())
}

/// ln S(x) for real x ≥ 0 from the hypergeometric closed form.
pub(crate) fn ln_gram_closed(system: &SipSystem, m: usize, x: f64, trunc: &TruncationPolicy) -> Result<f64> {
    check_argument(system, x)?;
    let g = gram_params(system, m);
    let f = pfq(&g.a, &g.b, Complex64::new(g.arg_scale * x, 0.0), trunc.tol, trunc.max_terms)?;
    if !f.converged {
        return Err(Error::Convergence(format!("hypergeometric normalization at x = {x}")));
    }
    Ok(g.ln_prefactor + f.value.re.ln())
}

fn check_x(system: &SipSystem, x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x = |z|² must be nonnegative, got {x}")));
    }
    check_argument(system, x)
}

/// N_m(x) = S(x)^{−1/2} with x = |z|².
pub fn normalization(system: &SipSystem, m: usize, x: f64, method: NormMethod) -> Result<f64> {
    check_x(system, x)?;
    let trunc = TruncationPolicy::default();
    let ln_s = match method {
        NormMethod::Series => ln_gram_series_real(system, m, x, &trunc)?,
        NormMethod::Closed => ln_gram_closed(system, m, x, &trunc)?,
    };
    Ok((-0.5 * ln_s).exp())
}

/// Phase of K_n^m (unit modulus).
fn k_phase(system: &SipSystem, n: usize) -> Complex64 {
    let sign = if system.family() == Family::DType && system.c() < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    system.coefficient_phase(n) * sign
}

/// Amplitude N_m(|z|²) zⁿ / K_n^m of the eigenstate with index n + m.
pub fn state_coefficient(point: &PacsPoint, n: usize) -> Result<Complex64> {
    let sys = &point.system;
    let x = point.x();
    check_x(sys, x)?;
    let ln_n = -0.5 * ln_gram_series_real(sys, point.m, x, &TruncationPolicy::default())?;
    if n > 0 && point.z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ln_z = if n == 0 { 0.0 } else { n as f64 * point.z.norm().ln() };
    let zu = if n == 0 { Complex64::new(1.0, 0.0) } else { (point.z / point.z.norm()).powu(n as u32) };
    let ln_mag = ln_n + ln_z - 0.5 * sys.ln_k_sq(n, point.m);
    Ok(zu * k_phase(sys, n).conj() * ln_mag.exp())
}

/// Amplitude of eigenstate j in the state; zero for j < m.
pub fn fock_amplitude(point: &PacsPoint, j: usize) -> Result<Complex64> {
    if j < point.m {
        return Ok(Complex64::new(0.0, 0.0));
    }
    state_coefficient(point, j - point.m)
}

/// ⟨z2; m2 | z1; m1⟩ by direct summation.
///
/// For m1 ≥ m2 with d = m1 − m2 this is
/// N N′ (z̄2)^d Σₙ (z̄2 z1)ⁿ / (conj(K_{n+d}^{m2}) K_n^{m1});
/// the case m1 < m2 follows by conjugate symmetry.
pub fn inner_product(system: &SipSystem, z1: Complex64, m1: usize, z2: Complex64, m2: usize) -> Result<Complex64> {
    if m1 < m2 {
        return inner_product(system, z2, m2, z1, m1).map(|v| v.conj());
    }
    let trunc = TruncationPolicy::default();
    let (x1, x2) = (z1.norm_sqr(), z2.norm_sqr());
    check_x(system, x1)?;
    check_x(system, x2)?;
    let d = m1 - m2;
    let ln_norms = -0.5 * (ln_gram_series_real(system, m1, x1, &trunc)? + ln_gram_series_real(system, m2, x2, &trunc)?);
    if d > 0 && z2 == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let w = z2.conj() * z1;
    let w_abs = w.norm();
    let ln_w = w_abs.ln();
    let unit = if w_abs > 0.0 { w / w_abs } else { Complex64::new(1.0, 0.0) };
    let mut phase = Complex64::new(1.0, 0.0);
    let series = sum_log_terms(
        |n| {
            let ln_t = if n == 0 { 0.0 } else { n as f64 * ln_w }
                - 0.5 * (system.ln_k_sq(n + d, m2) + system.ln_k_sq(n, m1));
            let u = phase * k_phase(system, n + d) * k_phase(system, n).conj();
            phase *= unit;
            (ln_t, u)
        },
        series_limit(system, w_abs),
        monotone_from(system, m1),
        trunc.tol,
        trunc.max_terms,
    )?;
    let (mant, scale) = series.sum.parts();
    let (lead_ln, lead_unit) = if d == 0 {
        (0.0, Complex64::new(1.0, 0.0))
    } else {
        let r = z2.norm();
        (d as f64 * r.ln(), (z2.conj() / r).powu(d as u32))
    };
    Ok(mant * lead_unit * (scale + lead_ln + ln_norms).exp())
}

/// ⟨z2; m2 | z1; m1⟩ from the family's hypergeometric closed form.
///
/// Available for all families when α = 0; the C-type form also carries its
/// constant phase for α ≠ 0. An A-type-2 system with α ≠ 0 has no closed
/// form and yields [`Error::Undefined`].
pub fn inner_product_closed(system: &SipSystem, z1: Complex64, m1: usize, z2: Complex64, m2: usize) -> Result<Complex64> {
    if m1 < m2 {
        return inner_product_closed(system, z2, m2, z1, m1).map(|v| v.conj());
    }
    if system.family() == Family::AType2 && system.alpha() != 0.0 {
        return Err(Error::Undefined("A-type-2 overlap has no closed form for α ≠ 0".into()));
    }
    let trunc = TruncationPolicy::default();
    let (x1, x2) = (z1.norm_sqr(), z2.norm_sqr());
    check_x(system, x1)?;
    check_x(system, x2)?;
    let d = m1 - m2;
    let (m, mp) = (m1 as f64, m2 as f64);
    let df = d as f64;
    let w = z2.conj() * z1;
    let ln_fact = |v: f64| lgamma(v + 1.0);
    let mut phase = Complex64::new(1.0, 0.0);
    let (a, b, arg, ln_pref, sign) = match system.family() {
        Family::DType => {
            let (g, c) = (system.gamma(), system.c());
            let sign = if c < 0.0 && d % 2 == 1 { -1.0 } else { 1.0 };
            (
                vec![m + 1.0],
                vec![df + 1.0],
                w * (c * c / g),
                df * c.abs().ln() + mp * g.ln() + ln_fact(m) - ln_fact(df),
                sign,
            )
        }
        Family::CType => {
            let (g, r) = (system.gamma(), system.rho());
            phase = Complex64::from_polar(1.0, system.alpha() * df * g);
            (
                vec![m - r, m + 1.0],
                vec![df + 1.0],
                w,
                ln_fact(m) - ln_fact(df) + 0.5 * ((m + mp) * g.ln() + lgamma(m - r) - lgamma(mp - r)),
                1.0,
            )
        }
        Family::AType1 => {
            let (k, r2) = (system.kappa(), 2.0 * system.rho());
            let r = system.rho();
            (
                vec![m + 1.0, 2.0 * m + r2, m + mp + r2],
                vec![df + 1.0, m + r2, m + r, m + r + 0.5],
                w * 0.25,
                (m + mp) * k.ln() + ln_fact(m) + lgamma(m + mp + r2) - ln_fact(df) - lgamma(m + r2),
                1.0,
            )
        }
        Family::AType2 => {
            let (k, v) = (system.kappa(), system.nu() + 1.0);
            (
                vec![m + 1.0, m + mp + v, 2.0 * m + v],
                vec![df + 1.0, m + v],
                w,
                (m + mp) * k.ln() + ln_fact(m) + lgamma(2.0 * m + v) + lgamma(m + mp + v)
                    - ln_fact(df)
                    - 0.5 * (lgamma(2.0 * m + v) + lgamma(2.0 * mp + v))
                    - lgamma(m + v),
                1.0,
            )
        }
    };
    let f = pfq(&a, &b, arg, trunc.tol, trunc.max_terms)?;
    if !f.converged {
        return Err(Error::Convergence("closed-form overlap series did not converge".into()));
    }
    let ln_norms = -0.5 * (ln_gram_closed(system, m1, x1, &trunc)? + ln_gram_closed(system, m2, x2, &trunc)?);
    let lead = z2.conj().powu(d as u32);
    Ok(f.value * lead * phase * sign * (ln_pref + ln_norms).exp())
}

/// Reproducing kernel K(z, z′) = N_m(|z|²) N_m(|z′|²) S(z̄ z′).
pub fn kernel(system: &SipSystem, m: usize, z: Complex64, zp: Complex64) -> Result<Complex64> {
    let trunc = TruncationPolicy::default();
    let (x, xp) = (z.norm_sqr(), zp.norm_sqr());
    check_x(system, x)?;
    check_x(system, xp)?;
    let ln_norms = -0.5 * (ln_gram_series_real(system, m, x, &trunc)? + ln_gram_series_real(system, m, xp, &trunc)?);
    let s = gram_log_series(system, m, z.conj() * zp, &trunc)?;
    let (mant, scale) = s.sum.parts();
    Ok(mant * (scale + ln_norms).exp())
}

/// Relative residual |∫ d²z″ ω_m K(z, z″) K(z″, z′) − K(z, z′)| / |K(z, z′)|.
///
/// The angular integral is done analytically, which leaves
/// N N′ Σ_k (z̄ z′)^k I_k / |K_k^m|⁴ with radial moments I_k = ∫ x^k W_m(x) dx
/// obtained by quadrature of the moment density.
pub fn kernel_idempotence_check(
    system: &SipSystem,
    m: usize,
    z: Complex64,
    zp: Complex64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let trunc = TruncationPolicy::default();
    let direct = kernel(system, m, z, zp)?;
    let w = z.conj() * zp;
    // Number of terms from the analytic sizes |w|^k / |K_k|².
    let expected = gram_log_series(system, m, Complex64::new(w.norm(), 0.0), &TruncationPolicy { tol: 1e-16, ..trunc })?;
    let k_max = expected.terms;
    let moments = crate::measures::moment_integrals(system, m, k_max, quad)?;
    if !moments.converged {
        return Err(Error::Convergence("radial moment quadrature did not converge".into()));
    }
    let ln_norms = -0.5
        * (ln_gram_series_real(system, m, z.norm_sqr(), &trunc)?
            + ln_gram_series_real(system, m, zp.norm_sqr(), &trunc)?);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut wk = Complex64::new(1.0, 0.0);
    for k in 0..=k_max {
        sum += wk * moments.values[k] * (-2.0 * system.ln_k_sq(k, m)).exp();
        wk *= w;
    }
    let reproduced = sum * ln_norms.exp();
    Ok((reproduced - direct).norm() / direct.norm())
}
