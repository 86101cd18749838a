//! Photon statistics: number distribution, moments of N, Mandel Q and g².
//!
//! N = H − E₀ acts on the eigenstate |Ψ_j⟩ as E_j, so the moments are
//! energy-ladder moments weighted by the number distribution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::hypergeometric::pfq;
use crate::states::{gram_log_series, gram_params, ln_gram_closed, ln_gram_series_real, TruncationPolicy};
use crate::systems::{CoeffMethod, Family, PacsPoint, SipSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatMethod {
    /// Direct summation over the number distribution.
    Series,
    /// Ratios of generalized hypergeometric functions (m ≥ 1 only).
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsReport {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub mandel_q: f64,
    pub g2: f64,
    pub method: StatMethod,
}

/// Probability P_n of the eigenstate with index n.
///
/// `Series` uses the summed normalization and the raw product for K;
/// `Closed` uses the hypergeometric normalization and the Γ form of K.
pub fn pnd(point: &PacsPoint, n: usize, method: StatMethod) -> Result<f64> {
    let m = point.m;
    if n < m {
        return Ok(0.0);
    }
    let k = n - m;
    let x = point.x();
    if x == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let sys = &point.system;
    let trunc = TruncationPolicy::default();
    let ln_p = match method {
        StatMethod::Series => {
            let ln_s = ln_gram_series_real(sys, m, x, &trunc)?;
            let kr = sys.k_coeff(k, m, CoeffMethod::Raw)?;
            -ln_s + k as f64 * x.ln() - kr.norm_sqr().ln()
        }
        StatMethod::Closed => {
            let ln_s = ln_gram_closed(sys, m, x, &trunc)?;
            -ln_s + k as f64 * x.ln() + sys.ln_inv_k_sq(k, m)
        }
    };
    Ok(ln_p.exp())
}

/// Mean and variance of N from the direct series.
fn series_mean_var(point: &PacsPoint) -> Result<(f64, f64)> {
    let sys = &point.system;
    let m = point.m;
    let x = point.x();
    if x == 0.0 {
        return Ok((sys.energy(m), 0.0));
    }
    let trunc = TruncationPolicy::default();
    let s = gram_log_series(sys, m, Complex64::new(x, 0.0), &trunc)?;
    let ln_s = s.sum.ln_norm();
    let ln_x = x.ln();
    let prob = |n: usize| (n as f64 * ln_x + sys.ln_inv_k_sq(n, m) - ln_s).exp();
    let mut probs = Vec::with_capacity(s.terms + 16);
    let mut mean = 0.0;
    let mut second = 0.0;
    let mut n = 0;
    loop {
        let p = prob(n);
        let e = sys.energy(n + m);
        probs.push(p);
        mean += e * p;
        second += e * e * p;
        n += 1;
        if n >= s.terms && p * e * e <= 1e-18 * second && p <= 1e-18 {
            break;
        }
        if n >= trunc.max_terms {
            return Err(Error::Convergence("moment series did not converge".into()));
        }
    }
    let var: f64 = probs
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let d = sys.energy(n + m) - mean;
            d * d * p
        })
        .sum();
    Ok((mean, var))
}

/// Hypergeometric ratio factors F1, F2, F3 with ⟨N⟩ = E_m F2/F1 and
/// ⟨N²⟩ = E_m² F3/F1.
fn closed_factors(point: &PacsPoint) -> Result<(f64, f64, f64, f64)> {
    let sys = &point.system;
    let m = point.m;
    if m == 0 {
        return Err(Error::Parameter(
            "closed-form statistics need m ≥ 1 (lower parameter m vanishes)".into(),
        ));
    }
    let mf = m as f64;
    let (extra_a, extra_b): (Vec<f64>, Vec<f64>) = match sys.family() {
        Family::DType | Family::CType => (vec![mf + 1.0], vec![mf]),
        Family::AType1 => {
            let r2 = 2.0 * sys.rho();
            (vec![mf + 1.0, mf + 1.0 + r2], vec![mf, mf + r2])
        }
        Family::AType2 => {
            let v = sys.nu();
            (vec![mf + 1.0, mf + v + 2.0], vec![mf, mf + v + 1.0])
        }
    };
    let g = gram_params(sys, m);
    let trunc = TruncationPolicy::default();
    let w = Complex64::new(g.arg_scale * point.x(), 0.0);
    let eval = |times: usize| -> Result<f64> {
        let mut a = g.a.clone();
        let mut b = g.b.clone();
        for _ in 0..times {
            a.extend(&extra_a);
            b.extend(&extra_b);
        }
        let r = pfq(&a, &b, w, trunc.tol, trunc.max_terms)?;
        if !r.converged {
            return Err(Error::Convergence("hypergeometric moment ratio did not converge".into()));
        }
        Ok(r.value.re)
    };
    Ok((sys.energy(m), eval(0)?, eval(1)?, eval(2)?))
}

/// ⟨N⟩
pub fn mean_n(point: &PacsPoint, method: StatMethod) -> Result<f64> {
    match method {
        StatMethod::Series => series_mean_var(point).map(|(mu, _)| mu),
        StatMethod::Closed => {
            let (p, f1, f2, _) = closed_factors(point)?;
            Ok(p * f2 / f1)
        }
    }
}

/// ⟨N²⟩
pub fn mean_n2(point: &PacsPoint, method: StatMethod) -> Result<f64> {
    match method {
        StatMethod::Series => series_mean_var(point).map(|(mu, var)| var + mu * mu),
        StatMethod::Closed => {
            let (p, f1, _, f3) = closed_factors(point)?;
            Ok(p * p * f3 / f1)
        }
    }
}

fn undefined_if_zero(mean: f64) -> Result<()> {
    if mean == 0.0 {
        return Err(Error::Undefined("⟨N⟩ = 0, the statistic is undefined".into()));
    }
    Ok(())
}

/// Mandel parameter Q = (⟨N²⟩ − ⟨N⟩²)/⟨N⟩ − 1.
pub fn mandel_q(point: &PacsPoint, method: StatMethod) -> Result<f64> {
    match method {
        StatMethod::Series => {
            let (mu, var) = series_mean_var(point)?;
            undefined_if_zero(mu)?;
            Ok(var / mu - 1.0)
        }
        StatMethod::Closed => {
            let (p, f1, f2, f3) = closed_factors(point)?;
            Ok(p * (f3 / f2 - f2 / f1) - 1.0)
        }
    }
}

/// Second-order correlation g² = (⟨N²⟩ − ⟨N⟩)/⟨N⟩².
pub fn g2(point: &PacsPoint, method: StatMethod) -> Result<f64> {
    match method {
        StatMethod::Series => {
            let (mu, var) = series_mean_var(point)?;
            undefined_if_zero(mu)?;
            Ok((var + mu * mu - mu) / (mu * mu))
        }
        StatMethod::Closed => {
            let (p, f1, f2, f3) = closed_factors(point)?;
            Ok((p * f3 - f2) * f1 / (p * f2 * f2))
        }
    }
}

/// All four statistics from one evaluation of the underlying sums.
pub fn report(point: &PacsPoint, method: StatMethod) -> Result<StatsReport> {
    match method {
        StatMethod::Series => {
            let (mu, var) = series_mean_var(point)?;
            undefined_if_zero(mu)?;
            Ok(StatsReport {
                mean_n: mu,
                mean_n2: var + mu * mu,
                mandel_q: var / mu - 1.0,
                g2: (var + mu * mu - mu) / (mu * mu),
                method,
            })
        }
        StatMethod::Closed => {
            let (p, f1, f2, f3) = closed_factors(point)?;
            Ok(StatsReport {
                mean_n: p * f2 / f1,
                mean_n2: p * p * f3 / f1,
                mandel_q: p * (f3 / f2 - f2 / f1) - 1.0,
                g2: (p * f3 - f2) * f1 / (p * f2 * f2),
                method,
            })
        }
    }
}

/// Whether a system's statistics are sub-Poissonian (Q < 0) at a point.
pub fn is_sub_poissonian(system: &SipSystem, z: Complex64, m: usize) -> Result<bool> {
    let p = PacsPoint::new(*system, z, m)?;
    Ok(mandel_q(&p, StatMethod::Series)? < 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(s: SipSystem, z: f64, m: usize) -> PacsPoint {
        PacsPoint::new(s, Complex64::new(z, 0.0), m).unwrap()
    }

    #[test]
    fn poisson_limit() {
        let d = SipSystem::d_type(1.0, 1.0).unwrap();
        let p = point(d, 1.0, 0);
        let p2 = pnd(&p, 2, StatMethod::Series).unwrap();
        assert!((p2 - (-1f64).exp() / 2.0).abs() < 1e-15);
        assert!((mean_n(&p, StatMethod::Series).unwrap() - 1.0).abs() < 1e-14);
        assert!(mandel_q(&p, StatMethod::Series).unwrap().abs() < 1e-13);
        assert!((g2(&p, StatMethod::Series).unwrap() - 1.0).abs() < 1e-13);
        assert!(matches!(mean_n(&p, StatMethod::Closed), Err(Error::Parameter(_))));
    }

    #[test]
    fn photon_added_anchor() {
        let d = SipSystem::d_type(1.0, 1.0).unwrap();
        let p = point(d, 1.0, 1);
        for method in [StatMethod::Series, StatMethod::Closed] {
            let r = report(&p, method).unwrap();
            assert!((r.mean_n - 2.5).abs() < 1e-12, "{r:?}");
            assert!((r.mean_n2 - 7.5).abs() < 1e-12, "{r:?}");
            assert!((r.mandel_q + 0.5).abs() < 1e-12, "{r:?}");
            assert!((r.g2 - 0.8).abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn vacuum_and_support() {
        let d = SipSystem::d_type(1.0, 1.0).unwrap();
        let p = point(d, 0.0, 2);
        assert_eq!(mean_n(&p, StatMethod::Series).unwrap(), 2.0);
        assert_eq!(mean_n2(&p, StatMethod::Series).unwrap(), 4.0);
        assert_eq!(pnd(&p, 1, StatMethod::Closed).unwrap(), 0.0);
        assert_eq!(pnd(&p, 2, StatMethod::Closed).unwrap(), 1.0);
        let p0 = point(d, 0.0, 0);
        assert!(matches!(mandel_q(&p0, StatMethod::Series), Err(Error::Undefined(_))));
    }
}
