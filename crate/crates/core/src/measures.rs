//! Resolution-of-identity weights ω_m and the moment problem
//! ∫₀^R xⁿ W_m(x) dx = |K_n^m|² with W_m = π N_m² ω_m.

use std::cell::RefCell;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_positive_vec_with_complement, EndpointStrategy, QuadResult, QuadratureConfig};
use crate::specfun::gamma::lgamma;
use crate::specfun::meijer::{meijer_g_q0, meijer_g_q0_complement, ContourConfig, MeijerGSpec};
use crate::states::{ln_gram_closed, TruncationPolicy};
use crate::systems::{Family, SipSystem};

/// W_m(x) = exp(ln_const) · G^{q,0}_{p,q}(scale · x | a; b).
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpec {
    pub ln_const: f64,
    pub g: MeijerGSpec,
}

/// Meijer G representation of the moment density of each family.
pub fn density_spec(system: &SipSystem, m: usize) -> Result<DensitySpec> {
    let mf = m as f64;
    let (ln_const, a, b, scale) = match system.family() {
        Family::DType => {
            let beta = system.c() * system.c() / system.gamma();
            (beta.ln() - mf * system.gamma().ln(), vec![mf], vec![0.0, 0.0], beta)
        }
        Family::CType => {
            let r = system.rho();
            (lgamma(mf - r) - mf * system.gamma().ln(), vec![mf, mf - r - 1.0], vec![0.0, 0.0], 1.0)
        }
        Family::AType1 => {
            let r = system.rho();
            let t = 2.0 * mf + 2.0 * r - 1.0;
            (
                (2.0 * mf + 2.0 * r - 3.0) * 2f64.ln()
                    - 0.5 * std::f64::consts::PI.ln()
                    - 2.0 * mf * system.kappa().ln(),
                vec![mf, t, t],
                vec![0.0, 0.0, mf + 2.0 * r - 1.0, mf + r - 1.0, mf + r - 0.5],
                0.25,
            )
        }
        Family::AType2 => {
            let v = system.nu();
            (
                lgamma(2.0 * mf + v + 1.0) - 2.0 * mf * system.kappa().ln(),
                vec![mf, 2.0 * mf + v, 2.0 * mf + v],
                vec![0.0, 0.0, mf + v],
                1.0,
            )
        }
    };
    Ok(DensitySpec { ln_const, g: MeijerGSpec::new(a, b, scale)? })
}

fn support_upper(system: &SipSystem) -> f64 {
    system.convergence_radius().powi(2)
}

fn check_support(system: &SipSystem, x: f64) -> Result<()> {
    if !(x > 0.0) || x >= support_upper(system) {
        return Err(Error::Domain(format!(
            "x = {x} outside the support (0, {}) of the weight",
            support_upper(system)
        )));
    }
    Ok(())
}

fn density_contour() -> ContourConfig {
    ContourConfig { rel_tol: 1e-11, ..ContourConfig::default() }
}

/// Moment density W_m(x) = π N_m(x)² ω_m(x), evaluated as a Meijer G-function.
pub fn moment_density(system: &SipSystem, m: usize, x: f64) -> Result<f64> {
    check_support(system, x)?;
    let spec = density_spec(system, m)?;
    density_value(&spec, x)
}

fn density_value(spec: &DensitySpec, x: f64) -> Result<f64> {
    let g = meijer_g_q0(&spec.g, x, &density_contour())?;
    Ok(spec.ln_const.exp() * g.value.re)
}

/// Density at x = 1 − u; only used on the unit-interval supports (scale 1).
fn density_value_complement(spec: &DensitySpec, u: f64) -> Result<f64> {
    debug_assert!(spec.g.scale == 1.0);
    let g = meijer_g_q0_complement(&spec.g, u, &density_contour())?;
    Ok(spec.ln_const.exp() * g.value.re)
}

/// Weight function ω_m(x) of the resolution of identity, x = |z|².
///
/// The normalization factor 1/N_m² is evaluated as a generalized
/// hypergeometric series and the density factor as a Meijer G contour
/// integral.
pub fn weight(system: &SipSystem, m: usize, x: f64) -> Result<f64> {
    check_support(system, x)?;
    let w = moment_density(system, m, x)?;
    let ln_s = ln_gram_closed(system, m, x, &TruncationPolicy::default())?;
    Ok(w * ln_s.exp() / std::f64::consts::PI)
}

/// Closed form of ω₀(x) where one is known: D-type, C-type, A-type-2, and
/// A-type-1 at ρ = 1/2.
pub fn weight_m0_closed(system: &SipSystem, x: f64) -> Option<f64> {
    let pi = std::f64::consts::PI;
    match system.family() {
        Family::DType => Some(system.c() * system.c() / (pi * system.gamma())),
        Family::CType => Some(-(1.0 + system.rho()) / (pi * (1.0 - x).powi(2))),
        Family::AType2 => Some(system.nu() / (pi * (1.0 - x).powi(2))),
        Family::AType1 if system.rho() == 0.5 => {
            let r = x.sqrt();
            Some(r.cosh() * (-r).exp() / (2.0 * pi * r))
        }
        Family::AType1 => None,
    }
}

/// Default quadrature set-up for the support of each family.
pub fn quadrature_for(system: &SipSystem) -> QuadratureConfig {
    let strategy = if system.convergence_radius().is_finite() {
        EndpointStrategy::FiniteSupport
    } else {
        EndpointStrategy::ExponentialTail
    };
    QuadratureConfig { rel_tol: 1e-9, ..QuadratureConfig::default() }.with_strategy(strategy)
}

/// ∫ x^k W_m(x) dx for k = 0..=n_max over the configured range.
pub fn moment_integrals(system: &SipSystem, m: usize, n_max: usize, quad: &QuadratureConfig) -> Result<QuadResult> {
    let spec = density_spec(system, m)?;
    if spec.g.p() == spec.g.q() {
        let delta: f64 = spec.g.a.iter().sum::<f64>() - spec.g.b.iter().sum::<f64>();
        if delta <= 0.0 {
            return Err(Error::Divergence(format!(
                "moment density behaves as (1 − x)^{} at x = 1 and is not integrable",
                delta - 1.0
            )));
        }
    }
    let upper = support_upper(system);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let powers = |x: f64, w: Result<f64>| -> Vec<f64> {
        match w {
            Ok(w) => {
                let mut out = Vec::with_capacity(n_max + 1);
                let mut p = w;
                for _ in 0..=n_max {
                    out.push(p);
                    p *= x;
                }
                out
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                vec![f64::NAN; n_max + 1]
            }
        }
    };
    let f = |x: f64| powers(x, if x >= upper { Ok(0.0) } else { density_value(&spec, x) });
    // Upper end of a finite support, x = 1 − u with u exact.
    let fc = |u: f64| powers(1.0 - u, density_value_complement(&spec, u));
    let r = integrate_positive_vec_with_complement(&f, &fc, n_max + 1, quad)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r)
}

/// Outcome of one moment identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck {
    pub m: usize,
    pub n: usize,
    pub integral: f64,
    /// |K_n^m|²
    pub expected: f64,
    /// |integral − expected| / expected
    pub residual: f64,
    pub abs_error: f64,
    pub converged: bool,
}

fn checks_from(system: &SipSystem, m: usize, r: &QuadResult) -> Vec<MomentCheck> {
    r.values
        .iter()
        .zip(&r.abs_errors)
        .enumerate()
        .map(|(n, (&integral, &abs_error))| {
            let expected = system.ln_k_sq(n, m).exp();
            MomentCheck {
                m,
                n,
                integral,
                expected,
                residual: (integral - expected).abs() / expected,
                abs_error,
                converged: r.converged,
            }
        })
        .collect()
}

/// Checks ∫ xⁿ W_m(x) dx = |K_n^m|² for a single n.
pub fn moment_check(system: &SipSystem, m: usize, n: usize, quad: &QuadratureConfig) -> Result<MomentCheck> {
    let r = moment_integrals(system, m, n, quad)?;
    Ok(checks_from(system, m, &r)[n])
}

/// Moment checks for every m in `ms` and n = 0..=n_max, parallel over m.
pub fn moment_checks(system: &SipSystem, ms: &[usize], n_max: usize, quad: &QuadratureConfig) -> Result<Vec<MomentCheck>> {
    let per_m: Vec<Result<Vec<MomentCheck>>> = ms
        .par_iter()
        .map(|&m| moment_integrals(system, m, n_max, quad).map(|r| checks_from(system, m, &r)))
        .collect();
    let mut out = Vec::new();
    for r in per_m {
        out.extend(r?);
    }
    Ok(out)
}

/// Minimum of ω_m over the grid.
pub fn weight_positivity_scan(system: &SipSystem, m: usize, grid: &[f64]) -> Result<f64> {
    let values: Vec<Result<f64>> = grid.par_iter().map(|&x| weight(system, m, x)).collect();
    let mut min = f64::INFINITY;
    for v in values {
        min = min.min(v?);
    }
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m0_weights_match_closed_forms() {
        let systems = [
            SipSystem::d_type(1.0, 1.0).unwrap(),
            SipSystem::d_type(2.0, 0.5).unwrap(),
            SipSystem::c_type(1.0, -2.0, 0.0).unwrap(),
            SipSystem::a_type1(1.0, 0.5).unwrap(),
            SipSystem::a_type2(1.0, 1.5, 0.0).unwrap(),
        ];
        for s in systems {
            for &x in &[0.01, 0.2, 0.5, 0.9] {
                let v = weight(&s, 0, x).unwrap();
                let e = weight_m0_closed(&s, x).unwrap();
                assert!((v - e).abs() <= 1e-8 * e, "{:?} x={x}: {v} vs {e}", s.family());
            }
        }
    }

    #[test]
    fn d_type_moments() {
        let d = SipSystem::d_type(1.0, 1.0).unwrap();
        let q = quadrature_for(&d);
        let r = moment_check(&d, 0, 3, &q).unwrap();
        assert!((r.expected - 6.0).abs() < 1e-12);
        assert!(r.residual <= 1e-8, "{r:?}");
        let r = moment_check(&d, 2, 0, &q).unwrap();
        assert!(r.residual <= 1e-6, "{r:?}");
    }

    #[test]
    fn c_type_moments() {
        let c = SipSystem::c_type(1.0, -2.0, 0.0).unwrap();
        for r in moment_checks(&c, &[1], 2, &quadrature_for(&c)).unwrap() {
            assert!(r.residual <= 1e-6, "{r:?}");
        }
    }

    #[test]
    fn non_integrable_density() {
        let c = SipSystem::c_type(1.0, -0.5, 0.0).unwrap();
        assert!(matches!(moment_check(&c, 0, 0, &quadrature_for(&c)), Err(Error::Divergence(_))));
        assert!(weight(&c, 0, 0.5).unwrap() < 0.0);
    }

    #[test]
    fn weakly_integrable_endpoint() {
        for s in [SipSystem::a_type2(1.0, 0.2, 0.0).unwrap(), SipSystem::c_type(1.0, -1.05, 0.0).unwrap()] {
            let checks = moment_checks(&s, &[0, 2], 8, &quadrature_for(&s)).unwrap();
            assert!(checks.iter().all(|c| c.converged && c.residual < 1e-8), "{checks:?}");
        }
    }

    #[test]
    fn support_errors() {
        let c = SipSystem::c_type(1.0, -2.0, 0.0).unwrap();
        assert!(matches!(weight(&c, 1, 1.0), Err(Error::Domain(_))));
        assert!(matches!(weight(&c, 1, 0.0), Err(Error::Domain(_))));
    }
}
