//! Oracle suite for one configured system: every check reports its worst
//! residual against a tolerance.

use std::fmt::Write as _;

use pacs_core::{
    kernel, kernel_idempotence_check, moment_checks, normalization, pnd, quadrature_for, report, weight_positivity_scan,
    CoeffMethod, Complex64, Family, NormMethod, PacsPoint, SipSystem, StatMethod,
};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

impl Check {
    fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        Check { name: name.into(), residual, tolerance, error: None }
    }

    fn from_result(name: &str, r: Result<f64, String>, tolerance: f64) -> Self {
        match r {
            Ok(v) => Check::new(name, v, tolerance),
            Err(e) => Check { name: name.into(), residual: f64::NAN, tolerance, error: Some(e) },
        }
    }

    pub fn pass(&self) -> bool {
        self.error.is_none() && self.residual <= self.tolerance
    }
}

fn sample_amplitudes(cfg: &RunConfig, k: usize) -> Vec<f64> {
    let v = cfg.grid.values();
    let step = (v.len() / k).max(1);
    v.iter().step_by(step).map(|&a| cfg.grid.amplitude(a)).filter(|&z| z > 0.0).collect()
}

fn coefficients(s: &SipSystem, ms: &[usize]) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for &m in ms {
        for n in 0..=60 {
            let raw = s.k_coeff(n, m, CoeffMethod::Raw).map_err(|e| e.to_string())?.norm();
            let closed = s.k_coeff(n, m, CoeffMethod::Closed).map_err(|e| e.to_string())?.norm();
            worst = worst.max((raw - closed).abs() / raw);
        }
    }
    Ok(worst)
}

fn normalizations(s: &SipSystem, ms: &[usize], zs: &[f64]) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for &m in ms {
        for &z in zs {
            let a = normalization(s, m, z * z, NormMethod::Series).map_err(|e| e.to_string())?;
            let b = normalization(s, m, z * z, NormMethod::Closed).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs() / a);
        }
    }
    Ok(worst)
}

fn statistics(s: &SipSystem, ms: &[usize], zs: &[f64]) -> Result<(f64, f64), String> {
    let (mut identity, mut agreement) = (0.0f64, 0.0f64);
    for &m in ms {
        for &z in zs {
            let p = PacsPoint::new(*s, Complex64::new(z, 0.0), m).map_err(|e| e.to_string())?;
            let a = report(&p, StatMethod::Series).map_err(|e| e.to_string())?;
            let scale = a.mandel_q.abs().max(1.0);
            identity = identity.max((a.mandel_q - a.mean_n * (a.g2 - 1.0)).abs() / scale);
            if m >= 1 {
                let b = report(&p, StatMethod::Closed).map_err(|e| e.to_string())?;
                agreement = agreement.max((a.mandel_q - b.mandel_q).abs() / scale);
            }
        }
    }
    Ok((identity, agreement))
}

fn pnd_normalization(s: &SipSystem, ms: &[usize], zs: &[f64]) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for &m in ms {
        for &z in zs {
            let p = PacsPoint::new(*s, Complex64::new(z, 0.0), m).map_err(|e| e.to_string())?;
            let mut total = 0.0;
            for n in 0..200_000 {
                let q = pnd(&p, n, StatMethod::Series).map_err(|e| e.to_string())?;
                total += q;
                if n > m + 50 && q < 1e-20 * total {
                    break;
                }
            }
            worst = worst.max((total - 1.0).abs());
        }
    }
    Ok(worst)
}

fn moments(s: &SipSystem, ms: &[usize]) -> Result<f64, String> {
    let checks = moment_checks(s, ms, 8, &quadrature_for(s)).map_err(|e| e.to_string())?;
    if let Some(c) = checks.iter().find(|c| !c.converged) {
        return Err(format!("quadrature did not converge for m = {}", c.m));
    }
    Ok(checks.iter().fold(0.0, |w, c| w.max(c.residual)))
}

fn kernels(s: &SipSystem, ms: &[usize], zs: &[f64]) -> Result<(f64, f64), String> {
    let (mut herm, mut diag) = (0.0f64, 0.0f64);
    for &m in ms {
        for (i, &a) in zs.iter().enumerate() {
            let z = Complex64::from_polar(a, 0.7 * i as f64);
            let zp = Complex64::from_polar(zs[(i + 3) % zs.len()], -1.3 * i as f64);
            let k1 = kernel(s, m, z, zp).map_err(|e| e.to_string())?;
            let k2 = kernel(s, m, zp, z).map_err(|e| e.to_string())?;
            let kd = kernel(s, m, z, z).map_err(|e| e.to_string())?;
            herm = herm.max((k1 - k2.conj()).norm());
            diag = diag.max((kd - 1.0).norm());
        }
    }
    Ok((herm, diag))
}

fn idempotence(s: &SipSystem, ms: &[usize]) -> Result<f64, String> {
    let (z, zp) = match s.family() {
        Family::DType | Family::AType1 => (0.5, 0.3),
        Family::CType | Family::AType2 => (0.2, 0.1),
    };
    let mut worst = 0.0f64;
    for &m in ms {
        let r = kernel_idempotence_check(s, m, Complex64::new(z, 0.0), Complex64::new(zp, 0.0), &quadrature_for(s))
            .map_err(|e| e.to_string())?;
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Negative of the smallest weight value, so that "residual ≤ 0" means positive.
fn positivity(s: &SipSystem, ms: &[usize]) -> Result<f64, String> {
    let hi = if s.convergence_radius().is_finite() { 0.99 * s.convergence_radius().powi(2) } else { 20.0 };
    let grid: Vec<f64> = (0..200).map(|i| 0.01 + (hi - 0.01) * i as f64 / 199.0).collect();
    let mut min = f64::INFINITY;
    for &m in ms {
        min = min.min(weight_positivity_scan(s, m, &grid).map_err(|e| e.to_string())?);
    }
    Ok(-min)
}

pub fn run_checks(cfg: &RunConfig) -> Vec<Check> {
    let s = &cfg.system;
    let ms = &cfg.m_list;
    let zs = sample_amplitudes(cfg, 12);
    let mut out = vec![
        Check::from_result("coefficients raw vs closed (n <= 60)", coefficients(s, ms), 1e-10),
        Check::from_result("normalization series vs closed", normalizations(s, ms, &zs), 1e-10),
    ];
    match statistics(s, ms, &zs) {
        Ok((id, agree)) => {
            out.push(Check::new("Q = <N>(g2 - 1)", id, 1e-10));
            out.push(Check::new("Q closed vs series (m >= 1)", agree, 1e-8));
        }
        Err(e) => out.push(Check::from_result("photon statistics", Err(e), 1e-10)),
    }
    out.push(Check::from_result("number distribution sums to 1", pnd_normalization(s, ms, &zs), 1e-10));
    out.push(Check::from_result("moment identity (n <= 8)", moments(s, ms), 1e-6));
    match kernels(s, ms, &zs) {
        Ok((h, d)) => {
            out.push(Check::new("kernel hermiticity", h, 1e-12));
            out.push(Check::new("kernel K(z,z) = 1", d, 1e-12));
        }
        Err(e) => out.push(Check::from_result("kernel", Err(e), 1e-12)),
    }
    out.push(Check::from_result("kernel idempotence", idempotence(s, ms), 1e-5));
    out.push(Check::from_result("weight positivity (-min weight)", positivity(s, ms), 0.0));
    out
}

pub fn format_report(cfg: &RunConfig, checks: &[Check]) -> String {
    let s = &cfg.system;
    let mut r = String::new();
    let params = match s.family() {
        Family::DType => format!("gamma={} c={}", s.gamma(), s.c()),
        Family::CType => format!("gamma={} rho={} alpha={}", s.gamma(), s.rho(), s.alpha()),
        Family::AType1 => format!("kappa={} rho={}", s.kappa(), s.rho()),
        Family::AType2 => format!("kappa={} nu={} alpha={}", s.kappa(), s.nu(), s.alpha()),
    };
    let _ = writeln!(r, "system {} {params} m={:?}", s.family().name(), cfg.m_list);
    for c in checks {
        let status = if c.pass() { "PASS" } else { "FAIL" };
        match &c.error {
            Some(e) => {
                let _ = writeln!(r, "{status} {:<40} error: {e}", c.name);
            }
            None => {
                let _ = writeln!(r, "{status} {:<40} residual {:.3e}  tolerance {:.1e}", c.name, c.residual, c.tolerance);
            }
        }
    }
    let failed = checks.iter().filter(|c| !c.pass()).count();
    let _ = writeln!(r, "{} of {} checks pass", checks.len() - failed, checks.len());
    r
}
