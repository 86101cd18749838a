//! The four shape-invariant system families, their remainder sequences,
//! energy ladders and expansion coefficients K_n^m.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::gamma::lgamma;

/// Above this value of n + m the raw products are accumulated as logarithms.
const LOG_SPACE_THRESHOLD: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Constant remainder γ, functional constant c (oscillator-like).
    DType,
    /// Constant remainder γ, coefficients Γ(k − ρ) (unit-disc domain).
    CType,
    /// Remainder κ²(2ρ + 2k − 1), entire coherent states.
    AType1,
    /// Remainder κ²(ν + 2k), unit-disc domain.
    AType2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::DType => "D",
            Family::CType => "C",
            Family::AType1 => "A1",
            Family::AType2 => "A2",
        }
    }
}

/// One shape-invariant system with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SipSystem {
    family: Family,
    gamma: f64,
    c: f64,
    rho: f64,
    nu: f64,
    kappa: f64,
    alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffMethod {
    /// Products of partial remainder sums over the Z-functional product.
    Raw,
    /// Closed Γ-function form.
    Closed,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(msg()))
    }
}

impl SipSystem {
    /// D-type system with remainder γ > 0 and functional constant c ≠ 0.
    pub fn d_type(gamma: f64, c: f64) -> Result<Self> {
        check(gamma > 0.0 && gamma.is_finite(), || format!("D-type needs γ > 0, got {gamma}"))?;
        check(c != 0.0 && c.is_finite(), || format!("D-type needs c ≠ 0, got {c}"))?;
        Ok(Self { family: Family::DType, gamma, c, rho: 0.0, nu: 0.0, kappa: 0.0, alpha: 0.0 })
    }

    /// C-type system with remainder γ > 0, ρ < 0 and phase parameter α.
    ///
    /// The weight function is positive only for ρ < −1; see
    /// [`SipSystem::measure_is_positive`].
    pub fn c_type(gamma: f64, rho: f64, alpha: f64) -> Result<Self> {
        check(gamma > 0.0 && gamma.is_finite(), || format!("C-type needs γ > 0, got {gamma}"))?;
        check(rho < 0.0 && rho.is_finite(), || format!("C-type needs ρ < 0, got {rho}"))?;
        check(alpha.is_finite(), || "α must be finite".into())?;
        Ok(Self { family: Family::CType, gamma, c: 0.0, rho, nu: 0.0, kappa: 0.0, alpha })
    }

    /// A-type system, first choice: R(k) = κ²(2ρ + 2k − 1) with κ > 0, ρ > 0.
    pub fn a_type1(kappa: f64, rho: f64) -> Result<Self> {
        check(kappa > 0.0 && kappa.is_finite(), || format!("A-type needs κ > 0, got {kappa}"))?;
        check(rho > 0.0 && rho.is_finite(), || format!("A-type-1 needs ρ > 0, got {rho}"))?;
        Ok(Self { family: Family::AType1, gamma: 0.0, c: kappa, rho, nu: 0.0, kappa, alpha: 0.0 })
    }

    /// A-type system, second choice: R(k) = κ²(ν + 2k) with κ > 0, ν > 0.
    pub fn a_type2(kappa: f64, nu: f64, alpha: f64) -> Result<Self> {
        check(kappa > 0.0 && kappa.is_finite(), || format!("A-type needs κ > 0, got {kappa}"))?;
        check(nu > 0.0 && nu.is_finite(), || format!("A-type-2 needs ν > 0, got {nu}"))?;
        check(alpha.is_finite(), || "α must be finite".into())?;
        let rho = 0.5 * nu + 0.5;
        Ok(Self { family: Family::AType2, gamma: 0.0, c: 0.0, rho, nu, kappa, alpha })
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Radius of the disc of amplitudes z on which the states exist.
    pub fn convergence_radius(&self) -> f64 {
        match self.family {
            Family::DType | Family::AType1 => f64::INFINITY,
            Family::CType | Family::AType2 => 1.0,
        }
    }

    /// Whether the parameters lie in the range where the weight function
    /// of the resolution of identity is positive.
    pub fn measure_is_positive(&self) -> bool {
        match self.family {
            Family::DType => self.gamma > 0.0,
            Family::CType => self.rho < -1.0,
            Family::AType1 => self.rho > 0.0,
            Family::AType2 => self.nu > 0.0,
        }
    }

    /// Remainder R(a_k), k ≥ 1.
    pub fn remainder(&self, k: usize) -> f64 {
        let k = k as f64;
        match self.family {
            Family::DType | Family::CType => self.gamma,
            Family::AType1 => self.kappa * self.kappa * (2.0 * self.rho + 2.0 * k - 1.0),
            Family::AType2 => self.kappa * self.kappa * (self.nu + 2.0 * k),
        }
    }

    /// Energy E_n = Σ_{k=1}^n R(a_k), closed form.
    pub fn energy(&self, n: usize) -> f64 {
        let n = n as f64;
        match self.family {
            Family::DType | Family::CType => n * self.gamma,
            Family::AType1 => self.kappa * self.kappa * n * (n + 2.0 * self.rho),
            Family::AType2 => self.kappa * self.kappa * n * (n + self.nu + 1.0),
        }
    }

    /// Energy by explicit summation of the remainders.
    pub fn energy_by_summation(&self, n: usize) -> f64 {
        (1..=n).map(|k| self.remainder(k)).sum()
    }

    /// Phase factor carried by K_n^m: e^{iαnγ} (C-type), e^{iαE_n}
    /// (A-type-2), 1 otherwise.
    pub fn coefficient_phase(&self, n: usize) -> Complex64 {
        match self.family {
            Family::CType => Complex64::from_polar(1.0, self.alpha * n as f64 * self.gamma),
            Family::AType2 => Complex64::from_polar(1.0, self.alpha * self.energy(n)),
            Family::DType | Family::AType1 => Complex64::new(1.0, 0.0),
        }
    }

    /// ln Z_k for the functional product in the denominator of K_n^m.
    /// `m` enters only through the A-type-2 phase index.
    fn ln_z(&self, k: usize, m: usize) -> Complex64 {
        let kf = k as f64;
        match self.family {
            Family::DType => Complex64::new(self.c, 0.0).ln(),
            Family::CType => Complex64::new(
                0.5 * (self.gamma * (kf - self.rho)).ln(),
                -self.alpha * self.gamma,
            ),
            Family::AType1 => Complex64::new(self.kappa.ln(), 0.0),
            Family::AType2 => Complex64::new(
                self.kappa.ln() + 0.5 * ((2.0 * kf + self.nu + 1.0) * (2.0 * kf + self.nu + 2.0)).ln(),
                -self.alpha * self.remainder(k - m + 1),
            ),
        }
    }

    fn z(&self, k: usize, m: usize) -> Complex64 {
        self.ln_z(k, m).exp()
    }

    /// K_n^m from the literal product of remainder partial sums:
    ///
    /// K_n^m = √(Π_{k=m+1}^{n+m} Σ_{s=k}^{n+m} R_s) / (Π_{k=m}^{n+m−1} Z_k · √(Π_{k=1}^{m} Σ_{s=k}^{n+m} R_s))
    fn k_raw(&self, n: usize, m: usize) -> Complex64 {
        let top = n + m;
        // suffix[k] = Σ_{s=k}^{top} R_s for k = 1..=top
        let mut suffix = vec![0.0; top + 2];
        for k in (1..=top).rev() {
            suffix[k] = suffix[k + 1] + self.remainder(k);
        }
        if top <= LOG_SPACE_THRESHOLD {
            let num: f64 = (m + 1..=top).map(|k| suffix[k]).product();
            let den: f64 = (1..=m).map(|k| suffix[k]).product();
            let zprod: Complex64 = (m..top).map(|k| self.z(k, m)).product();
            Complex64::new(num.sqrt(), 0.0) / (zprod * den.sqrt())
        } else {
            let ln_num: f64 = (m + 1..=top).map(|k| suffix[k].ln()).sum();
            let ln_den: f64 = (1..=m).map(|k| suffix[k].ln()).sum();
            let ln_z: Complex64 = (m..top).map(|k| self.ln_z(k, m)).sum();
            (Complex64::new(0.5 * (ln_num - ln_den), 0.0) - ln_z).exp()
        }
    }

    /// ln |K_n^m|² from the closed Γ-function form.
    pub fn ln_k_sq(&self, n: usize, m: usize) -> f64 {
        let nf = n as f64;
        let mf = m as f64;
        let ln_fact_n = lgamma(nf + 1.0);
        let ln_fact_top = lgamma(nf + mf + 1.0);
        match self.family {
            Family::DType => {
                (nf - mf) * self.gamma.ln() + 2.0 * ln_fact_n
                    - 2.0 * nf * self.c.abs().ln()
                    - ln_fact_top
            }
            Family::CType => {
                let r = self.rho;
                lgamma(mf - r) + 2.0 * ln_fact_n - mf * self.gamma.ln() - lgamma(nf + mf - r) - ln_fact_top
            }
            Family::AType1 => {
                let r2 = 2.0 * self.rho;
                2.0 * ln_fact_n + lgamma(2.0 * nf + 2.0 * mf + r2) + lgamma(nf + mf + r2)
                    - 2.0 * mf * self.kappa.ln()
                    - ln_fact_top
                    - 2.0 * lgamma(nf + 2.0 * mf + r2)
            }
            Family::AType2 => {
                let v = self.nu + 1.0;
                2.0 * ln_fact_n + lgamma(2.0 * mf + v) + lgamma(nf + mf + v)
                    - 2.0 * mf * self.kappa.ln()
                    - ln_fact_top
                    - 2.0 * lgamma(nf + 2.0 * mf + v)
            }
        }
    }

    /// Expansion coefficient K_n^m.
    pub fn k_coeff(&self, n: usize, m: usize, method: CoeffMethod) -> Result<Complex64> {
        let k = match method {
            CoeffMethod::Raw => self.k_raw(n, m),
            CoeffMethod::Closed => {
                let sign = if self.family == Family::DType && self.c < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                self.coefficient_phase(n) * (sign * (0.5 * self.ln_k_sq(n, m)).exp())
            }
        };
        if !k.is_finite() || k == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain(format!("K_{n}^{m} is not representable in double precision")));
        }
        Ok(k)
    }

    /// ln(1/|K_n^m|²), closed form.
    pub fn ln_inv_k_sq(&self, n: usize, m: usize) -> f64 {
        -self.ln_k_sq(n, m)
    }

    /// 1/|K_n^m|², computed in log space.
    pub fn inv_k_sq(&self, n: usize, m: usize) -> Result<f64> {
        let v = self.ln_inv_k_sq(n, m).exp();
        if !v.is_finite() || v == 0.0 {
            return Err(Error::Domain(format!("1/|K_{n}^{m}|² is not representable in double precision")));
        }
        Ok(v)
    }
}

/// A photon-added coherent state label: amplitude z and added count m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacsPoint {
    pub z: Complex64,
    pub m: usize,
    pub system: SipSystem,
}

impl PacsPoint {
    pub fn new(system: SipSystem, z: Complex64, m: usize) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::Domain("amplitude must be finite".into()));
        }
        if z.norm() >= system.convergence_radius() {
            return Err(Error::Domain(format!(
                "|z| = {} outside the convergence disc of radius {}",
                z.norm(),
                system.convergence_radius()
            )));
        }
        Ok(Self { z, m, system })
    }

    /// x = |z|²
    pub fn x(&self) -> f64 {
        self.z.norm_sqr()
    }
}
