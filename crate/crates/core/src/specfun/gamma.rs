//! Log-gamma, digamma and trigamma for real and complex arguments.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_{2k} / (2k (2k-1)) for k = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Bernoulli numbers B_{2k} for k = 1..8.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Riemann zeta values ζ(k) for k = 2..=25.
const ZETA: [f64; 24] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_1,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_264_9,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_925_9,
    1.000_000_059_608_189_1,
    1.000_000_029_803_503_5,
];

/// ln Γ(1 + e) for |e| ≤ 1/2 from the zeta-value Taylor series.
fn ln_gamma_1p_small(e: f64) -> f64 {
    let mut sum = -EULER_GAMMA * e;
    let mut pow = -e;
    for k in 2..=60usize {
        pow *= -e;
        let z = if k <= 25 {
            ZETA[k - 2]
        } else {
            let kf = -(k as f64);
            1.0 + 2f64.powf(kf) + 3f64.powf(kf) + 4f64.powf(kf) + 5f64.powf(kf)
        };
        let t = z * pow / k as f64;
        sum += t;
        if t.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64 - 1.0);
    }
    a
}

fn stirling_real(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING_COEFFS {
        series += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if (0.5..1.5).contains(&x) {
        return ln_gamma_1p_small(x - 1.0);
    }
    if (1.5..2.5).contains(&x) {
        let e = x - 2.0;
        return ln_gamma_1p_small(e) + e.ln_1p();
    }
    if (2.5..3.5).contains(&x) {
        return ln_gamma_unchecked(x - 1.0) + (x - 1.0).ln();
    }
    if x >= 15.0 {
        return stirling_real(x);
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the argument inside the Lanczos range.
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    let t = x + LANCZOS_G - 0.5;
    LN_SQRT_2PI + (x - 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(ln_gamma_unchecked(x))
}

/// ln|Γ(x)| together with the sign of Γ(x), for any real x that is not a
/// nonpositive integer.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return ln_gamma(x).map(|v| (v, 1.0));
    }
    if x.is_nan() || x == x.floor() {
        return Err(Error::Domain(format!("Γ has a pole at {x}")));
    }
    let s = (PI * x).sin();
    let (lg, _) = ln_gamma_signed(1.0 - x)?;
    let sign = if s < 0.0 { -1.0 } else { 1.0 };
    Ok((PI.ln() - s.abs().ln() - lg, sign))
}

/// Γ(x) for x > 0, via exp(ln Γ).
pub fn gamma(x: f64) -> Result<f64> {
    ln_gamma(x).map(f64::exp)
}

/// ln Γ(x) for x > 0 without the error wrapper. The caller guarantees x > 0.
pub(crate) fn lgamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "lgamma({x})");
    ln_gamma_unchecked(x)
}

/// log(sin(πz)) for complex z, stable for large |Im z|. Any branch is
/// returned; callers only exponentiate sums of these.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(πz) = i e^{-iπz} (1 - e^{2iπz}) / 2
        let e = (i * z * 2.0 * PI).exp();
        -i * z * PI + (Complex64::new(1.0, 0.0) - e).ln() + i * (PI / 2.0) - 2f64.ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// ln Γ(z) for complex z away from the poles. The imaginary part is not
/// normalised to the principal branch.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re > 0.0 {
        return Complex64::new(ln_gamma_unchecked(z.re), 0.0);
    }
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_complex(one - z);
    }
    if z.norm() >= 15.0 {
        let inv = z.inv();
        let inv2 = inv * inv;
        let mut series = Complex64::new(0.0, 0.0);
        let mut p = inv;
        for c in STIRLING_COEFFS {
            series += p * c;
            p *= inv2;
        }
        return (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series;
    }
    let mut a = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += *c / (z + (k as f64 - 1.0));
    }
    let t = z + (LANCZOS_G - 0.5);
    (z - 0.5) * t.ln() - t + LN_SQRT_2PI + a.ln()
}

/// Digamma ψ(x) for real x that is not a nonpositive integer.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.floor() {
            return f64::NAN;
        }
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    let mut p = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        series += b * p / (2 * (k + 1)) as f64;
        p *= inv2;
    }
    acc + y.ln() - 0.5 / y - series
}

/// Trigamma ψ'(x) for real x that is not a nonpositive integer.
pub fn trigamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.floor() {
            return f64::NAN;
        }
        let s = (PI * x).sin();
        return -trigamma(1.0 - x) + PI * PI / (s * s);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv2 * inv;
    for b in BERNOULLI {
        series += b * p;
        p *= inv2;
    }
    acc + inv + 0.5 * inv2 + series
}

/// ln[Γ(a) / Γ(b)] for positive a and b.
pub fn ln_gamma_ratio(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? - ln_gamma(b)?)
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spot_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert_eq!(ln_gamma(2.0).unwrap(), 0.0);
        assert_relative_eq!(ln_gamma(0.5).unwrap(), 0.5 * PI.ln(), max_relative = 1e-15);
        assert_relative_eq!(ln_gamma(7.0).unwrap(), 720f64.ln(), max_relative = 1e-15);
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
    }

    #[test]
    fn reference_table() {
        // high-precision reference values of ln Γ(x)
        let table = [
            (1e-08, 18.420680738180208884),
            (0.001, 6.9071788853838536617),
            (0.1, 2.252712651734205902),
            (0.25, 1.2880225246980774574),
            (0.5, 0.57236494292470008707),
            (0.75, 0.20328095143129537148),
            (0.9, 0.066376239734742954426),
            (1.1, -0.049872441259839761785),
            (1.3, -0.10817480950786047846),
            (1.4616321449683622, -0.1214862905358496081),
            (1.5, -0.12078223763524522235),
            (1.7, -0.095807697407065873788),
            (1.9, -0.038984275923083361674),
            (2.1, 0.045437738544485179002),
            (2.5, 0.28468287047291915963),
            (3.14159, 0.82769199920149484156),
            (4.5, 2.4537365708424422205),
            (7.25, 7.0521854507385394449),
            (10.5, 13.940625219403763633),
            (14.9, 24.9241320022172783),
            (15.1, 25.458999750992663083),
            (23.7, 50.661475615919735159),
            (60.5, 186.57891783333785287),
            (137.3, 536.97217066303739406),
            (512.25, 2681.3815450223195254),
            (1000.5, 5908.6741758486774887),
            (12345.678, 103959.91990554605982),
        ];
        for (x, expected) in table {
            let v = ln_gamma(x).unwrap();
            assert!((v - expected).abs() <= 1e-14 * expected.abs(), "x = {x}: {v} vs {expected}");
        }
    }

    #[test]
    fn integer_arguments_match_factorials() {
        let mut fact = 1.0f64;
        for n in 1..60 {
            let x = n as f64;
            assert_relative_eq!(ln_gamma(x).unwrap(), fact.ln(), max_relative = 1e-14);
            fact *= x;
        }
    }

    #[test]
    fn recurrence_across_branch_boundaries() {
        for &x in &[0.3, 0.79, 0.81, 1.19, 1.21, 1.79, 1.81, 2.19, 2.21, 14.5, 14.99, 15.01] {
            let lhs = ln_gamma(x + 1.0).unwrap();
            let rhs = ln_gamma(x).unwrap() + f64::ln(x);
            assert!((lhs - rhs).abs() <= 2e-15 * lhs.abs().max(1.0), "x = {x}: {}", lhs - rhs);
        }
    }

    #[test]
    fn signed_reflection() {
        let (v, s) = ln_gamma_signed(-0.5).unwrap();
        assert_eq!(s, -1.0);
        assert_relative_eq!(v, (2.0 * PI.sqrt()).ln(), max_relative = 1e-14);
        let (_, s) = ln_gamma_signed(-1.5).unwrap();
        assert_eq!(s, 1.0);
        assert!(ln_gamma_signed(-2.0).is_err());
    }

    #[test]
    fn complex_matches_real_and_recurrence() {
        for &x in &[0.7, 3.3, 20.0] {
            let z = ln_gamma_complex(Complex64::new(x, 1e-300));
            assert_relative_eq!(z.re, ln_gamma(x).unwrap(), max_relative = 1e-13);
        }
        for &(re, im) in &[(0.3, 2.0), (-4.2, 7.5), (2.5, -30.0), (-60.0, 200.0), (11.0, 11.0)] {
            let z = Complex64::new(re, im);
            let lhs = ln_gamma_complex(z + 1.0).exp();
            let rhs = ln_gamma_complex(z).exp() * z;
            assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn complex_modulus_on_vertical_line() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for &y in &[0.5, 3.0, 40.0, 150.0] {
            let v = ln_gamma_complex(Complex64::new(0.5, y)).re * 2.0;
            let expected = PI.ln() - (PI * y).cosh().ln();
            assert!((v - expected).abs() < 1e-12 * expected.abs().max(1.0), "y = {y}");
        }
    }

    #[test]
    fn digamma_trigamma_values() {
        assert_relative_eq!(digamma(1.0), -EULER_GAMMA, max_relative = 1e-14);
        assert_relative_eq!(digamma(0.5), -EULER_GAMMA - 2.0 * 2f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(trigamma(1.0), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(trigamma(0.5), PI * PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(digamma(-0.5), 2.0 - EULER_GAMMA - 2.0 * 2f64.ln(), max_relative = 1e-13);
        for &x in &[0.2, 1.7, 9.9, 33.0] {
            let h = 1e-5;
            let fd = (ln_gamma(x + h).unwrap() - ln_gamma(x - h).unwrap()) / (2.0 * h);
            assert_relative_eq!(digamma(x), fd, max_relative = 1e-8);
            let fd2 = (digamma(x + h) - digamma(x - h)) / (2.0 * h);
            assert_relative_eq!(trigamma(x), fd2, max_relative = 1e-8);
        }
    }
}
