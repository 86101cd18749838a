//! Adaptive Gauss–Kronrod quadrature with helpers for integrands on (0, ∞)
//! and (0, 1) that are singular at the origin.

use crate::error::{Error, Result};

/// Gauss–Kronrod 21-point abscissae (descending, last is the midpoint).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_228_880,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss 10-point weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// How the neighbourhood of each end of the integration range is handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointStrategy {
    /// Integrate over [0, upper] with a power-law panel on [0, zero_split].
    PowerSingularitySplit { upper: f64 },
    /// Integrate over [0, ∞): power-law panel at 0, doubling panels outward.
    ExponentialTail,
    /// Integrate over [0, 1): power-law panel at 0, x = 1 − e^{−t} near 1.
    FiniteSupport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_strategy: EndpointStrategy,
    /// Width of the power-law extrapolation panel at x = 0.
    pub zero_split: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_subdivisions: 2000,
            endpoint_strategy: EndpointStrategy::ExponentialTail,
            zero_split: 1e-20,
        }
    }
}

impl QuadratureConfig {
    pub fn with_strategy(mut self, s: EndpointStrategy) -> Self {
        self.endpoint_strategy = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Parameter("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 || !(self.zero_split > 0.0) {
            return Err(Error::Parameter("invalid quadrature configuration".into()));
        }
        Ok(())
    }
}

/// Result of integrating a vector-valued integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub values: Vec<f64>,
    pub abs_errors: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    fn zeros(n: usize) -> Self {
        Self { values: vec![0.0; n], abs_errors: vec![0.0; n], evaluations: 0, converged: true }
    }

    fn absorb(&mut self, other: &QuadResult) {
        for i in 0..self.values.len() {
            self.values[i] += other.values[i];
            self.abs_errors[i] += other.abs_errors[i];
        }
        self.evaluations += other.evaluations;
        self.converged &= other.converged;
    }
}

struct Segment {
    a: f64,
    b: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
}

fn qk21_error(resk: f64, resg: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = (resk - resg).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

/// One 21-point Gauss–Kronrod panel for a vector-valued integrand.
pub fn gk21_vec<F>(f: &F, a: f64, b: f64, dim: usize) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(f64) -> Vec<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv: Vec<Vec<f64>> = Vec::with_capacity(21);
    fv.push(f(center));
    for &x in XGK.iter().take(10) {
        let d = half * x;
        fv.push(f(center - d));
        fv.push(f(center + d));
    }
    let mut values = vec![0.0; dim];
    let mut errors = vec![0.0; dim];
    for i in 0..dim {
        let fc = fv[0][i];
        let mut resk = WGK[10] * fc;
        let mut resg = 0.0;
        let mut resabs = resk.abs();
        for j in 0..10 {
            let (f1, f2) = (fv[1 + 2 * j][i], fv[2 + 2 * j][i]);
            resk += WGK[j] * (f1 + f2);
            resabs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                resg += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * resk;
        let mut resasc = WGK[10] * (fc - mean).abs();
        for j in 0..10 {
            let (f1, f2) = (fv[1 + 2 * j][i], fv[2 + 2 * j][i]);
            resasc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
        }
        let hl = half.abs();
        values[i] = resk * half;
        errors[i] = qk21_error(resk * half, resg * half, resabs * hl, resasc * hl);
    }
    (values, errors)
}

/// Scalar 21-point Gauss–Kronrod rule: (integral, error estimate).
pub fn gk21<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> (f64, f64) {
    let (v, e) = gk21_vec(&|x| vec![f(x)], a, b, 1);
    (v[0], e[0])
}

fn finished(total: &[f64], err: &[f64], rel_tol: f64, abs_tol: f64) -> bool {
    total.iter().zip(err).all(|(t, e)| *e <= abs_tol.max(rel_tol * t.abs()))
}

/// Globally adaptive bisection (largest normalised error first) of a
/// vector-valued integrand on [a, b].
pub fn integrate_vec<F>(f: &F, a: f64, b: f64, dim: usize, rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> QuadResult
where
    F: Fn(f64) -> Vec<f64>,
{
    let (values, errors) = gk21_vec(f, a, b, dim);
    let mut segs = vec![Segment { a, b, values, errors }];
    let mut evaluations = 21;
    loop {
        let mut total = vec![0.0; dim];
        let mut err = vec![0.0; dim];
        for s in &segs {
            for i in 0..dim {
                total[i] += s.values[i];
                err[i] += s.errors[i];
            }
        }
        let done = finished(&total, &err, rel_tol, abs_tol);
        if done || segs.len() >= max_subdivisions {
            return QuadResult { values: total, abs_errors: err, evaluations, converged: done };
        }
        let scale: Vec<f64> = total.iter().map(|t| abs_tol.max(rel_tol * t.abs())).collect();
        let worst = segs
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let score = s.errors.iter().zip(&scale).fold(0.0f64, |m, (e, sc)| m.max(e / sc));
                (k, score)
            })
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(k, _)| k)
            .expect("at least one segment");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval can no longer be split in floating point.
            segs.push(s);
            let mut total = vec![0.0; dim];
            let mut err = vec![0.0; dim];
            for s in &segs {
                for i in 0..dim {
                    total[i] += s.values[i];
                    err[i] += s.errors[i];
                }
            }
            return QuadResult { values: total, abs_errors: err, evaluations, converged: false };
        }
        let (v1, e1) = gk21_vec(f, s.a, mid, dim);
        let (v2, e2) = gk21_vec(f, mid, s.b, dim);
        evaluations += 42;
        segs.push(Segment { a: s.a, b: mid, values: v1, errors: e1 });
        segs.push(Segment { a: mid, b: s.b, values: v2, errors: e2 });
    }
}

/// Scalar adaptive integration on [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> QuadResult {
    integrate_vec(&|x| vec![f(x)], a, b, 1, rel_tol, abs_tol, max_subdivisions)
}

/// ∫₀^ε f assuming f(x) ≈ C x^p near 0, with p estimated from f(ε)/f(ε/2).
fn power_panel<F: Fn(f64) -> Vec<f64>>(f: &F, eps: f64, dim: usize) -> QuadResult {
    let f1 = f(eps);
    let f2 = f(0.5 * eps);
    let f4 = f(0.25 * eps);
    let mut r = QuadResult::zeros(dim);
    r.evaluations = 3;
    for i in 0..dim {
        if f1[i] == 0.0 {
            continue;
        }
        let ratio = f1[i] / f2[i];
        if !(ratio > 0.0) {
            // No clean power law: bound by the trapezoid and flag it.
            r.values[i] = 0.5 * eps * f1[i];
            r.abs_errors[i] = eps * (f1[i].abs() + f2[i].abs());
            continue;
        }
        let p = ratio.log2();
        if p <= -1.0 {
            r.values[i] = f64::INFINITY;
            r.abs_errors[i] = f64::INFINITY;
            r.converged = false;
            continue;
        }
        let v = eps * f1[i] / (p + 1.0);
        r.values[i] = v;
        // Logarithmic corrections to the power law show up as a drift in p.
        let p2 = (f2[i] / f4[i]).log2();
        let drift = (v * (p2 - p) / (p + 1.0)).abs();
        // Underflow below ε leaves no drift estimate; the panel is then bounded by ε·f(ε).
        r.abs_errors[i] = if drift.is_finite() { drift } else { eps * f1[i].abs() } + f64::EPSILON * v.abs();
    }
    r
}

/// Absolute tolerance for an outer panel: small against every accumulated component.
fn tail_abs(acc: &QuadResult, rel: f64, abs: f64) -> f64 {
    let least = acc.values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if least.is_finite() {
        abs.max(0.01 * rel * least)
    } else {
        abs
    }
}

fn sum_ok(acc: &QuadResult, rel_tol: f64, abs_tol: f64) -> bool {
    finished(&acc.values, &acc.abs_errors, rel_tol, abs_tol)
}

/// Integrates a vector-valued f over the range selected by
/// `cfg.endpoint_strategy`. Singular (integrable) behaviour at x = 0 is
/// handled by a power-law panel on [0, ε] and a logarithmic substitution
/// above it.
pub fn integrate_positive_vec<F>(f: &F, dim: usize, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Vec<f64>,
{
    integrate_positive_vec_with_complement(f, &|u: f64| f(1.0 - u), dim, cfg)
}

/// As [`integrate_positive_vec`], with `fc(u) = f(1 − u)` supplied
/// separately for the upper end of a finite support. `fc` receives the
/// exact distance u to x = 1; behaviour below u = e^{−36} is extrapolated
/// as a power law in u.
pub fn integrate_positive_vec_with_complement<F, G>(f: &F, fc: &G, dim: usize, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Vec<f64>,
    G: Fn(f64) -> Vec<f64>,
{
    cfg.validate()?;
    let eps = cfg.zero_split;
    let (rel, abs, maxsub) = (cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions);
    let mut acc = power_panel(f, eps, dim);
    let x0 = match cfg.endpoint_strategy {
        EndpointStrategy::PowerSingularitySplit { upper } => {
            if !(upper > eps) {
                return Err(Error::Parameter(format!("upper limit {upper} must exceed {eps}")));
            }
            upper
        }
        EndpointStrategy::ExponentialTail => 1.0,
        EndpointStrategy::FiniteSupport => 0.5,
    };
    // x = e^u on [ε, x0]
    let logf = |u: f64| {
        let x = u.exp();
        let mut v = f(x);
        v.iter_mut().for_each(|y| *y *= x);
        v
    };
    acc.absorb(&integrate_vec(&logf, eps.ln(), x0.ln(), dim, rel * 0.1, abs, maxsub));

    match cfg.endpoint_strategy {
        EndpointStrategy::PowerSingularitySplit { .. } => {}
        EndpointStrategy::ExponentialTail => {
            let mut lo = x0;
            let mut settled = false;
            for _ in 0..60 {
                let hi = 2.0 * lo;
                let panel = integrate_vec(f, lo, hi, dim, rel * 0.1, tail_abs(&acc, rel, abs), maxsub);
                acc.absorb(&panel);
                lo = hi;
                let small = panel
                    .values
                    .iter()
                    .zip(&acc.values)
                    .all(|(p, t)| p.abs() <= abs.max(0.1 * rel * t.abs()));
                if small && lo >= 16.0 {
                    settled = true;
                    break;
                }
            }
            acc.converged &= settled;
        }
        EndpointStrategy::FiniteSupport => {
            // x = 1 − e^{−t}, dx = e^{−t} dt
            let tf = |t: f64| {
                let u = (-t).exp();
                let mut v = fc(u);
                v.iter_mut().for_each(|y| *y *= u);
                v
            };
            let mut lo = std::f64::consts::LN_2;
            let mut hi = 2.0;
            let t_max = 36.0;
            loop {
                let panel = integrate_vec(&tf, lo, hi, dim, rel * 0.1, tail_abs(&acc, rel, abs), maxsub);
                acc.absorb(&panel);
                let small = panel
                    .values
                    .iter()
                    .zip(&acc.values)
                    .all(|(p, t)| p.abs() <= abs.max(0.01 * rel * t.abs()));
                if small {
                    break;
                }
                if hi >= t_max {
                    acc.absorb(&power_panel(fc, (-t_max).exp(), dim));
                    break;
                }
                lo = hi;
                hi = (2.0 * hi).min(t_max);
            }
        }
    }
    acc.converged &= sum_ok(&acc, rel, abs);
    Ok(acc)
}
