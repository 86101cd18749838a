//! Flat `key = value` run configuration with `#` comments, figure presets
//! and command-line overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use pacs_core::{Family, SipSystem};

use crate::Command;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// Where the offending value came from, e.g. "config line 4" or "--param".
    pub origin: String,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.key {
            Some(k) => write!(f, "{}: field '{}': {}", self.origin, k, self.message),
            None => write!(f, "{}: {}", self.origin, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

pub const KEYS: &[&str] = &[
    "family", "gamma", "c", "kappa", "rho", "nu", "alpha", "m", "z_min", "z_max", "count", "scale", "z", "n_max",
    "method", "out",
];

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    origin: String,
}

/// Key/value pairs with their provenance, later layers overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), ConfigError> {
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError {
                origin: origin.to_string(),
                key: Some(key.to_string()),
                message: format!("unknown key (expected one of {})", KEYS.join(", ")),
            });
        }
        self.entries.insert(key.to_string(), Entry { value: value.trim().to_string(), origin: origin.to_string() });
        Ok(())
    }

    pub fn parse_text(&mut self, text: &str, source: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{source} line {}", i + 1);
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError { origin, key: None, message: format!("expected key = value, got '{line}'") });
            };
            self.set(k, v, &origin)?;
        }
        Ok(())
    }

    pub fn parse_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            origin: path.display().to_string(),
            key: None,
            message: format!("cannot read config: {e}"),
        })?;
        self.parse_text(&text, &format!("{}", path.display()))
    }

    /// Applies a `key=value` override from the command line.
    pub fn apply_param(&mut self, kv: &str) -> Result<(), ConfigError> {
        let Some((k, v)) = kv.split_once('=') else {
            return Err(ConfigError { origin: "--param".into(), key: None, message: format!("expected key=value, got '{kv}'") });
        };
        self.set(k, v, "--param")
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        let origin = self.get(key).map(|e| e.origin.clone()).unwrap_or_else(|| "configuration".into());
        ConfigError { origin, key: Some(key.to_string()), message: message.into() }
    }

    fn real(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => match e.value.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => Err(self.err(key, format!("'{}' is not a finite number", e.value))),
            },
        }
    }

    fn real_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    fn reals(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some(e) = self.get(key) else { return Ok(None) };
        e.value
            .split(',')
            .map(|s| match s.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(self.err(key, format!("'{}' is not a finite number", s.trim()))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn integer(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<usize>()
                .map(Some)
                .map_err(|_| self.err(key, format!("'{}' is not a nonnegative integer", e.value))),
        }
    }

    fn integers(&self, key: &str) -> Result<Option<Vec<usize>>, ConfigError> {
        let Some(e) = self.get(key) else { return Ok(None) };
        e.value
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| self.err(key, format!("'{}' is not a nonnegative integer", s.trim()))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.get(key).map(|e| e.value.as_str())
    }
}

/// Abscissa of a grid: the amplitude |z| or x = |z|².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Amplitude,
    Squared,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: Scale,
}

impl Grid {
    /// Abscissa values, evenly spaced and inclusive of both ends.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64)
            .collect()
    }

    /// |z| for an abscissa value.
    pub fn amplitude(&self, v: f64) -> f64 {
        match self.scale {
            Scale::Amplitude => v,
            Scale::Squared => v.sqrt(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self.scale {
            Scale::Amplitude => "abs_z",
            Scale::Squared => "x",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    Closed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub system: SipSystem,
    pub m_list: Vec<usize>,
    pub grid: Grid,
    /// Amplitudes for number-distribution panels.
    pub z_points: Vec<f64>,
    pub n_max: usize,
    pub method: Method,
    pub output_path: PathBuf,
}

fn family_key(f: Family) -> &'static str {
    match f {
        Family::DType => "d",
        Family::CType => "c",
        Family::AType1 => "a1",
        Family::AType2 => "a2",
    }
}

/// Preset key/value pairs for a command.
pub fn preset(command: Command) -> Vec<(&'static str, &'static str)> {
    use Command::*;
    let d = [("family", "d"), ("gamma", "1"), ("c", "1")];
    let a1 = [("family", "a1"), ("kappa", "1"), ("rho", "0.5")];
    let mut v: Vec<(&str, &str)> = match command {
        Fig1 => [&d[..], &[("m", "1,2,3,4"), ("z_min", "0.01"), ("z_max", "5"), ("scale", "x")]].concat(),
        Fig2 => [&d[..], &[("m", "1,2,5,10"), ("z_min", "0.05"), ("z_max", "10"), ("scale", "abs")]].concat(),
        Fig3 => [&d[..], &[("m", "0,1,2,3"), ("z", "2,5"), ("n_max", "60")]].concat(),
        Fig4 => vec![("family", "c"), ("gamma", "1"), ("rho", "-2"), ("alpha", "0"), ("m", "0,1,2,3"), ("z_min", "0.01"), ("z_max", "0.99"), ("scale", "x")],
        Fig5 => vec![("family", "c"), ("gamma", "1"), ("rho", "-4"), ("alpha", "0"), ("m", "1,2,5,10"), ("z_min", "0.005"), ("z_max", "0.99"), ("scale", "abs")],
        Fig6 => vec![("family", "c"), ("gamma", "1"), ("rho", "-8"), ("alpha", "0"), ("m", "0,1,2,3"), ("z", "0.5,0.8"), ("n_max", "60")],
        Fig7 => [&a1[..], &[("m", "0,1,2,3"), ("z_min", "0.01"), ("z_max", "30"), ("scale", "x")]].concat(),
        Fig8 => [&a1[..], &[("m", "1,2,5,10"), ("z_min", "0.05"), ("z_max", "10"), ("scale", "abs")]].concat(),
        Fig9 => [&a1[..], &[("m", "0,1,2,3"), ("z", "5,20"), ("n_max", "60")]].concat(),
        Fig10 => vec![("family", "a2"), ("kappa", "1"), ("nu", "1.5"), ("alpha", "0"), ("m", "0,1,2"), ("z_min", "0.01"), ("z_max", "0.99"), ("scale", "x")],
        Fig11 => vec![("family", "a2"), ("kappa", "1"), ("nu", "5"), ("alpha", "0"), ("m", "1,2,5,10"), ("z_min", "0.005"), ("z_max", "0.99"), ("scale", "abs")],
        Fig12 => vec![("family", "a2"), ("kappa", "1"), ("nu", "5"), ("alpha", "0"), ("m", "0,1,2,3"), ("z", "0.5,0.8"), ("n_max", "60")],
        Verify | Stats | Pnd | Weight | Sweep => d.to_vec(),
    };
    v.push(("count", "200"));
    v
}

impl RunConfig {
    /// Preset, then config file, then `--param` overrides.
    pub fn resolve(command: Command, file: Option<&Path>, params: &[String], out: Option<&Path>) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (k, v) in preset(command) {
            raw.set(k, v, "preset")?;
        }
        if let Some(p) = file {
            raw.parse_file(p)?;
        }
        for p in params {
            raw.apply_param(p)?;
        }
        Self::from_raw(command, &raw, out)
    }

    pub fn from_raw(command: Command, raw: &RawConfig, out: Option<&Path>) -> Result<Self, ConfigError> {
        let family = match raw.text("family").unwrap_or("d").to_ascii_lowercase().as_str() {
            "d" | "dtype" | "d-type" => Family::DType,
            "c" | "ctype" | "c-type" => Family::CType,
            "a1" | "atype1" | "a-type-1" => Family::AType1,
            "a2" | "atype2" | "a-type-2" => Family::AType2,
            other => return Err(raw.err("family", format!("unknown family '{other}' (d, c, a1, a2)"))),
        };
        let gamma = raw.real_or("gamma", 1.0)?;
        let alpha = raw.real_or("alpha", 0.0)?;
        let kappa = raw.real_or("kappa", 1.0)?;
        let system = match family {
            Family::DType => {
                let c = raw.real_or("c", gamma.abs().sqrt())?;
                SipSystem::d_type(gamma, c).map_err(|e| raw.err("gamma", e.to_string()))?
            }
            Family::CType => {
                let rho = raw.real("rho")?.ok_or_else(|| raw.err("rho", "required for the C-type family"))?;
                SipSystem::c_type(gamma, rho, alpha).map_err(|e| raw.err(if gamma > 0.0 { "rho" } else { "gamma" }, e.to_string()))?
            }
            Family::AType1 => {
                let rho = raw.real("rho")?.ok_or_else(|| raw.err("rho", "required for the A-type-1 family"))?;
                SipSystem::a_type1(kappa, rho).map_err(|e| raw.err(if kappa > 0.0 { "rho" } else { "kappa" }, e.to_string()))?
            }
            Family::AType2 => {
                let nu = raw.real("nu")?.ok_or_else(|| raw.err("nu", "required for the A-type-2 family"))?;
                SipSystem::a_type2(kappa, nu, alpha).map_err(|e| raw.err(if kappa > 0.0 { "nu" } else { "kappa" }, e.to_string()))?
            }
        };
        let m_list = raw.integers("m")?.unwrap_or_else(|| vec![0, 1, 2, 3]);
        if m_list.is_empty() {
            return Err(raw.err("m", "at least one m value is needed"));
        }
        let scale = match raw.text("scale").unwrap_or("abs") {
            "abs" | "|z|" | "amplitude" => Scale::Amplitude,
            "x" | "sq" | "|z|^2" | "squared" => Scale::Squared,
            other => return Err(raw.err("scale", format!("unknown scale '{other}' (abs or x)"))),
        };
        let radius = system.convergence_radius();
        let limit = match scale {
            Scale::Amplitude => radius,
            Scale::Squared => radius * radius,
        };
        let default_max = if limit.is_finite() { 0.99 * limit } else { 5.0 };
        let grid = Grid {
            min: raw.real_or("z_min", 0.01 * default_max.min(1.0))?,
            max: raw.real_or("z_max", default_max)?,
            count: raw.integer("count")?.unwrap_or(200),
            scale,
        };
        if grid.count == 0 {
            return Err(raw.err("count", "grid needs at least one point"));
        }
        if grid.min.is_nan() || grid.min < 0.0 {
            return Err(raw.err("z_min", "grid must start at a nonnegative value"));
        }
        if grid.max < grid.min {
            return Err(raw.err("z_max", "z_max is below z_min"));
        }
        if grid.max >= limit {
            return Err(raw.err("z_max", format!("grid must lie strictly inside the domain (< {limit}) of the {} family", family.name())));
        }
        let z_points = raw.reals("z")?.unwrap_or_else(|| vec![0.5 * default_max.min(1.0)]);
        for &z in &z_points {
            if !(z >= 0.0 && z < radius) {
                return Err(raw.err("z", format!("|z| = {z} is outside the domain [0, {radius})")));
            }
        }
        let method = match raw.text("method").unwrap_or("series") {
            "series" => Method::Series,
            "closed" => Method::Closed,
            other => return Err(raw.err("method", format!("unknown method '{other}' (series or closed)"))),
        };
        let output_path = match (out, raw.text("out")) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(p)) => PathBuf::from(p),
            (None, None) => PathBuf::from(format!("{}.csv", command.name())),
        };
        Ok(RunConfig {
            command,
            system,
            m_list,
            grid,
            z_points,
            n_max: raw.integer("n_max")?.unwrap_or(60),
            method,
            output_path,
        })
    }

    pub fn family_key(&self) -> &'static str {
        family_key(self.system.family())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_overrides() {
        let mut raw = RawConfig::default();
        raw.parse_text("# header\nfamily = c  # unit disc\nrho=-3\n\nm = 1, 2\n", "cfg").unwrap();
        raw.apply_param("rho=-5").unwrap();
        let cfg = RunConfig::from_raw(Command::Stats, &raw, None).unwrap();
        assert_eq!(cfg.system.family(), Family::CType);
        assert_eq!(cfg.system.rho(), -5.0);
        assert_eq!(cfg.m_list, vec![1, 2]);
        assert!(cfg.grid.max < 1.0);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let mut raw = RawConfig::default();
        let e = raw.parse_text("family = d\ncolour = red\n", "run.cfg").unwrap_err();
        assert_eq!(e.origin, "run.cfg line 2");
        assert_eq!(e.key.as_deref(), Some("colour"));

        let mut raw = RawConfig::default();
        raw.parse_text("gamma = -1\n", "run.cfg").unwrap();
        let e = RunConfig::from_raw(Command::Stats, &raw, None).unwrap_err();
        assert_eq!(e.origin, "run.cfg line 1");
        assert!(e.to_string().contains("gamma"));
    }

    #[test]
    fn grid_must_stay_inside_domain() {
        let mut raw = RawConfig::default();
        raw.parse_text("family = a2\nnu = 2\nz_max = 1.0\n", "cfg").unwrap();
        let e = RunConfig::from_raw(Command::Sweep, &raw, None).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("z_max"));
    }

    #[test]
    fn presets_follow_captions() {
        let f6 = RunConfig::resolve(Command::Fig6, None, &[], None).unwrap();
        assert_eq!(f6.system.rho(), -8.0);
        assert_eq!(f6.z_points, vec![0.5, 0.8]);
        let f11 = RunConfig::resolve(Command::Fig11, None, &["m=3".into()], None).unwrap();
        assert_eq!(f11.system.nu(), 5.0);
        assert_eq!(f11.m_list, vec![3]);
        assert_eq!(f11.grid.count, 200);
    }
}
