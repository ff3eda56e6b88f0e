//! Flat key=value config files, weight-spec strings, and grid parsing.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{LabError, Result};
use crate::weights::{remark_f, zeta_power_f, HalfPlaneF, RadialWeight};

/// Keys accepted in config files; anything else is rejected with its line.
const ALLOWED_KEYS: &[&str] = &[
    "subcommand",
    "weight",
    "mu",
    "x",
    "p",
    "k",
    "p0",
    "m-max",
    "grid-depth",
    "tol",
    "tail-tol",
    "max-terms",
    "points",
    "output",
    "seed",
];

/// A parsed config file; flags win over its entries.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    map: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path)?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(LabError::Config(format!(
                    "{}:{}: expected key=value, got {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !ALLOWED_KEYS.contains(&key.as_str()) {
                return Err(LabError::Config(format!(
                    "{}:{}: unknown key {key:?} (allowed: {})",
                    path.display(),
                    lineno + 1,
                    ALLOWED_KEYS.join(", ")
                )));
            }
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(LabError::Config(format!(
                    "{}:{}: duplicate key {key:?}",
                    path.display(),
                    lineno + 1
                )));
            }
        }
        Ok(ConfigFile { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    /// Enforces that a `subcommand` entry, when present, matches the one
    /// actually invoked.
    pub fn check_subcommand(&self, name: &str) -> Result<()> {
        if let Some(sub) = self.get("subcommand") {
            if sub != name {
                return Err(LabError::Config(format!(
                    "config names subcommand {sub:?} but {name:?} was invoked"
                )));
            }
        }
        Ok(())
    }
}

/// Flag value, else config value, else default.
pub fn resolve<T: FromStr + Clone>(
    flag: &Option<T>,
    cfg: &ConfigFile,
    key: &str,
    default: Option<T>,
) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v.clone());
    }
    if let Some(s) = cfg.get(key) {
        return s
            .parse::<T>()
            .map_err(|e| LabError::Config(format!("config key {key}={s:?}: {e}")));
    }
    default.ok_or_else(|| LabError::Config(format!("missing required parameter {key:?}")))
}

/// Same as [`resolve`] but the parameter may stay absent.
pub fn resolve_opt<T: FromStr + Clone>(
    flag: &Option<T>,
    cfg: &ConfigFile,
    key: &str,
) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(Some(v.clone()));
    }
    match cfg.get(key) {
        Some(s) => s
            .parse::<T>()
            .map(Some)
            .map_err(|e| LabError::Config(format!("config key {key}={s:?}: {e}"))),
        None => Ok(None),
    }
}

/// Parses a radial weight spec: `power:t=...` or `dostanic:A=..,B=..,alpha=..`.
pub fn parse_radial_weight(spec: &str) -> Result<RadialWeight> {
    let (family, params) = split_family(spec);
    match family {
        "power" => {
            let p = parse_params(params, &["t"])?;
            RadialWeight::make_power(need(&p, "t", spec)?)
        }
        "dostanic" => {
            let p = parse_params(params, &["A", "B", "alpha"])?;
            RadialWeight::make_dostanic(
                need(&p, "A", spec)?,
                need(&p, "B", spec)?,
                need(&p, "alpha", spec)?,
            )
        }
        other => Err(LabError::Config(format!(
            "unknown radial weight family {other:?} in {spec:?} (expected power or dostanic)"
        ))),
    }
}

/// Parses a half-plane family spec: `zeta_pow:p0=...` or `remark35[:p0=...]`.
pub fn parse_halfplane_f(spec: &str) -> Result<HalfPlaneF> {
    let (family, params) = split_family(spec);
    match family {
        "zeta_pow" => {
            let p = parse_params(params, &["p0"])?;
            zeta_power_f(need(&p, "p0", spec)?)
        }
        "remark35" => {
            let p = parse_params(params, &["p0"])?;
            remark_f(*p.get("p0").unwrap_or(&5.0))
        }
        other => Err(LabError::Config(format!(
            "unknown half-plane weight family {other:?} in {spec:?} (expected zeta_pow or remark35)"
        ))),
    }
}

fn split_family(spec: &str) -> (&str, &str) {
    match spec.split_once(':') {
        Some((f, p)) => (f, p),
        None => (spec, ""),
    }
}

fn parse_params(params: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    if params.is_empty() {
        return Ok(map);
    }
    for item in params.split(',') {
        let Some((k, v)) = item.split_once('=') else {
            return Err(LabError::Config(format!(
                "weight parameter {item:?} is not key=value"
            )));
        };
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(LabError::Config(format!(
                "unknown weight parameter {k:?} (allowed: {})",
                allowed.join(", ")
            )));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|e| LabError::Config(format!("weight parameter {k}={v:?}: {e}")))?;
        map.insert(k.to_string(), v);
    }
    Ok(map)
}

fn need(map: &BTreeMap<String, f64>, key: &str, spec: &str) -> Result<f64> {
    map.get(key)
        .copied()
        .ok_or_else(|| LabError::Config(format!("weight spec {spec:?} is missing {key:?}")))
}

/// Parses an x-grid: `start:end[:step]` (inclusive, default step 1) or a
/// single value.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|e| LabError::Config(format!("grid component {s:?}: {e}")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, end] | [start, end, _] => {
            let start = parse(start)?;
            let end = parse(end)?;
            let step = if parts.len() == 3 { parse(parts[2])? } else { 1.0 };
            if !(step > 0.0) || end < start {
                return Err(LabError::Config(format!(
                    "grid {spec:?} must have end >= start and step > 0"
                )));
            }
            let mut xs = Vec::new();
            let n = ((end - start) / step).round() as usize;
            for i in 0..=n {
                let x = start + step * i as f64;
                if x <= end + 1e-12 {
                    xs.push(x);
                }
            }
            Ok(xs)
        }
        _ => Err(LabError::Config(format!("malformed grid spec {spec:?}"))),
    }
}

/// Parses a semicolon-separated list of complex points `re,im;re,im;...`.
pub fn parse_points(spec: &str) -> Result<Vec<num_complex::Complex64>> {
    let mut pts = Vec::new();
    for item in spec.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let Some((re, im)) = item.split_once(',') else {
            return Err(LabError::Config(format!(
                "point {item:?} is not re,im"
            )));
        };
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|e| LabError::Config(format!("point {item:?}: {e}")))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|e| LabError::Config(format!("point {item:?}: {e}")))?;
        pts.push(num_complex::Complex64::new(re, im));
    }
    if pts.is_empty() {
        return Err(LabError::Config("empty point list".into()));
    }
    Ok(pts)
}
