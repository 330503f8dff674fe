//! Run configuration: a flat JSON document merged under command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::beams::KappaSign;
use crate::em::Polarization;
use crate::geometry::SpaceVec;
use crate::oracles::quad::QuadratureSpec;
use crate::signals::{make_signal, AnalyticSignal, SignalKind};

/// Keys accepted in a config file; each has a `--key` flag.
pub const KEYS: [&str; 16] = [
    "y", "u", "t", "grid", "signal", "kappa", "pol", "eps-ladder", "tol-rel", "tol-abs", "format", "out", "seed",
    "test-fn", "points", "x",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Raw string settings, keyed as in [`KEYS`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(pub BTreeMap<String, String>);

impl Settings {
    /// Reads a flat JSON object. Scalars are taken as written, arrays of
    /// scalars are joined with commas.
    pub fn from_json(text: &str) -> Result<Settings, ConfigError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
        let Value::Object(map) = v else {
            return err("config: expected a JSON object");
        };
        let mut out = BTreeMap::new();
        for (k, v) in map {
            if !KEYS.contains(&k.as_str()) {
                return err(format!("config: unknown key {k:?}"));
            }
            out.insert(k.clone(), scalar_text(&v).ok_or_else(|| ConfigError(format!("config: key {k:?} must be flat")))?);
        }
        Ok(Settings(out))
    }

    pub fn from_file(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Entries of `other` replace ours.
    pub fn overlay(mut self, other: Settings) -> Settings {
        self.0.extend(other.0);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Array(items) => items
            .iter()
            .map(|i| match i {
                Value::Array(_) | Value::Object(_) => None,
                other => scalar_text(other),
            })
            .collect::<Option<Vec<_>>>()
            .map(|v| v.join(",")),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// One sampled axis `name=min:max:count`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    /// Index into `(x1, x2, x3, t)`.
    pub fn slot(&self) -> usize {
        match self.name.as_str() {
            "x1" => 0,
            "x2" => 1,
            "x3" => 2,
            _ => 3,
        }
    }
}

pub fn parse_grid(s: &str) -> Result<Vec<Axis>, ConfigError> {
    let mut axes: Vec<Axis> = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((name, range)) = part.split_once('=') else {
            return err(format!("grid axis {part:?}: expected name=min:max:count"));
        };
        let name = name.trim();
        if !["x1", "x2", "x3", "t"].contains(&name) {
            return err(format!("grid axis {name:?}: expected one of x1, x2, x3, t"));
        }
        if axes.iter().any(|a| a.name == name) {
            return err(format!("grid axis {name:?} given twice"));
        }
        let fields: Vec<&str> = range.split(':').collect();
        if fields.len() != 3 {
            return err(format!("grid axis {name:?}: expected min:max:count"));
        }
        let min = parse_f64(fields[0], name)?;
        let max = parse_f64(fields[1], name)?;
        let count: usize = fields[2]
            .trim()
            .parse()
            .map_err(|_| ConfigError(format!("grid axis {name:?}: bad count {:?}", fields[2])))?;
        if count < 2 {
            return err(format!("grid axis {name:?}: count must be at least 2"));
        }
        if !(max > min) {
            return err(format!("grid axis {name:?}: need min < max"));
        }
        axes.push(Axis {
            name: name.to_string(),
            min,
            max,
            count,
        });
    }
    if axes.is_empty() {
        return err("grid: no axes given");
    }
    Ok(axes)
}

fn parse_f64(s: &str, what: &str) -> Result<f64, ConfigError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("{what}: not a number: {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        err(format!("{what}: not finite"))
    }
}

pub fn parse_vec3(s: &str, what: &str) -> Result<SpaceVec, ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return err(format!("{what}: expected three comma-separated numbers"));
    }
    Ok(SpaceVec::new(parse_f64(parts[0], what)?, parse_f64(parts[1], what)?, parse_f64(parts[2], what)?))
}

/// `re[:im],re[:im],re[:im]`.
pub fn parse_pol(s: &str) -> Result<Polarization, ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return err("pol: expected three comma-separated components re[:im]");
    }
    let mut p = [Complex64::new(0.0, 0.0); 3];
    for (slot, part) in p.iter_mut().zip(parts) {
        *slot = match part.split_once(':') {
            Some((re, im)) => Complex64::new(parse_f64(re, "pol")?, parse_f64(im, "pol")?),
            None => Complex64::new(parse_f64(part, "pol")?, 0.0),
        };
    }
    Polarization::new(p).map_err(|e| ConfigError(e.to_string()))
}

pub fn parse_ladder(s: &str) -> Result<Vec<f64>, ConfigError> {
    let v = s
        .split(',')
        .map(|p| parse_f64(p, "eps-ladder"))
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() || v.iter().any(|e| *e <= 0.0) {
        return err("eps-ladder: entries must be positive");
    }
    Ok(v)
}

/// Fully resolved settings shared by all commands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub y: SpaceVec,
    pub u: f64,
    pub t: f64,
    /// Fixed real position for axes not on the grid and for point commands.
    pub x: SpaceVec,
    pub grid: Vec<Axis>,
    #[serde(serialize_with = "ser_display")]
    pub signal: SignalKind,
    #[serde(serialize_with = "ser_kappa")]
    pub kappa: KappaSign,
    pub pol: Polarization,
    pub eps_ladder: Vec<f64>,
    pub tol_rel: f64,
    pub tol_abs: f64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub test_fn: String,
    pub points: usize,
}

fn ser_display<S: serde::Serializer>(v: &SignalKind, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_kappa<S: serde::Serializer>(v: &KappaSign, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(if *v == KappaSign::Plus { "+" } else { "-" })
}

impl RunConfig {
    pub fn resolve(s: &Settings) -> Result<RunConfig, ConfigError> {
        let num = |k: &str, d: f64| s.get(k).map_or(Ok(d), |v| parse_f64(v, k));
        let signal: SignalKind = match s.get("signal") {
            Some(v) => v.parse().map_err(|e: crate::error::PbError| ConfigError(e.to_string()))?,
            None => SignalKind::Cauchy,
        };
        make_signal(signal).map_err(|e| ConfigError(e.to_string()))?;
        let tol_rel = num("tol-rel", 1e-8)?;
        let tol_abs = num("tol-abs", 1e-12)?;
        QuadratureSpec::new(tol_rel, tol_abs).map_err(|e| ConfigError(e.to_string()))?;
        let format = match s.get("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return err(format!("format: expected csv or json, got {other:?}")),
        };
        let count = |k: &str, d: u64| -> Result<u64, ConfigError> {
            s.get(k).map_or(Ok(d), |v| v.trim().parse().map_err(|_| ConfigError(format!("{k}: expected a non-negative integer"))))
        };
        let points = count("points", 100)? as usize;
        if points == 0 {
            return err("points: must be positive");
        }
        Ok(RunConfig {
            y: s.get("y").map_or(Ok(SpaceVec::new(0.0, 0.0, 1.0)), |v| parse_vec3(v, "y"))?,
            u: num("u", 2.0)?,
            t: num("t", 0.0)?,
            x: s.get("x").map_or(Ok(SpaceVec::new(0.6, 0.0, 0.8)), |v| parse_vec3(v, "x"))?,
            grid: parse_grid(s.get("grid").unwrap_or("x1=-2:2:21,x3=-1:3:21"))?,
            signal,
            kappa: match s.get("kappa") {
                Some(v) => v.parse().map_err(|e: crate::error::PbError| ConfigError(e.to_string()))?,
                None => KappaSign::Plus,
            },
            pol: s.get("pol").map_or(Ok(Polarization::electric(2)), parse_pol)?,
            eps_ladder: s.get("eps-ladder").map_or(Ok(vec![0.1, 0.05, 0.025]), parse_ladder)?,
            tol_rel,
            tol_abs,
            format,
            out: s.get("out").map(PathBuf::from),
            seed: count("seed", 0)?,
            test_fn: s.get("test-fn").unwrap_or("bump").to_string(),
            points,
        })
    }

    pub fn signal(&self) -> AnalyticSignal {
        make_signal(self.signal).expect("validated on resolve")
    }

    pub fn quad_spec(&self) -> QuadratureSpec {
        QuadratureSpec::new(self.tol_rel, self.tol_abs).expect("validated on resolve")
    }

    /// Warning for non-timelike dilations, which carry no beam-quality guarantee.
    pub fn timelike_warning(&self) -> Option<String> {
        (self.u.abs() <= self.y.norm()).then(|| {
            format!(
                "|u| = {} does not exceed |y| = {}: the imaginary event is not timelike",
                self.u.abs(),
                self.y.norm()
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("x1=-2:2:41, x3=0:4:41").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[1].value(40), 4.0);
        assert_eq!(g[0].slot(), 0);
        assert!(parse_grid("x1=0:1:1").is_err());
        assert!(parse_grid("x4=0:1:3").is_err());
        assert!(parse_grid("x1=1:0:3").is_err());
        assert!(parse_grid("x1=0:1:3,x1=0:2:3").is_err());
    }

    #[test]
    fn polarization_parsing() {
        let p = parse_pol("1,0:2,-0.5:-1").unwrap();
        assert_eq!(p.0[1], Complex64::new(0.0, 2.0));
        assert_eq!(p.0[2], Complex64::new(-0.5, -1.0));
        assert!(parse_pol("1,2").is_err());
    }

    #[test]
    fn flags_override_config() {
        let file = Settings::from_json(r#"{"y": [0, 0, 2], "u": 3, "signal": "const"}"#).unwrap();
        let mut flags = Settings::default();
        flags.0.insert("u".into(), "5".into());
        let cfg = RunConfig::resolve(&file.overlay(flags)).unwrap();
        assert_eq!(cfg.y, SpaceVec::new(0.0, 0.0, 2.0));
        assert_eq!(cfg.u, 5.0);
        assert_eq!(cfg.signal, SignalKind::ConstNegOne);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(Settings::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(Settings::from_json(r#"{"y": {"a": 1}}"#).is_err());
        assert!(Settings::from_json("[1]").is_err());
        let mut s = Settings::default();
        s.0.insert("signal".into(), "dcauchy:0".into());
        assert!(RunConfig::resolve(&s).is_err());
    }

    #[test]
    fn timelike_warning() {
        let mut s = Settings::default();
        s.0.insert("u".into(), "0.5".into());
        assert!(RunConfig::resolve(&s).unwrap().timelike_warning().is_some());
        assert!(RunConfig::resolve(&Settings::default()).unwrap().timelike_warning().is_none());
    }
}
