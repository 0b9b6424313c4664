//! Plain-text `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::CliError;

pub const KEYS: [&str; 14] = [
    "scenario",
    "hbar",
    "space_dim",
    "clock_points",
    "clock_dt",
    "levels",
    "coeffs",
    "grid",
    "output",
    "format",
    "seed",
    "delta_e",
    "s0",
    "phase",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Coefficient matrix on the included levels.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffSpec {
    /// Equal-weight pure superposition, `c_ij = 1/n`.
    Equal,
    /// Maximally mixed, `c_ij = δ_ij/n`.
    Mixed,
    /// Real symmetric rows.
    Explicit(Vec<Vec<f64>>),
}

impl fmt::Display for CoeffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffSpec::Equal => f.write_str("equal"),
            CoeffSpec::Mixed => f.write_str("mixed"),
            CoeffSpec::Explicit(rows) => {
                let text: Vec<String> = rows
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                f.write_str(&text.join(";"))
            }
        }
    }
}

impl CoeffSpec {
    pub fn matrix(&self, n: usize) -> Result<Vec<Vec<f64>>, CliError> {
        let nf = n as f64;
        match self {
            CoeffSpec::Equal => Ok(vec![vec![1.0 / nf; n]; n]),
            CoeffSpec::Mixed => Ok((0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 / nf } else { 0.0 }).collect())
                .collect()),
            CoeffSpec::Explicit(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Config(format!(
                        "coeffs must be {n}x{n} for {n} levels"
                    )));
                }
                Ok(rows.clone())
            }
        }
    }
}

/// Parsed configuration; `None` means "scenario default".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub scenario: Option<String>,
    pub hbar: Option<f64>,
    pub space_dim: Option<usize>,
    pub clock_points: Option<usize>,
    pub clock_dt: Option<f64>,
    pub levels: Option<Vec<usize>>,
    pub coeffs: Option<CoeffSpec>,
    pub grid: Option<Vec<usize>>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub delta_e: Option<f64>,
    pub s0: Option<f64>,
    pub phase: Option<f64>,
}

impl RunConfig {
    /// Parses config text. Blank lines and `#` comments are skipped;
    /// repeated keys are an error.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = split_pair(line)
                .map_err(|e| CliError::Config(format!("line {}: {e}", no + 1)))?;
            if let Some(prev) = seen.insert(key.to_string(), no + 1) {
                return Err(CliError::Config(format!(
                    "line {}: duplicate key `{key}` (first set on line {prev})",
                    no + 1
                )));
            }
            cfg.set(key, value)
                .map_err(|e| CliError::Config(format!("line {}: {e}", no + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, pair: &str) -> Result<(), CliError> {
        let (key, value) =
            split_pair(pair).map_err(|e| CliError::Config(format!("--set {pair}: {e}")))?;
        self.set(key, value)
            .map_err(|e| CliError::Config(format!("--set {pair}: {e}")))
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "scenario" => self.scenario = Some(value.to_string()),
            "hbar" => self.hbar = Some(positive(value)?),
            "space_dim" => self.space_dim = Some(count(value)?),
            "clock_points" => self.clock_points = Some(count(value)?),
            "clock_dt" => self.clock_dt = Some(positive(value)?),
            "levels" => self.levels = Some(list(value)?),
            "coeffs" => self.coeffs = Some(coeffs(value)?),
            "grid" => self.grid = Some(list(value)?),
            "output" => {
                if value.is_empty() {
                    return Err("output path is empty".into());
                }
                self.output = Some(PathBuf::from(value))
            }
            "format" => {
                self.format = Some(match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    other => return Err(format!("format must be json or csv, got `{other}`")),
                })
            }
            "seed" => {
                self.seed = Some(value.parse().map_err(|_| format!("seed `{value}` is not an unsigned integer"))?)
            }
            "delta_e" => self.delta_e = Some(positive(value)?),
            "s0" => self.s0 = Some(real(value)?),
            "phase" => self.phase = Some(real(value)?),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }
}

fn split_pair(line: &str) -> Result<(&str, &str), String> {
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| format!("expected key = value, got `{line}`"))?;
    let (k, v) = (k.trim(), v.trim());
    if !KEYS.contains(&k) {
        return Err(format!("unknown key `{k}`"));
    }
    Ok((k, v))
}

fn real(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    if !x.is_finite() {
        return Err(format!("`{v}` is not finite"));
    }
    Ok(x)
}

fn positive(v: &str) -> Result<f64, String> {
    let x = real(v)?;
    if x <= 0.0 {
        return Err(format!("`{v}` must be positive"));
    }
    Ok(x)
}

fn count(v: &str) -> Result<usize, String> {
    let n: usize = v.parse().map_err(|_| format!("`{v}` is not a positive integer"))?;
    if n == 0 {
        return Err("value must be at least 1".into());
    }
    Ok(n)
}

fn list(v: &str) -> Result<Vec<usize>, String> {
    let out: Vec<usize> = v
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("`{s}` is not a non-negative integer")))
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err("list is empty".into());
    }
    Ok(out)
}

fn coeffs(v: &str) -> Result<CoeffSpec, String> {
    match v {
        "equal" => Ok(CoeffSpec::Equal),
        "mixed" => Ok(CoeffSpec::Mixed),
        _ => {
            let rows: Vec<Vec<f64>> = v
                .split(';')
                .map(|r| r.split(',').map(|x| real(x.trim())).collect())
                .collect::<Result<_, _>>()?;
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err("coeffs rows must form a square matrix".into());
            }
            Ok(CoeffSpec::Explicit(rows))
        }
    }
}

/// Reads values with scenario defaults and records every value used, so the
/// report carries the fully resolved configuration.
pub struct Resolver<'a> {
    cfg: &'a RunConfig,
    used: BTreeMap<&'static str, Value>,
}

impl<'a> Resolver<'a> {
    pub fn new(cfg: &'a RunConfig) -> Self {
        Self {
            cfg,
            used: BTreeMap::new(),
        }
    }

    pub fn hbar(&mut self) -> f64 {
        let v = self.cfg.hbar.unwrap_or(1.0);
        self.used.insert("hbar", json!(v));
        v
    }

    pub fn space_dim(&mut self, default: usize) -> usize {
        let v = self.cfg.space_dim.unwrap_or(default);
        self.used.insert("space_dim", json!(v));
        v
    }

    pub fn clock_points(&mut self, default: usize) -> usize {
        let v = self.cfg.clock_points.unwrap_or(default);
        self.used.insert("clock_points", json!(v));
        v
    }

    pub fn clock_dt(&mut self, default: f64) -> f64 {
        let v = self.cfg.clock_dt.unwrap_or(default);
        self.used.insert("clock_dt", json!(v));
        v
    }

    /// Δt if configured, otherwise computed from the other resolved values.
    pub fn clock_dt_with(&mut self, derive: impl FnOnce() -> f64) -> f64 {
        let v = self.cfg.clock_dt.unwrap_or_else(derive);
        self.used.insert("clock_dt", json!(v));
        v
    }

    pub fn levels(&mut self, default: Vec<usize>) -> Vec<usize> {
        let v = self.cfg.levels.clone().unwrap_or(default);
        self.used.insert("levels", json!(v));
        v
    }

    pub fn coeffs(&mut self, default: CoeffSpec) -> CoeffSpec {
        let v = self.cfg.coeffs.clone().unwrap_or(default);
        self.used.insert("coeffs", json!(v.to_string()));
        v
    }

    pub fn grid(&mut self, default: Vec<usize>) -> Vec<usize> {
        let v = self.cfg.grid.clone().unwrap_or(default);
        self.used.insert("grid", json!(v));
        v
    }

    pub fn seed(&mut self) -> u64 {
        let v = self.cfg.seed.unwrap_or(0);
        self.used.insert("seed", json!(v));
        v
    }

    pub fn delta_e(&mut self, default: f64) -> f64 {
        let v = self.cfg.delta_e.unwrap_or(default);
        self.used.insert("delta_e", json!(v));
        v
    }

    pub fn s0(&mut self, default: f64) -> f64 {
        let v = self.cfg.s0.unwrap_or(default);
        self.used.insert("s0", json!(v));
        v
    }

    pub fn phase(&mut self, default: f64) -> f64 {
        let v = self.cfg.phase.unwrap_or(default);
        self.used.insert("phase", json!(v));
        v
    }

    pub fn into_used(self) -> BTreeMap<&'static str, Value> {
        self.used
    }
}
