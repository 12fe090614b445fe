//! Plain-text `key=value` sweep configuration and named presets.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Repeating a key overrides the earlier value, except `note`, which
//! accumulates.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::params::{mhz_to_rad_per_s, PhysicalParams, DEFAULT_DISPERSIVE_THRESHOLD, SPEED_OF_LIGHT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("missing required key `{0}`")]
    Missing(&'static str),

    #[error("missing required physical inputs: {}", .0.join(", "))]
    MissingPhysical(Vec<&'static str>),

    #[error("`{key}` out of range: {message}")]
    Range { key: &'static str, message: String },

    #[error("conflicting keys: {0}")]
    Conflict(String),

    #[error("unknown preset `{0}` (known: {known})", known = PRESET_NAMES.join(", "))]
    UnknownPreset(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepMode {
    Amplitudes,
    Quadratures,
    Entanglement,
    RegimeMap,
    Elimination,
}

impl SweepMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepMode::Amplitudes => "amplitudes",
            SweepMode::Quadratures => "quadratures",
            SweepMode::Entanglement => "entanglement",
            SweepMode::RegimeMap => "regime_map",
            SweepMode::Elimination => "elimination",
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "amplitudes" => SweepMode::Amplitudes,
            "quadratures" => SweepMode::Quadratures,
            "entanglement" => SweepMode::Entanglement,
            "regime_map" => SweepMode::RegimeMap,
            "elimination" => SweepMode::Elimination,
            other => return Err(format!("unknown mode `{other}`")),
        })
    }
}

/// Evenly spaced points, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self, ConfigError> {
        let g = Grid { start, stop, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.points < 2 {
            return Err(ConfigError::Range {
                key: "grid_points",
                message: "need at least 2 points".into(),
            });
        }
        if !self.start.is_finite() || self.start < 0.0 {
            return Err(ConfigError::Range {
                key: "grid_start",
                message: "must be finite and >= 0".into(),
            });
        }
        if !self.stop.is_finite() || self.stop <= self.start {
            return Err(ConfigError::Range {
                key: "grid_stop",
                message: "must be finite and greater than grid_start".into(),
            });
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / n as f64
                }
            })
            .collect()
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.points - 1) as f64
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            start: 0.0,
            stop: 2.0 * PI,
            points: 401,
        }
    }
}

/// Physical inputs in laboratory units. Frequencies are in MHz and are
/// converted to rad/s; wavenumbers and absorption in 1/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSpec {
    pub omega_mhz: Option<f64>,
    pub g_mhz: Option<f64>,
    pub delta_one_mhz: Option<f64>,
    pub delta_two_mhz: Option<f64>,
    pub delta_k: Option<f64>,
    pub alpha0: Option<f64>,
    pub c_light: f64,
    /// Medium length in m; only reported.
    pub medium_length: f64,
    pub dispersive_threshold: f64,
}

impl Default for PhysicalSpec {
    fn default() -> Self {
        PhysicalSpec {
            omega_mhz: None,
            g_mhz: None,
            delta_one_mhz: None,
            delta_two_mhz: None,
            delta_k: None,
            alpha0: None,
            c_light: SPEED_OF_LIGHT,
            medium_length: 0.0,
            dispersive_threshold: DEFAULT_DISPERSIVE_THRESHOLD,
        }
    }
}

impl PhysicalSpec {
    pub fn missing(&self) -> Vec<&'static str> {
        [
            ("omega_mhz", self.omega_mhz),
            ("g_mhz", self.g_mhz),
            ("delta_one_mhz", self.delta_one_mhz),
            ("delta_two_mhz", self.delta_two_mhz),
            ("delta_k", self.delta_k),
            ("alpha0", self.alpha0),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.is_none().then_some(k))
        .collect()
    }

    /// Resolves to [`PhysicalParams`]. The wave-vector mismatch is carried
    /// entirely by `k_pump` with `k_quantum = 0`.
    pub fn to_params(&self) -> Result<PhysicalParams, ConfigError> {
        let missing = self.missing();
        if !missing.is_empty() {
            return Err(ConfigError::MissingPhysical(missing));
        }
        let f = |v: Option<f64>| v.unwrap_or_default();
        Ok(PhysicalParams {
            omega_rabi: mhz_to_rad_per_s(f(self.omega_mhz)),
            g_coupling: mhz_to_rad_per_s(f(self.g_mhz)),
            delta_one: mhz_to_rad_per_s(f(self.delta_one_mhz)),
            delta_two: mhz_to_rad_per_s(f(self.delta_two_mhz)),
            k_pump: f(self.delta_k),
            k_quantum: 0.0,
            alpha0: f(self.alpha0),
            c_light: self.c_light,
            length: self.medium_length,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// Dimensionless `P`; the couplings are normalized to `sigma = 1`.
    P(f64),
    Explicit { chi: f64, sigma: f64 },
    Physical(PhysicalSpec),
}

/// Single-point atom-field model for the `elimination` mode, in units of the
/// one-photon detuning. Each grid value `x` scales the pump by `10^-x` and
/// the quantum coupling by `10^(-x/2)`, so both dispersive ratios shrink at
/// least tenfold per unit of `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliminationSpec {
    pub w_amp: f64,
    pub g_coupling: f64,
    pub delta_one: f64,
    pub delta_two: f64,
}

impl Default for EliminationSpec {
    fn default() -> Self {
        // Ratios (|W/Delta|, g sqrt(8) W/|Delta delta|) = (0.05, 0.01).
        EliminationSpec {
            w_amp: 0.05,
            g_coupling: 0.1 / 8f64.sqrt(),
            delta_one: 1.0,
            delta_two: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub coupling: Option<Coupling>,
    /// Squeezing parameter of mode `b`.
    pub r: f64,
    /// Real coherent amplitude of mode `a`.
    pub alpha: f64,
    /// `|s| L` for amplitude/quadrature/entanglement sweeps, `P` for
    /// `regime_map`, the scaling exponent for `elimination`.
    pub grid: Grid,
    /// Fixed dimensionless length used by `regime_map`.
    pub length: f64,
    /// Photon cutoff for the Fock model and the dispersive check.
    pub n_max: usize,
    pub elimination: EliminationSpec,
    pub output: Option<PathBuf>,
    pub notes: Vec<String>,
}

impl SweepConfig {
    pub fn new(mode: SweepMode) -> Self {
        SweepConfig {
            mode,
            coupling: None,
            r: 0.0,
            alpha: 1.0,
            grid: Grid::default(),
            length: 1.0,
            n_max: 8,
            elimination: EliminationSpec::default(),
            output: None,
            notes: Vec::new(),
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.coupling = Some(Coupling::P(p));
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.grid.validate()?;
        if !self.r.is_finite() || self.r < 0.0 {
            return Err(ConfigError::Range {
                key: "r",
                message: "squeezing parameter must be finite and >= 0".into(),
            });
        }
        if !self.alpha.is_finite() {
            return Err(ConfigError::Range {
                key: "alpha",
                message: "must be finite".into(),
            });
        }
        if self.mode == SweepMode::Amplitudes && self.alpha == 0.0 {
            return Err(ConfigError::Range {
                key: "alpha",
                message: "amplitudes are normalized by |alpha|^2, which must be nonzero".into(),
            });
        }
        if !self.length.is_finite() || self.length < 0.0 {
            return Err(ConfigError::Range {
                key: "length",
                message: "must be finite and >= 0".into(),
            });
        }
        if self.n_max < 1 {
            return Err(ConfigError::Range {
                key: "n_max",
                message: "must be at least 1".into(),
            });
        }
        match (self.mode, &self.coupling) {
            (SweepMode::Amplitudes | SweepMode::Quadratures | SweepMode::Entanglement, None) => {
                Err(ConfigError::Missing("p (or chi and sigma, or physical inputs)"))
            }
            (SweepMode::RegimeMap | SweepMode::Elimination, Some(_)) => Err(ConfigError::Conflict(format!(
                "mode {} does not take p, chi/sigma or physical inputs",
                self.mode
            ))),
            _ => Ok(()),
        }
    }

    /// Serializes to config text that [`parse_config`] maps back to `self`.
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        for note in &self.notes {
            let _ = writeln!(s, "note={note}");
        }
        let _ = writeln!(s, "mode={}", self.mode);
        match &self.coupling {
            None => {}
            Some(Coupling::P(p)) => {
                let _ = writeln!(s, "p={p}");
            }
            Some(Coupling::Explicit { chi, sigma }) => {
                let _ = writeln!(s, "chi={chi}\nsigma={sigma}");
            }
            Some(Coupling::Physical(ph)) => {
                for (k, v) in [
                    ("omega_mhz", ph.omega_mhz),
                    ("g_mhz", ph.g_mhz),
                    ("delta_one_mhz", ph.delta_one_mhz),
                    ("delta_two_mhz", ph.delta_two_mhz),
                    ("delta_k", ph.delta_k),
                    ("alpha0", ph.alpha0),
                ] {
                    match v {
                        Some(v) => {
                            let _ = writeln!(s, "{k}={v}");
                        }
                        None => {
                            let _ = writeln!(s, "# {k}= (required)");
                        }
                    }
                }
                let _ = writeln!(s, "c_light={}", ph.c_light);
                let _ = writeln!(s, "medium_length={}", ph.medium_length);
                let _ = writeln!(s, "dispersive_threshold={}", ph.dispersive_threshold);
                if ph == &PhysicalSpec::default() {
                    // Nothing else marks the config as physical.
                    let _ = writeln!(s, "physical=true");
                }
            }
        }
        let _ = writeln!(s, "r={}", self.r);
        let _ = writeln!(s, "alpha={}", self.alpha);
        let _ = writeln!(s, "grid_start={}", self.grid.start);
        let _ = writeln!(s, "grid_stop={}", self.grid.stop);
        let _ = writeln!(s, "grid_points={}", self.grid.points);
        let _ = writeln!(s, "length={}", self.length);
        let _ = writeln!(s, "n_max={}", self.n_max);
        let e = &self.elimination;
        let _ = writeln!(s, "elim_w={}", e.w_amp);
        let _ = writeln!(s, "elim_g={}", e.g_coupling);
        let _ = writeln!(s, "elim_delta_one={}", e.delta_one);
        let _ = writeln!(s, "elim_delta_two={}", e.delta_two);
        if let Some(out) = &self.output {
            let _ = writeln!(s, "output={}", out.display());
        }
        s
    }
}

#[derive(Default)]
struct Builder {
    mode: Option<SweepMode>,
    p: Option<f64>,
    chi: Option<f64>,
    sigma: Option<f64>,
    physical: PhysicalSpec,
    physical_set: bool,
    r: Option<f64>,
    alpha: Option<f64>,
    grid_start: Option<f64>,
    grid_stop: Option<f64>,
    grid_points: Option<usize>,
    length: Option<f64>,
    n_max: Option<usize>,
    elimination: Option<EliminationSpec>,
    output: Option<PathBuf>,
    notes: Vec<String>,
}

fn parse_value<T: FromStr>(value: &str, line: usize, column: usize, key: &str) -> Result<T, ConfigError> {
    value.parse::<T>().map_err(|_| ConfigError::Parse {
        line,
        column,
        message: format!("invalid value `{value}` for `{key}`"),
    })
}

impl Builder {
    fn set(&mut self, key: &str, value: &str, line: usize, column: usize) -> Result<(), ConfigError> {
        let num = |v: &str| parse_value::<f64>(v, line, column, key);
        match key {
            "mode" => {
                self.mode = Some(value.parse().map_err(|message| ConfigError::Parse { line, column, message })?);
            }
            "p" => self.p = Some(num(value)?),
            "chi" => self.chi = Some(num(value)?),
            "sigma" => self.sigma = Some(num(value)?),
            "r" => self.r = Some(num(value)?),
            "alpha" => self.alpha = Some(num(value)?),
            "grid_start" => self.grid_start = Some(num(value)?),
            "grid_stop" => self.grid_stop = Some(num(value)?),
            "grid_points" => self.grid_points = Some(parse_value(value, line, column, key)?),
            "length" => self.length = Some(num(value)?),
            "n_max" => self.n_max = Some(parse_value(value, line, column, key)?),
            "output" => self.output = Some(PathBuf::from(value)),
            "note" => self.notes.push(value.to_string()),
            "elim_w" | "elim_g" | "elim_delta_one" | "elim_delta_two" => {
                let v = num(value)?;
                let e = self.elimination.get_or_insert_with(EliminationSpec::default);
                match key {
                    "elim_w" => e.w_amp = v,
                    "elim_g" => e.g_coupling = v,
                    "elim_delta_one" => e.delta_one = v,
                    _ => e.delta_two = v,
                }
            }
            "physical" => {
                self.physical_set = parse_value::<bool>(value, line, column, key)? || self.physical_set;
            }
            _ => {
                let ph = &mut self.physical;
                let v = num(value)?;
                match key {
                    "omega_mhz" => ph.omega_mhz = Some(v),
                    "g_mhz" => ph.g_mhz = Some(v),
                    "delta_one_mhz" => ph.delta_one_mhz = Some(v),
                    "delta_two_mhz" => ph.delta_two_mhz = Some(v),
                    "delta_k" => ph.delta_k = Some(v),
                    "alpha0" => ph.alpha0 = Some(v),
                    "c_light" => ph.c_light = v,
                    "medium_length" => ph.medium_length = v,
                    "dispersive_threshold" => ph.dispersive_threshold = v,
                    _ => unreachable!("key list checked by caller"),
                }
                self.physical_set = true;
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<SweepConfig, ConfigError> {
        let mode = self.mode.ok_or(ConfigError::Missing("mode"))?;
        let coupling = match (self.physical_set, self.p, self.chi, self.sigma) {
            (true, None, None, None) => Some(Coupling::Physical(self.physical)),
            (true, ..) => return Err(ConfigError::Conflict("physical inputs together with p/chi/sigma".into())),
            (false, Some(p), None, None) => Some(Coupling::P(p)),
            (false, Some(_), ..) => return Err(ConfigError::Conflict("p together with chi/sigma".into())),
            (false, None, Some(chi), Some(sigma)) => Some(Coupling::Explicit { chi, sigma }),
            (false, None, Some(_), None) => return Err(ConfigError::Missing("sigma")),
            (false, None, None, Some(_)) => return Err(ConfigError::Missing("chi")),
            (false, None, None, None) => None,
        };
        if let Some(Coupling::P(p)) = coupling {
            if !p.is_finite() {
                return Err(ConfigError::Range {
                    key: "p",
                    message: "must be finite".into(),
                });
            }
        }
        let mut cfg = SweepConfig::new(mode);
        let grid_default = match mode {
            SweepMode::RegimeMap => Grid {
                start: 0.0,
                stop: 2.0,
                points: 401,
            },
            SweepMode::Elimination => Grid {
                start: 0.0,
                stop: 2.0,
                points: 3,
            },
            _ => Grid::default(),
        };
        cfg.coupling = coupling;
        cfg.r = self.r.unwrap_or(cfg.r);
        cfg.alpha = self.alpha.unwrap_or(cfg.alpha);
        cfg.grid = Grid {
            start: self.grid_start.unwrap_or(grid_default.start),
            stop: self.grid_stop.unwrap_or(grid_default.stop),
            points: self.grid_points.unwrap_or(grid_default.points),
        };
        cfg.length = self.length.unwrap_or(cfg.length);
        cfg.n_max = self.n_max.unwrap_or(cfg.n_max);
        cfg.elimination = self.elimination.unwrap_or_default();
        cfg.output = self.output;
        cfg.notes = self.notes;
        cfg.validate()?;
        Ok(cfg)
    }
}

const KEYS: &[&str] = &[
    "mode",
    "p",
    "chi",
    "sigma",
    "r",
    "alpha",
    "grid_start",
    "grid_stop",
    "grid_points",
    "length",
    "n_max",
    "output",
    "note",
    "elim_w",
    "elim_g",
    "elim_delta_one",
    "elim_delta_two",
    "physical",
    "omega_mhz",
    "g_mhz",
    "delta_one_mhz",
    "delta_two_mhz",
    "delta_k",
    "alpha0",
    "c_light",
    "medium_length",
    "dispersive_threshold",
];

fn apply_lines(builder: &mut Builder, text: &str, first_line: usize) -> Result<(), ConfigError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = first_line + idx;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - trimmed.len();
        let Some(eq) = trimmed.find('=') else {
            return Err(ConfigError::Parse {
                line,
                column: indent + 1,
                message: "expected key=value".into(),
            });
        };
        let key = trimmed[..eq].trim();
        let value_raw = &trimmed[eq + 1..];
        let value = value_raw.trim();
        let column = indent + eq + 2 + (value_raw.len() - value_raw.trim_start().len());
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        }
        builder.set(key, value, line, column)?;
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut b = Builder::default();
    apply_lines(&mut b, text, 1)?;
    b.finish()
}

/// Parses `text` and then applies `key=value` overrides in order.
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<SweepConfig, ConfigError> {
    let mut b = Builder::default();
    apply_lines(&mut b, text, 1)?;
    let base = text.lines().count() + 1;
    for (i, o) in overrides.iter().enumerate() {
        apply_lines(&mut b, o, base + i)?;
    }
    b.finish()
}

pub const PRESET_NAMES: &[&str] = &[
    "sodium_d1", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c",
];

const ALPHA_NOTE: &str = "assumption: coherent amplitude alpha = 1 (free choice)";
const R_NOTE: &str = "assumption: squeezing parameter r = 0.5 (free choice)";

pub fn preset(name: &str) -> Result<SweepConfig, ConfigError> {
    let figure = |mode: SweepMode, p: f64| {
        let mut cfg = SweepConfig::new(mode).with_p(p);
        cfg.notes.push(format!("preset {name}"));
        cfg.notes.push(ALPHA_NOTE.into());
        if mode != SweepMode::Amplitudes {
            cfg.r = 0.5;
            cfg.notes.push(R_NOTE.into());
        }
        cfg
    };
    let cfg = match name {
        "fig2a" => figure(SweepMode::Amplitudes, 10.0),
        "fig2b" => figure(SweepMode::Amplitudes, 1.1),
        "fig2c" => figure(SweepMode::Amplitudes, 0.4),
        "fig3a" => figure(SweepMode::Quadratures, 10.0),
        "fig3b" => figure(SweepMode::Quadratures, 1.1),
        "fig3c" => figure(SweepMode::Quadratures, 0.4),
        "fig4a" => figure(SweepMode::Entanglement, 10.0),
        "fig4b" => figure(SweepMode::Entanglement, 1.1),
        "fig4c" => figure(SweepMode::Entanglement, 0.4),
        "sodium_d1" => {
            let mut cfg = SweepConfig::new(SweepMode::Amplitudes);
            cfg.coupling = Some(Coupling::Physical(PhysicalSpec {
                omega_mhz: Some(60.0),
                delta_one_mhz: Some(3000.0),
                delta_two_mhz: Some(50.0),
                medium_length: 0.1,
                ..PhysicalSpec::default()
            }));
            cfg.notes.push("preset sodium_d1: Na D1, N ~ 1e12 cm^-3, L ~ 10 cm".into());
            cfg.notes.push("required inputs: g_mhz, alpha0 (1/m), delta_k (1/m)".into());
            cfg
        }
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    Ok(cfg)
}
