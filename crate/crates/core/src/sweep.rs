//! Sweep engine: evaluates a [`SweepConfig`] over its grid and renders CSV.

use std::fmt::{self, Write as _};
use std::fs;
use std::io;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, Coupling, Grid, SweepConfig, SweepMode};
use crate::error::FwmError;
use crate::fock::{coherent_state, elimination_fidelity, product_state, vacuum, FockConfig};
use crate::gaussian::{amplitudes, duan_q, is_entangled, quadrature_variances_closed, transfer_efficiency, InputSpec, ModeInput};
use crate::params::{couplings_from_p, derive_couplings, validate_dispersive, DispersiveReport};
use crate::scattering::{length_for_phase, s_param, transfer};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Numerical(#[from] FwmError),

    #[error("dispersive check failed\n{0}")]
    Dispersive(DispersiveReport),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(&'static str),
    Flag(bool),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => f.write_str(&format_sig(*v)),
            Cell::Text(t) => f.write_str(t),
            Cell::Flag(b) => f.write_str(if *b { "1" } else { "0" }),
        }
    }
}

/// Formats with 9 significant digits in scientific notation. Signed zero is
/// printed as plain zero.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000e0".to_string();
    }
    format!("{v:.8e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Metadata lines, written as `# ` comments ahead of the header.
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        self.rows
            .iter()
            .map(|row| match row[idx] {
                Cell::Num(v) => Some(v),
                Cell::Flag(b) => Some(if b { 1.0 } else { 0.0 }),
                Cell::Text(_) => None,
            })
            .collect()
    }

    pub fn text_column(&self, name: &str) -> Option<Vec<&'static str>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        self.rows
            .iter()
            .map(|row| match row[idx] {
                Cell::Text(t) => Some(t),
                _ => None,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }
}

/// Dimensionless couplings resolved from a config, plus metadata lines.
struct Resolved {
    chi: f64,
    sigma: f64,
    comments: Vec<String>,
}

fn resolve(cfg: &SweepConfig) -> Result<Resolved, SweepError> {
    let mut comments = Vec::new();
    let (chi, sigma) = match cfg.coupling {
        Some(Coupling::P(p)) => {
            comments.push(format!("P = {p} (couplings normalized to sigma = 1)"));
            couplings_from_p(p)?
        }
        Some(Coupling::Explicit { chi, sigma }) => (chi, sigma),
        Some(Coupling::Physical(spec)) => {
            let phys = spec.to_params()?;
            if spec.delta_k == Some(0.0) {
                return Err(ConfigError::Range {
                    key: "delta_k",
                    message: "P is undefined for zero wave-vector mismatch".into(),
                }
                .into());
            }
            let n_max = u32::try_from(cfg.n_max).unwrap_or(u32::MAX);
            let report = validate_dispersive(&phys, n_max, spec.dispersive_threshold)?;
            if !report.pass {
                return Err(SweepError::Dispersive(report));
            }
            let c = derive_couplings(&phys)?;
            if let Some(p) = c.p_param {
                comments.push(format!("P = {p}"));
            }
            comments.push(format!(
                "chi0 = {} rad/s, sigma0 = {} rad/s, alpha0 L = {}",
                c.chi0,
                c.sigma0,
                phys.dimensionless_length()
            ));
            (c.chi, c.sigma)
        }
        None => unreachable!("validated configs carry a coupling for this mode"),
    };
    comments.push(format!("chi = {chi}, sigma = {sigma}, regime = {}", crate::params::classify_regime(chi, sigma)));
    Ok(Resolved { chi, sigma, comments })
}

fn eval_rows<F>(grid: &Grid, f: F) -> Result<Vec<Vec<Cell>>, SweepError>
where
    F: Fn(f64) -> Result<Vec<Cell>, SweepError> + Sync + Send,
{
    // `collect` on an indexed parallel iterator keeps grid order.
    grid.values().into_par_iter().map(f).collect()
}

/// Evaluates the sweep without touching the filesystem.
pub fn compute_sweep(cfg: &SweepConfig) -> Result<SweepTable, SweepError> {
    cfg.validate()?;
    let mut comments = vec![format!("mode = {}", cfg.mode)];
    comments.extend(cfg.notes.iter().cloned());

    let (header, rows): (Vec<&'static str>, _) = match cfg.mode {
        SweepMode::Amplitudes | SweepMode::Quadratures | SweepMode::Entanglement => {
            let res = resolve(cfg)?;
            comments.extend(res.comments);
            comments.push(format!("r = {}, alpha = {}", cfg.r, cfg.alpha));
            comments.push("x axis: |s| L".into());
            let (chi, sigma) = (res.chi, res.sigma);
            let at = move |x: f64| transfer(chi, sigma, length_for_phase(chi, sigma, x));
            match cfg.mode {
                SweepMode::Amplitudes => {
                    let spec = InputSpec::new(ModeInput::coherent(cfg.alpha, 0.0), ModeInput::squeezed(cfg.r));
                    let a0 = cfg.alpha * cfg.alpha;
                    let rows = eval_rows(&cfg.grid, |x| {
                        let amp = amplitudes(&spec, &at(x));
                        Ok(vec![Cell::Num(x), Cell::Num(amp.a_out / a0), Cell::Num(amp.b_out / a0)])
                    })?;
                    (vec!["sL", "A_a/A0", "A_b/A0"], rows)
                }
                SweepMode::Quadratures => {
                    let rows = eval_rows(&cfg.grid, |x| {
                        let v = quadrature_variances_closed(&at(x), cfg.r)?;
                        Ok(vec![
                            Cell::Num(x),
                            Cell::Num(v.var_x_a),
                            Cell::Num(v.var_x_b),
                            Cell::Num(v.var_y_a),
                            Cell::Num(v.var_y_b),
                        ])
                    })?;
                    (vec!["sL", "VarX_a", "VarX_b", "VarY_a", "VarY_b"], rows)
                }
                _ => {
                    let rows = eval_rows(&cfg.grid, |x| {
                        let q = duan_q(&at(x), cfg.r)?;
                        Ok(vec![Cell::Num(x), Cell::Num(q), Cell::Flag(is_entangled(q))])
                    })?;
                    (vec!["sL", "Q", "entangled_flag"], rows)
                }
            }
        }
        SweepMode::RegimeMap => {
            comments.push(format!("x axis: P, fixed length L = {} (sigma = 1)", cfg.length));
            let rows = eval_rows(&cfg.grid, |p| {
                let (chi, sigma) = couplings_from_p(p)?;
                let m = transfer(chi, sigma, cfg.length);
                let regime = crate::params::classify_regime(chi, sigma);
                Ok(vec![Cell::Num(p), Cell::Text(regime.as_str()), Cell::Num(m.s2.norm_sqr())])
            })?;
            (vec!["P", "regime", "S2_sq"], rows)
        }
        SweepMode::Elimination => {
            let e = cfg.elimination;
            comments.push(format!(
                "n_max = {}, W = {}, g = {}, Delta = {}, delta = {}, alpha = {}",
                cfg.n_max, e.w_amp, e.g_coupling, e.delta_one, e.delta_two, cfg.alpha
            ));
            comments.push("x axis: exponent x, scale = 10^-x on W and 10^(-x/2) on g; one effective beat period".into());
            let psi0 = product_state(&coherent_state(cfg.n_max, Complex64::new(cfg.alpha, 0.0)), &vacuum(cfg.n_max))?;
            let rows = eval_rows(&cfg.grid, |x| {
                let scale = 10f64.powf(-x);
                let fc = FockConfig {
                    n_max: cfg.n_max,
                    w_amp: e.w_amp * scale,
                    g_coupling: e.g_coupling * scale.sqrt(),
                    delta_one: e.delta_one,
                    delta_two: e.delta_two,
                };
                let t = fc
                    .effective_beat_period()
                    .ok_or_else(|| FwmError::param("elimination", "effective coupling vanishes"))?;
                let r = elimination_fidelity(&fc, &psi0, t)?;
                Ok(vec![Cell::Num(scale), Cell::Num(r.fidelity), Cell::Num(r.leakage)])
            })?;
            (vec!["scale", "fidelity", "leakage"], rows)
        }
    };
    Ok(SweepTable { comments, header, rows })
}

/// Evaluates the sweep and writes CSV to `cfg.output`, or returns it when
/// no output path is set.
pub fn run_sweep(cfg: &SweepConfig) -> Result<String, SweepError> {
    let csv = compute_sweep(cfg)?.to_csv();
    if let Some(path) = &cfg.output {
        write_output(path, &csv)?;
    }
    Ok(csv)
}

pub fn write_output(path: &Path, text: &str) -> Result<(), SweepError> {
    fs::write(path, text).map_err(|source| SweepError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferPoint {
    pub p: f64,
    pub phase: f64,
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub r: f64,
    pub p_grid: Grid,
    pub phase_grid: Grid,
    pub best: TransferPoint,
    /// Best efficiency per `P`, in grid order.
    pub per_p: Vec<TransferPoint>,
}

impl fmt::Display for TransferReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# squeezing transfer: dB noise reduction of the best quadrature of output a / dB noise reduction of input b"
        )?;
        writeln!(
            f,
            "# r = {}, P in [{}, {}] ({} points), |s|L in [{}, {}] ({} points)",
            self.r,
            self.p_grid.start,
            self.p_grid.stop,
            self.p_grid.points,
            self.phase_grid.start,
            self.phase_grid.stop,
            self.phase_grid.points
        )?;
        writeln!(
            f,
            "# maximum efficiency {} at P = {}, |s|L = {}",
            format_sig(self.best.efficiency),
            format_sig(self.best.p),
            format_sig(self.best.phase)
        )?;
        writeln!(f, "P,sL_best,efficiency")?;
        for pt in &self.per_p {
            writeln!(f, "{},{},{}", format_sig(pt.p), format_sig(pt.phase), format_sig(pt.efficiency))?;
        }
        Ok(())
    }
}

/// Scans `P` and `|s| L` for the largest squeezing-transfer efficiency into
/// mode `a` with a vacuum `a` and squeezed `b` at the input.
pub fn squeezing_transfer_scan(p_grid: Grid, phase_grid: Grid, r: f64) -> Result<TransferReport, SweepError> {
    p_grid.validate()?;
    phase_grid.validate()?;
    if !r.is_finite() || r <= 0.0 {
        return Err(ConfigError::Range {
            key: "r",
            message: "transfer report needs r > 0".into(),
        }
        .into());
    }
    let phases = phase_grid.values();
    let per_p: Vec<TransferPoint> = p_grid
        .values()
        .into_par_iter()
        .map(|p| -> Result<TransferPoint, SweepError> {
            let (chi, sigma) = couplings_from_p(p)?;
            let mut best = TransferPoint {
                p,
                phase: f64::NAN,
                efficiency: f64::NEG_INFINITY,
            };
            for &x in &phases {
                let m = transfer(chi, sigma, length_for_phase(chi, sigma, x));
                if let Some(eff) = transfer_efficiency(&m, r)? {
                    if eff > best.efficiency {
                        best = TransferPoint { p, phase: x, efficiency: eff };
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<_, _>>()?;
    let best = per_p
        .iter()
        .copied()
        .fold(per_p[0], |acc, pt| if pt.efficiency > acc.efficiency { pt } else { acc });
    Ok(TransferReport {
        r,
        p_grid,
        phase_grid,
        best,
        per_p,
    })
}

/// Grids used by the default transfer report: `P in [1, 20]` in steps of 0.1
/// and `|s| L in [0, 2 pi]` with 721 points.
pub fn default_transfer_grids() -> (Grid, Grid) {
    (
        Grid {
            start: 1.0,
            stop: 20.0,
            points: 191,
        },
        Grid {
            start: 0.0,
            stop: 2.0 * std::f64::consts::PI,
            points: 721,
        },
    )
}

/// `|s|` for a sweep coupling, exposed for reporting.
pub fn phase_rate(chi: f64, sigma: f64) -> f64 {
    s_param(chi, sigma).norm()
}
