//! Physical parameters of the standing-wave Raman medium and the effective
//! couplings they produce.
//!
//! All frequencies are angular (rad/s). The dispersive four-wave-mixing
//! interaction reduces to a beamsplitter Hamiltonian
//! `chi0 (n_a + n_b) + sigma0 (a b† + a† b)` with
//!
//! ```text
//! sigma0 = Omega^2 g^2 / (Delta^2 delta)
//! chi0   = 2 sigma0 - dk c
//! P      = sigma0 / (dk c)
//! ```
//!
//! Propagation is renormalized to the unperturbed absorption length, which
//! gives the dimensionless couplings `chi = -chi0 / (c alpha0)` and
//! `sigma = -sigma0 / (c alpha0)`.

use std::fmt;

use crate::error::{FwmError, Result};

/// Relative tolerance on `chi^2 = sigma^2` used to report the band edge.
pub const BOUNDARY_REL_TOL: f64 = 1e-12;

/// Default upper bound on both dispersive ratios.
pub const DEFAULT_DISPERSIVE_THRESHOLD: f64 = 0.1;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Angular frequency in rad/s for a frequency given in MHz.
pub fn mhz_to_rad_per_s(mhz: f64) -> f64 {
    2.0 * std::f64::consts::PI * mhz * 1e6
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Rabi frequency of each running component of the standing-wave pump.
    pub omega_rabi: f64,
    /// Coupling of the quantum modes to the upper transition.
    pub g_coupling: f64,
    /// One-photon detuning.
    pub delta_one: f64,
    /// Two-photon (Raman) detuning.
    pub delta_two: f64,
    /// Pump wavenumber, 1/m.
    pub k_pump: f64,
    /// Quantum-mode wavenumber, 1/m.
    pub k_quantum: f64,
    /// Unperturbed absorption coefficient, 1/m.
    pub alpha0: f64,
    /// Speed of light in the medium, m/s.
    pub c_light: f64,
    /// Medium length, m.
    pub length: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega_rabi", self.omega_rabi),
            ("g_coupling", self.g_coupling),
            ("delta_one", self.delta_one),
            ("delta_two", self.delta_two),
            ("k_pump", self.k_pump),
            ("k_quantum", self.k_quantum),
            ("alpha0", self.alpha0),
            ("c_light", self.c_light),
            ("length", self.length),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(FwmError::param(name, "must be finite"));
            }
        }
        if self.delta_one == 0.0 {
            return Err(FwmError::param("delta_one", "one-photon detuning must be nonzero"));
        }
        if self.delta_two == 0.0 {
            return Err(FwmError::param("delta_two", "two-photon detuning must be nonzero"));
        }
        if self.alpha0 <= 0.0 {
            return Err(FwmError::param("alpha0", "must be positive"));
        }
        if self.c_light <= 0.0 {
            return Err(FwmError::param("c_light", "must be positive"));
        }
        if self.length < 0.0 {
            return Err(FwmError::param("length", "must be non-negative"));
        }
        Ok(())
    }

    /// Wave-vector mismatch `k - k0`.
    pub fn delta_k(&self) -> f64 {
        self.k_pump - self.k_quantum
    }

    /// Medium length in units of the absorption length `1/alpha0`.
    pub fn dimensionless_length(&self) -> f64 {
        self.alpha0 * self.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `chi^2 > sigma^2`: `s` real, oscillatory exchange between the modes.
    Propagating,
    /// `chi^2 < sigma^2`: `s` imaginary, transmission decays hyperbolically.
    BandGap,
    /// `chi^2 = sigma^2` within [`BOUNDARY_REL_TOL`].
    Boundary,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Propagating => "propagating",
            Regime::BandGap => "band_gap",
            Regime::Boundary => "boundary",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    /// Self-phase-modulation coefficient, rad/s.
    pub chi0: f64,
    /// Cross-coupling between the modes, rad/s.
    pub sigma0: f64,
    /// `k - k0`, 1/m.
    pub delta_k: f64,
    pub chi: f64,
    pub sigma: f64,
    /// `None` when `delta_k == 0`.
    pub p_param: Option<f64>,
    pub regime: Regime,
}

pub fn derive_couplings(phys: &PhysicalParams) -> Result<Couplings> {
    phys.validate()?;
    let sigma0 = (phys.omega_rabi * phys.g_coupling).powi(2)
        / (phys.delta_one * phys.delta_one * phys.delta_two);
    let delta_k = phys.delta_k();
    let phase_mismatch = delta_k * phys.c_light;
    let chi0 = 2.0 * sigma0 - phase_mismatch;
    let scale = -1.0 / (phys.c_light * phys.alpha0);
    let chi = chi0 * scale;
    let sigma = sigma0 * scale;
    let p_param = (delta_k != 0.0).then(|| sigma0 / phase_mismatch);
    Ok(Couplings {
        chi0,
        sigma0,
        delta_k,
        chi,
        sigma,
        p_param,
        regime: classify_regime(chi, sigma),
    })
}

pub fn classify_regime(chi: f64, sigma: f64) -> Regime {
    // (chi - sigma)(chi + sigma) keeps precision close to the band edge.
    let gap = (chi - sigma) * (chi + sigma);
    let scale = chi.abs().max(sigma.abs());
    if gap.abs() <= BOUNDARY_REL_TOL * scale * scale {
        Regime::Boundary
    } else if gap < 0.0 {
        Regime::BandGap
    } else {
        Regime::Propagating
    }
}

/// Band-gap test written directly in terms of `P`.
pub fn p_in_band_gap(p: f64) -> bool {
    p > 1.0 / 3.0 && p < 1.0
}

/// Dimensionless `(chi, sigma)` for a given `P`, normalized to `sigma = 1`.
///
/// Curves plotted against `|s| L` depend on the couplings only through
/// `chi / sigma = 2 - 1/P`, so the overall scale is free. `P = 0` means no
/// cross-coupling and maps to `(1, 0)`.
pub fn couplings_from_p(p: f64) -> Result<(f64, f64)> {
    if !p.is_finite() {
        return Err(FwmError::param("p", "must be finite"));
    }
    if p == 0.0 {
        return Ok((1.0, 0.0));
    }
    Ok((2.0 - 1.0 / p, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveReport {
    /// `|W / Delta|` with the pump amplitude `W = 2 Omega`.
    pub pump_ratio: f64,
    /// `g sqrt(n) W / |Delta delta|`.
    pub raman_ratio: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl fmt::Display for DispersiveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pump_ratio  = {:.6e}  |2 Omega / Delta|", self.pump_ratio)?;
        writeln!(f, "raman_ratio = {:.6e}  g sqrt(n) 2 Omega / |Delta delta|", self.raman_ratio)?;
        writeln!(f, "threshold   = {:.6e}", self.threshold)?;
        write!(f, "dispersive regime: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

pub fn validate_dispersive(phys: &PhysicalParams, n_max: u32, threshold: f64) -> Result<DispersiveReport> {
    if n_max < 1 {
        return Err(FwmError::param("n_max", "must be at least 1"));
    }
    if phys.delta_one == 0.0 || phys.delta_two == 0.0 {
        return Err(FwmError::param("delta", "detunings must be nonzero"));
    }
    let w = 2.0 * phys.omega_rabi;
    let pump_ratio = (w / phys.delta_one).abs();
    let raman_ratio = (phys.g_coupling * f64::from(n_max).sqrt() * w / (phys.delta_one * phys.delta_two)).abs();
    Ok(DispersiveReport {
        pump_ratio,
        raman_ratio,
        threshold,
        pass: pump_ratio < threshold && raman_ratio < threshold,
    })
}
