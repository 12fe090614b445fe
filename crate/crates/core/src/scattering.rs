//! Input-output relations of the counterpropagating modes.
//!
//! Inside the medium the field operators obey
//!
//! ```text
//! d a/dz =  i chi a + i sigma b
//! d b/dz = -i sigma a - i chi b
//! ```
//!
//! with `a` entering at `z = 0` and `b` entering at `z = L`. Solving the
//! split boundary problem gives
//!
//! ```text
//! a_L = S1 a_0 + S2 b_L
//! b_0 = S2 a_0 + S1 b_L
//! ```
//!
//! where `S1 = [cos sL - i (chi/s) sin sL]^-1`, `S2 = i S1 (sigma/s) sin sL`
//! and `s = sqrt(chi^2 - sigma^2)`. The equations are linear, so the operator
//! map coincides with the classical amplitude map; [`transfer_shooting`]
//! integrates that classical system as an independent check of [`transfer`].

use num_complex::Complex64;

use crate::error::{FwmError, Result};
use crate::ode::{self, Tolerance};

/// Below this `|sL|` the trigonometric factors are evaluated by series.
pub const SERIES_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix {
    pub s1: Complex64,
    pub s2: Complex64,
    /// `s = sqrt(chi^2 - sigma^2)` (principal branch).
    pub s_param: Complex64,
    pub length: f64,
}

impl SMatrix {
    pub fn identity() -> Self {
        SMatrix {
            s1: Complex64::new(1.0, 0.0),
            s2: Complex64::new(0.0, 0.0),
            s_param: Complex64::new(0.0, 0.0),
            length: 0.0,
        }
    }

    /// Builds a pair without attaching coupling data.
    pub fn from_pair(s1: Complex64, s2: Complex64) -> Self {
        SMatrix {
            s1,
            s2,
            s_param: Complex64::new(0.0, 0.0),
            length: 0.0,
        }
    }

    /// `||S1|^2 + |S2|^2 - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.s1.norm_sqr() + self.s2.norm_sqr() - 1.0).abs()
    }

    /// `|2 Re(S1 S2*)|`, the off-diagonal element of `M† M` for the
    /// symmetric 2x2 map `[[S1, S2], [S2, S1]]`.
    pub fn orthogonality_defect(&self) -> f64 {
        2.0 * (self.s1 * self.s2.conj()).re.abs()
    }

    /// `|s| L`, the natural sweep coordinate.
    pub fn phase(&self) -> f64 {
        self.s_param.norm() * self.length
    }
}

/// Free-function form of [`SMatrix::unitarity_defect`].
pub fn unitarity_defect(m: &SMatrix) -> f64 {
    m.unitarity_defect()
}

pub fn s_param(chi: f64, sigma: f64) -> Complex64 {
    Complex64::new((chi - sigma) * (chi + sigma), 0.0).sqrt()
}

/// `(cos sL, sin(sL)/s)` for `s^2 = s_sq`; both are even in `s` and real.
fn trig_factors(s: Complex64, s_sq: f64, length: f64) -> (Complex64, Complex64) {
    let x = s * length;
    if x.norm() < SERIES_THRESHOLD {
        let x2 = s_sq * length * length;
        let cos = 1.0 - x2 / 2.0 + x2 * x2 / 24.0;
        let sinc = length * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
        (Complex64::new(cos, 0.0), Complex64::new(sinc, 0.0))
    } else {
        (x.cos(), x.sin() / s)
    }
}

pub fn transfer(chi: f64, sigma: f64, length: f64) -> SMatrix {
    let s = s_param(chi, sigma);
    transfer_with_s(chi, sigma, length, s)
}

fn transfer_with_s(chi: f64, sigma: f64, length: f64, s: Complex64) -> SMatrix {
    let i = Complex64::i();
    let (cos, sinc) = trig_factors(s, (chi - sigma) * (chi + sigma), length);
    let s1 = (cos - i * chi * sinc).inv();
    let s2 = i * s1 * sigma * sinc;
    SMatrix {
        s1,
        s2,
        s_param: s,
        length,
    }
}

/// Interaction length that reaches `|s| L = phase`, or `phase` itself on
/// the band edge where `s = 0`.
pub fn length_for_phase(chi: f64, sigma: f64, phase: f64) -> f64 {
    let s = s_param(chi, sigma).norm();
    if s == 0.0 {
        phase
    } else {
        phase / s
    }
}

/// Full 2x2 input-output map `(a_L, b_0) = T (a_0, b_L)` obtained by
/// shooting, together with the propagator `Phi(L)`.
#[derive(Debug, Clone, Copy)]
pub struct ShootingSolution {
    pub io: [[Complex64; 2]; 2],
    pub propagator: [[Complex64; 2]; 2],
    pub steps: usize,
}

/// Integrates the fundamental solution from `z = 0` to `L` and converts it
/// into the input-output map for the split boundary conditions.
pub fn shoot(chi: f64, sigma: f64, length: f64, tol: f64) -> Result<ShootingSolution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(FwmError::param("tol", "must be positive"));
    }
    if length.is_nan() || length < 0.0 {
        return Err(FwmError::param("length", "must be non-negative"));
    }
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // State: the two columns of Phi, i.e. (a, b) for the initial conditions
    // (1, 0) and (0, 1).
    let rhs = |_: f64, y: &[Complex64; 4]| {
        [
            i * (chi * y[0] + sigma * y[1]),
            -i * (sigma * y[0] + chi * y[1]),
            i * (chi * y[2] + sigma * y[3]),
            -i * (sigma * y[2] + chi * y[3]),
        ]
    };
    let rtol = tol * 1e-3;
    let (y, stats) = ode::integrate(rhs, 0.0, length, [one, zero, zero, one], Tolerance { rtol, atol: rtol })?;
    let phi = [[y[0], y[2]], [y[1], y[3]]];

    // b(L) = Phi21 a0 + Phi22 b0 is solved for the unknown b0.
    let pivot = phi[1][1];
    let scale = phi.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    if pivot.norm() < tol * scale {
        return Err(FwmError::IllConditioned { pivot: pivot.norm() });
    }
    let det = phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0];
    let io = [
        [det / pivot, phi[0][1] / pivot],
        [-phi[1][0] / pivot, one / pivot],
    ];
    Ok(ShootingSolution {
        io,
        propagator: phi,
        steps: stats.accepted + stats.rejected,
    })
}

/// Independent evaluation of [`transfer`] by shooting. Fails if the map does
/// not come out in the symmetric `[[S1, S2], [S2, S1]]` form within `tol`.
pub fn transfer_shooting(chi: f64, sigma: f64, length: f64, tol: f64) -> Result<SMatrix> {
    let sol = shoot(chi, sigma, length, tol)?;
    let [[t11, t12], [t21, t22]] = sol.io;
    let mismatch = (t11 - t22).norm().max((t12 - t21).norm());
    if mismatch > tol {
        return Err(FwmError::StructureMismatch { mismatch });
    }
    Ok(SMatrix {
        s1: t22,
        s2: t21,
        s_param: s_param(chi, sigma),
        length,
    })
}
