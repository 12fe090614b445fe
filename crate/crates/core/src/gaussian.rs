//! Two-mode Gaussian states in the quadrature convention
//! `X = (a + a†)/2`, `Y = (a - a†)/2i`, where vacuum noise is `1/4`.
//!
//! Moments are ordered `(X_a, Y_a, X_b, Y_b)`. On input, mode `a` is the
//! field entering at `z = 0` and mode `b` the one entering at `z = L`; after
//! [`apply_scattering`] they are the outputs `a_L` and `b_0`.
//!
//! Two routes are provided for every observable: closed forms in terms of
//! `(S1, S2)` for a coherent mode `a` and a squeezed-vacuum mode `b`, and
//! covariance-matrix propagation that works for any Gaussian input.

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{FwmError, Result};
use crate::scattering::SMatrix;

pub const VACUUM_VARIANCE: f64 = 0.25;

/// Defect above which [`apply_scattering`] refuses a pair.
pub const UNITARITY_GATE: f64 = 1e-8;

/// Single-mode input choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeInput {
    Vacuum,
    Coherent(Complex64),
    /// Squeezed vacuum `S(r e^{i theta})|0>`; `theta = 0` squeezes `X`.
    Squeezed { r: f64, theta: f64 },
}

impl ModeInput {
    pub fn squeezed(r: f64) -> Self {
        ModeInput::Squeezed { r, theta: 0.0 }
    }

    pub fn coherent(re: f64, im: f64) -> Self {
        ModeInput::Coherent(Complex64::new(re, im))
    }

    pub fn photon_number(&self) -> f64 {
        match *self {
            ModeInput::Vacuum => 0.0,
            ModeInput::Coherent(alpha) => alpha.norm_sqr(),
            ModeInput::Squeezed { r, .. } => r.sinh().powi(2),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ModeInput::Squeezed { r, theta } => {
                if !r.is_finite() || r < 0.0 {
                    return Err(FwmError::param("r", "squeezing parameter must be finite and non-negative"));
                }
                if !theta.is_finite() {
                    return Err(FwmError::param("theta", "must be finite"));
                }
                Ok(())
            }
            ModeInput::Coherent(alpha) if !(alpha.re.is_finite() && alpha.im.is_finite()) => {
                Err(FwmError::param("alpha", "must be finite"))
            }
            _ => Ok(()),
        }
    }

    fn moments(&self) -> ([f64; 2], Matrix2<f64>) {
        match *self {
            ModeInput::Vacuum => ([0.0; 2], Matrix2::identity() * VACUUM_VARIANCE),
            ModeInput::Coherent(alpha) => ([alpha.re, alpha.im], Matrix2::identity() * VACUUM_VARIANCE),
            ModeInput::Squeezed { r, theta } => {
                let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
                let (c, s) = (theta.cos(), theta.sin());
                let cov = Matrix2::new(ch - sh * c, -sh * s, -sh * s, ch + sh * c) * VACUUM_VARIANCE;
                ([0.0; 2], cov)
            }
        }
    }
}

/// Uncorrelated two-mode input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSpec {
    pub mode_a: ModeInput,
    pub mode_b: ModeInput,
}

impl InputSpec {
    pub fn new(mode_a: ModeInput, mode_b: ModeInput) -> Self {
        InputSpec { mode_a, mode_b }
    }

    /// Squeezing parameter of mode `b` when the input has the form
    /// (coherent or vacuum) ⊗ (squeezed vacuum with `theta = 0`, or vacuum),
    /// which is the configuration the closed forms assume.
    pub fn closed_form_squeezing(&self) -> Result<f64> {
        self.mode_a.validate()?;
        self.mode_b.validate()?;
        if matches!(self.mode_a, ModeInput::Squeezed { .. }) {
            return Err(FwmError::UnsupportedInput(
                "mode a coherent or vacuum; use the covariance path".into(),
            ));
        }
        match self.mode_b {
            ModeInput::Vacuum => Ok(0.0),
            ModeInput::Squeezed { r, theta: 0.0 } => Ok(r),
            ModeInput::Squeezed { .. } => Err(FwmError::UnsupportedInput(
                "real squeezing (theta = 0); use the covariance path".into(),
            )),
            ModeInput::Coherent(_) => Err(FwmError::UnsupportedInput(
                "mode b squeezed or vacuum; use the covariance path".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    mean: Vector4<f64>,
    cov: Matrix4<f64>,
}

impl GaussianState {
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>) -> Result<Self> {
        let asym = (cov - cov.transpose()).abs().max();
        if asym > 1e-14 * cov.abs().max().max(1.0) {
            return Err(FwmError::param("cov", format!("not symmetric (defect {asym:.3e})")));
        }
        Ok(GaussianState { mean, cov })
    }

    pub fn mean(&self) -> &Vector4<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix4<f64> {
        &self.cov
    }

    /// Reduced 2x2 covariance of mode 0 (`a`) or 1 (`b`).
    pub fn mode_cov(&self, mode: usize) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(2 * mode, 2 * mode).into_owned()
    }

    /// `<n> = <X^2> + <Y^2> - 1/2`.
    pub fn photon_number(&self, mode: usize) -> f64 {
        let (x, y) = (self.mean[2 * mode], self.mean[2 * mode + 1]);
        self.cov[(2 * mode, 2 * mode)] + self.cov[(2 * mode + 1, 2 * mode + 1)] + x * x + y * y - 0.5
    }

    /// Smallest quadrature variance of one mode over all quadrature angles.
    pub fn min_quadrature_variance(&self, mode: usize) -> f64 {
        let m = self.mode_cov(mode);
        let tr = m.trace();
        let det = m.determinant();
        0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt())
    }

    /// `det(4 cov)`; equal to 1 for pure states.
    pub fn purity_determinant(&self) -> f64 {
        (self.cov * 4.0).determinant()
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + (i/4) J`.
    ///
    /// Non-negative exactly when the covariance satisfies the uncertainty
    /// principle for `[X, Y] = i/2`.
    pub fn uncertainty_margin(&self) -> f64 {
        let j = symplectic_form();
        let h = self.cov.map(|v| Complex::new(v, 0.0)) + j.map(|v| Complex::new(0.0, v * VACUUM_VARIANCE));
        SymmetricEigen::new(h).eigenvalues.min()
    }
}

/// `J = diag([[0, 1], [-1, 0]], [[0, 1], [-1, 0]])`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 1)] = 1.0;
    j[(1, 0)] = -1.0;
    j[(2, 3)] = 1.0;
    j[(3, 2)] = -1.0;
    j
}

pub fn make_state(spec: &InputSpec) -> Result<GaussianState> {
    spec.mode_a.validate()?;
    spec.mode_b.validate()?;
    let (ma, ca) = spec.mode_a.moments();
    let (mb, cb) = spec.mode_b.moments();
    let mean = Vector4::new(ma[0], ma[1], mb[0], mb[1]);
    let mut cov = Matrix4::zeros();
    cov.fixed_view_mut::<2, 2>(0, 0).copy_from(&ca);
    cov.fixed_view_mut::<2, 2>(2, 2).copy_from(&cb);
    Ok(GaussianState { mean, cov })
}

/// Real 2x2 block representing multiplication by a complex number on
/// `(Re, Im)`.
fn complex_block(c: Complex64) -> Matrix2<f64> {
    Matrix2::new(c.re, -c.im, c.im, c.re)
}

/// Real 4x4 quadrature map equivalent to `(a_L, b_0) = [[S1, S2], [S2, S1]] (a_0, b_L)`.
pub fn quadrature_map(m: &SMatrix) -> Matrix4<f64> {
    let b1 = complex_block(m.s1);
    let b2 = complex_block(m.s2);
    let mut out = Matrix4::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(&b1);
    out.fixed_view_mut::<2, 2>(0, 2).copy_from(&b2);
    out.fixed_view_mut::<2, 2>(2, 0).copy_from(&b2);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(&b1);
    out
}

pub fn apply_scattering(state: &GaussianState, m: &SMatrix) -> Result<GaussianState> {
    let defect = m.unitarity_defect().max(m.orthogonality_defect());
    if defect > UNITARITY_GATE || !defect.is_finite() {
        return Err(FwmError::NonUnitary { defect });
    }
    let map = quadrature_map(m);
    let cov = map * state.cov * map.transpose();
    // Symmetrize away round-off so downstream checks see an exact symmetric matrix.
    let cov = (cov + cov.transpose()) * 0.5;
    Ok(GaussianState {
        mean: map * state.mean,
        cov,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub a_out: f64,
    pub b_out: f64,
}

impl Amplitudes {
    pub fn total(&self) -> f64 {
        self.a_out + self.b_out
    }
}

/// Output photon numbers for uncorrelated inputs:
/// `A_a = |S1|^2 A_a0 + |S2|^2 A_bL`, `A_b = |S1|^2 A_bL + |S2|^2 A_a0`.
pub fn amplitudes(spec: &InputSpec, m: &SMatrix) -> Amplitudes {
    let (na, nb) = (spec.mode_a.photon_number(), spec.mode_b.photon_number());
    let (t, r) = (m.s1.norm_sqr(), m.s2.norm_sqr());
    Amplitudes {
        a_out: t * na + r * nb,
        b_out: t * nb + r * na,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureVariances {
    pub var_x_a: f64,
    pub var_y_a: f64,
    pub var_x_b: f64,
    pub var_y_b: f64,
}

impl QuadratureVariances {
    pub fn as_array(&self) -> [f64; 4] {
        [self.var_x_a, self.var_y_a, self.var_x_b, self.var_y_b]
    }
}

fn check_r(r: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(FwmError::param("r", "squeezing parameter must be finite and non-negative"));
    }
    Ok(())
}

/// Output quadrature variances for coherent `a` and squeezed-vacuum `b`
/// (real `r`). Mode `a` picks up the squeezed noise through `S2`, mode `b`
/// through `S1`.
pub fn quadrature_variances_closed(m: &SMatrix, r: f64) -> Result<QuadratureVariances> {
    check_r(r)?;
    let (sh, ch) = (r.sinh(), r.cosh());
    let pair = |c: Complex64| {
        let base = 0.25 * (m.s1.norm_sqr() + m.s2.norm_sqr());
        let excess = 2.0 * c.norm_sqr() * sh * sh;
        let phase = 2.0 * (c * c).re * sh * ch;
        (base + 0.25 * (excess - phase), base + 0.25 * (excess + phase))
    };
    let (var_x_a, var_y_a) = pair(m.s2);
    let (var_x_b, var_y_b) = pair(m.s1);
    Ok(QuadratureVariances {
        var_x_a,
        var_y_a,
        var_x_b,
        var_y_b,
    })
}

/// Entanglement witness `Q = Var(X_a + X_b) + Var(Y_a - Y_b)` for coherent
/// `a` and squeezed-vacuum `b`:
///
/// ```text
/// Q = (1 + sinh^2 r)(|S1|^2 + |S2|^2) - 2 sinh r cosh r Re(S1 S2)
/// ```
///
/// Separable states have `Q >= 1`.
pub fn duan_q(m: &SMatrix, r: f64) -> Result<f64> {
    check_r(r)?;
    let (sh, ch) = (r.sinh(), r.cosh());
    Ok((1.0 + sh * sh) * (m.s1.norm_sqr() + m.s2.norm_sqr()) - 2.0 * sh * ch * (m.s1 * m.s2).re)
}

/// The variant with `S1^2 + S2^2` in the correlation term,
/// `(1 + sinh^2 r)(|S1|^2 + |S2|^2) - sinh r cosh r Re(S1^2 + S2^2)`.
///
/// It disagrees with the covariance of `X_a + X_b`, `Y_a - Y_b` by the
/// sign of the `(S1 - S2)^2` contribution, and reports `Q < 1` for the
/// product state at `L = 0`. Kept only for comparison; use [`duan_q`].
pub fn duan_q_as_printed(m: &SMatrix, r: f64) -> Result<f64> {
    check_r(r)?;
    let (sh, ch) = (r.sinh(), r.cosh());
    Ok((1.0 + sh * sh) * (m.s1.norm_sqr() + m.s2.norm_sqr())
        - sh * ch * (m.s1 * m.s1 + m.s2 * m.s2).re)
}

pub fn is_entangled(q: f64) -> bool {
    q < 1.0
}

pub fn variances_from_covariance(state: &GaussianState) -> QuadratureVariances {
    let c = &state.cov;
    QuadratureVariances {
        var_x_a: c[(0, 0)],
        var_y_a: c[(1, 1)],
        var_x_b: c[(2, 2)],
        var_y_b: c[(3, 3)],
    }
}

pub fn q_from_covariance(state: &GaussianState) -> f64 {
    let c = &state.cov;
    let var_u = c[(0, 0)] + c[(2, 2)] + 2.0 * c[(0, 2)];
    let var_v = c[(1, 1)] + c[(3, 3)] - 2.0 * c[(1, 3)];
    var_u + var_v
}

/// Noise reduction below vacuum in dB for a variance `var`.
pub fn noise_reduction_db(var: f64) -> f64 {
    10.0 * (VACUUM_VARIANCE / var).log10()
}

/// Squeezing-transfer efficiency: the noise reduction (dB) of the best
/// quadrature of output mode `a` divided by the input noise reduction (dB)
/// of the squeezed mode `b`. Negative when output `a` is noisier than vacuum
/// in every quadrature; `None` for `r = 0`.
pub fn transfer_efficiency(m: &SMatrix, r: f64) -> Result<Option<f64>> {
    check_r(r)?;
    if r == 0.0 {
        return Ok(None);
    }
    let input = make_state(&InputSpec::new(ModeInput::Vacuum, ModeInput::squeezed(r)))?;
    let output = apply_scattering(&input, m)?;
    let db_in = noise_reduction_db(input.min_quadrature_variance(1));
    let db_out = noise_reduction_db(output.min_quadrature_variance(0));
    Ok(Some(db_out / db_in))
}
