//! Adaptive Dormand–Prince 5(4) integrator for small complex systems.

use num_complex::Complex64;

use crate::error::{FwmError, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates `y' = f(z, y)` from `z0` to `z1` and returns `y(z1)`.
pub fn integrate<const N: usize, F>(
    f: F,
    z0: f64,
    z1: f64,
    y0: [Complex64; N],
    tol: Tolerance,
) -> Result<([Complex64; N], Stats)>
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    let mut stats = Stats::default();
    let span = z1 - z0;
    if span == 0.0 {
        return Ok((y0, stats));
    }
    let dir = span.signum();
    let mut z = z0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-3).clamp(1e-12, 0.1);
    let mut k = [[Complex64::new(0.0, 0.0); N]; 7];
    k[0] = f(z, &y);

    while (z1 - z) * dir > 0.0 {
        if stats.accepted + stats.rejected > MAX_STEPS {
            return Err(FwmError::Integration(format!("step limit reached at z = {z}")));
        }
        if (z + h - z1) * dir > 0.0 {
            h = z1 - z;
        }
        for stage in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += kj[i] * (a * h);
                    }
                }
            }
            k[stage] = f(z + C[stage] * h, &ys);
        }
        // FSAL: the last stage is evaluated at the proposed solution.
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let b = A[6][j];
            for i in 0..N {
                y_new[i] += kj[i] * (b * h);
            }
        }
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = Complex64::new(0.0, 0.0);
            for (j, kj) in k.iter().enumerate() {
                e += kj[i] * E[j];
            }
            let scale = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
            err_sq += ((e * h).norm() / scale).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();
        if !err.is_finite() {
            return Err(FwmError::Integration(format!("non-finite error estimate at z = {z}")));
        }
        if err <= 1.0 {
            z += h;
            y = y_new;
            k[0] = k[6];
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-14 * z.abs().max(1.0) {
            return Err(FwmError::Integration(format!("step size underflow at z = {z}")));
        }
    }
    Ok((y, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_rotation() {
        let i = Complex64::i();
        let tol = Tolerance { rtol: 1e-12, atol: 1e-14 };
        let (y, stats) = integrate(|_, y: &[Complex64; 1]| [i * y[0]], 0.0, 10.0, [Complex64::new(1.0, 0.0)], tol).unwrap();
        let exact = (i * 10.0).exp();
        assert!((y[0] - exact).norm() < 1e-10, "{:?}", y[0] - exact);
        assert!(stats.accepted > 10);
    }

    #[test]
    fn backwards_integration() {
        let tol = Tolerance { rtol: 1e-12, atol: 1e-14 };
        let (y, _) = integrate(|_, y: &[Complex64; 1]| [y[0]], 1.0, 0.0, [Complex64::new(1.0f64.exp(), 0.0)], tol).unwrap();
        assert!((y[0] - 1.0).norm() < 1e-10);
    }
}
