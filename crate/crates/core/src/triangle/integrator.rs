//! Dormand–Prince 5(4) with local error control, for linear systems
//! `Y′ = F(t)·Y` in 2×2 complex matrices.

use nalgebra::Matrix2;
use num::complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Matrix2<Complex64>;

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
/// Fifth-order weights (equal to the last row of `A`).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Tolerance {
    pub fn new(rtol: f64) -> Result<Self> {
        if !(rtol.is_finite() && rtol > 0.0) {
            return Err(Error::Invalid(format!("integration tolerance must be positive, got {rtol}")));
        }
        Ok(Tolerance { rtol, atol: rtol, max_steps: 1_000_000 })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

fn error_norm(err: &CMatrix, y0: &CMatrix, y1: &CMatrix, tol: &Tolerance) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..4 {
        let scale = tol.atol + tol.rtol * y0[k].norm().max(y1[k].norm());
        worst = worst.max(err[k].norm() / scale);
    }
    worst
}

/// Integrates `Y′ = f(t)·Y` from `t = 0` to `t = 1` starting at `y0`.
pub fn integrate(f: impl Fn(f64) -> CMatrix, y0: CMatrix, tol: &Tolerance, stats: &mut Stats) -> Result<CMatrix> {
    let mut t = 0.0;
    let mut y = y0;
    let mut h: f64 = 0.01;
    let mut steps = 0;
    let mut k = [CMatrix::zeros(); 7];
    while t < 1.0 {
        steps += 1;
        if steps > tol.max_steps {
            return Err(Error::NumericalAccuracy(format!("no convergence within {} steps", tol.max_steps)));
        }
        h = h.min(1.0 - t);
        for i in 0..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i) {
                if A[i][j] != 0.0 {
                    yi += kj * Complex64::new(h * A[i][j], 0.0);
                }
            }
            k[i] = f(t + C[i] * h) * yi;
        }
        let mut y5 = y;
        let mut err = CMatrix::zeros();
        for i in 0..7 {
            y5 += k[i] * Complex64::new(h * B5[i], 0.0);
            err += k[i] * Complex64::new(h * (B5[i] - B4[i]), 0.0);
        }
        let e = error_norm(&err, &y, &y5, tol);
        if !e.is_finite() {
            return Err(Error::NumericalAccuracy(format!("non-finite state at t = {t}")));
        }
        if e <= 1.0 {
            t += h;
            y = y5;
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 {
            return Err(Error::NumericalAccuracy(format!("step size underflow at t = {t}")));
        }
    }
    Ok(y)
}
