//! Axisymmetric Green's function of `Δ + 2` on the unit sphere with the `l = 1`
//! mode projected out.
//!
//! With `x = cos θ` measured from the source pole,
//! `G(x) = (1 + x ln(1 - x)) / 4π + c x`, `c = (4 - ln 8) / 12π`, solves
//! `(Δ + 2) G = δ - (3 / 4π) x` and has Legendre coefficients
//! `(2l + 1) / (4π (2 - l(l + 1)))` for `l ≠ 1` and zero for `l = 1`.

use crate::{Error, Result};
use std::f64::consts::PI;

/// Linear coefficient fixing orthogonality to the `l = 1` mode.
pub const GREEN_LINEAR: f64 = 0.050_944_395_356_433_99;

/// Legendre coefficients `g_0, …, g_{l_max}` of `G`.
pub fn green_function(l_max: usize) -> Result<Vec<f64>> {
    if l_max < 8 {
        return Err(Error::InvalidArgument(format!("l_max must be ≥ 8, got {l_max}")));
    }
    Ok((0..=l_max)
        .map(|l| {
            if l == 1 {
                0.0
            } else {
                let lf = l as f64;
                (2.0 * lf + 1.0) / (4.0 * PI * (2.0 - lf * (lf + 1.0)))
            }
        })
        .collect())
}

/// `Σ c_l P_l(x)`.
pub fn legendre_series(coeffs: &[f64], x: f64) -> f64 {
    let mut p0 = 1.0;
    let mut p1 = x;
    let mut acc = coeffs.first().copied().unwrap_or(0.0);
    if coeffs.len() > 1 {
        acc += coeffs[1] * x;
    }
    for (l, c) in coeffs.iter().enumerate().skip(2) {
        let lf = l as f64;
        let p2 = ((2.0 * lf - 1.0) * x * p1 - (lf - 1.0) * p0) / lf;
        acc += c * p2;
        p0 = p1;
        p1 = p2;
    }
    acc
}

/// `G` and its first two derivatives in the polar angle `θ` from the source.
pub fn green_closed(theta: f64) -> (f64, f64, f64) {
    let (s, x) = theta.sin_cos();
    let half = (0.5 * theta).sin();
    // 1 - x without cancellation.
    let omx = 2.0 * half * half;
    let q = 1.0 / (4.0 * PI);
    let g = q * (1.0 + x * omx.ln()) + GREEN_LINEAR * x;
    let gx = q * (omx.ln() - x / omx) + GREEN_LINEAR;
    let gxx = -q * (2.0 - x) / (omx * omx);
    (g, -s * gx, s * s * gxx - x * gx)
}

/// `G` at `x = cos θ`.
pub fn green_value(x: f64) -> f64 {
    let omx = 1.0 - x;
    (1.0 + x * omx.ln()) / (4.0 * PI) + GREEN_LINEAR * x
}
