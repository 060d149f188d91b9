//! Catenoidal necks and their matching to the neighbouring sphere graphs.

use super::sphere::{Pole, SphereGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeckSpec {
    pub k: usize,
    pub eps: f64,
    /// Undisplaced neck center on the axis.
    pub p_flat: f64,
    pub delta: f64,
    pub rho_prime: f64,
}

impl NeckSpec {
    pub fn new(k: usize, eps: f64, p_flat: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("neck scale {eps} outside (0, 1)")));
        }
        Ok(NeckSpec {
            k,
            eps,
            p_flat,
            delta,
            rho_prime: eps.powf(0.75),
        })
    }

    /// Axial position of the waist.
    pub fn waist(&self) -> f64 {
        self.p_flat + self.delta
    }

    /// Half-range of the arc-length parameter covering `rho ≤ rho'/2`.
    pub fn half_length(&self) -> f64 {
        (0.25 * self.rho_prime * self.rho_prime - self.eps * self.eps).sqrt()
    }

    /// Left (`side = -1`) or right (`side = +1`) catenoid branch as a graph `x0(rho)`,
    /// with first and second derivatives.
    pub fn branch(&self, rho: f64, side: f64) -> (f64, f64, f64) {
        let e = self.eps;
        let d = (rho * rho - e * e).sqrt();
        (
            self.waist() + side * e * (rho / e).acosh(),
            side * e / d,
            -side * e * rho / (d * d * d),
        )
    }

    /// Point, unit tangent and profile curvature at arc length `t` from the waist.
    pub fn at(&self, t: f64) -> (f64, f64, f64, f64, f64) {
        let e = self.eps;
        let rho = e.hypot(t);
        (
            self.waist() + e * (t / e).asinh(),
            rho,
            e / rho,
            t / rho,
            -e / (rho * rho),
        )
    }
}

/// Outcome of [`fit_neck`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeckFit {
    pub neck: NeckSpec,
    /// Summed squared height and slope mismatch at the optimum.
    pub mismatch: f64,
    /// Separation the fit was made for.
    pub sigma: f64,
}

fn mismatch_at(left: &SphereGraph, right: &SphereGraph, eps: f64) -> Result<(f64, f64)> {
    let rp = eps.powf(0.75);
    let (xl, sl, _) = left.height_over_rho(rp, Pole::Plus)?;
    let (xr, sr, _) = right.height_over_rho(rp, Pole::Minus)?;
    let a = eps * (rp / eps).acosh();
    let slope = eps / (rp * rp - eps * eps).sqrt();
    // The heights enter linearly in p, so the best p is the mean offset.
    let p = 0.5 * ((xl + a) + (xr - a));
    let m = (xl - (p - a)).powi(2)
        + (xr - (p + a)).powi(2)
        + (sl + slope).powi(2)
        + (sr - slope).powi(2);
    Ok((m, p))
}

/// Least-squares catenoid between two facing sphere graphs.
///
/// Heights and slopes are compared at `rho' = eps^{3/4}`. The scale is found by
/// golden-section search in `ln eps`; for each scale the optimal center is explicit.
pub fn fit_neck(left: &SphereGraph, right: &SphereGraph, sigma: f64) -> Result<NeckFit> {
    let gap = right.center - left.center - 2.0;
    if !(sigma > 0.0) || !(gap > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gap must be positive (sigma {sigma}, sphere gap {gap})"
        )));
    }
    let guess = left.eps_plus.max(right.eps_minus);
    if !(guess > 0.0) {
        return Err(Error::InvalidArgument("facing poles carry no source".into()));
    }
    let mut a = (guess / 8.0).ln();
    let mut b = (guess * 8.0).min(0.3).ln();
    let cost = |l: f64| mismatch_at(left, right, l.exp()).map(|(m, _)| m);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = cost(c)?;
    let mut fd = cost(d)?;
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = cost(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = cost(d)?;
        }
    }
    let eps = (0.5 * (a + b)).exp();
    let (m, p) = mismatch_at(left, right, eps)?;
    if m > 10.0 * eps.powf(1.5) {
        return Err(Error::FitFailure(format!(
            "mismatch {m:e} exceeds matching bound at eps = {eps:e}"
        )));
    }
    Ok(NeckFit {
        neck: NeckSpec::new(left.k, eps, p, 0.0)?,
        mismatch: m,
        sigma,
    })
}
