//! Unit spheres bent toward their necks by Green's-function normal graphs.
//!
//! Sphere `k` is parametrized by the polar angle `φ` from its left pole `p⁻`:
//! `x0 = c - (1 + f) cos φ`, `rho = (1 + f) sin φ`.

use super::green::{green_closed, green_function, legendre_series};
use crate::geometry::{AnalyticTag, ProfileCurve, ProfileSample};
use crate::quadrature::integrate;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Scale applied to each unit source so that the graph behaves like `-ε log θ` near a
/// pole, the same logarithmic growth as a catenoid of waist `ε`.
pub const SOURCE_SCALE: f64 = -2.0 * PI;

/// `sqrt(3 / 4π)`, the value of the normalized `J` at a pole.
pub const J_NORM: f64 = 0.488_602_511_902_919_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pole {
    /// Left pole, `φ = 0`.
    Minus,
    /// Right pole, `φ = π`.
    Plus,
}

/// Position and `φ`-derivatives of a sphere point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointJet {
    pub x: f64,
    pub r: f64,
    pub dx: f64,
    pub dr: f64,
    pub ddx: f64,
    pub ddr: f64,
}

impl PointJet {
    pub fn speed(&self) -> f64 {
        self.dx.hypot(self.dr)
    }

    /// Profile curvature `(dr ddx - dx ddr) / speed^3`.
    pub fn kappa(&self) -> f64 {
        (self.dr * self.ddx - self.dx * self.ddr) / self.speed().powi(3)
    }
}

/// Green's-function graph over sphere `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGraph {
    pub k: usize,
    pub center: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Coefficient of the normalized `J_k` in `(Δ + 2) f`.
    pub a_k: f64,
    /// Legendre coefficients of `f` in `cos θ` measured from `p⁺`.
    pub coeffs: Vec<f64>,
    /// Truncation radius at `p⁺`; zero when the cap is kept.
    pub rho_plus: f64,
    /// Truncation radius at `p⁻`; zero when the cap is kept.
    pub rho_minus: f64,
}

impl SphereGraph {
    pub fn new(k: usize, center: f64, eps_plus: f64, eps_minus: f64, l_max: usize) -> Result<Self> {
        let mut g = Self::closed_form(k, center, eps_plus, eps_minus)?;
        let green = green_function(l_max)?;
        g.coeffs = green
            .iter()
            .enumerate()
            .map(|(l, gl)| {
                let parity = if l % 2 == 0 { 1.0 } else { -1.0 };
                SOURCE_SCALE * (eps_plus + parity * eps_minus) * gl
            })
            .collect();
        Ok(g)
    }

    /// Graph without the stored series; every evaluation uses the closed form.
    pub fn closed_form(k: usize, center: f64, eps_plus: f64, eps_minus: f64) -> Result<Self> {
        if !(eps_plus >= 0.0 && eps_minus >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "neck scales must be non-negative, got ({eps_plus}, {eps_minus})"
            )));
        }
        let trunc = |e: f64| if e > 0.0 { e.powf(0.75) } else { 0.0 };
        Ok(SphereGraph {
            k,
            center,
            eps_plus,
            eps_minus,
            a_k: -SOURCE_SCALE * (3.0 / (4.0 * PI)) / J_NORM * (eps_plus - eps_minus),
            coeffs: Vec::new(),
            rho_plus: trunc(eps_plus),
            rho_minus: trunc(eps_minus),
        })
    }

    /// Height `x0 - center` at radius `rho` near `pole`.
    pub fn height(&self, rho: f64, pole: Pole) -> Result<f64> {
        Ok(self.height_over_rho(rho, pole)?.0 - self.center)
    }

    /// `f`, `f'`, `f''` in `φ`.
    pub fn perturbation(&self, phi: f64) -> (f64, f64, f64) {
        let mut out = (0.0, 0.0, 0.0);
        if self.eps_minus > 0.0 {
            let (g, d, dd) = green_closed(phi);
            let e = SOURCE_SCALE * self.eps_minus;
            out = (out.0 + e * g, out.1 + e * d, out.2 + e * dd);
        }
        if self.eps_plus > 0.0 {
            let (g, d, dd) = green_closed(PI - phi);
            let e = SOURCE_SCALE * self.eps_plus;
            out = (out.0 + e * g, out.1 - e * d, out.2 + e * dd);
        }
        out
    }

    /// `f` from the truncated Legendre series.
    pub fn perturbation_series(&self, phi: f64) -> f64 {
        legendre_series(&self.coeffs, -phi.cos())
    }

    pub fn jet(&self, phi: f64) -> PointJet {
        let (f, f1, f2) = self.perturbation(phi);
        let (s, c) = phi.sin_cos();
        let a = 1.0 + f;
        PointJet {
            x: self.center - a * c,
            r: a * s,
            dx: -f1 * c + a * s,
            dr: f1 * s + a * c,
            ddx: -f2 * c + 2.0 * f1 * s + a * c,
            ddr: f2 * s + 2.0 * f1 * c - a * s,
        }
    }

    /// Angle at which the graph reaches radius `rho` near `pole`.
    pub fn phi_at_rho(&self, rho: f64, pole: Pole) -> Result<f64> {
        if !(rho > 0.0 && rho < 0.9) {
            return Err(Error::InvalidArgument(format!("radius {rho} outside (0, 0.9)")));
        }
        let mut phi = match pole {
            Pole::Minus => rho.asin(),
            Pole::Plus => PI - rho.asin(),
        };
        for _ in 0..100 {
            let j = self.jet(phi);
            let step = (j.r - rho) / j.dr;
            phi -= step;
            if step.abs() < 1e-15 * phi.abs().max(1.0) {
                return Ok(phi);
            }
        }
        Err(Error::FitFailure(format!("radius {rho} not reached on sphere {}", self.k)))
    }

    /// The graph near `pole` written as `x0(rho)` with first and second derivatives.
    pub fn height_over_rho(&self, rho: f64, pole: Pole) -> Result<(f64, f64, f64)> {
        let phi = self.phi_at_rho(rho, pole)?;
        let j = self.jet(phi);
        let x1 = j.dx / j.dr;
        let x2 = (j.ddx * j.dr - j.dx * j.ddr) / j.dr.powi(3);
        Ok((j.x, x1, x2))
    }

    /// Sample at `φ` with `t` left at zero, and its profile curvature.
    pub fn sample(&self, phi: f64) -> (ProfileSample<f64>, f64) {
        let j = self.jet(phi);
        let sp = j.speed();
        let r = if phi == 0.0 || phi == PI { 0.0 } else { j.r };
        (
            ProfileSample {
                t: 0.0,
                x0: j.x,
                rho: r,
                dx0: j.dx / sp,
                drho: j.dr / sp,
            },
            j.kappa(),
        )
    }

    /// Arc length between two angles.
    pub fn arc_length(&self, a: f64, b: f64) -> f64 {
        integrate(|p| self.jet(p).speed(), a, b, 8)
    }

    /// Angular range kept after truncation.
    pub fn phi_range(&self) -> Result<(f64, f64)> {
        let lo = if self.rho_minus > 0.0 {
            self.phi_at_rho(self.rho_minus, Pole::Minus)?
        } else {
            0.0
        };
        let hi = if self.rho_plus > 0.0 {
            self.phi_at_rho(self.rho_plus, Pole::Plus)?
        } else {
            PI
        };
        Ok((lo, hi))
    }

    /// Profile through the given angles, with closed-form curvatures.
    pub fn profile_at(&self, phis: &[f64]) -> ProfileCurve<f64> {
        let mut samples = Vec::with_capacity(phis.len());
        let mut kappa = Vec::with_capacity(phis.len());
        let mut t = 0.0;
        for (i, &p) in phis.iter().enumerate() {
            if i > 0 {
                t += self.arc_length(phis[i - 1], p);
            }
            let (mut s, k) = self.sample(p);
            s.t = t;
            samples.push(s);
            kappa.push(k);
        }
        ProfileCurve {
            samples,
            tag: AnalyticTag::None,
            kappa: Some(kappa),
        }
    }
}

/// Sphere `k` perturbed by sources of strength `eps_plus` at `p⁺` and `eps_minus` at
/// `p⁻`, truncated at radius `eps^{3/4}` around each source, sampled at `n + 1` angles.
pub fn perturbed_sphere(
    k: usize,
    center: f64,
    eps_plus: f64,
    eps_minus: f64,
    l_max: usize,
    n: usize,
) -> Result<(SphereGraph, ProfileCurve<f64>)> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two intervals".into()));
    }
    let g = SphereGraph::new(k, center, eps_plus, eps_minus, l_max)?;
    let (lo, hi) = g.phi_range()?;
    let phis: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    let profile = g.profile_at(&phis);
    Ok((g, profile))
}
