//! The weight `ζ`, weighted sup norms, and the defect `H - 2 - r²F` of an approximate
//! solution.

use crate::assembly::{GluedSurface, Region};
use crate::cutoff::psi;
use crate::geometry::ProfileCurve;
use crate::pmc::PmcFunction;
use crate::{Error, Result};

/// Default outer radius of the weight interpolation.
pub const DEFAULT_OUTER_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    pub outer_radius: f64,
    pub values: Vec<f64>,
}

/// `ζ(d)`: `d` inside `R/2`, one beyond `R`, a smooth monotone blend in between.
pub fn weight_of_distance(d: f64, outer_radius: f64) -> f64 {
    let half = 0.5 * outer_radius;
    if d <= half {
        d
    } else if d >= outer_radius {
        1.0
    } else {
        d + (1.0 - d) * psi((d - half) / half)
    }
}

pub fn weight_function(surface: &GluedSurface, outer_radius: f64) -> Result<WeightFunction> {
    if !(outer_radius > 0.0 && outer_radius < 1.0) {
        return Err(Error::InvalidArgument(format!("R = {outer_radius} outside (0, 1)")));
    }
    if let Some(n) = surface.necks.iter().find(|n| n.rho_prime >= outer_radius) {
        return Err(Error::InvalidArgument(format!(
            "R = {outer_radius} does not exceed the matching radius {} of neck {}",
            n.rho_prime, n.k
        )));
    }
    for w in surface.necks.windows(2) {
        if outer_radius >= 0.5 * (w[1].waist() - w[0].waist()) {
            return Err(Error::InvalidArgument(format!(
                "R = {outer_radius} exceeds half the distance between necks {} and {}",
                w[0].k, w[1].k
            )));
        }
    }
    let values = surface
        .neck_distance()
        .into_iter()
        .map(|d| d.map_or(1.0, |(_, d)| weight_of_distance(d, outer_radius)))
        .collect();
    Ok(WeightFunction { outer_radius, values })
}

/// `max ζ^a |v|`.
pub fn weighted_sup(values: &[f64], weight: &WeightFunction, exponent: f64) -> f64 {
    values
        .iter()
        .zip(&weight.values)
        .map(|(v, z)| z.powf(exponent) * v.abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub defect: Vec<f64>,
    pub sup_sphere: f64,
    pub sup_neck: f64,
    pub sup_transition: f64,
    /// `max ζ^{2-ν} |defect|`.
    pub weighted_norm: f64,
    pub nu: f64,
}

/// `r² F(x, N)` at every sample.
pub fn forcing(profile: &ProfileCurve<f64>, f: &PmcFunction, r: f64) -> Result<Vec<f64>> {
    if f.is_zero() {
        return Ok(vec![0.0; profile.len()]);
    }
    profile
        .samples
        .iter()
        .map(|s| {
            let (p, n) = s.lifted();
            Ok(r * r * f.eval(p, n)?)
        })
        .collect()
}

/// Defect of the approximate solution, with the default weight radius.
pub fn defect(surface: &GluedSurface, f: &PmcFunction, nu: f64) -> Result<DefectReport> {
    defect_with_radius(surface, f, nu, DEFAULT_OUTER_RADIUS)
}

pub fn defect_with_radius(
    surface: &GluedSurface,
    f: &PmcFunction,
    nu: f64,
    outer_radius: f64,
) -> Result<DefectReport> {
    if !(nu > 1.0 && nu < 2.0) {
        return Err(Error::InvalidArgument(format!("nu = {nu} outside (1, 2)")));
    }
    let h = surface.profile.mean_curvatures()?;
    let force = forcing(&surface.profile, f, surface.config.r)?;
    let defect: Vec<f64> = h.iter().zip(&force).map(|(h, g)| h - 2.0 - g).collect();
    let sup = |pick: fn(&Region) -> bool| {
        defect
            .iter()
            .zip(&surface.regions)
            .filter(|(_, r)| pick(r))
            .map(|(d, _)| d.abs())
            .fold(0.0, f64::max)
    };
    let weight = weight_function(surface, outer_radius)?;
    Ok(DefectReport {
        sup_sphere: sup(|r| matches!(r, Region::Sphere(_))),
        sup_neck: sup(|r| matches!(r, Region::Neck(_))),
        sup_transition: sup(|r| matches!(r, Region::Transition(_))),
        weighted_norm: weighted_sup(&defect, &weight, 2.0 - nu),
        defect,
        nu,
    })
}
