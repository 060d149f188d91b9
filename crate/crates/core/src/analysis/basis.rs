//! Cutoffs, the finite-dimensional space `W̃`, and projections onto it.

use super::operator::{jacobi_neck, jacobi_sphere, linearized_operator, volume_weights};
use crate::assembly::{GluedSurface, Region};
use crate::cutoff::psi;
use crate::pmc::PmcFunction;
use crate::{Error, Result};

/// Cutoffs and kernel functions on the samples of one glued surface.
///
/// Vectors indexed by sphere have `K` entries, those indexed by neck `K - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionBasis {
    pub chi_ext: Vec<Vec<f64>>,
    pub chi_ext_prime: Vec<Vec<f64>>,
    pub chi_neck: Vec<Vec<f64>>,
    pub eta: Vec<Vec<f64>>,
    pub j: Vec<Vec<f64>>,
    pub i: Vec<Vec<f64>>,
    /// `χ_ext(k) J_k` at even positions and `χ_ext(k) L(η_k) / √ε_k` at odd ones.
    ///
    /// Against the nearly constant `I_k` the leading part of `L(η_k)` integrates to zero
    /// and the remainder is of order `√ε_k`, hence the scaling.
    pub w_basis: Vec<Vec<f64>>,
}

impl ProjectionBasis {
    /// `2K - 1`.
    pub fn dim(&self) -> usize {
        self.w_basis.len()
    }
}

/// Which side of neck `k` a transition sample lies on.
fn on_left_of(surface: &GluedSurface, i: usize, k: usize) -> bool {
    surface.profile.samples[i].x0 < surface.necks[k].waist()
}

pub fn projection_basis(surface: &GluedSurface) -> Result<ProjectionBasis> {
    let n = surface.len();
    let kk = surface.config.k;
    let samples = &surface.profile.samples;
    let necks = &surface.necks;
    let dist = |i: usize, k: usize| (samples[i].x0 - necks[k].waist()).hypot(samples[i].rho);

    let mut chi_ext = vec![vec![0.0; n]; kk];
    let mut chi_ext_prime = vec![vec![0.0; n]; kk];
    let mut chi_neck = vec![vec![0.0; n]; kk - 1];
    let mut eta = vec![vec![0.0; n]; kk - 1];
    for i in 0..n {
        match surface.regions[i] {
            Region::Sphere(k) => {
                chi_ext[k][i] = 1.0;
                let mut v = 1.0;
                for m in [k.checked_sub(1), (k + 1 < kk).then_some(k)].into_iter().flatten() {
                    let rp = necks[m].rho_prime;
                    let y = (dist(i, m) - rp) / rp;
                    v *= psi(y);
                    chi_neck[m][i] = 1.0 - psi(y);
                }
                chi_ext_prime[k][i] = v;
            }
            Region::Transition(m) => {
                let rp = necks[m].rho_prime;
                let rho = samples[i].rho;
                chi_neck[m][i] = 1.0;
                let side = if on_left_of(surface, i, m) { m } else { m + 1 };
                chi_ext[side][i] = psi((rho - 0.5 * rp) / (0.25 * rp));
                if side == m {
                    eta[m][i] = 1.0 - psi((rho - 0.75 * rp) / (0.25 * rp));
                }
            }
            Region::Neck(m) => chi_neck[m][i] = 1.0,
        }
    }
    for k in 0..kk {
        let overlap: f64 = (0..kk - 1)
            .map(|m| (0..n).map(|i| chi_ext_prime[k][i] * eta[m][i]).sum::<f64>())
            .sum();
        if overlap != 0.0 {
            return Err(Error::GeometryTooTight(format!(
                "exterior cutoff of sphere {k} meets a transition bump"
            )));
        }
    }
    for m in 0..kk - 1 {
        let meets = |c: &Vec<f64>| (0..n).any(|i| c[i] > 0.0 && chi_neck[m][i] > 0.0);
        if !meets(&chi_ext[m]) || !meets(&chi_ext[m + 1]) {
            return Err(Error::GeometryTooTight(format!(
                "neck cutoff {m} does not overlap both exterior cutoffs"
            )));
        }
    }
    let j = (0..kk)
        .map(|k| jacobi_sphere(k, surface))
        .collect::<Result<Vec<_>>>()?;
    let ifield = (0..kk - 1)
        .map(|m| jacobi_neck(m, surface))
        .collect::<Result<Vec<_>>>()?;
    let op = linearized_operator(&surface.profile, &PmcFunction::zero(), surface.config.r)?;
    let mut w_basis = Vec::with_capacity(2 * kk - 1);
    for k in 0..kk {
        w_basis.push((0..n).map(|i| chi_ext[k][i] * j[k][i]).collect());
        if k + 1 < kk {
            let le = op.apply(&eta[k]);
            let scale = 1.0 / necks[k].eps.sqrt();
            w_basis.push((0..n).map(|i| chi_ext[k][i] * le[i] * scale).collect());
        }
    }
    Ok(ProjectionBasis {
        chi_ext,
        chi_ext_prime,
        chi_neck,
        eta,
        j,
        i: ifield,
        w_basis,
    })
}

/// `π(e)`: `∫ e χ'_ext(k) J_k` at even positions, `∫ e χ_neck(k) I_k` at odd ones.
pub fn project(e: &[f64], basis: &ProjectionBasis, surface: &GluedSurface) -> Vec<f64> {
    let w = volume_weights(&surface.profile);
    let kk = basis.j.len();
    let dot = |a: &[f64], b: &[f64]| -> f64 {
        (0..e.len()).map(|i| w[i] * e[i] * a[i] * b[i]).sum()
    };
    let mut out = Vec::with_capacity(2 * kk - 1);
    for k in 0..kk {
        out.push(dot(&basis.chi_ext_prime[k], &basis.j[k]));
        if k + 1 < kk {
            out.push(dot(&basis.chi_neck[k], &basis.i[k]));
        }
    }
    out
}
