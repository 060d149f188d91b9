//! The G-invariant linearized operator `L = Δ + |B|² + r²(⟨D1F, N⟩ - ⟨D2F, ∇·⟩)` on a
//! profile grid, its spectrum, and the Jacobi fields.

use crate::assembly::{GluedSurface, Region};
use crate::geometry::ProfileCurve;
use crate::linalg::{SymTridiagonal, Tridiagonal};
use crate::pmc::PmcFunction;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Eigenvalues of magnitude at most this count as approximate kernel.
pub const KERNEL_THRESHOLD: f64 = 0.1;

/// `L` in flux form: `(Lf)_i = [a_{i+½}(f_{i+1} - f_i) - a_{i-½}(f_i - f_{i-1})] / D_i + …`
/// with `a = ρ/h` at midpoints and `D_i` the half-cell integral of `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    pub matrix: Tridiagonal,
    /// Control-volume weights `D_i = ∫ ρ dt` over the dual cell of sample `i`.
    pub volume: Vec<f64>,
}

impl DiscreteOperator {
    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.matrix.apply(f)
    }

    /// `D^{1/2} L D^{-1/2}` with the first-order part averaged into symmetric form.
    pub fn symmetrized(&self) -> SymTridiagonal {
        let m = &self.matrix;
        let off = (0..m.len().saturating_sub(1))
            .map(|i| {
                let s = (self.volume[i] / self.volume[i + 1]).sqrt();
                0.5 * (m.upper[i] * s + m.lower[i] / s)
            })
            .collect();
        SymTridiagonal {
            diag: m.diag.clone(),
            off,
        }
    }
}

/// Control volumes `D_i`; at a pole this is `h²/8`.
pub fn control_volumes(profile: &ProfileCurve<f64>) -> Vec<f64> {
    let s = &profile.samples;
    let n = s.len();
    (0..n)
        .map(|i| {
            let mut d = 0.0;
            if i > 0 {
                d += (s[i].t - s[i - 1].t) * (s[i - 1].rho + 3.0 * s[i].rho) / 8.0;
            }
            if i + 1 < n {
                d += (s[i + 1].t - s[i].t) * (3.0 * s[i].rho + s[i + 1].rho) / 8.0;
            }
            d
        })
        .collect()
}

/// Trapezoid weights for `∫ v dVol = Σ w_i v_i` with `dVol = 2πρ dt`.
pub fn volume_weights(profile: &ProfileCurve<f64>) -> Vec<f64> {
    let s = &profile.samples;
    let n = s.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { s[i].t - s[i - 1].t } else { 0.0 };
            let right = if i + 1 < n { s[i + 1].t - s[i].t } else { 0.0 };
            PI * (left + right) * s[i].rho
        })
        .collect()
}

/// `∫ v dVol` by the trapezoid rule.
pub fn integrate(profile: &ProfileCurve<f64>, v: &[f64]) -> f64 {
    volume_weights(profile).iter().zip(v).map(|(w, x)| w * x).sum()
}

/// Coefficients `c₁ = ⟨D1F, N⟩` and `c₂ = -⟨D2F, T⟩` per sample.
pub fn forcing_coefficients(profile: &ProfileCurve<f64>, f: &PmcFunction) -> Result<Vec<(f64, f64)>> {
    if f.is_zero() {
        return Ok(vec![(0.0, 0.0); profile.len()]);
    }
    profile
        .samples
        .iter()
        .map(|s| {
            let (p, n) = s.lifted();
            let (d1, d2) = f.derivatives(p, n)?;
            let c1 = d1[0] * n[0] + d1[1] * n[1];
            let c2 = -(d2[0] * s.dx0 + d2[1] * s.drho);
            Ok((c1, c2))
        })
        .collect()
}

/// Discrete `L` on the samples of `profile`, with natural conditions at the ends.
pub fn linearized_operator(profile: &ProfileCurve<f64>, f: &PmcFunction, r: f64) -> Result<DiscreteOperator> {
    let n = profile.len();
    if n < 3 {
        return Err(Error::InvalidArgument("operator needs at least 3 samples".into()));
    }
    let s = &profile.samples;
    let b2: Vec<f64> = profile
        .principal_curvatures()?
        .into_iter()
        .map(|(a, b)| a * a + b * b)
        .collect();
    let coeff = forcing_coefficients(profile, f)?;
    let volume = control_volumes(profile);
    let flux: Vec<f64> = (0..n - 1)
        .map(|i| 0.5 * (s[i].rho + s[i + 1].rho) / (s[i + 1].t - s[i].t))
        .collect();
    let r2 = r * r;
    let mut m = Tridiagonal::zeros(n);
    for i in 0..n {
        let mut diag = b2[i] + r2 * coeff[i].0;
        if i > 0 {
            diag -= flux[i - 1] / volume[i];
            m.lower[i - 1] = flux[i - 1] / volume[i];
        }
        if i + 1 < n {
            diag -= flux[i] / volume[i];
            m.upper[i] = flux[i] / volume[i];
        }
        if i > 0 && i + 1 < n && coeff[i].1 != 0.0 {
            let (t0, t1, t2) = (s[i - 1].t, s[i].t, s[i + 1].t);
            let w0 = (t1 - t2) / ((t0 - t1) * (t0 - t2));
            let w1 = (2.0 * t1 - t0 - t2) / ((t1 - t0) * (t1 - t2));
            let w2 = (t1 - t0) / ((t2 - t0) * (t2 - t1));
            let c = r2 * coeff[i].1;
            m.lower[i - 1] += c * w0;
            diag += c * w1;
            m.upper[i] += c * w2;
        }
        m.diag[i] = diag;
    }
    Ok(DiscreteOperator { matrix: m, volume })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    /// Eigenvalues ordered by increasing magnitude.
    pub eigenvalues: Vec<f64>,
    /// Number of eigenvalues with `|λ| ≤ threshold` over the whole spectrum.
    pub kernel_count: usize,
    pub threshold: f64,
}

/// The `m` eigenvalues of smallest magnitude of the symmetrized operator.
pub fn spectrum(op: &DiscreteOperator, m: usize) -> Result<SpectralReport> {
    let sym = op.symmetrized();
    Ok(SpectralReport {
        eigenvalues: sym.smallest_magnitude(m)?,
        kernel_count: sym.count_within(KERNEL_THRESHOLD),
        threshold: KERNEL_THRESHOLD,
    })
}

/// `⟨e₀, N⟩` at every sample.
pub fn axial_normal(profile: &ProfileCurve<f64>) -> Vec<f64> {
    profile.samples.iter().map(|s| -s.drho).collect()
}

/// `⟨e₀, N⟩` scaled to unit `L²` norm over the samples of sphere `k`; defined on every
/// sample so that cutoffs can localize it.
pub fn jacobi_sphere(k: usize, surface: &GluedSurface) -> Result<Vec<f64>> {
    let j = axial_normal(&surface.profile);
    let w = volume_weights(&surface.profile);
    let norm2: f64 = (0..j.len())
        .filter(|&i| surface.regions[i] == Region::Sphere(k))
        .map(|i| w[i] * j[i] * j[i])
        .sum();
    if !(norm2 > 0.0) {
        return Err(Error::InvalidArgument(format!("no samples on sphere {k}")));
    }
    let s = 1.0 / norm2.sqrt();
    Ok(j.into_iter().map(|v| v * s).collect())
}

/// The axial translation field `⟨e₀, N⟩` for neck `k`, defined on every sample.
pub fn jacobi_neck(k: usize, surface: &GluedSurface) -> Result<Vec<f64>> {
    if k >= surface.necks.len() {
        return Err(Error::InvalidArgument(format!("no neck {k}")));
    }
    Ok(axial_normal(&surface.profile))
}
