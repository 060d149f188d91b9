//! Newton solve of `Φ(f) ∈ W̃` with `f ⊥ W̃`.

use super::basis::ProjectionBasis;
use super::operator::control_volumes;
use super::weight::{forcing, weight_function, weighted_sup, DEFAULT_OUTER_RADIUS};
use crate::assembly::GluedSurface;
use crate::geometry::{normal_graph_values, ProfileCurve};
use crate::pmc::PmcFunction;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub const NEWTON_TOL: f64 = 1e-10;
pub const MAX_NEWTON: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedSolution {
    pub f: Vec<f64>,
    /// Coefficients of `Φ(f)` on the basis of `W̃`.
    pub w_coeffs: Vec<f64>,
    pub newton_iters: usize,
    pub residual: f64,
    /// `max ζ^{-ν} |f|`.
    pub weighted_norm: f64,
}

/// Mean curvature from finite differences of the tangent; at a pole both principal
/// curvatures are taken equal.
pub fn difference_mean_curvature(profile: &ProfileCurve<f64>) -> Vec<f64> {
    let plain = profile.untagged();
    let k1 = plain.profile_curvatures();
    profile
        .samples
        .iter()
        .zip(k1)
        .map(|(s, a)| if s.is_pole() { 2.0 * a } else { a + s.dx0 / s.rho })
        .collect()
}

/// `Φ(f) = H - 2 - r²F` on the normal graph of `f`.
///
/// The curvature of the graph is the closed-form curvature of the base plus the
/// finite-difference change, so that `Φ(0)` is the exact defect of the base.
pub struct Residual<'a> {
    base: &'a ProfileCurve<f64>,
    h_base: Vec<f64>,
    h_fd_base: Vec<f64>,
    f: &'a PmcFunction,
    r: f64,
}

impl<'a> Residual<'a> {
    pub fn new(base: &'a ProfileCurve<f64>, f: &'a PmcFunction, r: f64) -> Result<Self> {
        Ok(Residual {
            h_base: base.mean_curvatures()?,
            h_fd_base: difference_mean_curvature(base),
            base,
            f,
            r,
        })
    }

    pub fn eval(&self, g: &[f64]) -> Result<Vec<f64>> {
        let moved = normal_graph_values(self.base, g)?;
        let h = difference_mean_curvature(&moved);
        let force = forcing(&moved, self.f, self.r)?;
        Ok((0..g.len())
            .map(|i| self.h_base[i] + (h[i] - self.h_fd_base[i]) - 2.0 - force[i])
            .collect())
    }
}

/// Finds `f` orthogonal to `W̃` with `Φ(f) = Σ c_i w_i`.
pub fn solve_projected(
    surface: &GluedSurface,
    f: &PmcFunction,
    basis: &ProjectionBasis,
    nu: f64,
) -> Result<ProjectedSolution> {
    if !(nu > 1.0 && nu < 2.0) {
        return Err(Error::InvalidArgument(format!("nu = {nu} outside (1, 2)")));
    }
    let n = surface.len();
    let r = surface.config.r;
    let base = &surface.profile;
    let phi = Residual::new(base, f, r)?;
    let w = &basis.w_basis;
    let m = w.len();
    let d = &control_volumes(base);
    let mut g = vec![0.0; n];
    let mut c = vec![0.0; m];
    let mut last = f64::INFINITY;
    for it in 0..=MAX_NEWTON {
        let value = phi.eval(&g)?;
        let res: Vec<f64> = (0..n)
            .map(|i| value[i] - (0..m).map(|j| c[j] * w[j][i]).sum::<f64>())
            .collect();
        let size = res.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if !size.is_finite() || (it > 2 && size > 10.0 * last) {
            return Err(Error::NewtonDivergence(format!("residual {size:e} at iteration {it}")));
        }
        if size <= NEWTON_TOL {
            let weight = weight_function(surface, DEFAULT_OUTER_RADIUS)?;
            return Ok(ProjectedSolution {
                weighted_norm: weighted_sup(&g, &weight, -nu),
                f: g,
                w_coeffs: c,
                newton_iters: it,
                residual: size,
            });
        }
        if it == MAX_NEWTON {
            break;
        }
        last = size;
        let a = residual_jacobian(&phi, &g)?;
        // Unknowns (Δf, Δc): A Δf - W Δc = -res, Wᵀ D Δf = -Wᵀ D f.
        let neg_w: Vec<Vec<f64>> = w.iter().map(|col| col.iter().map(|v| -v).collect()).collect();
        let rhs: Vec<f64> = res.iter().map(|v| -v).collect();
        let target: Vec<f64> = w
            .iter()
            .map(|col| -(0..n).map(|i| col[i] * d[i] * g[i]).sum::<f64>())
            .collect();
        let (dx, dc) = bordered_solve(&a, &neg_w, w, d, &rhs, &target)?;
        for i in 0..n {
            g[i] += dx[i];
        }
        for j in 0..m {
            c[j] += dc[j];
        }
    }
    Err(Error::NewtonDivergence(format!("no convergence in {MAX_NEWTON} iterations")))
}

/// Half-width of the stencil of [`Residual::eval`].
const STENCIL: usize = 3;

/// Banded Jacobian of `Φ` by central differences, perturbing every
/// `2 STENCIL + 1`-th sample at once.
///
/// This is the discrete counterpart of `-L`; using it instead of the flux-form
/// operator keeps Newton quadratic on the residual as actually evaluated.
fn residual_jacobian(phi: &Residual, g: &[f64]) -> Result<DMatrix<f64>> {
    let n = g.len();
    let stride = 2 * STENCIL + 1;
    let h = 1e-6;
    let mut jac = DMatrix::zeros(n, n);
    for color in 0..stride {
        let mut plus = g.to_vec();
        let mut minus = g.to_vec();
        for j in (color..n).step_by(stride) {
            plus[j] += h;
            minus[j] -= h;
        }
        let fp = phi.eval(&plus)?;
        let fm = phi.eval(&minus)?;
        for j in (color..n).step_by(stride) {
            for i in j.saturating_sub(STENCIL)..(j + STENCIL + 1).min(n) {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
    }
    Ok(jac)
}

/// `[A  B; Wᵀ D  0] (x, c) = (b, t)`.
fn bordered_solve(
    a: &DMatrix<f64>,
    bcols: &[Vec<f64>],
    w: &[Vec<f64>],
    d: &[f64],
    b: &[f64],
    t: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = bcols.len();
    let lu = a.clone().lu();
    let solve = |v: &[f64]| -> Result<Vec<f64>> {
        lu.solve(&DVector::from_column_slice(v))
            .map(|x| x.iter().copied().collect())
            .ok_or_else(|| Error::IllConditioned("singular Jacobian".into()))
    };
    let ab = solve(b)?;
    let acols = bcols.iter().map(|col| solve(col)).collect::<Result<Vec<_>>>()?;
    let dot = |u: &[f64], v: &[f64]| -> f64 { (0..u.len()).map(|i| u[i] * d[i] * v[i]).sum() };
    // Wᵀ D (A⁻¹ b - A⁻¹ B c) = t.
    let s = DMatrix::from_fn(m, m, |i, j| dot(&w[i], &acols[j]));
    let rhs = DVector::from_fn(m, |i, _| dot(&w[i], &ab) - t[i]);
    let c = s
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned("singular bordered system".into()))?;
    let x = (0..b.len())
        .map(|i| ab[i] - (0..m).map(|j| c[j] * acols[j][i]).sum::<f64>())
        .collect();
    Ok((x, c.iter().copied().collect()))
}
