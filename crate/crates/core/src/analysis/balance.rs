//! Balancing constants, the balancing map and its two-stage solution.

use super::basis::{project, projection_basis, ProjectionBasis};
use super::weight::defect;
use super::Resolution;
use crate::assembly::sphere::J_NORM;
use crate::assembly::{glue, glue_with_layout, Configuration, GlueLayout, GluedSurface};
use crate::linalg::least_squares;
use crate::moments::{find_balanced_s, moment_sum, MomentVector};
use crate::pmc::PmcFunction;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Largest relative spread across necks or spheres accepted for a constant.
pub const MAX_SPREAD: f64 = 0.10;
/// Relative step for differencing the balancing map in the neck scales.
pub const EPS_STEP: f64 = 1e-3;
/// Tolerance on the image-projected balancing residual.
pub const INNER_TOL: f64 = 1e-10;
pub const MAX_INNER: usize = 50;
pub const MAX_OUTER: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct BalancingConstants {
    pub c1: f64,
    /// Response of a neck projection to the sphere on its right.
    pub c1_prime: f64,
    /// Response of a neck projection to the sphere on its left, with the sign that the
    /// antisymmetric pattern `C1'(ε^{3/2} a_{k+1} - ε^{3/2} a_k)` would give.
    pub c1_prime_left: f64,
    pub c2: f64,
    /// Largest relative spread across `k` among `c1` and `c2`.
    pub spread: f64,
    pub samples: usize,
    pub k: usize,
}

fn mean_spread(v: &[f64]) -> (f64, f64) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (m, if m != 0.0 { (hi - lo) / m.abs() } else { 0.0 })
}

/// Probes the projections with the basis of `W̃`.
pub fn balancing_constants(surface: &GluedSurface, basis: &ProjectionBasis) -> Result<BalancingConstants> {
    let kk = surface.config.k;
    if kk < 2 {
        return Err(Error::InvalidArgument("balancing constants need K ≥ 2".into()));
    }
    let probe: Vec<Vec<f64>> = basis
        .w_basis
        .iter()
        .map(|w| project(w, basis, surface))
        .collect();
    let c2: Vec<f64> = (0..kk).map(|k| probe[2 * k][2 * k]).collect();
    let c1: Vec<f64> = (0..kk - 1).map(|m| probe[2 * m + 1][2 * m + 1]).collect();
    let e32: Vec<f64> = surface.necks.iter().map(|n| n.eps.powf(1.5)).collect();
    let right: Vec<f64> = (0..kk - 1).map(|m| probe[2 * m + 2][2 * m + 1] / e32[m]).collect();
    let left: Vec<f64> = (0..kk - 1).map(|m| -probe[2 * m][2 * m + 1] / e32[m]).collect();
    let (c1m, s1) = mean_spread(&c1);
    let (c2m, s2) = mean_spread(&c2);
    let spread = s1.max(s2);
    if spread > MAX_SPREAD {
        return Err(Error::IllConditioned(format!(
            "constants vary by {:.1}% across the configuration",
            100.0 * spread
        )));
    }
    Ok(BalancingConstants {
        c1: c1m,
        c1_prime: mean_spread(&right).0,
        c1_prime_left: mean_spread(&left).0,
        c2: c2m,
        spread,
        samples: surface.len(),
        k: kk,
    })
}

/// Neck scales from the telescoping sums of the moments.
#[derive(Debug, Clone, PartialEq)]
pub struct NeckScales {
    pub eps: Vec<f64>,
    pub last_residual: f64,
    pub feasible: bool,
    /// `Σ_{j≤k} μ_j` for every `k`.
    pub partial_sums: Vec<f64>,
}

/// `ε_k = (r²/C) Σ_{j≤k} μ_j`, feasible when every scale is positive.
pub fn solve_neck_scales(mu: &MomentVector<f64>, r: f64, c2: f64) -> Result<NeckScales> {
    let kk = mu.mu.len();
    if kk < 2 {
        return Err(Error::InvalidArgument("need K ≥ 2".into()));
    }
    if c2 == 0.0 || !c2.is_finite() {
        return Err(Error::InvalidArgument(format!("bad constant {c2}")));
    }
    let mut partial = Vec::with_capacity(kk);
    let mut acc = 0.0;
    for m in &mu.mu {
        acc += m;
        partial.push(acc);
    }
    let eps: Vec<f64> = partial[..kk - 1].iter().map(|p| r * r / c2 * p).collect();
    let last_residual = (c2 * eps[kk - 2] + r * r * mu.mu[kk - 1]).abs();
    Ok(NeckScales {
        feasible: eps.iter().all(|&e| e > 0.0),
        eps,
        last_residual,
        partial_sums: partial,
    })
}

/// The `K × (K-1)` difference matrix: `+1` on the diagonal, `-1` below it.
pub fn difference_matrix(k: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(k, k - 1);
    for c in 0..k - 1 {
        j[(c, c)] = 1.0;
        j[(c + 1, c)] = -1.0;
    }
    j
}

/// `M = diag(I_{K-1}, J)` of shape `(2K-1) × (2K-2)`.
pub fn balancing_matrix(k: usize) -> Result<DMatrix<f64>> {
    if k < 2 {
        return Err(Error::InvalidArgument("need K ≥ 2".into()));
    }
    let mut m = DMatrix::zeros(2 * k - 1, 2 * k - 2);
    for i in 0..k - 1 {
        m[(i, i)] = 1.0;
    }
    m.view_mut((k - 1, k - 1), (k, k - 1)).copy_from(&difference_matrix(k));
    Ok(m)
}

/// Projections of the defect of the assembled surface.
pub fn balancing_map(config: &Configuration, f: &PmcFunction, res: &Resolution) -> Result<Vec<f64>> {
    let surface = glue(config, res.l_max, res.n_profile)?;
    map_on(&surface, f)
}

/// [`balancing_map`] on a fixed sample layout.
pub fn balancing_map_with_layout(
    config: &Configuration,
    f: &PmcFunction,
    res: &Resolution,
    layout: &GlueLayout,
) -> Result<Vec<f64>> {
    let surface = glue_with_layout(config, res.l_max, layout)?;
    map_on(&surface, f)
}

fn map_on(surface: &GluedSurface, f: &PmcFunction) -> Result<Vec<f64>> {
    let d = defect(surface, f, 1.5)?;
    let basis = projection_basis(surface)?;
    Ok(project(&d.defect, &basis, surface))
}

/// Response of the sphere projections to the neck scales, in projection units.
///
/// Each neck scale enters the sphere on its left with one sign and the sphere on its
/// right with the other; both columns are averaged into one constant.
pub fn flux_constant(config: &Configuration, f: &PmcFunction, res: &Resolution) -> Result<f64> {
    let layout = GlueLayout::for_config(config, res.n_profile)?;
    let kk = config.k;
    let mut acc = Vec::new();
    for m in 0..kk - 1 {
        let h = EPS_STEP * config.eps[m];
        let at = |sign: f64| -> Result<Vec<f64>> {
            let mut eps = config.eps.clone();
            eps[m] += sign * h;
            let c = Configuration::from_eps(kk, config.s, eps, config.delta.clone(), config.r)?;
            balancing_map_with_layout(&c, f, res, &layout)
        };
        let (p, q) = (at(1.0)?, at(-1.0)?);
        acc.push((p[2 * m] - q[2 * m]) / (2.0 * h));
        acc.push(-(p[2 * m + 2] - q[2 * m + 2]) / (2.0 * h));
    }
    Ok(acc.iter().sum::<f64>() / acc.len() as f64)
}

/// Converged parameters of the balancing problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancingState {
    pub sigma: Vec<f64>,
    pub delta: Vec<f64>,
    pub eps: Vec<f64>,
    pub s: f64,
    /// Balancing map at the solution, ordered `π₁, …, π_{2K-1}`.
    pub residual: Vec<f64>,
    pub feasible: bool,
    pub iterations: usize,
    /// Flux constant used by the inner stage.
    pub flux: f64,
    pub mu: Vec<f64>,
}

/// Scaled moment vector `r² μ_k J_NORM`, the size of `∫ r²F χ' J_k` at leading order.
fn moment_rhs(f: &PmcFunction, s: f64, sigma: &[f64], r: f64, q: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (_, mv) = moment_sum(f, s, sigma.len() + 1, sigma, q)?;
    let rhs = mv.mu.iter().map(|m| r * r * m * J_NORM).collect();
    Ok((rhs, mv.mu))
}

fn infeasible(mu: &[f64], eps: &[f64]) -> Error {
    let mut acc = 0.0;
    let sums: Vec<String> = mu
        .iter()
        .map(|m| {
            acc += m;
            format!("{acc:+.6e}")
        })
        .collect();
    Error::Infeasible(format!(
        "neck scales {eps:?} not all positive; partial moment sums [{}]",
        sums.join(", ")
    ))
}

struct Inner {
    eps: Vec<f64>,
    delta: Vec<f64>,
    map: Vec<f64>,
    iterations: usize,
    mu: Vec<f64>,
}

/// Two-stage solve of the balancing equations.
///
/// For fixed `s` the neck scales and displacements are corrected by least squares on
/// `M` until the balancing map lies in the span of `(0, e)`; the outer stage moves `s`
/// until that last component vanishes.
pub fn solve_balancing(
    f: &PmcFunction,
    k: usize,
    r: f64,
    bracket: (f64, f64),
    res: &Resolution,
) -> Result<BalancingState> {
    if k < 2 {
        return Err(Error::InvalidArgument("balancing needs K ≥ 2".into()));
    }
    let q = res.quad_order;
    let s0 = find_balanced_s(f, k, bracket, q)?.s0;
    let model_flux = -(3.0 * std::f64::consts::PI).sqrt();
    let jm = difference_matrix(k);

    // Start from the telescoping scales at tangency.
    let (rhs, mu) = moment_rhs(f, s0, &vec![0.0; k - 1], r, q)?;
    let eps0 = least_squares(&(&jm * model_flux), &DVector::from_vec(rhs))?;
    let eps0: Vec<f64> = eps0.iter().copied().collect();
    if eps0.iter().any(|&e| !(e > 0.0)) {
        return Err(infeasible(&mu, &eps0));
    }
    let base = Configuration::from_eps(k, s0, eps0.clone(), vec![0.0; k - 1], r)?;
    let layout = GlueLayout::for_config(&base, res.n_profile)?;
    let flux = flux_constant(&base, f, res)?;
    // Displacement response of each neck projection.
    let gain = {
        let m0 = balancing_map_with_layout(&base, f, res, &layout)?;
        (0..k - 1)
            .map(|m| {
                let h = 0.1 * eps0[m];
                let mut d = vec![0.0; k - 1];
                d[m] = h;
                let c = Configuration::from_eps(k, s0, eps0.clone(), d, r)?;
                let m1 = balancing_map_with_layout(&c, f, res, &layout)?;
                Ok((m1[2 * m + 1] - m0[2 * m + 1]) / h)
            })
            .collect::<Result<Vec<f64>>>()?
    };

    let mut total_iters = 0;
    let mut warm = (eps0, vec![0.0; k - 1]);
    let inner = |s: f64, warm: &mut (Vec<f64>, Vec<f64>)| -> Result<Inner> {
        let (mut eps, mut delta) = warm.clone();
        for it in 0..MAX_INNER {
            let c = Configuration::from_eps(k, s, eps.clone(), delta.clone(), r)?;
            let map = balancing_map_with_layout(&c, f, res, &layout)?;
            let rj = DVector::from_iterator(k, (0..k).map(|i| map[2 * i]));
            let mean = rj.sum() / k as f64;
            let perp = rj.map(|v| v - mean);
            let ri: Vec<f64> = (0..k - 1).map(|m| map[2 * m + 1]).collect();
            let size = perp.amax().max(ri.iter().fold(0.0f64, |a, v| a.max(v.abs())));
            if size <= INNER_TOL {
                let (_, mu) = moment_rhs(f, s, &c.sigma, r, q)?;
                *warm = (eps.clone(), delta.clone());
                return Ok(Inner { eps, delta, map, iterations: it, mu });
            }
            let step = least_squares(&(&jm * flux), &perp)?;
            for m in 0..k - 1 {
                eps[m] -= step[m];
                delta[m] -= ri[m] / gain[m];
            }
            if eps.iter().any(|&e| !(e > 0.0)) {
                let (_, mu) = moment_rhs(f, s, &c.sigma, r, q)?;
                return Err(infeasible(&mu, &eps));
            }
        }
        Err(Error::MaxIterations(format!("inner balancing stage at s = {s}")))
    };

    let total = |st: &Inner| st.map.iter().step_by(2).sum::<f64>() / k as f64;
    let mut a = s0;
    let mut sa = inner(a, &mut warm)?;
    total_iters += sa.iterations;
    let mut ta = total(&sa);
    let mut b = s0 - 0.01;
    for it in 0..MAX_OUTER {
        if ta.abs() <= INNER_TOL {
            let c = Configuration::from_eps(k, a, sa.eps.clone(), sa.delta.clone(), r)?;
            return Ok(BalancingState {
                sigma: c.sigma,
                delta: sa.delta,
                eps: sa.eps,
                s: a,
                residual: sa.map,
                feasible: true,
                iterations: total_iters + it,
                flux,
                mu: sa.mu,
            });
        }
        let sb = inner(b, &mut warm)?;
        total_iters += sb.iterations;
        let tb = total(&sb);
        let next = if tb != ta { b - tb * (b - a) / (tb - ta) } else { b };
        a = b;
        sa = sb;
        ta = tb;
        b = next;
    }
    Err(Error::MaxIterations("outer balancing stage".into()))
}
