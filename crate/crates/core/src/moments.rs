//! F-moments `∫ F(x, N) <e0, N> dVol` of spheres and surfaces of revolution.

use crate::geometry::{AnalyticTag, ProfileCurve};
use crate::pmc::PmcFunction;
use crate::quadrature::gauss_legendre;
use crate::{Error, Real, Result};

/// Change allowed when the quadrature order is doubled.
pub const QUADRATURE_TOL: f64 = 1e-8;

/// Moments of the spheres in a train.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector<T> {
    pub mu: Vec<T>,
    pub s: T,
    pub sigma: Vec<T>,
    pub quad_order: usize,
}

fn sphere_moment_at_order<T: Real>(f: &PmcFunction, center: T, q: usize) -> Result<T> {
    let (u, w) = gauss_legendre::<T>(q);
    let mut acc = T::zero();
    for (&ui, &wi) in u.iter().zip(&w) {
        let r = (T::one() - ui * ui).max(T::zero()).sqrt();
        let val = f.eval([center + ui, r, T::zero()], [ui, r, T::zero()])?;
        acc = acc + wi * val * ui;
    }
    Ok(T::c(2.0) * T::PI() * acc)
}

/// Moment of the unit sphere centered at `(center, 0, 0)` with outward normal.
///
/// Evaluated at `quad_order` and twice that; the finer value is returned.
pub fn f_moment<T: Real>(f: &PmcFunction, center: T, quad_order: usize) -> Result<T> {
    if quad_order < 4 {
        return Err(Error::InvalidArgument(format!(
            "quad_order must be ≥ 4, got {quad_order}"
        )));
    }
    let coarse = sphere_moment_at_order(f, center, quad_order)?;
    let fine = sphere_moment_at_order(f, center, 2 * quad_order)?;
    let tol = T::c(QUADRATURE_TOL).max(T::c(1e3) * T::epsilon() * fine.abs().max(T::one()));
    if (fine - coarse).abs() > tol {
        return Err(Error::QuadratureNonconvergence(format!(
            "order {quad_order}: {coarse} vs order {}: {fine}",
            2 * quad_order
        )));
    }
    Ok(fine)
}

/// Moment over the surface generated by `curve`, `J dVol = -2π rho drho dt`.
///
/// Tagged curves are evaluated in closed form between samples; untagged curves use
/// the cubic Hermite interpolant of positions and unit tangents.
pub fn f_moment_general<T: Real>(
    f: &PmcFunction,
    curve: &ProfileCurve<T>,
    quad_order: usize,
) -> Result<T> {
    if quad_order < 4 {
        return Err(Error::InvalidArgument(format!(
            "quad_order must be ≥ 4, got {quad_order}"
        )));
    }
    let (u, w) = gauss_legendre::<T>(quad_order);
    let two = T::c(2.0);
    let mut total = T::zero();
    for pair in curve.samples.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let h = b.t - a.t;
        let mut acc = T::zero();
        for (&ui, &wi) in u.iter().zip(&w) {
            let s = (ui + T::one()) / two;
            let (x0, rho, dx, dr) = match curve.tag {
                AnalyticTag::Sphere { center } => {
                    let t = a.t + s * h;
                    let (sn, cs) = t.sin_cos();
                    (center - cs, sn, sn, cs)
                }
                AnalyticTag::Catenoid { eps, center } => {
                    let t = a.t + s * h;
                    let rho = (eps * eps + t * t).sqrt();
                    (center + eps * (t / eps).asinh(), rho, eps / rho, t / rho)
                }
                AnalyticTag::None => hermite(a.x0, b.x0, a.dx0, b.dx0, a.rho, b.rho, a.drho, b.drho, h, s),
            };
            let speed = dx.hypot(dr);
            let p = [x0, rho.max(T::zero()), T::zero()];
            let nrm = [-dr / speed, dx / speed, T::zero()];
            let val = f.eval(p, nrm)?;
            acc = acc + wi * val * (-rho * dr);
        }
        total = total + acc * h / two;
    }
    Ok(two * T::PI() * total)
}

/// Cubic Hermite position and `t`-derivative at fraction `s` of an interval of length `h`.
#[allow(clippy::too_many_arguments)]
fn hermite<T: Real>(x0: T, x1: T, dx0: T, dx1: T, r0: T, r1: T, dr0: T, dr1: T, h: T, s: T) -> (T, T, T, T) {
    let one = T::one();
    let two = T::c(2.0);
    let three = T::c(3.0);
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = two * s3 - three * s2 + one;
    let h10 = s3 - two * s2 + s;
    let h01 = -two * s3 + three * s2;
    let h11 = s3 - s2;
    let g00 = (T::c(6.0) * s2 - T::c(6.0) * s) / h;
    let g10 = three * s2 - T::c(4.0) * s + one;
    let g01 = (-T::c(6.0) * s2 + T::c(6.0) * s) / h;
    let g11 = three * s2 - two * s;
    (
        h00 * x0 + h10 * h * dx0 + h01 * x1 + h11 * h * dx1,
        h00 * r0 + h10 * h * dr0 + h01 * r1 + h11 * h * dr1,
        g00 * x0 + g10 * dx0 + g01 * x1 + g11 * dx1,
        g00 * r0 + g10 * dr0 + g01 * r1 + g11 * dr1,
    )
}

/// Sphere centers `s_k = s + 2k + Σ_{l<k} σ_l` (zero-based `k`).
pub fn sphere_centers<T: Real>(s: T, k: usize, sigma: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(k);
    let mut c = s;
    for i in 0..k {
        out.push(c);
        if i + 1 < k {
            c = c + T::c(2.0) + sigma.get(i).copied().unwrap_or(T::zero());
        }
    }
    out
}

/// Moments of the `K` spheres and their sum.
pub fn moment_sum<T: Real>(
    f: &PmcFunction,
    s: T,
    k: usize,
    sigma: &[T],
    quad_order: usize,
) -> Result<(T, MomentVector<T>)> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be ≥ 1".into()));
    }
    if sigma.len() + 1 != k {
        return Err(Error::InvalidArgument(format!(
            "expected {} separations, got {}",
            k - 1,
            sigma.len()
        )));
    }
    let mu = sphere_centers(s, k, sigma)
        .into_iter()
        .map(|c| f_moment(f, c, quad_order))
        .collect::<Result<Vec<T>>>()?;
    let total = mu.iter().fold(T::zero(), |a, &b| a + b);
    Ok((
        total,
        MomentVector {
            mu,
            s,
            sigma: sigma.to_vec(),
            quad_order,
        },
    ))
}

/// Result of the balanced-center search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedCenter {
    pub s0: f64,
    pub dsum: f64,
    pub total: f64,
}

/// Step of the centered difference used for `d sum / ds`.
pub const DSUM_STEP: f64 = 1e-5;
const ZERO_LEVEL: f64 = 1e-13;

/// Root of `s ↦ Σ μ_F(S_k(s))` with tangent spheres (`σ = 0`).
pub fn find_balanced_s(
    f: &PmcFunction,
    k: usize,
    bracket: (f64, f64),
    quad_order: usize,
) -> Result<BalancedCenter> {
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!("bad bracket ({lo}, {hi})")));
    }
    let sigma = vec![0.0; k.saturating_sub(1)];
    let g = |s: f64| moment_sum(f, s, k, &sigma, quad_order).map(|r| r.0);
    let sign = |v: f64| {
        if v.abs() <= ZERO_LEVEL {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };

    let (glo, ghi) = (g(lo)?, g(hi)?);
    let mut br = None;
    if sign(glo) * sign(ghi) < 0 {
        br = Some((lo, hi, glo));
    } else {
        let pts = 64;
        let xs: Vec<f64> = (0..pts)
            .map(|i| lo + (hi - lo) * i as f64 / (pts - 1) as f64)
            .collect();
        let gs = xs.iter().map(|&x| g(x)).collect::<Result<Vec<_>>>()?;
        for i in 0..pts {
            let si = sign(gs[i]);
            if si == 0 {
                let left = i > 0 && sign(gs[i - 1]) != 0;
                let right = i + 1 < pts && sign(gs[i + 1]) != 0;
                if left || right {
                    br = Some((xs[i], xs[i], gs[i]));
                    break;
                }
                continue;
            }
            if i + 1 < pts && si * sign(gs[i + 1]) < 0 {
                br = Some((xs[i], xs[i + 1], gs[i]));
                break;
            }
        }
    }
    let (mut a, mut b, mut ga) = br.ok_or(Error::NoRoot)?;
    while b - a > 1e-8 {
        let m = 0.5 * (a + b);
        let gm = g(m)?;
        if sign(gm) == 0 {
            a = m;
            b = m;
            break;
        }
        if sign(gm) == sign(ga) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    let mut s0 = 0.5 * (a + b);
    let deriv = |s: f64| -> Result<f64> { Ok((g(s + DSUM_STEP)? - g(s - DSUM_STEP)?) / (2.0 * DSUM_STEP)) };
    let mut total = g(s0)?;
    for _ in 0..5 {
        if total.abs() <= 1e-10 {
            break;
        }
        let d = deriv(s0)?;
        if d == 0.0 {
            break;
        }
        let next = s0 - total / d;
        if (next - s0).abs() > 1e-6 {
            break;
        }
        s0 = next;
        total = g(s0)?;
    }
    let dsum = deriv(s0)?;
    if dsum.abs() < 1e-6 {
        return Err(Error::DegenerateRoot(dsum));
    }
    Ok(BalancedCenter { s0, dsum, total })
}
