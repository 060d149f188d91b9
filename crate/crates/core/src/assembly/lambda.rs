//! The separation map `σ = Λ(ε)`.
//!
//! A catenoid of waist `ε` whose two branches pass through the facing sphere graphs at
//! radius `ρ' = ε^{3/4}` fixes the distance between the sphere centers. The excess over
//! tangency is the separation `σ`.

use super::sphere::{Pole, SphereGraph};
use crate::{Error, Result};
use std::sync::OnceLock;

/// Smallest scale covered by the canonical table.
pub const LAMBDA_EPS_MIN: f64 = 1e-8;
/// Largest scale covered by the canonical table.
pub const LAMBDA_EPS_MAX: f64 = 0.2;
/// Number of canonical table nodes.
pub const LAMBDA_NODES: usize = 40;

/// Separation and neck center produced by one neck between two sphere graphs.
///
/// Returns `(σ, p♭ - c_left)`.
pub fn neck_matching(left: &SphereGraph, right: &SphereGraph, eps: f64) -> Result<(f64, f64)> {
    let rp = eps.powf(0.75);
    let hr = left.height(rp, Pole::Plus)?;
    let hl = right.height(rp, Pole::Minus)?;
    let a = eps * (rp / eps).acosh();
    Ok((hr - hl - 2.0 + 2.0 * a, hr + a))
}

/// `Λ` for two unit spheres that carry only the sources of the shared neck.
pub fn lambda_exact(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= LAMBDA_EPS_MAX) {
        return Err(Error::OutOfRange(format!("eps {eps} outside (0, {LAMBDA_EPS_MAX}]")));
    }
    let left = SphereGraph::closed_form(0, 0.0, eps, 0.0)?;
    let right = SphereGraph::closed_form(1, 0.0, 0.0, eps)?;
    Ok(neck_matching(&left, &right, eps)?.0)
}

/// Monotone cubic Hermite interpolant.
#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
        let s: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            if s[i - 1] * s[i] > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
            }
        }
        let end = |h0: f64, h1: f64, s0: f64, s1: f64| {
            let v = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
            if v * s0 <= 0.0 {
                0.0
            } else if s0 * s1 <= 0.0 && v.abs() > 3.0 * s0.abs() {
                3.0 * s0
            } else {
                v
            }
        };
        d[0] = end(h[0], h[1], s[0], s[1]);
        d[n - 1] = end(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
        Pchip { x, y, d }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let u = (t - self.x[i]) / h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

/// Cached canonical `Λ` on a log-spaced grid.
///
/// The interpolated quantity is `Λ(ε)/ε` against `ln ε`, which is nearly linear.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    pub eps: Vec<f64>,
    pub sigma: Vec<f64>,
    interp: Pchip,
}

impl LambdaTable {
    pub fn build(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidArgument("table needs at least 4 nodes".into()));
        }
        let (lo, hi) = (LAMBDA_EPS_MIN.ln(), LAMBDA_EPS_MAX.ln());
        let ell: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let mut eps: Vec<f64> = ell.iter().map(|l| l.exp()).collect();
        eps[0] = LAMBDA_EPS_MIN;
        eps[n - 1] = LAMBDA_EPS_MAX;
        let sigma = eps
            .iter()
            .map(|&e| lambda_exact(e))
            .collect::<Result<Vec<f64>>>()?;
        let g = eps.iter().zip(&sigma).map(|(e, s)| s / e).collect();
        Ok(LambdaTable {
            interp: Pchip::new(ell, g),
            eps,
            sigma,
        })
    }

    pub fn map(&self, eps: f64) -> Result<f64> {
        if !(LAMBDA_EPS_MIN..=LAMBDA_EPS_MAX).contains(&eps) {
            return Err(Error::OutOfRange(format!(
                "eps {eps} outside [{LAMBDA_EPS_MIN}, {LAMBDA_EPS_MAX}]"
            )));
        }
        Ok(eps * self.interp.eval(eps.ln()))
    }

    pub fn invert(&self, sigma: f64) -> Result<f64> {
        let (s_lo, s_hi) = (self.sigma[0], self.sigma[self.sigma.len() - 1]);
        if !(sigma >= s_lo && sigma <= s_hi) {
            return Err(Error::OutOfRange(format!(
                "sigma {sigma} outside [{s_lo:e}, {s_hi:e}]"
            )));
        }
        let (mut a, mut b) = (LAMBDA_EPS_MIN.ln(), LAMBDA_EPS_MAX.ln());
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let e = m.exp().clamp(LAMBDA_EPS_MIN, LAMBDA_EPS_MAX);
            if self.map(e)? < sigma {
                a = m;
            } else {
                b = m;
            }
        }
        Ok((0.5 * (a + b)).exp().clamp(LAMBDA_EPS_MIN, LAMBDA_EPS_MAX))
    }
}

fn table() -> Result<&'static LambdaTable> {
    static TABLE: OnceLock<std::result::Result<LambdaTable, Error>> = OnceLock::new();
    TABLE
        .get_or_init(|| LambdaTable::build(LAMBDA_NODES))
        .as_ref()
        .map_err(Clone::clone)
}

/// `σ = Λ(ε)` from the canonical table.
pub fn lambda_map(eps: f64) -> Result<f64> {
    table()?.map(eps)
}

/// `ε = Λ^{-1}(σ)` from the canonical table.
pub fn lambda_invert(sigma: f64) -> Result<f64> {
    table()?.invert(sigma)
}

/// Nodes of the canonical table.
pub fn lambda_table() -> Result<&'static LambdaTable> {
    table()
}
