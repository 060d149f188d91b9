//! Parameters `(σ, δ, s)` of an approximate solution and the quantities derived from them.

use super::lambda::{lambda_invert, neck_matching, LAMBDA_EPS_MAX};
use super::neck::NeckSpec;
use super::sphere::SphereGraph;
use crate::moments::sphere_centers;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub k: usize,
    pub s: f64,
    pub sigma: Vec<f64>,
    pub delta: Vec<f64>,
    pub r: f64,
    /// Neck scales solving `σ_k = Λ_k(ε)` for every neck simultaneously.
    pub eps: Vec<f64>,
}

fn check_common(k: usize, delta: &[f64], r: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be ≥ 1".into()));
    }
    if delta.len() + 1 != k {
        return Err(Error::InvalidArgument(format!(
            "expected {} displacements, got {}",
            k - 1,
            delta.len()
        )));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    Ok(())
}

/// Sphere graphs carrying the sources of the given necks, without stored series.
pub fn graphs_for(centers: &[f64], eps: &[f64]) -> Result<Vec<SphereGraph>> {
    let k = centers.len();
    (0..k)
        .map(|j| {
            let ep = if j + 1 < k { eps[j] } else { 0.0 };
            let em = if j > 0 { eps[j - 1] } else { 0.0 };
            SphereGraph::closed_form(j, centers[j], ep, em)
        })
        .collect()
}

/// `Λ_k` for every neck, together with the neck centers relative to the left sphere.
pub fn lambda_all(eps: &[f64]) -> Result<Vec<(f64, f64)>> {
    let zeros = vec![0.0; eps.len() + 1];
    let g = graphs_for(&zeros, eps)?;
    (0..eps.len())
        .map(|j| neck_matching(&g[j], &g[j + 1], eps[j]))
        .collect()
}

impl Configuration {
    /// Configuration from separations; the neck scales are solved for.
    pub fn new(k: usize, s: f64, sigma: Vec<f64>, delta: Vec<f64>, r: f64) -> Result<Self> {
        check_common(k, &delta, r)?;
        if sigma.len() + 1 != k {
            return Err(Error::InvalidArgument(format!(
                "expected {} separations, got {}",
                k - 1,
                sigma.len()
            )));
        }
        if let Some(bad) = sigma.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::InvalidArgument(format!("separation {bad} is not positive")));
        }
        let mut eps = sigma
            .iter()
            .map(|&v| lambda_invert(v))
            .collect::<Result<Vec<f64>>>()?;
        let (lo, hi) = ((1e-10f64).ln(), LAMBDA_EPS_MAX.ln());
        let mut converged = eps.is_empty();
        for _ in 0..100 {
            let mut change: f64 = 0.0;
            for j in 0..eps.len() {
                let target = sigma[j];
                let residual = |l: f64, eps: &mut Vec<f64>| -> Result<f64> {
                    eps[j] = l.exp();
                    Ok(lambda_all(eps)?[j].0 - target)
                };
                let old = eps[j];
                let (mut a, mut b) = (lo, hi);
                if residual(a, &mut eps)? > 0.0 || residual(b, &mut eps)? < 0.0 {
                    return Err(Error::OutOfRange(format!("separation {target} not attained")));
                }
                while b - a > 1e-15 * a.abs().max(1.0) {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    if residual(m, &mut eps)? < 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                eps[j] = (0.5 * (a + b)).exp();
                change = change.max((eps[j] - old).abs() / old);
            }
            if change < 1e-13 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::MaxIterations("neck scale sweep did not settle".into()));
        }
        Ok(Configuration { k, s, sigma, delta, r, eps })
    }

    /// Configuration from neck scales; the separations follow from `Λ_k`.
    pub fn from_eps(k: usize, s: f64, eps: Vec<f64>, delta: Vec<f64>, r: f64) -> Result<Self> {
        check_common(k, &delta, r)?;
        if eps.len() + 1 != k {
            return Err(Error::InvalidArgument(format!(
                "expected {} neck scales, got {}",
                k - 1,
                eps.len()
            )));
        }
        if let Some(bad) = eps.iter().find(|v| !(**v > 0.0 && **v <= LAMBDA_EPS_MAX)) {
            return Err(Error::InvalidArgument(format!(
                "neck scale {bad} outside (0, {LAMBDA_EPS_MAX}]"
            )));
        }
        let sigma = lambda_all(&eps)?.into_iter().map(|(v, _)| v).collect();
        Ok(Configuration { k, s, sigma, delta, r, eps })
    }

    /// A single round sphere centered at `s`.
    pub fn single(s: f64, r: f64) -> Result<Self> {
        Self::from_eps(1, s, Vec::new(), Vec::new(), r)
    }

    pub fn centers(&self) -> Vec<f64> {
        sphere_centers(self.s, self.k, &self.sigma)
    }

    pub fn rho_prime(&self) -> Vec<f64> {
        self.eps.iter().map(|e| e.powf(0.75)).collect()
    }

    pub fn max_eps(&self) -> f64 {
        self.eps.iter().copied().fold(0.0, f64::max)
    }

    /// Checks the scale assumption `max ε ≤ c r^2`.
    pub fn check_scale(&self, c: f64) -> Result<()> {
        let e = self.max_eps();
        if e > c * self.r * self.r {
            return Err(Error::GeometryTooTight(format!(
                "max eps {e:e} exceeds {c}·r² = {:e}",
                c * self.r * self.r
            )));
        }
        Ok(())
    }

    pub fn graphs(&self) -> Result<Vec<SphereGraph>> {
        graphs_for(&self.centers(), &self.eps)
    }

    pub fn necks(&self) -> Result<Vec<NeckSpec>> {
        let centers = self.centers();
        lambda_all(&self.eps)?
            .into_iter()
            .enumerate()
            .map(|(j, (_, off))| NeckSpec::new(j, self.eps[j], centers[j] + off, self.delta[j]))
            .collect()
    }
}
