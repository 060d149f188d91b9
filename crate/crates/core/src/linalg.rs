//! Tridiagonal solves and spectra, and small dense least squares.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Tridiagonal matrix with sub-diagonal `lower[i] = A[i+1][i]`, diagonal `diag[i]` and
/// super-diagonal `upper[i] = A[i][i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Tridiagonal {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.upper[i];
                m[(i + 1, i)] = self.lower[i];
            }
        }
        m
    }

    /// Solves `A x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if b.len() != n {
            return Err(Error::InvalidArgument("right-hand side length mismatch".into()));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        // Rows hold (sub, diag, sup, second sup) after pivoting.
        let mut d = self.diag.clone();
        let mut u = self.upper.clone();
        u.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut l = self.lower.clone();
        let mut x = b.to_vec();
        let scale = d.iter().chain(&u).chain(&l).fold(0.0f64, |a, v| a.max(v.abs()));
        for i in 0..n - 1 {
            if l[i].abs() > d[i].abs() {
                // Swap rows i and i + 1.
                std::mem::swap(&mut d[i], &mut l[i]);
                let (a, b2) = (u[i], d[i + 1]);
                u[i] = b2;
                d[i + 1] = a;
                let (c, e) = (u2[i], u[i + 1]);
                u2[i] = e;
                u[i + 1] = c;
                x.swap(i, i + 1);
            }
            if d[i] == 0.0 {
                return Err(Error::IllConditioned(format!("zero pivot at row {i}")));
            }
            let m = l[i] / d[i];
            d[i + 1] -= m * u[i];
            u[i + 1] -= m * u2[i];
            x[i + 1] -= m * x[i];
            l[i] = 0.0;
        }
        if d[n - 1].abs() <= 1e-300 || d[n - 1].abs() < scale * 1e-18 {
            return Err(Error::IllConditioned("singular tridiagonal system".into()));
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            if i + 1 < n {
                v -= u[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= u2[i] * x[i + 2];
            }
            x[i] = v / d[i];
        }
        Ok(x)
    }
}

/// Symmetric tridiagonal matrix, stored as diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let b2 = if i > 0 { self.off[i - 1] * self.off[i - 1] } else { 0.0 };
            q = self.diag[i] - x - if i > 0 { b2 / q } else { 0.0 };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue (zero-based) by bisection.
    pub fn eigenvalue(&self, j: usize) -> Result<f64> {
        if j >= self.len() {
            return Err(Error::InvalidArgument(format!("eigenvalue index {j} out of range")));
        }
        let (mut lo, mut hi) = self.bounds();
        let span = hi - lo;
        lo -= 1e-12 * span.max(1.0);
        hi += 1e-12 * span.max(1.0);
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1e-300) {
                return Ok(mid);
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::EigenSolveFailure(format!("bisection for eigenvalue {j} did not settle")))
    }

    /// The `m` eigenvalues of smallest magnitude, ordered by magnitude.
    pub fn smallest_magnitude(&self, m: usize) -> Result<Vec<f64>> {
        let n = self.len();
        if m > n {
            return Err(Error::InvalidArgument(format!("{m} eigenvalues requested of {n}")));
        }
        let neg = self.count_below(0.0);
        let lo = neg.saturating_sub(m);
        let hi = (neg + m).min(n);
        let mut vals = (lo..hi).map(|j| self.eigenvalue(j)).collect::<Result<Vec<f64>>>()?;
        vals.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        vals.truncate(m);
        Ok(vals)
    }

    /// Number of eigenvalues in `[-threshold, threshold]`.
    pub fn count_within(&self, threshold: f64) -> usize {
        let above = self.count_below(threshold);
        above - self.count_below(-threshold)
    }
}

/// Least-squares solution of `A x = b` through the singular value decomposition.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    svd.solve(b, 1e-12 * svd.singular_values.max())
        .map_err(|e| Error::IllConditioned(e.to_string()))
}

/// Numerical rank with relative tolerance `tol`.
pub fn rank(a: &DMatrix<f64>, tol: f64) -> usize {
    let sv = a.clone().svd(false, false).singular_values;
    let top = sv.max();
    sv.iter().filter(|&&s| s > tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_tri(n: usize, seed: u64) -> Tridiagonal {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut t = Tridiagonal::zeros(n);
        for i in 0..n {
            t.diag[i] = next();
            if i + 1 < n {
                t.lower[i] = next();
                t.upper[i] = next();
            }
        }
        t
    }

    #[test]
    fn pivoted_solve_matches_dense() {
        for seed in 1..6 {
            let t = random_tri(40, seed);
            let b: Vec<f64> = (0..40).map(|i| (i as f64).sin()).collect();
            let x = t.solve(&b).unwrap();
            let r = t.apply(&x);
            for (ri, bi) in r.iter().zip(&b) {
                assert!((ri - bi).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sturm_bisection_matches_dense_eigenvalues() {
        let n = 30;
        let diag: Vec<f64> = (0..n).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 1.0 + (i % 3) as f64).collect();
        let s = SymTridiagonal { diag: diag.clone(), off: off.clone() };
        let t = Tridiagonal { lower: off.clone(), diag, upper: off };
        let mut dense: Vec<f64> = t.to_dense().symmetric_eigenvalues().iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        for (j, want) in dense.iter().enumerate() {
            assert!((s.eigenvalue(j).unwrap() - want).abs() < 1e-10);
        }
        let small = s.smallest_magnitude(4).unwrap();
        let mut by_mag = dense.clone();
        by_mag.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        for (a, b) in small.iter().zip(&by_mag) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn least_squares_residual_is_orthogonal() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, -1.0, 1.0, 0.0, -1.0]);
        let b = DVector::from_row_slice(&[1.0, 2.0, 4.0]);
        let x = least_squares(&a, &b).unwrap();
        let r = &b - &a * &x;
        assert!((a.transpose() * r).norm() < 1e-12);
        assert_eq!(rank(&a, 1e-12), 2);
    }
}
