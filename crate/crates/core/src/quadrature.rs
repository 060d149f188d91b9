//! Gauss–Legendre rules on `[-1, 1]`.

use crate::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule, nodes ascending.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    // Newton iterations run in f64 and are rounded once, so f32 rules stay symmetric.
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (
        x.into_iter().map(T::c).collect(),
        w.into_iter().map(T::c).collect(),
    )
}

/// `P_n(z)` and `P_n'(z)` by the three-term recurrence.
fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Integrates `f` over `[a, b]` with an `n`-point rule.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, n: usize) -> T {
    let (x, w) = gauss_legendre::<T>(n);
    let half = (b - a) / T::c(2.0);
    let mid = (a + b) / T::c(2.0);
    x.iter()
        .zip(&w)
        .fold(T::zero(), |acc, (&xi, &wi)| acc + wi * f(mid + half * xi))
        * half
}
