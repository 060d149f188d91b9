//! Smooth step built from `exp(-1/y)`.

use crate::Real;

/// `ψ(y)`: 0 for `y ≤ 0`, 1 for `y ≥ 1`, smooth and increasing in between.
pub fn psi<T: Real>(y: T) -> T {
    psi_with_derivatives(y).0
}

/// `ψ`, `ψ'`, `ψ''` at `y`.
pub fn psi_with_derivatives<T: Real>(y: T) -> (T, T, T) {
    let zero = T::zero();
    let one = T::one();
    if y <= zero {
        return (zero, zero, zero);
    }
    if y >= one {
        return (one, zero, zero);
    }
    let a = (-one / y).exp();
    let b = (-one / (one - y)).exp();
    let s = a + b;
    let v = a / s;
    // a' = a / y^2, b' = -b / (1-y)^2.
    let y2 = y * y;
    let z = one - y;
    let z2 = z * z;
    let da = a / y2;
    let db = -b / z2;
    let dda = a * (one - T::c(2.0) * y) / (y2 * y2);
    let ddb = b * (one - T::c(2.0) * z) / (z2 * z2);
    let ds = da + db;
    let dds = dda + ddb;
    let dv = (da * s - a * ds) / (s * s);
    let ddv = (dda * s - a * dds) / (s * s) - T::c(2.0) * ds * dv / s;
    (v, dv, ddv)
}
