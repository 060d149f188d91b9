//! Glued surfaces of revolution with prescribed mean curvature `H = 2 + r^2 F(p, N)`.
//!
//! A train of `K` unit spheres along the `x0` axis is joined by small catenoidal necks.
//! The crate computes F-moments and balanced centers, assembles the approximate
//! surface, and evaluates the projections that drive the balancing equations.
//!
//! Low-level numerics (expressions, quadrature, profile curves, moments) are generic
//! over [`Real`]; the assembly and analysis layers work in `f64`.

pub mod analysis;
pub mod assembly;
pub mod cutoff;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod moments;
pub mod pmc;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Profile curve in double precision.
pub type Profile = geometry::ProfileCurve<f64>;
/// Profile curve in single precision.
pub type Profile32 = geometry::ProfileCurve<f32>;
/// Triangle mesh in double precision.
pub type Mesh = geometry::Mesh<f64>;
/// Prescribed curvature function in double precision.
pub type Pmc = pmc::PmcFunction;
/// Three-vector in double precision.
pub type Vec3 = [f64; 3];
