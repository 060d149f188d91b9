//! Profile curves of surfaces of revolution about the `x0` axis.
//!
//! Samples are traversed with `x0` increasing on the spheres, so the outward normal in
//! the `(x0, rho)` half-plane is `(-drho, dx0)` and the unit sphere has `H = +2`.

mod mesh;
mod profile;

pub use mesh::{tessellate, Mesh};
pub use profile::{
    catenoid_profile, cylinder_profile, mean_curvature, normal_graph, normal_graph_values,
    second_fundamental_norm_sq,
    sphere_profile, AnalyticTag, ProfileCurve, ProfileSample, POLE_RHO,
};
