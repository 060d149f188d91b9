//! Weighted defects, the linearized operator and its approximate kernel, projections
//! onto `W̃`, and the balancing equations.

pub mod balance;
pub mod basis;
pub mod operator;
pub mod projected;
pub mod weight;

pub use balance::{
    balancing_constants, balancing_map, balancing_matrix, flux_constant, solve_balancing,
    solve_neck_scales, BalancingConstants, BalancingState, NeckScales,
};
pub use basis::{project, projection_basis, ProjectionBasis};
pub use operator::{
    jacobi_neck, jacobi_sphere, linearized_operator, spectrum, DiscreteOperator, SpectralReport,
    KERNEL_THRESHOLD,
};
pub use projected::{solve_projected, ProjectedSolution};
pub use weight::{defect, weight_function, DefectReport, WeightFunction};

/// Discretization sizes shared by the analysis entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    /// Bulk intervals per sphere.
    pub n_profile: usize,
    /// Angular segments for tessellation.
    pub n_angle: usize,
    /// Base Gauss order for moments.
    pub quad_order: usize,
    pub l_max: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            n_profile: 256,
            n_angle: 64,
            quad_order: 16,
            l_max: 200,
        }
    }
}
