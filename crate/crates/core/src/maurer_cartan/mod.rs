//! Maurer-Cartan elements of L ⊗ B for bounded cdgas B: curvature,
//! pushforward along L∞-morphisms, and MC sets of pullbacks.

mod cdga;
mod mc;
mod poly;
mod tensor;

pub use cdga::BoundedCdga;
pub use mc::{
    display_curvature, grid, grid_values, mc_pullback_bijection, pushforward, pushforward_unchecked, sample_mc_points, McPullback,
};
pub use poly::Polynomial;
pub use tensor::{tensor, TensorAlgebra};
