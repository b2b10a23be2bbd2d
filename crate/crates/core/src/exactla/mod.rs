//! Exact linear algebra over ℚ on finite ℤ-graded spaces.

mod complex;
mod graded;
mod matrix;
mod scalar;

pub use complex::{
    contracting_homotopy_for_acyclic, homology, induced_map_on_homology, is_chain_map, is_quasi_isomorphism,
    rank_reversed, ChainComplex, Homology, HomologyInDegree,
};
pub use graded::{is_surjective_in_degrees, positive_target_degrees, section_of_surjection, GradedLinearMap, GradedSpace};
pub use matrix::{coordinates, echelon_basis, reduce_against, Matrix, Rref};
pub use scalar::{factorial, format_scalar, frac, int, parse_scalar, sign_scalar, Scalar, Vector};
