//! Pullbacks of fibrations of Lie n-algebras, the cone-filler oracle for
//! their universal property and the tangent exactness check.

mod square;
mod strict;

pub use square::{pullback_fibration, verify_tangent_exactness, verify_universal_property, FibrationPullback, Filler, PullbackSquare};
pub use strict::{coalgebra_pullback_membership, coordinates_in, pullback_strict_fibration, IdentityReport, StrictPullback};
