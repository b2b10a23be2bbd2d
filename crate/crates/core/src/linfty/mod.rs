//! Lie n-algebras and weak L∞-morphisms.

mod algebra;
pub mod catalog;
mod morphism;

pub use algebra::{display_vector, suspension_sign, BracketEntry, LieNAlgebra};
pub use morphism::{
    classify, compose, h0_lie_algebra, h0_map, pair_into_product, product, twist, LInftyMorphism, MorphismClass,
};
