//! The cofree conilpotent cocommutative coalgebra S̄(V): canonical words,
//! Koszul signs, and the extension of arity-one data to coalgebra
//! morphisms and coderivations.

mod homology;
mod maps;
mod sym;
mod word;

pub use homology::{induced_coalgebra_map, reduced_coalgebra_homology, CoalgebraHomology, CoalgebraMapOnHomology, WordComplex};
pub use maps::{
    coderivation_apply, coderivation_image, coderivation_restriction_projection, compose, derivation_extension, invert_morphism, is_codifferential,
    is_dg_morphism, morphism_apply, morphism_image, morphism_restriction_projection, Cogenerator, StructureMaps, Witness,
};
pub use sym::{product_of_vectors, signed, SymElement};
pub use word::{koszul_sign, multiply, normalize, set_partitions, shuffles, words_of_length, words_up_to_degree, Word};
