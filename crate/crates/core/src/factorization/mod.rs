//! Factorizations of chain maps and L∞-morphisms, path objects and the
//! strictification of fibrations.

mod brown;
mod path;
mod strict;

pub use brown::{brown_factorize, BrownFactorization};
pub use path::{factor_chain_map, ChainFactorization, PathComplex};
pub use strict::{
    factor_strict_morphism, obstruction_cycle, path_object, strictify_fibration, PathObject, StrictFactorization,
    Strictification, TensorHomotopy,
};
