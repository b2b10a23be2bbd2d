pub mod error;
pub mod coalgebra;
pub mod exactla;
pub mod factorization;
pub mod linfty;
pub mod maurer_cartan;
pub mod postnikov;
pub mod pullback;

pub use error::{Error, Result};
