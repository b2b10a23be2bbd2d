mod decompose;
mod quasi_split;
mod truncation;

pub use decompose::{
    decompose_tower_step1, decompose_tower_step2, split_acyclic_fibration, AcyclicSplitting, Subcomplex, TowerStep1,
    TowerStep2, TwistedProduct,
};
pub use quasi_split::{is_quasi_split, QuasiSplit, SplittingWitness};
pub use truncation::{
    connecting, tower, tower_from, tower_morphism, truncate, truncate_morphism, PostnikovTower, TowerLadder, Truncation,
    TruncationKind,
};
