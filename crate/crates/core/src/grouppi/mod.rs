//! Fundamental groups of complexes and their finite quotients.

mod group;
mod homs;
mod presentation;
mod subgroups;

pub use group::{compose, invert, is_permutation, FiniteGroup, GroupSpec};
pub use homs::{enumerate_homs, evaluate, kernel_coset_table, FiniteHom, HomEnumeration};
pub use presentation::{
    abelianization, cyclic_reduce, edge_path_presentation, free_reduce, generator_of, inverse_word, letter, simplify,
    Abelianization, EdgePathPresentation, GroupPresentation, Simplified, Word,
};
pub(crate) use presentation::smith_diagonal;
pub use subgroups::{index_profile, low_index_subgroups, CosetTable, DEFAULT_NODE_BUDGET};
