//! Cohomology with finite local coefficients, killing classes by branched
//! coverings and cover families, Čech nerves and descent data.

mod cochain;
mod descent;
mod kill;
mod local;
mod zmod;

pub use cochain::{
    coboundary, cohomology, invariant_factors, min_vertex_map, pullback, solve_coboundary, subdivision_pullback, verify_witness, Cochain,
    CochainDump, CohomologyGroup,
};
pub use descent::*;
pub use kill::*;
pub use local::{LocalSystem, Stalk, StalkMap, STALK_TABLE_LIMIT};
