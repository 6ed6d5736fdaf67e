//! Coverings from monodromy, branched coverings and their completion, and
//! covering families of branched coverings.

mod branched;
mod dump;
mod etale;
mod map;
mod monodromy;

pub use branched::{
    branched_completion, completion_factorization, riemann_hurwitz_residual, verify_branched, BranchedCovering,
    BranchedReport, BranchedViolation,
};
pub use dump::CoveringDump;
pub use etale::{is_etale_covering_family, EtaleFamilyReport, FamilyMember, MorphismCondition};
pub use map::{verify_covering, CoveringMap, CoveringReport, CoveringViolation, SimplicialMap};
pub use monodromy::{
    connected_covers, covering_from_cocycle, covering_from_coset_table, coverings_isomorphic, monodromy_table,
    orbit_canonical_forms, EdgeCocycle,
};
