//! The two end-to-end reductions and their supporting plumbing.

pub mod cnf;
pub mod extract;
pub mod folklore;
pub mod gh;
pub mod ham_instance;
pub mod inapprox;
pub mod scale;
pub mod synthesize;

pub use cnf::CnfFormula;
pub use extract::{extract_ham_cycle, regularity_census, CycleCensus};
pub use folklore::{build_folklore_hc, FolkloreGraph};
pub use gh::{build_gh, GhGraph, GhStateCensus};
pub use ham_instance::{HamInstance, Pattern};
pub use inapprox::{
    build_inapprox, extract_closed_walk, gap_constants, synthesize_inapprox_sequence,
    GapConstants, InapproxGraph, InapproxSynthesis, WalkExtraction,
};
pub use scale::{ScaleProfile, SEARCHABLE_VERTEX_LIMIT};
pub use synthesize::{oracle_ham_provider, synthesize_flip_sequence, Synthesis};
