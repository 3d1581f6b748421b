//! Formal concept analysis over join samples.

mod bitset;
mod context;
mod groups;
mod lattice;
mod scale;

pub use bitset::BitSet;
pub use context::FormalContext;
pub use groups::{group_extents, to_dot};
pub use lattice::{build_lattice, Concept, ConceptLattice, DEFAULT_MAX_CELLS};
pub use scale::{scale, GroupKey, ScaledContext};
pub(crate) use scale::{crisp_holds, fuzzy_degree};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FcaError {
    #[error("unknown object id {0}")]
    UnknownObject(usize),
    #[error("unknown attribute id {0}")]
    UnknownAttribute(usize),
    #[error("context has {cells} incidence cells, limit is {limit}; lower the sample fraction")]
    ContextTooLarge { cells: usize, limit: usize },
    #[error("alpha {0} must lie in (0, 1]")]
    InvalidAlpha(f64),
}
