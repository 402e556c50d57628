//! Derivation search and extraction.

pub mod extract;
pub mod search;
pub mod skeleton;

pub use extract::{extract_derivation_beta, extract_derivation_head, extract_state_derivation, Extraction};
pub use search::{min_derivation_size, DerivationTable, SearchResult};
pub use skeleton::{enumerate_skeletons, infer_skeleton_typing, infer_skeleton_typings, Skeleton};
