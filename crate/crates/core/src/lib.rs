//! Cut-and-paste sorting of permutations.
//!
//! A move cuts a contiguous string out of a permutation, optionally reverses
//! it, and pastes it back elsewhere. This crate provides
//!
//! - [`perm`]: permutations, the move model, and replayable traces;
//! - [`metrics`]: blocks, weight, adjacency and parity-adjacency counts,
//!   lower-bound certificates and hard instances;
//! - [`sorter`]: the `⌊2n/3⌋ + 1` and `⌊2n/3⌋` constructive sorters plus
//!   insertion and monotone-subsequence baselines;
//! - [`oracle`]: exact distances by breadth-first search for `n ≤ 9`;
//! - [`bench`]: seeded move-count and timing runs.

pub mod bench;
pub mod metrics;
pub mod oracle;
pub mod perm;
pub mod sorter;

pub use perm::{Move, Permutation, Trace, Variant};
