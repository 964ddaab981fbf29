//! Permutations of `1..=n` and the cut-and-paste move model.
//!
//! A [`Permutation`] stores the values `π₁ … πₙ` only. The virtual sentinels
//! `π₀ = 0` and `πₙ₊₁ = n + 1` are computed on demand by the adjacency
//! counters and are never stored.
//!
//! Moves are described by three cut points `0 ≤ i ≤ j ≤ k ≤ n` (gaps between
//! positions) and a [`Variant`]; see [`Move`]. A [`Trace`] is an initial
//! permutation plus a replayable move list with a line-oriented text format.

mod moves;
mod trace;

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use moves::{enumerate_moves, move_count, Move, Variant};
pub use trace::{replay, MoveNote, ReplayError, Trace, TraceError};

/// Rejected input while building permutations or moves.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty permutation")]
    Empty,
    #[error("token {position} ({token:?}) is not a positive integer")]
    NotAnInteger { position: usize, token: String },
    #[error("value {value} at position {position} is out of range for n={n}")]
    OutOfRange {
        position: usize,
        value: u64,
        n: usize,
    },
    #[error("value {value} at position {position} is a duplicate")]
    Duplicate { position: usize, value: u32 },
    #[error("invalid cut points {mv} for n={n}")]
    InvalidMove { mv: Move, n: usize },
}

/// A bijection onto `{1, …, n}` stored as its one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Validates `values` as a permutation of `1..=values.len()`.
    ///
    /// Positions in errors are 1-based.
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        let n = values.len();
        if n == 0 {
            return Err(PermError::Empty);
        }
        let mut seen = vec![false; n + 1];
        for (idx, &v) in values.iter().enumerate() {
            if v == 0 || v as usize > n {
                return Err(PermError::OutOfRange {
                    position: idx + 1,
                    value: v as u64,
                    n,
                });
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(PermError::Duplicate {
                    position: idx + 1,
                    value: v,
                });
            }
        }
        Ok(Self { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Self::new(values.clone()).is_ok());
        Self { values }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutations have at least one element");
        Self {
            values: (1..=n as u32).collect(),
        }
    }

    /// `[n, n-1, …, 1]`.
    pub fn reversed_identity(n: usize) -> Self {
        assert!(n >= 1, "permutations have at least one element");
        Self {
            values: (1..=n as u32).rev().collect(),
        }
    }

    /// Parses one line of whitespace-separated positive integers.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(PermError::Empty);
        }
        let n = tokens.len();
        let mut values = Vec::with_capacity(n);
        for (idx, tok) in tokens.iter().enumerate() {
            let v: u64 = tok.parse().map_err(|_| PermError::NotAnInteger {
                position: idx + 1,
                token: (*tok).to_owned(),
            })?;
            if v == 0 || v > n as u64 {
                return Err(PermError::OutOfRange {
                    position: idx + 1,
                    value: v,
                    n,
                });
            }
            values.push(v as u32);
        }
        Self::new(values)
    }

    /// Uniformly random permutation, reproducible per `seed`.
    ///
    /// The generator is ChaCha8 seeded with `seed_from_u64(seed)`. Starting
    /// from the identity, a Fisher–Yates pass runs `i = n-1` down to `1` and
    /// swaps position `i` with position `j`, where `j` is drawn uniformly
    /// from `0..=i` by rejection: take `x = next_u64()`, reject while
    /// `x >= u64::MAX - (u64::MAX % (i+1))` (i.e. the incomplete final
    /// bucket), then `j = x % (i+1)`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values: Vec<u32> = (1..=n as u32).collect();
        shuffle(&mut values, &mut rng);
        Self::from_vec_unchecked(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(idx, &v)| v as usize == idx + 1)
    }

    /// `positions()[v]` is the 0-based position of value `v` (index 0 unused).
    pub fn positions(&self) -> Vec<usize> {
        positions_of(&self.values)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (idx, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = idx as u32 + 1;
        }
        Self { values: inv }
    }

    /// Applies `mv`, returning the new permutation.
    pub fn apply(&self, mv: &Move) -> Result<Self, PermError> {
        mv.validate(self.len())?;
        let mut values = self.values.clone();
        mv.apply_unchecked(&mut values);
        Ok(Self { values })
    }
}

/// Applies `mv` to `p`.
pub fn apply_move(p: &Permutation, mv: &Move) -> Result<Permutation, PermError> {
    p.apply(mv)
}

/// Number of positions `t` in `0..=n` of the extended sequence
/// `0, π₁, …, πₙ, n+1` with `|π_t − π_{t+1}| = 1`.
pub fn adjacencies(p: &Permutation) -> usize {
    extended_pairs(p.values())
        .filter(|&(a, b)| a.abs_diff(b) == 1)
        .count()
}

/// Pairs of consecutive entries of `0, π₁, …, πₙ, n+1`.
pub(crate) fn extended_pairs(values: &[u32]) -> impl Iterator<Item = (u32, u32)> + '_ {
    let end = values.len() as u32 + 1;
    let ext = std::iter::once(0)
        .chain(values.iter().copied())
        .chain(std::iter::once(end));
    ext.clone().zip(ext.skip(1))
}

pub(crate) fn positions_of(values: &[u32]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; values.len() + 1];
    for (idx, &v) in values.iter().enumerate() {
        pos[v as usize] = idx;
    }
    pos
}

pub(crate) fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = uniform_below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// Unbiased draw from `0..bound` by rejecting the incomplete top bucket.
pub(crate) fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, v) in self.values.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = PermError;

    fn try_from(values: Vec<u32>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}
