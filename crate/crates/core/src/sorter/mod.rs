//! Constructive sorters and the two simple baselines.
//!
//! [`sort_basic`] and [`sort_refined`] follow the weight argument: every
//! step after the opening either gains at least one unit of weight in one
//! move or two units in two moves. Each step's gain is re-measured after it
//! is applied and a shortfall aborts the run with a [`SortError`], so a
//! returned [`SortResult`] is its own certificate.

mod baseline;
mod engine;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

use crate::metrics::{mode_adjacencies, Mode};
use crate::perm::{adjacencies, Move, Permutation, Trace};

pub use baseline::{longest_monotone, sort_insertion, sort_monotone, MonotoneRun};
pub use engine::step;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Opening,
    Block,
    Bonus,
    ExtraBonus,
    AbsorbingPair,
    Closing,
    SpecialOpening,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Opening,
        Category::Block,
        Category::Bonus,
        Category::ExtraBonus,
        Category::AbsorbingPair,
        Category::Closing,
        Category::SpecialOpening,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Opening => "opening",
            Category::Block => "block",
            Category::Bonus => "bonus",
            Category::ExtraBonus => "extra_bonus",
            Category::AbsorbingPair => "absorbing_pair",
            Category::Closing => "closing",
            Category::SpecialOpening => "special_opening",
        }
    }

    /// Minimum measured gain in thirds, for the categories that claim one.
    pub fn gain_floor(self) -> Option<i64> {
        match self {
            Category::Block | Category::Bonus => Some(3),
            Category::ExtraBonus => Some(4),
            Category::AbsorbingPair => Some(6),
            _ => None,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown step category {s:?}"))
    }
}

/// One or two moves with a category and their measured gain.
///
/// The gain is the weight drop (thirds, under `mode`) of the values at
/// positions `window`, relabelled to `1..=len`. The window is the whole
/// permutation except for steps of the refined sorter's sub-problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortStep {
    pub moves: Vec<Move>,
    pub category: Category,
    pub claimed_gain: i64,
    pub window: Range<usize>,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortResult {
    pub trace: Trace,
    pub move_count: usize,
    pub bound: usize,
    pub category_histogram: BTreeMap<Category, usize>,
    pub steps: Vec<SortStep>,
}

impl SortResult {
    fn from_steps(initial: &Permutation, steps: Vec<SortStep>, bound: usize) -> Self {
        let mut trace = Trace::new(initial.clone());
        let mut category_histogram = BTreeMap::new();
        for s in &steps {
            *category_histogram.entry(s.category).or_insert(0) += 1;
            trace.annotate_next(s.category.as_str(), s.claimed_gain);
            for m in &s.moves {
                trace.push(*m);
            }
        }
        let move_count = trace.len();
        Self {
            trace,
            move_count,
            bound,
            category_histogram,
            steps,
        }
    }

    fn from_moves(initial: &Permutation, moves: Vec<Move>, bound: usize) -> Self {
        let mut trace = Trace::new(initial.clone());
        trace.moves = moves;
        let move_count = trace.len();
        Self {
            trace,
            move_count,
            bound,
            category_histogram: BTreeMap::new(),
            steps: Vec::new(),
        }
    }

    pub fn within_bound(&self) -> bool {
        self.move_count <= self.bound
    }
}

/// The sorter failed one of its own invariants. This is a bug, never an
/// input problem; `perm` reproduces it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sorter invariant violated on [{perm}]: {message}")]
pub struct SortError {
    pub perm: Permutation,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Basic,
    Refined,
    Insertion,
    Monotone,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Basic,
        Algorithm::Refined,
        Algorithm::Insertion,
        Algorithm::Monotone,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Basic => "basic",
            Algorithm::Refined => "refined",
            Algorithm::Insertion => "insertion",
            Algorithm::Monotone => "monotone",
        }
    }

    /// Worst-case move bound for length `n`.
    pub fn bound(self, n: usize) -> usize {
        match self {
            Algorithm::Basic => 2 * n / 3 + 1,
            Algorithm::Refined => 2 * n / 3,
            Algorithm::Insertion => n.saturating_sub(1),
            Algorithm::Monotone => n + 1 - ceil_sqrt(n),
        }
    }

    pub fn sort(self, p: &Permutation) -> Result<SortResult, SortError> {
        match self {
            Algorithm::Basic => sort_basic(p),
            Algorithm::Refined => sort_refined(p),
            Algorithm::Insertion => Ok(sort_insertion(p)),
            Algorithm::Monotone => Ok(sort_monotone(p)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                format!("unknown algorithm {s:?} (expected basic, refined, insertion or monotone)")
            })
    }
}

/// Smallest `r` with `r² ≥ n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Sorts in at most `⌊2n/3⌋ + 1` moves: opening, weight-reducing steps under
/// the circular convention, then one rotation if needed.
pub fn sort_basic(p: &Permutation) -> Result<SortResult, SortError> {
    let steps = engine::basic(p.values()).map_err(|message| SortError {
        perm: p.clone(),
        message,
    })?;
    let result = SortResult::from_steps(p, steps, Algorithm::Basic.bound(p.len()));
    audit(p, &result, |v| mode_adjacencies(v, Mode::Circular))?;
    Ok(result)
}

/// Sorts in at most `⌊2n/3⌋` moves, keeping `1` at the front after the
/// opening so no final rotation is needed.
pub fn sort_refined(p: &Permutation) -> Result<SortResult, SortError> {
    let steps = engine::refined(p.values()).map_err(|message| SortError {
        perm: p.clone(),
        message,
    })?;
    let result = SortResult::from_steps(p, steps, Algorithm::Refined.bound(p.len()));
    audit(p, &result, |v| {
        adjacencies(&Permutation::from_vec_unchecked(v.to_vec()))
    })?;
    Ok(result)
}

/// Replays the trace, checking that it ends at the identity within the bound
/// and that `count` never drops from one move to the next.
fn audit(
    p: &Permutation,
    result: &SortResult,
    count: impl Fn(&[u32]) -> usize,
) -> Result<(), SortError> {
    let fail = |message: String| SortError {
        perm: p.clone(),
        message,
    };
    let mut broken = None;
    result
        .trace
        .replay_inspect(|idx, _, before, after| {
            if broken.is_none() && count(after) < count(before) {
                broken = Some(idx);
            }
        })
        .map_err(|e| fail(e.to_string()))?;
    if let Some(idx) = broken {
        return Err(fail(format!("move {idx} breaks an adjacency")));
    }
    let end = result.trace.replay().map_err(|e| fail(e.to_string()))?;
    if !end.is_identity() {
        return Err(fail(format!("trace ends at [{end}]")));
    }
    if !result.within_bound() {
        return Err(fail(format!(
            "{} moves exceed the bound {}",
            result.move_count, result.bound
        )));
    }
    Ok(())
}
