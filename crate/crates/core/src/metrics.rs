//! Structural measures: blocks and singletons, weight in thirds, parity
//! adjacencies, lower-bound certificates and hard instances.

use std::collections::HashSet;
use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::oracle;
use crate::perm::{enumerate_moves, extended_pairs, shuffle, uniform_below, Move, Permutation};

/// Value and position conventions for block decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Values wrap (`n` is followed by `1`); positions do not.
    Circular,
    /// Neither values nor positions wrap.
    Linear,
    /// Values wrap and the last position is followed by the first. Used by
    /// the refined sorter, which keeps `1` at the front: a block ending in
    /// `n` at the back joins the block that starts with `1`.
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    Block(Orientation),
    Singleton,
}

/// A run of positions `start, start+1, …` (mod `n` in [`Mode::Cyclic`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: usize,
    pub len: usize,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn is_block(&self) -> bool {
        matches!(self.kind, SegmentKind::Block(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub mode: Mode,
    pub n: usize,
    pub segments: Vec<Segment>,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> usize {
        self.segments.iter().filter(|s| s.is_block()).count()
    }

    pub fn singletons(&self) -> usize {
        self.segments.len() - self.blocks()
    }

    pub fn weight(&self) -> WeightThirds {
        WeightThirds(3 * self.blocks() as u64 + 2 * self.singletons() as u64)
    }
}

/// Weight expressed in thirds: `3·blocks + 2·singletons`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightThirds(pub u64);

impl WeightThirds {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for WeightThirds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/3", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundCertificate {
    pub adjacency_bound: usize,
    pub parity_bound: usize,
    pub best: usize,
}

#[inline]
pub fn successor(v: u32, n: usize) -> u32 {
    if v as usize == n {
        1
    } else {
        v + 1
    }
}

#[inline]
pub fn predecessor(v: u32, n: usize) -> u32 {
    if v == 1 {
        n as u32
    } else {
        v - 1
    }
}

/// `+1` if `v` follows `u` upward, `-1` if downward, `0` if not consecutive.
#[inline]
pub(crate) fn step(u: u32, v: u32, n: usize, mode: Mode) -> i8 {
    match mode {
        Mode::Linear => {
            if v == u + 1 {
                1
            } else if u == v + 1 {
                -1
            } else {
                0
            }
        }
        Mode::Circular | Mode::Cyclic => {
            if v == successor(u, n) {
                1
            } else if v == predecessor(u, n) {
                -1
            } else {
                0
            }
        }
    }
}

/// Splits `values` into maximal runs of consecutive values.
pub fn decompose(p: &Permutation, mode: Mode) -> BlockDecomposition {
    decompose_values(p.values(), mode)
}

pub(crate) fn decompose_values(values: &[u32], mode: Mode) -> BlockDecomposition {
    let n = values.len();
    let mut segments = Vec::new();
    let mut start = 0;
    let mut dir = 0i8;
    for t in 1..=n {
        let s = if t < n {
            step(values[t - 1], values[t], n, mode)
        } else {
            0
        };
        if s != 0 && (dir == 0 || s == dir) {
            dir = s;
            continue;
        }
        segments.push(make_segment(start, t - start, dir));
        start = t;
        dir = 0;
    }
    if mode == Mode::Cyclic && n >= 2 {
        close_cycle(values, &mut segments);
    }
    BlockDecomposition { mode, n, segments }
}

fn make_segment(start: usize, len: usize, dir: i8) -> Segment {
    let kind = match dir {
        1 => SegmentKind::Block(Orientation::Increasing),
        -1 => SegmentKind::Block(Orientation::Decreasing),
        _ => SegmentKind::Singleton,
    };
    Segment { start, len, kind }
}

fn segment_dir(seg: &Segment) -> i8 {
    match seg.kind {
        SegmentKind::Block(Orientation::Increasing) => 1,
        SegmentKind::Block(Orientation::Decreasing) => -1,
        SegmentKind::Singleton => 0,
    }
}

/// Joins the last and first runs when the wrap-around pair continues them.
fn close_cycle(values: &[u32], segments: &mut Vec<Segment>) {
    let n = values.len();
    let wrap = step(values[n - 1], values[0], n, Mode::Cyclic);
    if wrap == 0 {
        return;
    }
    let first = segments[0];
    let last = *segments.last().expect("n >= 2");
    let consistent = [segment_dir(&first), segment_dir(&last)]
        .iter()
        .all(|&d| d == 0 || d == wrap);
    if !consistent {
        return;
    }
    if segments.len() == 1 {
        segments[0] = make_segment(0, n, wrap);
        return;
    }
    segments.pop();
    segments[0] = make_segment(last.start, last.len + first.len, wrap);
    segments.rotate_left(1);
}

/// Weight of `p` under `mode`, in thirds.
pub fn weight(p: &Permutation, mode: Mode) -> WeightThirds {
    weight_values(p.values(), mode)
}

pub(crate) fn weight_values(values: &[u32], mode: Mode) -> WeightThirds {
    decompose_values(values, mode).weight()
}

/// Number of consecutive position pairs (including the wrap pair in
/// [`Mode::Cyclic`]) that lie inside one segment.
pub fn mode_adjacencies(values: &[u32], mode: Mode) -> usize {
    let d = decompose_values(values, mode);
    let inner: usize = d.segments.iter().map(|s| s.len - 1).sum();
    let n = values.len();
    let full_cycle = mode == Mode::Cyclic
        && d.segments.len() == 1
        && n >= 2
        && step(values[n - 1], values[0], n, mode) != 0;
    inner + usize::from(full_cycle)
}

/// Weight decrease caused by `m`, in thirds (negative when weight grows).
pub fn gain(p: &Permutation, m: &Move, mode: Mode) -> i64 {
    let after = p.apply(m).expect("gain: move must be legal");
    weight(p, mode).0 as i64 - weight(&after, mode).0 as i64
}

/// Consecutive pairs of `0, π₁, …, πₙ, n+1` with opposite parity.
pub fn parity_adjacencies(p: &Permutation) -> usize {
    extended_pairs(p.values())
        .filter(|&(a, b)| (a ^ b) & 1 == 1)
        .count()
}

/// Lower bounds from adjacencies (≤ 3 created per move) and parity
/// adjacencies (≤ 2 created per move).
pub fn certify_lower_bound(p: &Permutation) -> BoundCertificate {
    let target = p.len() + 1;
    let adjacency_bound = (target - crate::perm::adjacencies(p)).div_ceil(3);
    let parity_bound = (target - parity_adjacencies(p)).div_ceil(2);
    BoundCertificate {
        adjacency_bound,
        parity_bound,
        best: adjacency_bound.max(parity_bound),
    }
}

/// Largest change in parity adjacencies over all canonical moves; `None`
/// when `n = 1` (no moves exist).
pub fn max_parity_delta(p: &Permutation) -> Option<i64> {
    let base = parity_adjacencies(p) as i64;
    let mut buf = p.values().to_vec();
    enumerate_moves(p.len())
        .iter()
        .map(|m| {
            buf.copy_from_slice(p.values());
            m.apply_unchecked(&mut buf);
            extended_pairs(&buf)
                .filter(|&(a, b)| (a ^ b) & 1 == 1)
                .count() as i64
                - base
        })
        .max()
}

/// `[2 4 6 … 1 3 5 …]`.
pub fn even_before_odd(n: usize) -> Permutation {
    let evens = (2..=n as u32).step_by(2);
    let odds = (1..=n as u32).step_by(2);
    Permutation::from_vec_unchecked(evens.chain(odds).collect())
}

/// Fewest parity adjacencies any permutation of `n` can have.
pub fn min_parity_adjacencies(n: usize) -> usize {
    if n.is_multiple_of(2) {
        1
    } else {
        2
    }
}

/// Permutations attaining the minimum parity-adjacency count.
///
/// For `n ≤ 8` all of them are listed (in rank order) when there are at
/// most `limit`; otherwise up to `limit` distinct witnesses are drawn
/// uniformly with a generator seeded by `seed`.
pub fn hard_witnesses(n: usize, limit: usize, seed: u64) -> Vec<Permutation> {
    assert!(n >= 2, "hard witnesses need n >= 2");
    let target = min_parity_adjacencies(n);
    if n <= 8 {
        let all: Vec<_> = oracle::all_permutations(n)
            .filter(|p| parity_adjacencies(p) == target)
            .collect();
        if all.len() <= limit {
            return all;
        }
    }
    let total = witness_count(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < limit && (out.len() as u128) < total && attempts < limit.saturating_mul(64) {
        attempts += 1;
        let p = sample_witness(n, &mut rng);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// Number of minimum parity-adjacency permutations (saturating).
pub fn witness_count(n: usize) -> u128 {
    let fact = |m: usize| {
        (1..=m as u128)
            .try_fold(1u128, |acc, x| acc.checked_mul(x))
            .unwrap_or(u128::MAX)
    };
    let evens = n / 2;
    let odds = n - evens;
    let orders = fact(evens).saturating_mul(fact(odds));
    if n.is_multiple_of(2) {
        orders
    } else {
        orders.saturating_mul(evens as u128 + 1)
    }
}

/// Uniform draw: evens, then odds, then (for odd `n`) the remaining evens.
fn sample_witness(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut evens: Vec<u32> = (2..=n as u32).step_by(2).collect();
    let mut odds: Vec<u32> = (1..=n as u32).step_by(2).collect();
    shuffle(&mut evens, rng);
    shuffle(&mut odds, rng);
    let split = if n.is_multiple_of(2) {
        evens.len()
    } else {
        uniform_below(rng, evens.len() as u64 + 1) as usize
    };
    let mut values = Vec::with_capacity(n);
    values.extend_from_slice(&evens[..split]);
    values.extend_from_slice(&odds);
    values.extend_from_slice(&evens[split..]);
    Permutation::from_vec_unchecked(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::adjacencies;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn shape(d: &BlockDecomposition) -> Vec<(usize, usize, SegmentKind)> {
        d.segments
            .iter()
            .map(|s| (s.start, s.len, s.kind))
            .collect()
    }

    const INC: SegmentKind = SegmentKind::Block(Orientation::Increasing);
    const DEC: SegmentKind = SegmentKind::Block(Orientation::Decreasing);
    const ONE: SegmentKind = SegmentKind::Singleton;

    #[test]
    fn decompose_examples() {
        let p = perm("3 4 5 1 2");
        assert_eq!(shape(&decompose(&p, Mode::Circular)), vec![(0, 5, INC)]);
        assert_eq!(
            shape(&decompose(&p, Mode::Linear)),
            vec![(0, 3, INC), (3, 2, INC)]
        );
        for mode in [Mode::Circular, Mode::Linear, Mode::Cyclic] {
            let id = Permutation::identity(5);
            assert_eq!(shape(&decompose(&id, mode)), vec![(0, 5, INC)]);
            assert_eq!(weight(&id, mode), WeightThirds(3));
        }
        // 4 → 1 is a successor step under the circular convention.
        assert_eq!(
            shape(&decompose(&perm("2 4 1 3"), Mode::Circular)),
            vec![(0, 1, ONE), (1, 2, INC), (3, 1, ONE)]
        );
        assert_eq!(
            shape(&decompose(&perm("2 4 1 3"), Mode::Linear)),
            vec![(0, 1, ONE), (1, 1, ONE), (2, 1, ONE), (3, 1, ONE)]
        );
        assert_eq!(
            shape(&decompose(&perm("2 1 4 3"), Mode::Circular)),
            vec![(0, 4, DEC)]
        );
        assert_eq!(
            shape(&decompose(&perm("2 1 4 3"), Mode::Linear)),
            vec![(0, 2, DEC), (2, 2, DEC)]
        );
        assert_eq!(
            shape(&decompose(&perm("2 5 3 1 4"), Mode::Circular)).len(),
            5
        );
    }

    #[test]
    fn cyclic_joins_across_the_end() {
        let p = perm("1 2 4 3 5 6");
        assert_eq!(
            shape(&decompose(&p, Mode::Cyclic)),
            vec![(2, 2, DEC), (4, 4, INC)]
        );
        assert_eq!(mode_adjacencies(p.values(), Mode::Cyclic), 4);
        assert_eq!(mode_adjacencies(p.values(), Mode::Linear), 3);
        let p = perm("2 1 4 5 3");
        assert_eq!(
            shape(&decompose(&p, Mode::Cyclic)),
            vec![(2, 2, INC), (4, 3, DEC)]
        );
        let rot = perm("4 5 1 2 3");
        assert_eq!(shape(&decompose(&rot, Mode::Cyclic)), vec![(0, 5, INC)]);
        assert_eq!(mode_adjacencies(rot.values(), Mode::Cyclic), 5);
        assert_eq!(mode_adjacencies(rot.values(), Mode::Circular), 4);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight(&perm("2 4 1 3"), Mode::Circular), WeightThirds(7));
        assert_eq!(weight(&perm("2 4 1 3"), Mode::Linear), WeightThirds(8));
        assert_eq!(weight(&perm("2 1 4 3"), Mode::Circular), WeightThirds(3));
        assert_eq!(weight(&perm("2 1 4 3"), Mode::Linear), WeightThirds(6));
        // no blocks at all: the maximum 2n/3
        assert_eq!(weight(&perm("2 5 3 1 4"), Mode::Circular), WeightThirds(10));
    }

    #[test]
    fn gain_examples() {
        let p = perm("2 1 4 3");
        // cut [4 3] and paste it in front: 4 3 2 1
        let merge = Move::swap(0, 2, 4);
        assert_eq!(gain(&p, &merge, Mode::Linear), 3);
        let id = Permutation::identity(5);
        assert!(gain(&id, &Move::reverse(0, 5), Mode::Circular) <= 0);
        // absorbing: 3 joins the block [1 2]
        let p = perm("1 2 6 4 7 3 5");
        let absorb = Move::swap(2, 5, 6);
        assert_eq!(p.apply(&absorb).unwrap(), perm("1 2 3 6 4 7 5"));
        assert_eq!(gain(&p, &absorb, Mode::Linear), 2);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_adjacencies(&Permutation::identity(4)), 5);
        assert_eq!(parity_adjacencies(&perm("2 4 1 3")), 1);
        assert_eq!(parity_adjacencies(&perm("2 4 1 3 5")), 2);
    }

    #[test]
    fn certificate_examples() {
        assert_eq!(certify_lower_bound(&Permutation::identity(6)).best, 0);
        let c = certify_lower_bound(&perm("2 4 1 3"));
        assert_eq!((c.parity_bound, c.adjacency_bound, c.best), (2, 2, 2));
        assert_eq!(certify_lower_bound(&perm("2 4 1 3 5")).parity_bound, 2);
    }

    #[test]
    fn max_parity_delta_examples() {
        assert_eq!(max_parity_delta(&perm("2 4 1 3")), Some(2));
        assert!(max_parity_delta(&Permutation::identity(5)).unwrap() <= 0);
        assert_eq!(max_parity_delta(&Permutation::identity(1)), None);
    }

    #[test]
    fn even_before_odd_examples() {
        assert_eq!(even_before_odd(4), perm("2 4 1 3"));
        assert_eq!(even_before_odd(5), perm("2 4 1 3 5"));
        assert_eq!(even_before_odd(1), perm("1"));
    }

    #[test]
    fn witnesses() {
        assert!(hard_witnesses(4, 1000, 0).contains(&perm("2 4 1 3")));
        assert!(hard_witnesses(2, 10, 0).contains(&perm("2 1")));
        assert!(hard_witnesses(3, 10, 0)
            .iter()
            .all(|p| parity_adjacencies(p) == 2));
        for n in 2..=8 {
            let all = hard_witnesses(n, usize::MAX, 0);
            assert_eq!(all.len() as u128, witness_count(n), "n={n}");
        }
        let sampled = hard_witnesses(7, 5, 42);
        assert_eq!(sampled.len(), 5);
        assert_eq!(sampled, hard_witnesses(7, 5, 42));
        let big = hard_witnesses(31, 20, 1);
        assert_eq!(big.len(), 20);
        assert!(big.iter().all(|p| parity_adjacencies(p) == 2));
        assert!(hard_witnesses(40, 3, 1)
            .iter()
            .all(|p| parity_adjacencies(p) == 1));
    }

    #[test]
    fn weight_bounds_hold() {
        for n in 2..=7 {
            for p in oracle::all_permutations(n) {
                for mode in [Mode::Circular, Mode::Linear, Mode::Cyclic] {
                    let d = decompose(&p, mode);
                    assert_eq!(d.segments.iter().map(|s| s.len).sum::<usize>(), n);
                    let w = d.weight().0;
                    assert!((3..=2 * n as u64).contains(&w), "{p:?} {mode:?} {w}");
                }
                let single = decompose(&p, Mode::Circular).segments.len() == 1;
                assert_eq!(weight(&p, Mode::Circular).0 == 3, single);
                assert!(parity_adjacencies(&p) <= n + 1);
                assert!(adjacencies(&p) <= n + 1);
            }
        }
    }
}
