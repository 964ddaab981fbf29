//! Insertion sort and the monotone-subsequence sort.

use crate::metrics::Orientation;
use crate::perm::{positions_of, Move, Permutation};

use super::{Algorithm, SortResult};

/// A longest monotone subsequence: 0-based positions in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneRun {
    pub orientation: Orientation,
    pub indices: Vec<usize>,
}

impl MonotoneRun {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Extracts `π_t` for `t = 1, 2, …` and inserts it into the sorted prefix.
/// At most `n − 1` moves.
pub fn sort_insertion(p: &Permutation) -> SortResult {
    let mut values = p.values().to_vec();
    let mut moves = Vec::new();
    for t in 1..values.len() {
        let x = values[t];
        let g = values[..t].partition_point(|&v| v < x);
        if g < t {
            let m = Move::swap(g, t, t + 1);
            m.apply_unchecked(&mut values);
            moves.push(m);
        }
    }
    SortResult::from_moves(p, moves, Algorithm::Insertion.bound(p.len()))
}

/// Keeps a longest monotone subsequence in place, inserts every other value
/// next to its neighbour in value order among the kept ones, and reverses
/// the whole list at the end if the kept run was decreasing.
pub fn sort_monotone(p: &Permutation) -> SortResult {
    let n = p.len();
    let run = longest_monotone(p);
    let increasing = run.orientation == Orientation::Increasing;
    let mut values = p.values().to_vec();
    let mut member = vec![false; n + 2];
    for &i in &run.indices {
        member[values[i] as usize] = true;
    }
    let mut moves = Vec::new();
    for x in p.values().to_vec() {
        if member[x as usize] {
            continue;
        }
        let pos = positions_of(&values);
        // Increasing: right after the largest kept value below x, else
        // before the smallest kept value. Decreasing: right before the
        // largest kept value below x, else after the smallest kept value
        // above x.
        let below = (1..x).rev().find(|&v| member[v as usize]);
        let gap = match (increasing, below) {
            (true, Some(v)) => pos[v as usize] + 1,
            (false, Some(v)) => pos[v as usize],
            (true, None) => {
                pos[((x + 1)..=n as u32)
                    .find(|&v| member[v as usize])
                    .expect("run is non-empty") as usize]
            }
            (false, None) => {
                pos[((x + 1)..=n as u32)
                    .find(|&v| member[v as usize])
                    .expect("run is non-empty") as usize]
                    + 1
            }
        };
        let at = pos[x as usize];
        if let Some(m) = Move::relocate(at, at + 1, gap, false) {
            m.apply_unchecked(&mut values);
            moves.push(m);
        }
        member[x as usize] = true;
    }
    if !increasing && n >= 2 {
        let m = Move::reverse(0, n);
        m.apply_unchecked(&mut values);
        moves.push(m);
    }
    debug_assert!(values.iter().enumerate().all(|(i, &v)| v as usize == i + 1));
    SortResult::from_moves(p, moves, Algorithm::Monotone.bound(n))
}

/// A longest increasing or decreasing subsequence. Ties prefer increasing,
/// then the lexicographically smallest index sequence.
pub fn longest_monotone(p: &Permutation) -> MonotoneRun {
    let inc = lexmin_longest_increasing(p.values());
    let flipped: Vec<u32> = p.values().iter().map(|&v| p.len() as u32 + 1 - v).collect();
    let dec = lexmin_longest_increasing(&flipped);
    if inc.len() >= dec.len() {
        MonotoneRun {
            orientation: Orientation::Increasing,
            indices: inc,
        }
    } else {
        MonotoneRun {
            orientation: Orientation::Decreasing,
            indices: dec,
        }
    }
}

/// Lexicographically smallest index sequence among the longest increasing
/// subsequences of a permutation of `1..=n`, in `O(n log n)`.
fn lexmin_longest_increasing(a: &[u32]) -> Vec<usize> {
    let n = a.len();
    // suffix[i]: length of the longest increasing subsequence starting at i.
    // Fenwick tree over reversed values gives max over values > a[i].
    let mut tree = vec![0usize; n + 1];
    let mut suffix = vec![0usize; n];
    for i in (0..n).rev() {
        let key = n + 1 - a[i] as usize;
        let mut best = 0;
        let mut k = key - 1;
        while k > 0 {
            best = best.max(tree[k]);
            k &= k - 1;
        }
        suffix[i] = best + 1;
        let mut k = key;
        while k <= n {
            tree[k] = tree[k].max(suffix[i]);
            k += k & k.wrapping_neg();
        }
    }
    let total = suffix.iter().copied().max().unwrap_or(0);
    let mut out = Vec::with_capacity(total);
    let mut last = 0u32;
    let mut need = total;
    for (i, &v) in a.iter().enumerate() {
        if need == 0 {
            break;
        }
        if v > last && suffix[i] == need {
            out.push(i);
            last = v;
            need -= 1;
        }
    }
    out
}
