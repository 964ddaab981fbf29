use std::fmt;
use std::str::FromStr;

use super::PermError;

/// Which of the legal rearrangements a [`Move`] performs.
///
/// With `X = [1,i]`, `A = (i,j]`, `B = (j,k]`, `Y = (k,n]` (1-based
/// positions, cut points are gaps):
///
/// | variant        | result            |
/// |----------------|-------------------|
/// | `Swap`         | `X B A Y`         |
/// | `SwapRevLeft`  | `X B rev(A) Y`    |
/// | `SwapRevRight` | `X rev(B) A Y`    |
/// | `Reverse`      | `X rev((i,k]) Y`  |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Swap,
    SwapRevLeft,
    SwapRevRight,
    Reverse,
}

impl Variant {
    pub const SWAPS: [Variant; 3] = [Variant::Swap, Variant::SwapRevLeft, Variant::SwapRevRight];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Swap => "swap",
            Variant::SwapRevLeft => "swaprl",
            Variant::SwapRevRight => "swaprr",
            Variant::Reverse => "rev",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "swap" => Ok(Variant::Swap),
            "swaprl" => Ok(Variant::SwapRevLeft),
            "swaprr" => Ok(Variant::SwapRevRight),
            "rev" => Ok(Variant::Reverse),
            other => Err(format!("unknown move variant {other:?}")),
        }
    }
}

/// A cut-and-paste move: cut points `i ≤ j ≤ k` plus a [`Variant`].
///
/// The three swap variants need `i < j < k`. A reversal in place is
/// encoded as `Reverse` with `i < k` and `j = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub variant: Variant,
}

impl Move {
    pub fn new(i: usize, j: usize, k: usize, variant: Variant) -> Self {
        Self { i, j, k, variant }
    }

    pub fn swap(i: usize, j: usize, k: usize) -> Self {
        Self::new(i, j, k, Variant::Swap)
    }

    pub fn swap_rev_left(i: usize, j: usize, k: usize) -> Self {
        Self::new(i, j, k, Variant::SwapRevLeft)
    }

    pub fn swap_rev_right(i: usize, j: usize, k: usize) -> Self {
        Self::new(i, j, k, Variant::SwapRevRight)
    }

    pub fn reverse(i: usize, k: usize) -> Self {
        Self::new(i, k, k, Variant::Reverse)
    }

    /// Moves the string at 0-based positions `start..end` so that it lands in
    /// gap `gap` of the original sequence, optionally reversed.
    ///
    /// `gap` must lie outside the open interval `(start, end)`. Returns
    /// `None` when the result would equal the input.
    pub fn relocate(start: usize, end: usize, gap: usize, reversed: bool) -> Option<Self> {
        assert!(start < end, "empty string");
        assert!(
            gap <= start || gap >= end,
            "gap {gap} inside string {start}..{end}"
        );
        if gap == start || gap == end {
            return (reversed && end - start >= 2).then(|| Self::reverse(start, end));
        }
        Some(match (gap < start, reversed) {
            (true, false) => Self::swap(gap, start, end),
            (true, true) => Self::swap_rev_right(gap, start, end),
            (false, false) => Self::swap(start, end, gap),
            (false, true) => Self::swap_rev_left(start, end, gap),
        })
    }

    /// Checks the cut points against length `n`.
    pub fn validate(&self, n: usize) -> Result<(), PermError> {
        let Move { i, j, k, variant } = *self;
        let ok = k <= n
            && match variant {
                Variant::Reverse => i < k && j == k,
                _ => i < j && j < k,
            };
        if ok {
            Ok(())
        } else {
            Err(PermError::InvalidMove { mv: *self, n })
        }
    }

    /// Applies the move to `values` in place. The move must be valid for
    /// `values.len()`.
    pub fn apply_unchecked<T>(&self, values: &mut [T]) {
        let Move { i, j, k, variant } = *self;
        match variant {
            Variant::Swap => values[i..k].rotate_left(j - i),
            Variant::SwapRevLeft => {
                values[i..j].reverse();
                values[i..k].rotate_left(j - i);
            }
            Variant::SwapRevRight => {
                values[j..k].reverse();
                values[i..k].rotate_left(j - i);
            }
            Variant::Reverse => values[i..k].reverse(),
        }
    }

    /// Shifts all cut points right by `offset` (for moves computed on a window).
    pub fn offset(self, offset: usize) -> Self {
        Self::new(
            self.i + offset,
            self.j + offset,
            self.k + offset,
            self.variant,
        )
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{},{})", self.variant, self.i, self.j, self.k)
    }
}

/// Closed form for `enumerate_moves(n).len()`: `3·C(n+1,3) + C(n+1,2) − n`.
pub fn move_count(n: usize) -> usize {
    let c3 = (n + 1) * n * n.saturating_sub(1) / 6;
    let c2 = (n + 1) * n / 2;
    3 * c3 + c2 - n
}

/// The canonical move set for length `n`: every swap variant for each
/// `0 ≤ i < j < k ≤ n`, then every reversal of at least two elements.
pub fn enumerate_moves(n: usize) -> Vec<Move> {
    let mut out = Vec::with_capacity(move_count(n));
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                out.extend(Variant::SWAPS.iter().map(|&v| Move::new(i, j, k, v)));
            }
        }
    }
    for i in 0..=n {
        for k in i + 2..=n {
            out.push(Move::reverse(i, k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::perm::Permutation;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    /// Builds the result by concatenating the four strings.
    fn splice(values: &[u32], m: &Move) -> Vec<u32> {
        let (x, a, b, y) = (
            &values[..m.i],
            &values[m.i..m.j],
            &values[m.j..m.k],
            &values[m.k..],
        );
        let rev = |s: &[u32]| s.iter().rev().copied().collect::<Vec<_>>();
        let mut out = x.to_vec();
        match m.variant {
            Variant::Swap => {
                out.extend_from_slice(b);
                out.extend_from_slice(a);
            }
            Variant::SwapRevLeft => {
                out.extend_from_slice(b);
                out.extend(rev(a));
            }
            Variant::SwapRevRight => {
                out.extend(rev(b));
                out.extend_from_slice(a);
            }
            Variant::Reverse => out.extend(rev(&values[m.i..m.k])),
        }
        out.extend_from_slice(y);
        out
    }

    #[test]
    fn apply_examples() {
        let id5 = Permutation::identity(5);
        assert_eq!(id5.apply(&Move::swap(0, 3, 5)).unwrap(), perm("4 5 1 2 3"));
        assert_eq!(perm("3 4 5 1 2").apply(&Move::swap(0, 3, 5)).unwrap(), id5);
        assert_eq!(
            perm("2 1").apply(&Move::reverse(0, 2)).unwrap(),
            perm("1 2")
        );
        let m = Move::swap_rev_right(1, 2, 4);
        assert_eq!(splice(&[1, 2, 3, 4], &m), vec![1, 4, 3, 2]);
        assert_eq!(Permutation::identity(4).apply(&m).unwrap(), perm("1 4 3 2"));
    }

    #[test]
    fn apply_matches_splice_everywhere() {
        let p = perm("5 3 6 1 4 2");
        for m in enumerate_moves(6) {
            let got = p.apply(&m).unwrap();
            assert_eq!(got.values(), &splice(p.values(), &m)[..], "{m}");
        }
    }

    #[test]
    fn invalid_cut_points_rejected() {
        let p = Permutation::identity(4);
        for m in [
            Move::swap(0, 0, 2),
            Move::swap(1, 3, 3),
            Move::swap(0, 2, 5),
            Move::swap_rev_left(2, 1, 3),
            Move::reverse(2, 2),
            Move::new(0, 1, 3, Variant::Reverse),
            Move::reverse(1, 5),
        ] {
            assert_eq!(
                p.apply(&m),
                Err(PermError::InvalidMove { mv: m, n: 4 }),
                "{m}"
            );
        }
    }

    #[test]
    fn enumeration_counts() {
        assert!(enumerate_moves(1).is_empty());
        assert_eq!(enumerate_moves(4).len(), 36);
        for n in 1..=12 {
            let moves = enumerate_moves(n);
            assert_eq!(moves.len(), move_count(n), "n={n}");
            let unique: HashSet<_> = moves.iter().collect();
            assert_eq!(unique.len(), moves.len());
            assert!(moves.iter().all(|m| m.validate(n).is_ok()));
        }
    }

    #[test]
    fn n2_has_four_tuples_one_state() {
        let moves = enumerate_moves(2);
        assert_eq!(moves.len(), 4);
        assert!(moves.contains(&Move::reverse(0, 2)));
        let p = perm("1 2");
        let states: HashSet<_> = moves.iter().map(|m| p.apply(m).unwrap()).collect();
        assert_eq!(states.into_iter().collect::<Vec<_>>(), vec![perm("2 1")]);
    }

    /// States one move away from `p` using the three raw forms over all
    /// `0 ≤ i ≤ j ≤ k ≤ n`, degenerate cut points included.
    fn raw_neighbors(p: &[u32]) -> HashSet<Vec<u32>> {
        let n = p.len();
        let mut out = HashSet::new();
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    for v in Variant::SWAPS {
                        out.insert(splice(p, &Move::new(i, j, k, v)));
                    }
                }
            }
        }
        out.remove(p);
        out
    }

    #[test]
    fn canonical_set_reaches_exactly_the_raw_forms() {
        for n in 1..=6 {
            let p = Permutation::random(n, n as u64);
            let canonical: HashSet<Vec<u32>> = enumerate_moves(n)
                .iter()
                .map(|m| p.apply(m).unwrap().into_values())
                .collect();
            assert_eq!(canonical, raw_neighbors(p.values()), "n={n}");
        }
    }

    #[test]
    fn distinct_transformations_n4() {
        let id = Permutation::identity(4);
        let images: HashSet<_> = enumerate_moves(4)
            .iter()
            .map(|m| id.apply(m).unwrap())
            .collect();
        // SWAP and SWAP_REV_LEFT coincide whenever A has one element, etc.
        assert_eq!(images.len(), raw_neighbors(id.values()).len());
        assert_eq!(images.len(), 15);
    }

    #[test]
    fn relocate_produces_expected_strings() {
        let v = [1u32, 2, 3, 4, 5, 6];
        let run = |m: Option<Move>| {
            let mut w = v.to_vec();
            if let Some(m) = m {
                m.validate(6).unwrap();
                m.apply_unchecked(&mut w);
            }
            w
        };
        assert_eq!(run(Move::relocate(3, 5, 1, false)), vec![1, 4, 5, 2, 3, 6]);
        assert_eq!(run(Move::relocate(3, 5, 1, true)), vec![1, 5, 4, 2, 3, 6]);
        assert_eq!(run(Move::relocate(1, 3, 6, false)), vec![1, 4, 5, 6, 2, 3]);
        assert_eq!(run(Move::relocate(1, 3, 6, true)), vec![1, 4, 5, 6, 3, 2]);
        assert_eq!(run(Move::relocate(1, 3, 3, true)), vec![1, 3, 2, 4, 5, 6]);
        assert_eq!(Move::relocate(1, 3, 1, false), None);
        assert_eq!(Move::relocate(2, 3, 3, true), None);
    }

    #[test]
    fn reverse_is_involution() {
        let p = perm("4 1 6 2 5 3");
        for i in 0..6 {
            for k in i + 2..=6 {
                let m = Move::reverse(i, k);
                assert_eq!(p.apply(&m).unwrap().apply(&m).unwrap(), p);
            }
        }
    }

    #[test]
    fn every_canonical_move_changes_some_input() {
        for n in 1..=7 {
            let id = Permutation::identity(n);
            for m in enumerate_moves(n) {
                assert_ne!(id.apply(&m).unwrap(), id, "n={n} {m}");
            }
        }
    }
}
