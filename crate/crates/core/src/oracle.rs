//! Exact sorting distances by breadth-first search over `Sₙ`.
//!
//! States are indexed by their lexicographic rank (Lehmer code in the
//! factorial number system): digit `t` counts the later entries smaller
//! than `π_t`, and `rank = Σ digit_t · (n−1−t)!`. The identity has rank 0
//! and `[n … 1]` has rank `n! − 1`. Persisted tables use this order.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::metrics::{certify_lower_bound, even_before_odd};
use crate::perm::{enumerate_moves, Move, Permutation};
use crate::sorter;

/// Largest `n` the oracle ever accepts.
pub const HARD_LIMIT: usize = 9;
/// Default guard; `n = 9` needs [`OracleLimits::allow_n9`].
pub const DEFAULT_LIMIT: usize = 8;

const UNSEEN: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("n={n} exceeds the oracle limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("malformed table file at line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<io::Error> for OracleError {
    fn from(e: io::Error) -> Self {
        OracleError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_n: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_LIMIT,
        }
    }
}

impl OracleLimits {
    pub fn allow_n9() -> Self {
        Self { max_n: HARD_LIMIT }
    }

    fn check(&self, n: usize) -> Result<(), OracleError> {
        let limit = self.max_n.min(HARD_LIMIT);
        if n > limit {
            Err(OracleError::TooLarge { n, limit })
        } else {
            Ok(())
        }
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Lexicographic rank of `values` (a permutation of `1..=n`, `n ≤ 20`).
pub fn rank(values: &[u32]) -> u64 {
    let n = values.len();
    let mut unused: u32 = if n >= 32 {
        u32::MAX
    } else {
        (1u32 << (n + 1)) - 2
    };
    let mut r = 0u64;
    for (t, &v) in values.iter().enumerate() {
        let below = (unused & ((1u32 << v) - 1)).count_ones() as u64;
        r = r * (n - t) as u64 + below;
        unused &= !(1u32 << v);
    }
    r
}

/// Inverse of [`rank`].
pub fn unrank(n: usize, mut r: u64) -> Permutation {
    Permutation::from_vec_unchecked(unrank_values(n, &mut r))
}

fn unrank_values(n: usize, r: &mut u64) -> Vec<u32> {
    let mut digits = vec![0u64; n];
    for t in (0..n).rev() {
        let base = (n - t) as u64;
        digits[t] = *r % base;
        *r /= base;
    }
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    digits.iter().map(|&d| pool.remove(d as usize)).collect()
}

/// All permutations of `n` in rank order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    (0..factorial(n)).map(move |r| unrank(n, r))
}

/// Exact number of canonical moves needed to sort `p`.
pub fn bfs_distance(p: &Permutation, limits: OracleLimits) -> Result<u32, OracleError> {
    Ok(shortest_path(p, limits)?.len() as u32)
}

/// A minimum-length move sequence taking `p` to the identity.
pub fn shortest_path(p: &Permutation, limits: OracleLimits) -> Result<Vec<Move>, OracleError> {
    let n = p.len();
    limits.check(n)?;
    if p.is_identity() {
        return Ok(Vec::new());
    }
    let moves = enumerate_moves(n);
    let size = factorial(n) as usize;
    // parent[r] = (parent rank, move index) for discovered states.
    let mut parent: Vec<(u32, u16)> = vec![(u32::MAX, 0); size];
    let start = rank(p.values()) as usize;
    parent[start] = (start as u32, 0);
    let mut frontier = vec![start as u32];
    let mut buf = vec![0u32; n];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &r in &frontier {
            let state = unrank(n, r as u64);
            for (mi, m) in moves.iter().enumerate() {
                buf.copy_from_slice(state.values());
                m.apply_unchecked(&mut buf);
                let nr = rank(&buf) as usize;
                if parent[nr].0 != u32::MAX {
                    continue;
                }
                parent[nr] = (r, mi as u16);
                if nr == 0 {
                    let mut path = Vec::new();
                    let mut at = 0usize;
                    while at != start {
                        let (pr, mi) = parent[at];
                        path.push(moves[mi as usize]);
                        at = pr as usize;
                    }
                    path.reverse();
                    return Ok(path);
                }
                next.push(nr as u32);
            }
        }
        frontier = next;
    }
    unreachable!("the move graph is connected")
}

/// Exact distances for every permutation of one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    pub n: usize,
    /// Indexed by rank.
    pub distances: Vec<u8>,
    /// `f(n)`, the largest distance.
    pub fmax: u8,
    /// Permutations at distance `fmax`, in rank order, at most `witness_cap`.
    pub witnesses: Vec<Permutation>,
    pub witness_total: usize,
    pub witness_cap: usize,
}

pub const DEFAULT_WITNESS_CAP: usize = 10_000;

impl DistanceTable {
    pub fn distance(&self, p: &Permutation) -> u8 {
        assert_eq!(p.len(), self.n);
        self.distances[rank(p.values()) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Permutation, u8)> + '_ {
        self.distances
            .iter()
            .enumerate()
            .map(move |(r, &d)| (unrank(self.n, r as u64), d))
    }

    /// Number of permutations at each distance `0..=fmax`.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.fmax as usize + 1];
        for &d in &self.distances {
            h[d as usize] += 1;
        }
        h
    }

    /// `# n=…`, `# fmax=…`, then `rank,distance` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# n={}", self.n)?;
        writeln!(out, "# fmax={}", self.fmax)?;
        writeln!(out, "rank,distance")?;
        for (r, d) in self.distances.iter().enumerate() {
            writeln!(out, "{r},{d}")?;
        }
        Ok(())
    }

    /// One witness per line in permutation text format.
    pub fn write_witnesses<W: Write>(&self, mut out: W) -> io::Result<()> {
        for p in &self.witnesses {
            writeln!(out, "{p}")?;
        }
        Ok(())
    }

    /// Reads a table written by [`write_csv`](Self::write_csv), rebuilding
    /// the witness list from the distances.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self, OracleError> {
        let fmt_err = |line: usize, message: &str| OracleError::Format {
            line,
            message: message.into(),
        };
        let mut n = None;
        let mut fmax = None;
        let mut header = false;
        let mut distances = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                let c = c.trim();
                if let Some(v) = c.strip_prefix("n=") {
                    n = Some(v.parse::<usize>().map_err(|_| fmt_err(line_no, "bad n"))?);
                } else if let Some(v) = c.strip_prefix("fmax=") {
                    fmax = Some(v.parse::<u8>().map_err(|_| fmt_err(line_no, "bad fmax"))?);
                }
                continue;
            }
            if !header {
                if line != "rank,distance" {
                    return Err(fmt_err(line_no, "expected header rank,distance"));
                }
                header = true;
                continue;
            }
            let (r, d) = line
                .split_once(',')
                .ok_or_else(|| fmt_err(line_no, "expected rank,distance"))?;
            let r: usize = r.parse().map_err(|_| fmt_err(line_no, "bad rank"))?;
            let d: u8 = d.parse().map_err(|_| fmt_err(line_no, "bad distance"))?;
            if r != distances.len() {
                return Err(fmt_err(line_no, "ranks must be consecutive from 0"));
            }
            distances.push(d);
        }
        let n = n.ok_or_else(|| fmt_err(1, "missing # n= line"))?;
        if n > HARD_LIMIT || distances.len() as u64 != factorial(n) {
            return Err(fmt_err(1, "row count does not match n!"));
        }
        let table = finish_table(n, distances, DEFAULT_WITNESS_CAP);
        if fmax.is_some_and(|f| f != table.fmax) {
            return Err(fmt_err(1, "fmax header disagrees with rows"));
        }
        Ok(table)
    }
}

/// BFS from the identity over all of `Sₙ`.
///
/// The canonical move set is closed under inverses, so the distance from
/// the identity to `p` equals the distance from `p` to the identity.
pub fn build_table(n: usize, limits: OracleLimits) -> Result<DistanceTable, OracleError> {
    build_table_with(n, limits, DEFAULT_WITNESS_CAP, |_, _| {})
}

/// [`build_table`] with a witness cap and a per-level progress callback
/// `(level, states at that level)`.
pub fn build_table_with(
    n: usize,
    limits: OracleLimits,
    witness_cap: usize,
    mut progress: impl FnMut(u8, usize),
) -> Result<DistanceTable, OracleError> {
    assert!(n >= 1);
    limits.check(n)?;
    let size = factorial(n) as usize;
    let moves = enumerate_moves(n);
    let mut distances = vec![UNSEEN; size];
    distances[0] = 0;
    let mut frontier: Vec<u32> = vec![0];
    let mut level = 0u8;
    let mut buf = vec![0u32; n];
    while !frontier.is_empty() {
        progress(level, frontier.len());
        let mut next = Vec::new();
        for &r in &frontier {
            let state = unrank(n, r as u64);
            for m in &moves {
                buf.copy_from_slice(state.values());
                m.apply_unchecked(&mut buf);
                let nr = rank(&buf) as usize;
                if distances[nr] == UNSEEN {
                    distances[nr] = level + 1;
                    next.push(nr as u32);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
        level += 1;
    }
    Ok(finish_table(n, distances, witness_cap))
}

fn finish_table(n: usize, distances: Vec<u8>, witness_cap: usize) -> DistanceTable {
    let fmax = distances.iter().copied().max().unwrap_or(0);
    let at_max: Vec<usize> = distances
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d == fmax)
        .map(|(r, _)| r)
        .collect();
    let witnesses = at_max
        .iter()
        .take(witness_cap)
        .map(|&r| unrank(n, r as u64))
        .collect();
    DistanceTable {
        n,
        distances,
        fmax,
        witness_total: at_max.len(),
        witnesses,
        witness_cap,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    CertificateAboveDistance { best: usize, distance: u8 },
    DistanceAboveRefined { distance: u8, refined: usize },
    SorterFailed { message: String },
    EvenBeforeOddTooShort { distance: u8, floor: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub perm: Permutation,
    pub kind: ViolationKind,
}

/// Outcome of [`verify_certificates`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub n: usize,
    pub checked: usize,
    pub even_before_odd_distance: u8,
    pub violations: Vec<Violation>,
}

impl CertificateReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `certificate ≤ distance ≤ refined-sort moves` for every entry and
/// `distance(even_before_odd(n)) ≥ ⌊n/2⌋`.
pub fn verify_certificates(table: &DistanceTable) -> CertificateReport {
    let mut violations = Vec::new();
    for (p, distance) in table.iter() {
        let best = certify_lower_bound(&p).best;
        if best > distance as usize {
            violations.push(Violation {
                perm: p.clone(),
                kind: ViolationKind::CertificateAboveDistance { best, distance },
            });
        }
        match sorter::sort_refined(&p) {
            Ok(result) if result.move_count < distance as usize => violations.push(Violation {
                perm: p,
                kind: ViolationKind::DistanceAboveRefined {
                    distance,
                    refined: result.move_count,
                },
            }),
            Ok(_) => {}
            Err(e) => violations.push(Violation {
                perm: p,
                kind: ViolationKind::SorterFailed {
                    message: e.to_string(),
                },
            }),
        }
    }
    let ebo = even_before_odd(table.n);
    let even_before_odd_distance = table.distance(&ebo);
    let floor = table.n / 2;
    if (even_before_odd_distance as usize) < floor {
        violations.push(Violation {
            perm: ebo,
            kind: ViolationKind::EvenBeforeOddTooShort {
                distance: even_before_odd_distance,
                floor,
            },
        });
    }
    CertificateReport {
        n: table.n,
        checked: table.distances.len(),
        even_before_odd_distance,
        violations,
    }
}
