//! Seeded move-count and timing runs over random permutations.

use std::fmt::Write as _;
use std::time::Instant;

use crate::perm::Permutation;
use crate::sorter::{Algorithm, SortError};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub algo: Algorithm,
    pub reps: usize,
    pub mean_moves: f64,
    pub max_moves: usize,
    pub bound: usize,
    pub mean_ms: f64,
}

pub const CSV_HEADER: &str = "n,algo,reps,mean_moves,max_moves,bound,mean_ms";

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.3},{},{},{:.3}",
            self.n, self.algo, self.reps, self.mean_moves, self.max_moves, self.bound, self.mean_ms
        )
    }
}

/// Seed of the `rep`-th input for length `n`: every algorithm sees the same
/// inputs for a given base seed.
pub fn input_seed(seed: u64, n: usize, rep: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (rep as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// One row per `(n, algorithm)`, in the given order. Only the sort call is
/// timed.
pub fn run(
    ns: &[usize],
    algos: &[Algorithm],
    reps: usize,
    seed: u64,
) -> Result<Vec<BenchRow>, SortError> {
    let mut rows = Vec::with_capacity(ns.len() * algos.len());
    for &n in ns {
        let inputs: Vec<Permutation> = (0..reps)
            .map(|r| Permutation::random(n, input_seed(seed, n, r)))
            .collect();
        for &algo in algos {
            let mut total_moves = 0usize;
            let mut max_moves = 0usize;
            let mut total_ms = 0f64;
            for p in &inputs {
                let start = Instant::now();
                let result = algo.sort(p)?;
                total_ms += start.elapsed().as_secs_f64() * 1e3;
                total_moves += result.move_count;
                max_moves = max_moves.max(result.move_count);
            }
            let denom = reps.max(1) as f64;
            rows.push(BenchRow {
                n,
                algo,
                reps,
                mean_moves: total_moves as f64 / denom,
                max_moves,
                bound: algo.bound(n),
                mean_ms: total_ms / denom,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}

/// `mean_ms` ratios between consecutive rows of one algorithm.
pub fn time_ratios(rows: &[BenchRow], algo: Algorithm) -> Vec<f64> {
    let times: Vec<f64> = rows
        .iter()
        .filter(|r| r.algo == algo)
        .map(|r| r.mean_ms)
        .collect();
    times.windows(2).map(|w| w[1] / w[0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_respect_bounds() {
        let rows = run(&[30, 60], &Algorithm::ALL, 5, 0).unwrap();
        assert_eq!(rows.len(), 8);
        for r in &rows {
            assert!(r.max_moves <= r.bound, "{r:?}");
        }
        let csv = to_csv(&rows);
        assert!(csv.starts_with("n,algo,reps,mean_moves,max_moves,bound,mean_ms\n30,basic,5,"));
        assert_eq!(time_ratios(&rows, Algorithm::Refined).len(), 1);
    }

    #[test]
    fn inputs_are_seeded() {
        let a = run(&[40], &[Algorithm::Refined], 3, 9).unwrap();
        let b = run(&[40], &[Algorithm::Refined], 3, 9).unwrap();
        assert_eq!(
            (a[0].mean_moves, a[0].max_moves),
            (b[0].mean_moves, b[0].max_moves)
        );
    }
}
