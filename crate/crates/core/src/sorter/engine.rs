//! Step construction and the basic/refined drivers.
//!
//! The case analysis always runs on a view `r` whose first `f` positions hold
//! an increasing block (the front) under the circular value convention.
//! Moves are planned as relocations of a string `start..end` to a gap; the
//! refined driver rotates its sequence into such a view and maps the gaps
//! back.
//!
//! Names follow the classic write-up of the argument: `l` ends the front,
//! `l'` is its successor, `p` follows the front, `p'` is a value next to `p`
//! located elsewhere, `B` is the block ending in `p'`, `q` its other end and
//! `q'` the value next to `q` outside `B`.

use crate::metrics::{
    decompose_values, predecessor, successor, weight_values, Mode, Orientation, Segment,
    SegmentKind,
};
use crate::oracle::{self, OracleLimits};
use crate::perm::{adjacencies, enumerate_moves, positions_of, Move, Permutation};

use super::{Category, SortError, SortStep};

/// A string `start..end` pasted at `gap` of the same sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Reloc {
    start: usize,
    end: usize,
    gap: usize,
    rev: bool,
}

impl Reloc {
    fn to_move(self) -> Option<Move> {
        Move::relocate(self.start, self.end, self.gap, self.rev)
    }

    /// Maps a relocation planned on `rotate_right(real, t)` back to `real`.
    /// In cyclic mode gap 0 of the view (before the front) is the gap before
    /// the tail, which is the end when there is no tail.
    fn unrotate(self, t: usize, n: usize, mode: Mode) -> Reloc {
        if mode != Mode::Cyclic {
            return self;
        }
        let gap = if self.gap == 0 { n - t } else { self.gap - t };
        Reloc {
            start: self.start - t,
            end: self.end - t,
            gap,
            rev: self.rev,
        }
    }
}

enum Plan {
    Single(Reloc, Category),
    /// Absorbing move; the second move is chosen after it is applied.
    Pair {
        first: Reloc,
        l_prime: u32,
        q_prime: u32,
    },
}

/// Segment bookkeeping for one view.
struct View<'a> {
    _r: std::marker::PhantomData<&'a [u32]>,
    n: usize,
    segs: Vec<Segment>,
    seg_of: Vec<usize>,
    pos: Vec<usize>,
}

impl<'a> View<'a> {
    fn new(r: &'a [u32]) -> Self {
        let n = r.len();
        let segs = decompose_values(r, Mode::Circular).segments;
        let mut seg_of = vec![0; n];
        for (si, s) in segs.iter().enumerate() {
            seg_of[s.start..s.start + s.len].fill(si);
        }
        Self {
            _r: std::marker::PhantomData,
            n,
            segs,
            seg_of,
            pos: positions_of(r),
        }
    }

    fn seg(&self, v: u32) -> &Segment {
        &self.segs[self.seg_of[self.pos[v as usize]]]
    }

    fn seg_index(&self, v: u32) -> usize {
        self.seg_of[self.pos[v as usize]]
    }

    fn in_block(&self, v: u32) -> bool {
        self.seg(v).is_block()
    }

    /// Relocation of the segment holding `w` next to `v` so that they touch
    /// and the merged run keeps one orientation.
    fn merge_onto(&self, v: u32, w: u32) -> Reloc {
        let x = *self.seg(v);
        let y = *self.seg(w);
        let w_left = self.pos[w as usize] == y.start;
        if self.pos[v as usize] == x.start + x.len - 1 {
            Reloc {
                start: y.start,
                end: y.start + y.len,
                gap: x.start + x.len,
                rev: !w_left,
            }
        } else {
            Reloc {
                start: y.start,
                end: y.start + y.len,
                gap: x.start,
                rev: w_left,
            }
        }
    }

    /// A move joining two blocks that hold consecutive values, for the
    /// smallest such value `i`. The front (segment 0) never moves.
    fn block_move(&self) -> Option<Reloc> {
        for i in 1..=self.n as u32 {
            let j = successor(i, self.n);
            let (a, b) = (self.seg_index(i), self.seg_index(j));
            if a == b || !self.segs[a].is_block() || !self.segs[b].is_block() {
                continue;
            }
            let (anchor, moving) = if a == 0 {
                (i, j)
            } else if b == 0 || self.segs[a].start > self.segs[b].start {
                (j, i)
            } else {
                (i, j)
            };
            return Some(self.merge_onto(anchor, moving));
        }
        None
    }

    /// The string spanning the positions of `u` and `v`, inclusive.
    fn span(&self, u: u32, v: u32) -> (usize, usize) {
        let (a, b) = (self.pos[u as usize], self.pos[v as usize]);
        (a.min(b), a.max(b) + 1)
    }
}

/// Case analysis for one step on a view with an increasing front of length
/// `f` (`2 ≤ f < n`, `n ≥ 4`).
fn plan(r: &[u32], f: usize) -> Result<Plan, String> {
    let view = View::new(r);
    let n = view.n;
    if let Some(mv) = view.block_move() {
        return Ok(Plan::Single(mv, Category::Block));
    }
    let l = r[f - 1];
    let l_prime = successor(l, n);
    let p = r[f];
    if view.in_block(l_prime) {
        return Err(format!(
            "l'={l_prime} is in a block but no block move was found"
        ));
    }
    let outside = |v: u32| view.pos[v as usize] >= f;
    let candidates: Vec<u32> = if view.in_block(p) {
        let next = r[f + 1];
        vec![if successor(p, n) == next {
            predecessor(p, n)
        } else {
            successor(p, n)
        }]
    } else {
        vec![successor(p, n), predecessor(p, n)]
    };
    // A bonus move cuts the string between l' and p' when that does not
    // split the block p' ends.
    let bonus_ok = |pp: u32| {
        let b = view.seg(pp);
        if !b.is_block() {
            return true;
        }
        let (s, e) = view.span(l_prime, pp);
        b.start >= s && b.start + b.len <= e
    };
    let p_prime = candidates
        .into_iter()
        .filter(|&v| outside(v))
        .min_by_key(|&v| (view.in_block(v), !bonus_ok(v), v))
        .ok_or_else(|| format!("no candidate p' for p={p}"))?;

    if bonus_ok(p_prime) {
        let (start, end) = view.span(l_prime, p_prime);
        let rev = view.pos[p_prime as usize] < view.pos[l_prime as usize];
        let category = if view.in_block(p_prime) {
            Category::ExtraBonus
        } else {
            Category::Bonus
        };
        return Ok(Plan::Single(
            Reloc {
                start,
                end,
                gap: f,
                rev,
            },
            category,
        ));
    }

    let b = *view.seg(p_prime);
    let p_left = view.pos[p_prime as usize] == b.start;
    let q = if p_left {
        r[b.start + b.len - 1]
    } else {
        r[b.start]
    };
    let q_inner = if p_left {
        r[b.start + b.len - 2]
    } else {
        r[b.start + 1]
    };
    let q_prime = if successor(q, n) == q_inner {
        predecessor(q, n)
    } else {
        successor(q, n)
    };
    if view.in_block(p) || view.in_block(q_prime) {
        return Err(format!(
            "p={p} or q'={q_prime} is in a block but no block move was found"
        ));
    }
    let first = Reloc {
        start: b.start,
        end: b.start + b.len,
        gap: f,
        rev: p_left,
    };
    Ok(Plan::Pair {
        first,
        l_prime,
        q_prime,
    })
}

/// Second move of an absorbing pair: the string from `l'` to `q'` between
/// `l` and `q`; a block move when closing the gap already merged one of them.
fn pair_second(r: &[u32], f: usize, l_prime: u32, q_prime: u32) -> Result<Reloc, String> {
    let view = View::new(r);
    if !view.in_block(l_prime) && !view.in_block(q_prime) {
        let (start, end) = view.span(l_prime, q_prime);
        if start <= f {
            return Err(format!(
                "string from l'={l_prime} to q'={q_prime} reaches the front"
            ));
        }
        let rev = view.pos[q_prime as usize] < view.pos[l_prime as usize];
        return Ok(Reloc {
            start,
            end,
            gap: f,
            rev,
        });
    }
    view.block_move()
        .ok_or_else(|| "absorbing pair: no second move".to_owned())
}

fn apply_reloc(values: &mut [u32], rl: Reloc) -> Option<Move> {
    let mv = rl.to_move()?;
    mv.apply_unchecked(values);
    Some(mv)
}

/// Applies one step of the case analysis to `values`, where the front block
/// sits at positions `t..t+f` of `rotate_right(values, t)`.
fn run_step(values: &mut [u32], t: usize, f: usize, mode: Mode) -> Result<SortStep, String> {
    let n = values.len();
    let mut r = values.to_vec();
    r.rotate_right(t);
    let before = weight_values(values, mode).0 as i64;
    let (relocs, category) = match plan(&r, f)? {
        Plan::Single(rl, c) => (vec![rl], c),
        Plan::Pair {
            first,
            l_prime,
            q_prime,
        } => {
            let mut r1 = r.clone();
            apply_reloc(&mut r1, first).ok_or("absorbing move is a no-op")?;
            let second = pair_second(&r1, f, l_prime, q_prime)?;
            (vec![first, second], Category::AbsorbingPair)
        }
    };
    let mut moves = Vec::with_capacity(2);
    for rl in relocs {
        let mv = apply_reloc(values, rl.unrotate(t, n, mode))
            .ok_or_else(|| format!("{category} step planned a no-op"))?;
        moves.push(mv);
    }
    let gain = before - weight_values(values, mode).0 as i64;
    let floor = category.gain_floor().unwrap_or(i64::MIN);
    if gain < floor {
        return Err(format!(
            "{category} step gained {gain} thirds, below the floor {floor}"
        ));
    }
    Ok(SortStep {
        moves,
        category,
        claimed_gain: gain,
        window: 0..n,
        mode,
    })
}

fn single(values: &mut [u32], rl: Reloc, category: Category, mode: Mode) -> Option<SortStep> {
    let before = weight_values(values, mode).0 as i64;
    let mv = apply_reloc(values, rl)?;
    let gain = before - weight_values(values, mode).0 as i64;
    Some(SortStep {
        moves: vec![mv],
        category,
        claimed_gain: gain,
        window: 0..values.len(),
        mode,
    })
}

fn is_increasing(s: &Segment) -> bool {
    s.kind == SegmentKind::Block(Orientation::Increasing)
}

/// One step of the circular main loop on `p`, whose first segment must be an
/// increasing block that is not the whole permutation.
pub fn step(p: &Permutation) -> Result<SortStep, SortError> {
    let fail = |message: String| SortError {
        perm: p.clone(),
        message,
    };
    let segs = decompose_values(p.values(), Mode::Circular).segments;
    if p.len() < 4 || segs.len() < 2 || !is_increasing(&segs[0]) {
        return Err(fail(
            "step needs n ≥ 4 and an increasing front block followed by more".into(),
        ));
    }
    let mut values = p.values().to_vec();
    run_step(&mut values, 0, segs[0].len, Mode::Circular).map_err(fail)
}

pub(super) fn basic(input: &[u32]) -> Result<Vec<SortStep>, String> {
    let n = input.len();
    let mut values = input.to_vec();
    let mut steps = Vec::new();
    if Permutation::from_vec_unchecked(values.clone()).is_identity() {
        return Ok(steps);
    }
    let mode = Mode::Circular;

    let view = View::new(&values);
    let front = view.segs[0];
    let opening = match front.kind {
        SegmentKind::Block(Orientation::Increasing) => None,
        SegmentKind::Block(Orientation::Decreasing) => Some(Reloc {
            start: 0,
            end: front.len,
            gap: 0,
            rev: true,
        }),
        SegmentKind::Singleton => {
            let x = successor(values[0], n);
            let y = *view.seg(x);
            let rev = view.pos[x as usize] != y.start;
            Some(Reloc {
                start: y.start,
                end: y.start + y.len,
                gap: 1,
                rev,
            })
        }
    };
    if let Some(rl) = opening {
        steps.push(single(&mut values, rl, Category::Opening, mode).ok_or("opening is a no-op")?);
    }

    for _ in 0..=n {
        let segs = decompose_values(&values, mode).segments;
        if !is_increasing(&segs[0]) && n > 1 {
            return Err(format!(
                "front is not an increasing block at [{}]",
                fmt(&values)
            ));
        }
        if segs.len() == 1 {
            break;
        }
        steps.push(run_step(&mut values, 0, segs[0].len, mode)?);
    }
    if decompose_values(&values, mode).segments.len() != 1 {
        return Err("main loop did not terminate".into());
    }
    if values[0] != 1 {
        let pos1 = values.iter().position(|&v| v == 1).expect("1 is present");
        steps.push(
            single(
                &mut values,
                Reloc {
                    start: 0,
                    end: pos1,
                    gap: n,
                    rev: false,
                },
                Category::Closing,
                mode,
            )
            .ok_or("closing is a no-op")?,
        );
    }
    Ok(steps)
}

fn fmt(values: &[u32]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Steps for a sub-permutation, shifted to start at position `off`.
fn offset_steps(steps: Vec<SortStep>, off: usize) -> impl Iterator<Item = SortStep> {
    steps.into_iter().map(move |mut s| {
        for m in &mut s.moves {
            *m = m.offset(off);
        }
        s.window = s.window.start + off..s.window.end + off;
        s
    })
}

/// `values[range]` relabelled to `1..=len`, given that it holds a contiguous
/// range of values.
fn relabel(values: &[u32]) -> Vec<u32> {
    let min = values.iter().copied().min().expect("non-empty window");
    values.iter().map(|v| v - min + 1).collect()
}

/// Shortest sort of a permutation of at most three elements whose moves
/// never lower the adjacency count, by exhaustive search up to the oracle
/// distance.
fn tiny_sort(values: &[u32]) -> Option<Vec<Move>> {
    let p = Permutation::from_vec_unchecked(values.to_vec());
    let distance = oracle::bfs_distance(&p, OracleLimits::default()).ok()? as usize;
    let moves = enumerate_moves(values.len());
    fn search(v: &[u32], depth: usize, moves: &[Move], path: &mut Vec<Move>) -> bool {
        if depth == 0 {
            return v.iter().enumerate().all(|(i, &x)| x as usize == i + 1);
        }
        for m in moves {
            let mut next = v.to_vec();
            m.apply_unchecked(&mut next);
            if adjacency_count(&next) < adjacency_count(v) {
                continue;
            }
            path.push(*m);
            if search(&next, depth - 1, moves, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = Vec::new();
    search(values, distance, &moves, &mut path).then_some(path)
}

fn adjacency_count(values: &[u32]) -> usize {
    adjacencies(&Permutation::from_vec_unchecked(values.to_vec()))
}

pub(super) fn refined(input: &[u32]) -> Result<Vec<SortStep>, String> {
    let n = input.len();
    let mut values = input.to_vec();
    let mut steps = Vec::new();
    if Permutation::from_vec_unchecked(values.clone()).is_identity() {
        return Ok(steps);
    }
    if n <= 3 {
        let moves = tiny_sort(&values).ok_or("no adjacency-preserving optimal sort for n ≤ 3")?;
        let before = weight_values(&values, Mode::Cyclic).0 as i64;
        let mut after = values.clone();
        moves.iter().for_each(|m| m.apply_unchecked(&mut after));
        let claimed_gain = before - weight_values(&after, Mode::Cyclic).0 as i64;
        steps.push(SortStep {
            moves,
            category: Category::SpecialOpening,
            claimed_gain,
            window: 0..n,
            mode: Mode::Cyclic,
        });
        return Ok(steps);
    }

    let fixed = values
        .iter()
        .enumerate()
        .take_while(|&(i, &v)| v as usize == i + 1)
        .count();
    if fixed > 0 {
        let sub = refined(&relabel(&values[fixed..]))?;
        steps.extend(offset_steps(sub, fixed));
        return Ok(steps);
    }

    let pos = positions_of(&values);
    let a = values[0];
    if a == 2 {
        let rl = Reloc {
            start: pos[1],
            end: pos[1] + 1,
            gap: 0,
            rev: false,
        };
        steps.push(
            single(&mut values, rl, Category::SpecialOpening, Mode::Cyclic)
                .ok_or("a=2 opening is a no-op")?,
        );
        let sub = refined(&relabel(&values[1..]))?;
        steps.extend(offset_steps(sub, 1));
        return Ok(steps);
    }

    let opening = choose_opening(&values, 2 * n / 3).ok_or("no opening fits the move budget")?;
    match opening {
        Opening::Special(mut special) => {
            let (mut sub_values, recurse_from) = (values.clone(), special.window);
            for s in &special.steps {
                for m in &s.moves {
                    m.apply_unchecked(&mut sub_values);
                }
            }
            steps.append(&mut special.steps);
            let (lo, hi) = recurse_from;
            let sub = refined(&relabel(&sub_values[lo..hi]))?;
            steps.extend(offset_steps(sub, lo));
            return Ok(steps);
        }
        Opening::Generic(mut opening_steps) => {
            for s in &opening_steps {
                for m in &s.moves {
                    m.apply_unchecked(&mut values);
                }
            }
            steps.append(&mut opening_steps);
        }
    }

    let mode = Mode::Cyclic;
    for _ in 0..=n {
        if Permutation::from_vec_unchecked(values.clone()).is_identity() {
            return Ok(steps);
        }
        let segs = decompose_values(&values, mode).segments;
        let front = *segs
            .iter()
            .find(|s| s.start == 0 || s.start + s.len > n)
            .expect("some segment covers position 0");
        if values[0] != 1 || !is_increasing(&front) {
            return Err(format!(
                "front is not an increasing block from 1 at [{}]",
                fmt(&values)
            ));
        }
        let t = if front.start == 0 { 0 } else { n - front.start };
        steps.push(run_step(&mut values, t, front.len, mode)?);
    }
    Err("main loop did not terminate".into())
}

struct Special {
    steps: Vec<SortStep>,
    window: (usize, usize),
}

enum Opening {
    Generic(Vec<SortStep>),
    Special(Special),
}

/// Picks the opening. Afterwards `1` is first and lies in an increasing
/// cyclic block, so every later step gains at least one unit per move.
///
/// A permutation with `A` cyclic adjacencies weighs at most `2n − A` thirds,
/// so after `k` opening moves the total is `k + ⌊(W − 3)/3⌋`. One move always
/// fits the `⌊2n/3⌋` budget; two moves fit when they leave weight at most
/// `2n − 3`. Candidates, in order:
///
/// 1. one move: rotate when `1 2` or `n 1` are neighbours, or reverse the
///    prefix ending in `1` when `2 1` are;
/// 2. the segment from `1` to `a'` to the front (`a'` near the first value
///    `a`), then the segment from `2` to `b'` between `1` and the value `b`
///    now following it (`b'` near `b`);
/// 3. when `b = n`, the special two-move opening that leaves `{3, …, n−1}`
///    to sort on its own.
///
/// Every opening move must keep the adjacency count from dropping.
fn choose_opening(values: &[u32], budget_moves: usize) -> Option<Opening> {
    let n = values.len();
    let fits = |v: &[u32], k: usize| {
        k + (weight_values(v, Mode::Cyclic).0 as usize - 3) / 3 <= budget_moves
    };
    let keeps = |before: &[u32], after: &[u32]| adjacency_count(after) >= adjacency_count(before);
    let pos = positions_of(values);
    let p1 = pos[1];

    let mut one_move = Vec::new();
    if p1 + 1 < n && values[p1 + 1] == 2 || p1 > 0 && values[p1 - 1] as usize == n {
        one_move.push(Reloc {
            start: 0,
            end: p1,
            gap: n,
            rev: false,
        });
    }
    if p1 > 0 && values[p1 - 1] == 2 {
        one_move.push(Reloc {
            start: 0,
            end: p1 + 1,
            gap: 0,
            rev: true,
        });
    }
    for rl in one_move {
        let mut v1 = values.to_vec();
        let Some(s1) = single(&mut v1, rl, Category::Opening, Mode::Cyclic) else {
            continue;
        };
        if keeps(values, &v1) && fits(&v1, 1) {
            return Some(Opening::Generic(vec![s1]));
        }
    }

    let a = values[0];
    let near = |v: u32| {
        [v - 1, v + 1, v]
            .into_iter()
            .filter(move |&c| c >= 2 && c as usize <= n)
    };
    let mut special = None;
    for a_prime in near(a) {
        let mut v1 = values.to_vec();
        let pa = pos[a_prime as usize];
        let rl1 = Reloc {
            start: p1.min(pa),
            end: p1.max(pa) + 1,
            gap: 0,
            rev: p1 > pa,
        };
        let Some(s1) = single(&mut v1, rl1, Category::Opening, Mode::Cyclic) else {
            continue;
        };
        if !keeps(values, &v1) || v1[0] != 1 {
            continue;
        }
        let b = v1[1];
        if b as usize == n {
            if special.is_none() {
                special = special_opening(&v1, s1);
            }
            continue;
        }
        if b == 2 {
            if fits(&v1, 1) {
                return Some(Opening::Generic(vec![s1]));
            }
            continue;
        }
        for b_prime in near(b) {
            let mut v2 = v1.clone();
            let pos = positions_of(&v2);
            let (p2, pb) = (pos[2], pos[b_prime as usize]);
            let rl2 = Reloc {
                start: p2.min(pb),
                end: p2.max(pb) + 1,
                gap: 1,
                rev: p2 > pb,
            };
            if rl2.start < 1 || (rl2.start == 1 && !rl2.rev) {
                continue;
            }
            let Some(s2) = single(&mut v2, rl2, Category::Opening, Mode::Cyclic) else {
                continue;
            };
            if keeps(&v1, &v2) && v2[..2] == [1, 2] && fits(&v2, 2) {
                return Some(Opening::Generic(vec![s1.clone(), s2]));
            }
        }
    }
    special.map(Opening::Special)
}

/// `1 n …`: send the run from `n` up to just before `2` to the back,
/// reversed, and leave `{3, …, n−1}` to sort on its own.
fn special_opening(v1: &[u32], mut s1: SortStep) -> Option<Special> {
    let n = v1.len();
    let mut v2 = v1.to_vec();
    let pos2 = positions_of(&v2)[2];
    let rl2 = Reloc {
        start: 1,
        end: pos2,
        gap: n,
        rev: true,
    };
    let mut s2 = single(&mut v2, rl2, Category::SpecialOpening, Mode::Cyclic)?;
    if adjacency_count(&v2) < adjacency_count(v1) {
        return None;
    }
    s1.category = Category::SpecialOpening;
    s2.category = Category::SpecialOpening;
    Some(Special {
        steps: vec![s1, s2],
        window: (2, n - 1),
    })
}
