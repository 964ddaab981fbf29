//! Replayable move lists and their text format.
//!
//! ```text
//! n 5
//! init 3 4 5 1 2
//! # step closing gain=0
//! move 0 3 5 swap
//! ```
//!
//! `#` lines are comments. A comment of the form `# step <category>
//! gain=<thirds>` annotates the move that follows it; other comments are
//! kept as free-form header lines.

use std::fmt;

use thiserror::Error;

use super::{Move, PermError, Permutation};

/// Annotation attached by a sorter to the first move of a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveNote {
    pub category: String,
    pub gain_thirds: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: Permutation,
    pub moves: Vec<Move>,
    /// `(move index, note)`, sorted by index.
    pub notes: Vec<(usize, MoveNote)>,
    pub comments: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {index}: {source}")]
pub struct ReplayError {
    pub index: usize,
    #[source]
    pub source: PermError,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

impl Trace {
    pub fn new(initial: Permutation) -> Self {
        Self {
            initial,
            moves: Vec::new(),
            notes: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, mv: Move) {
        self.moves.push(mv);
    }

    pub fn annotate_next(&mut self, category: impl Into<String>, gain_thirds: i64) {
        let note = MoveNote {
            category: category.into(),
            gain_thirds,
        };
        self.notes.push((self.moves.len(), note));
    }

    pub fn note_for(&self, index: usize) -> Option<&MoveNote> {
        self.notes
            .iter()
            .find(|(idx, _)| *idx == index)
            .map(|(_, note)| note)
    }

    /// Final permutation after all moves.
    pub fn replay(&self) -> Result<Permutation, ReplayError> {
        let mut values = self.initial.values().to_vec();
        self.replay_inspect(|_, _, _, after| values.copy_from_slice(after))?;
        if self.moves.is_empty() {
            return Ok(self.initial.clone());
        }
        Ok(Permutation::from_vec_unchecked(values))
    }

    /// Replays the trace, calling `f(index, move, before, after)` per move.
    pub fn replay_inspect(
        &self,
        mut f: impl FnMut(usize, &Move, &[u32], &[u32]),
    ) -> Result<(), ReplayError> {
        let n = self.initial.len();
        let mut before = self.initial.values().to_vec();
        let mut after = before.clone();
        for (index, mv) in self.moves.iter().enumerate() {
            mv.validate(n)
                .map_err(|source| ReplayError { index, source })?;
            mv.apply_unchecked(&mut after);
            f(index, mv, &before, &after);
            before.copy_from_slice(&after);
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, TraceError> {
        let err = |line: usize, message: String| TraceError { line, message };
        let mut n: Option<usize> = None;
        let mut trace: Option<Trace> = None;
        let mut pending: Option<MoveNote> = None;
        let mut comments = Vec::new();
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let body = raw.trim();
            if body.is_empty() {
                continue;
            }
            if let Some(comment) = body.strip_prefix('#') {
                let comment = comment.trim();
                match parse_step_note(comment) {
                    Some(note) => pending = Some(note),
                    None => comments.push(comment.to_owned()),
                }
                continue;
            }
            let mut tokens = body.split_whitespace();
            let keyword = tokens.next().unwrap_or_default();
            match (keyword, n, trace.as_mut()) {
                ("n", None, _) => {
                    let value = tokens
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .filter(|&v| v >= 1)
                        .ok_or_else(|| err(line, "expected `n <positive integer>`".into()))?;
                    if tokens.next().is_some() {
                        return Err(err(line, "trailing tokens after n".into()));
                    }
                    n = Some(value);
                }
                ("init", Some(n), None) => {
                    let rest: Vec<&str> = tokens.collect();
                    let p = Permutation::parse(&rest.join(" "))
                        .map_err(|e| err(line, format!("bad initial permutation: {e}")))?;
                    if p.len() != n {
                        return Err(err(
                            line,
                            format!("init has {} values, header says n={n}", p.len()),
                        ));
                    }
                    trace = Some(Trace::new(p));
                }
                ("move", Some(n), Some(t)) => {
                    let mv = parse_move(tokens).map_err(|m| err(line, m))?;
                    mv.validate(n).map_err(|e| err(line, e.to_string()))?;
                    if let Some(note) = pending.take() {
                        t.notes.push((t.moves.len(), note));
                    }
                    t.moves.push(mv);
                }
                ("n", Some(_), _) => return Err(err(line, "duplicate n header".into())),
                ("init", None, _) => return Err(err(line, "init before n header".into())),
                ("init", Some(_), Some(_)) => return Err(err(line, "duplicate init line".into())),
                ("move", _, _) => return Err(err(line, "move before init line".into())),
                (other, _, _) => return Err(err(line, format!("unknown directive {other:?}"))),
            }
        }
        let mut trace =
            trace.ok_or_else(|| err(last_line.max(1), "missing n/init header".into()))?;
        trace.comments = comments;
        Ok(trace)
    }
}

fn parse_move<'a>(mut tokens: impl Iterator<Item = &'a str>) -> Result<Move, String> {
    let mut cut = [0usize; 3];
    for slot in &mut cut {
        *slot = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| "expected `move <i> <j> <k> <variant>`".to_owned())?;
    }
    let variant = tokens
        .next()
        .ok_or_else(|| "missing move variant".to_owned())?
        .parse()?;
    if tokens.next().is_some() {
        return Err("trailing tokens after move".into());
    }
    Ok(Move::new(cut[0], cut[1], cut[2], variant))
}

fn parse_step_note(comment: &str) -> Option<MoveNote> {
    let mut tokens = comment.split_whitespace();
    if tokens.next()? != "step" {
        return None;
    }
    let category = tokens.next()?.to_owned();
    let gain_thirds = tokens.next()?.strip_prefix("gain=")?.parse().ok()?;
    tokens.next().is_none().then_some(MoveNote {
        category,
        gain_thirds,
    })
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.initial.len())?;
        writeln!(f, "init {}", self.initial)?;
        for comment in &self.comments {
            writeln!(f, "# {comment}")?;
        }
        let mut notes = self.notes.iter().peekable();
        for (idx, mv) in self.moves.iter().enumerate() {
            while let Some((_, note)) = notes.next_if(|(at, _)| *at == idx) {
                writeln!(f, "# step {} gain={}", note.category, note.gain_thirds)?;
            }
            writeln!(f, "move {} {} {} {}", mv.i, mv.j, mv.k, mv.variant)?;
        }
        Ok(())
    }
}

/// Folds the moves of `t` over its initial permutation.
pub fn replay(t: &Trace) -> Result<Permutation, ReplayError> {
    t.replay()
}
