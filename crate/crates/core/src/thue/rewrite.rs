//! One-step rewriting and a bounded bidirectional breadth-first search for
//! rewrite paths between two words.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{RewritePair, Symbol, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    /// An occurrence of `l_k` is replaced by `r_k`.
    LeftToRight,
    /// An occurrence of `r_k` is replaced by `l_k`.
    RightToLeft,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }
}

/// Justification of a single rewriting step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RewriteStep {
    /// Rule index, counted from 1.
    pub rule: usize,
    /// Offset of the replaced factor, counted from 0.
    pub position: usize,
    pub direction: Direction,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.direction {
            Direction::LeftToRight => "L→R",
            Direction::RightToLeft => "R→L",
        };
        write!(f, "rule {} at position {} {}", self.rule, self.position, arrow)
    }
}

/// All words reachable from `w` in one rewriting step, in order of
/// (rule index, position, direction). The same word may appear more than once
/// with different justifications.
pub fn rewrite_neighbors(w: &Word, rules: &[RewritePair]) -> Vec<(Word, RewriteStep)> {
    let symbols = w.symbols();
    let mut out = Vec::new();
    for (k, rule) in rules.iter().enumerate() {
        for position in 0..=symbols.len() {
            for direction in [Direction::LeftToRight, Direction::RightToLeft] {
                let (from, to) = rule.side(direction);
                let end = position + from.len();
                if end <= symbols.len() && &symbols[position..end] == from.symbols() {
                    let mut next = Vec::with_capacity(symbols.len() - from.len() + to.len());
                    next.extend_from_slice(&symbols[..position]);
                    next.extend_from_slice(to.symbols());
                    next.extend_from_slice(&symbols[end..]);
                    out.push((
                        Word::from_symbols(next),
                        RewriteStep {
                            rule: k + 1,
                            position,
                            direction,
                        },
                    ));
                }
            }
        }
    }
    out
}

/// A sequence of words, each obtained from its predecessor by one step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewritePath {
    pub steps: Vec<Word>,
    pub justifications: Vec<RewriteStep>,
}

impl RewritePath {
    pub fn start(&self) -> &Word {
        &self.steps[0]
    }

    pub fn end(&self) -> &Word {
        self.steps.last().expect("paths are never empty")
    }

    pub fn len(&self) -> usize {
        self.justifications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.justifications.is_empty()
    }

    /// Re-checks every step against [`rewrite_neighbors`].
    pub fn validate(&self, rules: &[RewritePair]) -> bool {
        if self.steps.is_empty() || self.steps.len() != self.justifications.len() + 1 {
            return false;
        }
        self.steps.windows(2).zip(&self.justifications).all(|(pair, step)| {
            rewrite_neighbors(&pair[0], rules)
                .iter()
                .any(|(w, s)| w == &pair[1] && s == step)
        })
    }
}

impl fmt::Display for RewritePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.steps[0])?;
        for (w, step) in self.steps[1..].iter().zip(&self.justifications) {
            write!(f, " -[{step}]-> {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_word_len: usize,
    pub max_expansions: usize,
}

impl SearchBounds {
    pub const DEFAULT_MAX_EXPANSIONS: usize = 1_000_000;
    pub const DEFAULT_LENGTH_SLACK: usize = 8;

    /// `max_word_len = |u| + |v| + 8`, `max_expansions = 10⁶`.
    pub fn default_for(u: &Word, v: &Word) -> Self {
        SearchBounds {
            max_word_len: u.len() + v.len() + Self::DEFAULT_LENGTH_SLACK,
            max_expansions: Self::DEFAULT_MAX_EXPANSIONS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    /// One side's search space (restricted to the length bound) was fully
    /// explored without meeting the other.
    FrontierExhausted,
    ExpansionLimit,
    /// An input word is longer than `max_word_len`.
    InputExceedsLength,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub reason: UnknownReason,
    pub expansions: usize,
    pub visited: usize,
    /// Neighbours discarded because they exceeded `max_word_len`.
    pub pruned_by_length: usize,
    pub bounds: SearchBounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Equivalent(RewritePath),
    Unknown(BoundReport),
}

/// Words encoded as letter indices, used only inside the search.
type Code = Vec<u16>;

struct Codec {
    letters: Vec<Symbol>,
    index: HashMap<Symbol, u16>,
}

impl Codec {
    fn new<'a>(words: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut letters: Vec<Symbol> = words.into_iter().flat_map(|w| w.iter().cloned()).collect();
        letters.sort();
        letters.dedup();
        let index = letters.iter().enumerate().map(|(i, s)| (s.clone(), i as u16)).collect();
        Codec { letters, index }
    }

    fn encode(&self, w: &Word) -> Code {
        w.iter().map(|s| self.index[s]).collect()
    }

    fn decode(&self, c: &[u16]) -> Word {
        Word::from_symbols(c.iter().map(|&i| self.letters[i as usize].clone()).collect())
    }
}

fn encoded_neighbors(w: &[u16], rules: &[(Code, Code)], out: &mut Vec<(Code, RewriteStep)>) {
    out.clear();
    for (k, (l, r)) in rules.iter().enumerate() {
        for position in 0..=w.len() {
            for direction in [Direction::LeftToRight, Direction::RightToLeft] {
                let (from, to) = match direction {
                    Direction::LeftToRight => (l, r),
                    Direction::RightToLeft => (r, l),
                };
                let end = position + from.len();
                if end <= w.len() && &w[position..end] == from.as_slice() {
                    let mut next = Vec::with_capacity(w.len() - from.len() + to.len());
                    next.extend_from_slice(&w[..position]);
                    next.extend_from_slice(to);
                    next.extend_from_slice(&w[end..]);
                    out.push((
                        next,
                        RewriteStep {
                            rule: k + 1,
                            position,
                            direction,
                        },
                    ));
                }
            }
        }
    }
}

/// Parent pointers of one search side: word → (predecessor, step from predecessor).
type Tree = HashMap<Code, Option<(Code, RewriteStep)>>;

/// Breadth-first search from both `u` and `v` over words of length at most
/// `max_word_len`, expanding the smaller frontier one level at a time.
///
/// `Equivalent` always carries a path that passes [`RewritePath::validate`].
/// `Unknown` says nothing about the instance beyond which bound stopped the
/// search.
pub fn decide_equiv_bounded(u: &Word, v: &Word, rules: &[RewritePair], bounds: SearchBounds) -> Verdict {
    if u == v {
        return Verdict::Equivalent(RewritePath {
            steps: vec![u.clone()],
            justifications: vec![],
        });
    }
    let unknown = |reason, expansions, visited, pruned| {
        Verdict::Unknown(BoundReport {
            reason,
            expansions,
            visited,
            pruned_by_length: pruned,
            bounds,
        })
    };
    if u.len() > bounds.max_word_len || v.len() > bounds.max_word_len {
        return unknown(UnknownReason::InputExceedsLength, 0, 0, 0);
    }

    let codec = Codec::new([u, v].into_iter().chain(rules.iter().flat_map(|r| [&r.left, &r.right])));
    let coded_rules: Vec<(Code, Code)> = rules
        .iter()
        .map(|r| (codec.encode(&r.left), codec.encode(&r.right)))
        .collect();

    let (cu, cv) = (codec.encode(u), codec.encode(v));
    let mut trees: [Tree; 2] = [HashMap::new(), HashMap::new()];
    trees[0].insert(cu.clone(), None);
    trees[1].insert(cv.clone(), None);
    let mut frontiers: [Vec<Code>; 2] = [vec![cu], vec![cv]];
    let mut expansions = 0usize;
    let mut pruned = 0usize;
    let mut scratch = Vec::new();

    loop {
        let visited = trees[0].len() + trees[1].len();
        if frontiers[0].is_empty() || frontiers[1].is_empty() {
            return unknown(UnknownReason::FrontierExhausted, expansions, visited, pruned);
        }
        let side = usize::from(frontiers[1].len() < frontiers[0].len());
        let other = 1 - side;
        let current = std::mem::take(&mut frontiers[side]);
        let mut next = Vec::new();
        for w in &current {
            if expansions >= bounds.max_expansions {
                let visited = trees[0].len() + trees[1].len();
                return unknown(UnknownReason::ExpansionLimit, expansions, visited, pruned);
            }
            expansions += 1;
            encoded_neighbors(w, &coded_rules, &mut scratch);
            for (n, step) in scratch.drain(..) {
                if n.len() > bounds.max_word_len {
                    pruned += 1;
                    continue;
                }
                if trees[side].contains_key(&n) {
                    continue;
                }
                trees[side].insert(n.clone(), Some((w.clone(), step)));
                if trees[other].contains_key(&n) {
                    return Verdict::Equivalent(join_paths(&codec, &trees[0], &trees[1], &n));
                }
                next.push(n);
            }
        }
        frontiers[side] = next;
    }
}

/// Joins the `u`-side chain ending at `meet` with the `v`-side chain starting
/// there, inverting the steps of the latter.
fn join_paths(codec: &Codec, fwd: &Tree, bwd: &Tree, meet: &Code) -> RewritePath {
    let mut words = vec![meet.clone()];
    let mut steps = Vec::new();
    let mut cursor = meet;
    while let Some(Some((parent, step))) = fwd.get(cursor) {
        words.push(parent.clone());
        steps.push(*step);
        cursor = parent;
    }
    words.reverse();
    steps.reverse();
    let mut cursor = meet;
    while let Some(Some((parent, step))) = bwd.get(cursor) {
        words.push(parent.clone());
        steps.push(RewriteStep {
            direction: step.direction.flip(),
            ..*step
        });
        cursor = parent;
    }
    RewritePath {
        steps: words.iter().map(|c| codec.decode(c)).collect(),
        justifications: steps,
    }
}
