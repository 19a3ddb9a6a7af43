//! Finite semigroups as negativity certificates.
//!
//! A [`SemigroupWitness`] is a multiplication table together with an
//! assignment of alphabet letters to elements such that every rule holds and
//! the goal words evaluate to different elements. Since `≃_Π` is the least
//! congruence containing the rules, such a witness proves `l ≄_Π r`.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use super::{Symbol, ThueInstance, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("multiplication table must be square and non-empty")]
    BadShape,
    #[error("table entry {0} is out of range")]
    EntryOutOfRange(usize),
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("generator `{0}` is mapped outside the semigroup")]
    GeneratorOutOfRange(Symbol),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupWitness {
    order: usize,
    table: Vec<Vec<usize>>,
    generator_map: BTreeMap<Symbol, usize>,
}

impl SemigroupWitness {
    /// Checks the table shape, entry ranges and associativity (exhaustively).
    pub fn new(table: Vec<Vec<usize>>, generator_map: BTreeMap<Symbol, usize>) -> Result<Self, WitnessError> {
        let order = table.len();
        if order == 0 || table.iter().any(|row| row.len() != order) {
            return Err(WitnessError::BadShape);
        }
        if let Some(&e) = table.iter().flatten().find(|&&e| e >= order) {
            return Err(WitnessError::EntryOutOfRange(e));
        }
        for x in 0..order {
            for y in 0..order {
                for z in 0..order {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(WitnessError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        if let Some((s, _)) = generator_map.iter().find(|(_, &e)| e >= order) {
            return Err(WitnessError::GeneratorOutOfRange(s.clone()));
        }
        Ok(SemigroupWitness {
            order,
            table,
            generator_map,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn generator_map(&self) -> &BTreeMap<Symbol, usize> {
        &self.generator_map
    }

    pub fn multiply(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn generator(&self, s: &Symbol) -> Option<usize> {
        self.generator_map.get(s).copied()
    }

    /// Image of `w` under the homomorphism extending the generator map, or
    /// `None` for the empty word (the identity of the monoid `S¹`).
    ///
    /// # Panics
    /// If `w` uses a letter the generator map does not cover.
    pub fn eval(&self, w: &Word) -> Option<usize> {
        let mut acc: Option<usize> = None;
        for s in w {
            let g = self
                .generator(s)
                .unwrap_or_else(|| panic!("symbol `{s}` has no generator image"));
            acc = Some(match acc {
                None => g,
                Some(x) => self.table[x][g],
            });
        }
        acc
    }

    /// All rules hold and the goal words differ.
    pub fn separates(&self, inst: &ThueInstance) -> bool {
        if inst.alphabet().iter().any(|s| self.generator(s).is_none()) {
            return false;
        }
        inst.rules().iter().all(|r| self.eval(&r.left) == self.eval(&r.right))
            && self.eval(inst.goal_left()) != self.eval(inst.goal_right())
    }
}

/// Free-function form of [`SemigroupWitness::eval`] for non-empty words.
pub fn eval_in_semigroup(w: &Word, witness: &SemigroupWitness) -> Option<usize> {
    witness.eval(w)
}

/// Calls `visit` with every associative multiplication table of the given
/// order, in lexicographic (row-major) order, until it returns `Break`.
///
/// Cells are filled left to right and a partial table is abandoned as soon as
/// some fully-defined triple violates associativity, so only associative
/// tables ever reach the callback.
pub fn for_each_associative_table<B>(
    order: usize,
    mut visit: impl FnMut(&[Vec<usize>]) -> ControlFlow<B>,
) -> Option<B> {
    if order == 0 {
        return None;
    }
    let mut partial = vec![vec![None; order]; order];
    let mut full = vec![vec![0usize; order]; order];
    match fill(0, order, &mut partial, &mut full, &mut visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

fn fill<B>(
    cell: usize,
    n: usize,
    partial: &mut Vec<Vec<Option<usize>>>,
    full: &mut Vec<Vec<usize>>,
    visit: &mut impl FnMut(&[Vec<usize>]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if cell == n * n {
        return visit(full);
    }
    let (i, j) = (cell / n, cell % n);
    for v in 0..n {
        partial[i][j] = Some(v);
        full[i][j] = v;
        if partially_associative(partial, n) {
            fill(cell + 1, n, partial, full, visit)?;
        }
    }
    partial[i][j] = None;
    ControlFlow::Continue(())
}

fn partially_associative(t: &[Vec<Option<usize>>], n: usize) -> bool {
    for x in 0..n {
        for y in 0..n {
            let Some(xy) = t[x][y] else { continue };
            for z in 0..n {
                let Some(yz) = t[y][z] else { continue };
                if let (Some(l), Some(r)) = (t[xy][z], t[x][yz]) {
                    if l != r {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Searches all semigroups of order `1..=max_order` for a separating witness.
///
/// Enumeration is exhaustive (no isomorphism pruning), so `None` means no
/// separating semigroup of order at most `max_order` exists. The first hit
/// is returned: smallest order, then lexicographically least table, then
/// lexicographically least generator assignment in alphabet order.
pub fn find_separating_semigroup(inst: &ThueInstance, max_order: usize) -> Option<SemigroupWitness> {
    let letters = inst.alphabet();
    for order in 1..=max_order {
        let found = for_each_associative_table(order, |table| {
            let mut assignment = vec![0usize; letters.len()];
            loop {
                if let Some(w) = check_assignment(inst, table, &assignment) {
                    return ControlFlow::Break(w);
                }
                if !advance(&mut assignment, order) {
                    return ControlFlow::Continue(());
                }
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Odometer increment with the first position most significant.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn check_assignment(inst: &ThueInstance, table: &[Vec<usize>], assignment: &[usize]) -> Option<SemigroupWitness> {
    let eval = |w: &Word| -> usize {
        let mut it = w
            .iter()
            .map(|s| assignment[inst.alphabet().binary_search(s).expect("instance word")]);
        let first = it.next().expect("rule and goal words are non-empty");
        it.fold(first, |acc, g| table[acc][g])
    };
    let rules_hold = inst.rules().iter().all(|r| eval(&r.left) == eval(&r.right));
    if !rules_hold || eval(inst.goal_left()) == eval(inst.goal_right()) {
        return None;
    }
    let generator_map = inst
        .alphabet()
        .iter()
        .cloned()
        .zip(assignment.iter().copied())
        .collect();
    Some(SemigroupWitness::new(table.to_vec(), generator_map).expect("enumerated tables are associative"))
}
