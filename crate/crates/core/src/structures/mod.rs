//! Finite relational structures over the signature `𝔄 ∪ {A, T}`.
//!
//! Vertices are dense integer ids `0..n`; constants are a separate name map,
//! so two constants may denote the same vertex when the unique name
//! assumption is switched off.

mod analysis;
mod build;
mod enumerate;
mod format;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use serde::Serialize;
use thiserror::Error;

use crate::thue::{Symbol, ThueInstance};

pub use analysis::{
    is_candidate, is_perfect, reachable_from, walk, CandidateReport, CandidateViolation, ImperfectionWitness,
    Perfection, PerfectionReport,
};
pub use build::{
    build_canonical_finite, disjoint_union, slot, slot_constants, well_of_positivity, CanonicalSource, CONSTANT_A,
};
pub use enumerate::{
    count_candidate_structures, enumerate_candidate_structures, enumerate_candidate_structures_with_ceiling,
    CandidateStructures, StructureSpace, DEFAULT_ENUM_CEILING,
};
pub use format::{parse_structure, write_structure, StructureParseError};

pub type VertexId = usize;

static T_SYMBOL: LazyLock<Symbol> = LazyLock::new(|| Symbol::new("T").expect("valid symbol"));

/// The reserved binary relation `T`.
pub fn t_symbol() -> Symbol {
    T_SYMBOL.clone()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("constant `{0}` is not interpreted")]
    MissingConstant(String),
    #[error("constant `{0}` is interpreted in more than one part")]
    DuplicateConstant(String),
    #[error("the quotient of words up to length {0} is not closed")]
    NotClosedAtBound(usize),
    #[error("semigroup witness does not certify this instance: {0}")]
    InvalidWitness(String),
    #[error("{requested} vertices requested, ceiling is {ceiling}")]
    CeilingExceeded { requested: usize, ceiling: usize },
    #[error("`{0}` is reserved and cannot be a binary letter")]
    ReservedLetter(Symbol),
}

/// The binary letters `𝔄`; `A` and `T` are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    letters: Vec<Symbol>,
}

impl Signature {
    pub fn new(mut letters: Vec<Symbol>) -> Result<Self, StructureError> {
        letters.sort();
        letters.dedup();
        if let Some(s) = letters.iter().find(|s| s.is_reserved()) {
            return Err(StructureError::ReservedLetter(s.clone()));
        }
        Ok(Signature { letters })
    }

    pub fn from_instance(inst: &ThueInstance) -> Self {
        Signature {
            letters: inst.alphabet().to_vec(),
        }
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }
}

/// A single ground fact of a structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Fact {
    A(VertexId),
    Binary(Symbol, VertexId, VertexId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Structure {
    labels: Vec<String>,
    unary_a: BTreeSet<VertexId>,
    binary: BTreeMap<Symbol, BTreeSet<(VertexId, VertexId)>>,
    constants: BTreeMap<String, VertexId>,
}

impl Structure {
    pub fn new() -> Self {
        Self::default()
    }

    /// `n` vertices labelled by their ids.
    pub fn with_vertices(n: usize) -> Self {
        Structure {
            labels: (0..n).map(|i| i.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.labels.len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn set_label(&mut self, v: VertexId, label: impl Into<String>) {
        self.labels[v] = label.into();
    }

    fn check_vertex(&self, v: VertexId) {
        assert!(
            v < self.labels.len(),
            "vertex {v} out of range ({} vertices)",
            self.labels.len()
        );
    }

    pub fn add_a(&mut self, v: VertexId) -> bool {
        self.check_vertex(v);
        self.unary_a.insert(v)
    }

    pub fn add_edge(&mut self, relation: &Symbol, from: VertexId, to: VertexId) -> bool {
        self.check_vertex(from);
        self.check_vertex(to);
        self.binary.entry(relation.clone()).or_default().insert((from, to))
    }

    pub fn add_fact(&mut self, fact: &Fact) -> bool {
        match fact {
            Fact::A(v) => self.add_a(*v),
            Fact::Binary(r, s, t) => self.add_edge(r, *s, *t),
        }
    }

    pub fn remove_edge(&mut self, relation: &Symbol, from: VertexId, to: VertexId) -> bool {
        let Some(set) = self.binary.get_mut(relation) else {
            return false;
        };
        let removed = set.remove(&(from, to));
        if set.is_empty() {
            self.binary.remove(relation);
        }
        removed
    }

    pub fn has_a(&self, v: VertexId) -> bool {
        self.unary_a.contains(&v)
    }

    pub fn has_edge(&self, relation: &Symbol, from: VertexId, to: VertexId) -> bool {
        self.binary.get(relation).is_some_and(|set| set.contains(&(from, to)))
    }

    pub fn has_fact(&self, fact: &Fact) -> bool {
        match fact {
            Fact::A(v) => self.has_a(*v),
            Fact::Binary(r, s, t) => self.has_edge(r, *s, *t),
        }
    }

    pub fn a_vertices(&self) -> &BTreeSet<VertexId> {
        &self.unary_a
    }

    pub fn edges(&self, relation: &Symbol) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.binary.get(relation).into_iter().flatten().copied()
    }

    pub fn relations(&self) -> impl Iterator<Item = &Symbol> {
        self.binary.keys()
    }

    pub fn successors(&self, relation: &Symbol, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.binary
            .get(relation)
            .into_iter()
            .flat_map(move |set| set.range((v, 0)..=(v, VertexId::MAX)).map(|&(_, t)| t))
    }

    pub fn has_successor(&self, relation: &Symbol, v: VertexId) -> bool {
        self.successors(relation, v).next().is_some()
    }

    pub fn has_predecessor(&self, relation: &Symbol, v: VertexId) -> bool {
        self.edges(relation).any(|(_, t)| t == v)
    }

    /// All facts, unary first, then binary facts by relation name.
    pub fn facts(&self) -> impl Iterator<Item = Fact> + '_ {
        self.unary_a.iter().map(|&v| Fact::A(v)).chain(
            self.binary
                .iter()
                .flat_map(|(r, set)| set.iter().map(move |&(s, t)| Fact::Binary(r.clone(), s, t))),
        )
    }

    pub fn fact_count(&self) -> usize {
        self.unary_a.len() + self.binary.values().map(BTreeSet::len).sum::<usize>()
    }

    pub fn set_constant(&mut self, name: impl Into<String>, v: VertexId) {
        self.check_vertex(v);
        self.constants.insert(name.into(), v);
    }

    pub fn constant(&self, name: &str) -> Option<VertexId> {
        self.constants.get(name).copied()
    }

    pub fn constants(&self) -> &BTreeMap<String, VertexId> {
        &self.constants
    }

    pub(crate) fn require_constant(&self, name: &str) -> Result<VertexId, StructureError> {
        self.constant(name)
            .ok_or_else(|| StructureError::MissingConstant(name.to_string()))
    }
}
