//! Bounded restricted chase.
//!
//! Constants become distinct vertices carrying the asserted facts. Each
//! round collects every pair (vertex, right-hand side) for which an
//! inclusion is violated at the start of the round and repairs each pair
//! once: an atomic right-hand side adds `A(v)`, `∃R` adds a fresh `R`
//! successor and `∃R⁻` a fresh `R` predecessor. Disjointness axioms are
//! not enforced.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::structures::{Fact, Structure, VertexId};

use super::check::extension;
use super::{Axiom, BasicConcept, Ontology};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChaseResult {
    pub structure: Structure,
    /// All inclusions hold in `structure`.
    pub fixpoint: bool,
    /// Rounds that added at least one fact.
    pub rounds: usize,
}

fn violations(d: &Structure, o: &Ontology) -> BTreeSet<(VertexId, BasicConcept)> {
    let mut out = BTreeSet::new();
    for (lhs, rhs) in o.inclusions() {
        let covered = extension(d, rhs);
        for (v, inside) in extension(d, lhs).into_iter().enumerate() {
            if inside && !covered[v] {
                out.insert((v, rhs.clone()));
            }
        }
    }
    out
}

pub fn chase(o: &Ontology, depth: usize) -> ChaseResult {
    let mut d = Structure::new();
    for c in o.constants() {
        let v = d.add_vertex(c.clone());
        d.set_constant(c.clone(), v);
    }
    for ax in o.axioms() {
        let fact = match ax {
            Axiom::ConceptAssertion { constant } => Fact::A(d.constant(constant).expect("declared")),
            Axiom::RoleAssertion { role, from, to } => Fact::Binary(
                role.clone(),
                d.constant(from).expect("declared"),
                d.constant(to).expect("declared"),
            ),
            _ => continue,
        };
        d.add_fact(&fact);
    }

    let mut rounds = 0;
    let mut fresh = 0;
    for _ in 0..depth {
        let pending = violations(&d, o);
        if pending.is_empty() {
            break;
        }
        rounds += 1;
        for (v, rhs) in pending {
            match rhs {
                BasicConcept::Atomic => {
                    d.add_a(v);
                }
                BasicConcept::Exists { role, inverse } => {
                    fresh += 1;
                    let f = d.add_vertex(format!("_f{fresh}"));
                    if inverse {
                        d.add_edge(&role, f, v);
                    } else {
                        d.add_edge(&role, v, f);
                    }
                }
            }
        }
    }
    let fixpoint = violations(&d, o).is_empty();
    ChaseResult {
        structure: d,
        fixpoint,
        rounds,
    }
}
