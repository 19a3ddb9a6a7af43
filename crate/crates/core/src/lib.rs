//! Reduction workbench from the word problem for finitely presented
//! semigroups to query entailment over DL-Lite_core ontologies.
//!
//! The crate is organised bottom-up:
//!
//! * [`thue`]: instances, rewriting, bounded path search and finite
//!   separating semigroups;
//! * [`structures`]: finite relational structures, slots, the canonical
//!   structure built from a finite quotient or a semigroup, perfection checks
//!   and exhaustive enumeration;
//! * [`queries`]: conjunctive queries with inequalities and safe negation,
//!   the query families of the reduction, and the homomorphism evaluator;
//! * [`ontology`]: DL-Lite_core axioms, the compiled ontologies, the model
//!   checker (UNA / partial closed world) and a bounded chase;
//! * [`harness`]: the commands behind the `thue2dlite` binary, fixtures and
//!   verification reports.

pub mod harness;
pub mod ontology;
pub mod queries;
pub mod structures;
pub mod thue;
