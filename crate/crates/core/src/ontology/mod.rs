//! DL-Lite_core ontologies: assertions over named constants and inclusions
//! between basic concepts `A`, `∃R` and `∃R⁻`.
//!
//! Axioms are kept sorted and deduplicated so that two ontologies with the
//! same content compare equal and serialize identically. Constants keep
//! their declaration order.

mod chase;
mod check;
mod format;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::structures::{slot_constants, t_symbol, Signature, CONSTANT_A};
use crate::thue::{Symbol, ThueInstance, Variant};

pub use chase::{chase, ChaseResult};
pub use check::{check_model, ModelCheckFlags, ModelReport, ModelViolation};
pub use format::{parse_ontology, write_ontology, OntologyParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("constant `{0}` is not interpreted by the structure")]
    MissingConstantInterpretation(String),
    #[error("constant `{0}` is used but not declared")]
    UndeclaredConstant(String),
    #[error("constant `{0}` declared twice")]
    DuplicateConstant(String),
    #[error("`A` is a concept name and cannot be used as a role")]
    ReservedRole,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasicConcept {
    /// The concept name `A`.
    Atomic,
    /// `∃R` (`inverse = false`) or `∃R⁻`.
    Exists { role: Symbol, inverse: bool },
}

impl BasicConcept {
    pub fn exists(role: &Symbol) -> Self {
        BasicConcept::Exists {
            role: role.clone(),
            inverse: false,
        }
    }

    pub fn exists_inverse(role: &Symbol) -> Self {
        BasicConcept::Exists {
            role: role.clone(),
            inverse: true,
        }
    }
}

impl fmt::Display for BasicConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicConcept::Atomic => write!(f, "A"),
            BasicConcept::Exists { role, inverse: false } => write!(f, "ex {role}"),
            BasicConcept::Exists { role, inverse: true } => write!(f, "ex {role}-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Axiom {
    /// `A(c)`
    ConceptAssertion { constant: String },
    /// `R(c,d)`
    RoleAssertion { role: Symbol, from: String, to: String },
    /// `B ⊑ B'`
    Inclusion { lhs: BasicConcept, rhs: BasicConcept },
    /// `B ⊑ ¬B'`
    DisjointInclusion { lhs: BasicConcept, rhs: BasicConcept },
}

impl Axiom {
    fn concept(c: &str) -> Self {
        Axiom::ConceptAssertion { constant: c.into() }
    }

    fn role(r: &Symbol, from: &str, to: &str) -> Self {
        Axiom::RoleAssertion {
            role: r.clone(),
            from: from.into(),
            to: to.into(),
        }
    }

    fn constants(&self) -> Vec<&str> {
        match self {
            Axiom::ConceptAssertion { constant } => vec![constant],
            Axiom::RoleAssertion { from, to, .. } => vec![from, to],
            _ => Vec::new(),
        }
    }

    fn roles(&self) -> Vec<&Symbol> {
        fn concept_role(c: &BasicConcept) -> Option<&Symbol> {
            match c {
                BasicConcept::Atomic => None,
                BasicConcept::Exists { role, .. } => Some(role),
            }
        }
        match self {
            Axiom::ConceptAssertion { .. } => Vec::new(),
            Axiom::RoleAssertion { role, .. } => vec![role],
            Axiom::Inclusion { lhs, rhs } | Axiom::DisjointInclusion { lhs, rhs } => {
                concept_role(lhs).into_iter().chain(concept_role(rhs)).collect()
            }
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::ConceptAssertion { constant } => write!(f, "assert A({constant})"),
            Axiom::RoleAssertion { role, from, to } => write!(f, "assert {role}({from},{to})"),
            Axiom::Inclusion { lhs, rhs } => write!(f, "incl {lhs} [= {rhs}"),
            Axiom::DisjointInclusion { lhs, rhs } => write!(f, "disj {lhs} [= not {rhs}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ontology {
    constants: Vec<String>,
    axioms: Vec<Axiom>,
}

impl Ontology {
    pub fn new(constants: Vec<String>, mut axioms: Vec<Axiom>) -> Result<Self, OntologyError> {
        let mut declared = BTreeSet::new();
        for c in &constants {
            if !declared.insert(c.as_str()) {
                return Err(OntologyError::DuplicateConstant(c.clone()));
            }
        }
        for ax in &axioms {
            if let Some(c) = ax.constants().into_iter().find(|c| !declared.contains(c)) {
                return Err(OntologyError::UndeclaredConstant(c.to_string()));
            }
            if ax.roles().iter().any(|r| r.as_str() == "A") {
                return Err(OntologyError::ReservedRole);
            }
        }
        axioms.sort();
        axioms.dedup();
        Ok(Ontology { constants, axioms })
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn inclusions(&self) -> impl Iterator<Item = (&BasicConcept, &BasicConcept)> {
        self.axioms.iter().filter_map(|a| match a {
            Axiom::Inclusion { lhs, rhs } => Some((lhs, rhs)),
            _ => None,
        })
    }
}

/// `𝒪`: `A(a)`, `T(a,a)`, `A ⊑ ∃R` and `∃S⁻ ⊑ ∃R` for all letters `R, S`.
pub fn build_core_ontology(inst: &ThueInstance) -> Ontology {
    build_core_ontology_for(&Signature::from_instance(inst))
}

/// [`build_core_ontology`] from the signature alone.
pub fn build_core_ontology_for(sig: &Signature) -> Ontology {
    Ontology::new(vec![CONSTANT_A.into()], core_axioms(sig)).expect("well formed")
}

fn core_axioms(sig: &Signature) -> Vec<Axiom> {
    let mut axioms = vec![
        Axiom::concept(CONSTANT_A),
        Axiom::role(&t_symbol(), CONSTANT_A, CONSTANT_A),
    ];
    for r in sig.letters() {
        axioms.push(Axiom::Inclusion {
            lhs: BasicConcept::Atomic,
            rhs: BasicConcept::exists(r),
        });
    }
    for s in sig.letters() {
        for r in sig.letters() {
            axioms.push(Axiom::Inclusion {
                lhs: BasicConcept::exists_inverse(s),
                rhs: BasicConcept::exists(r),
            });
        }
    }
    axioms
}

/// `Ω_n`: the facts of slot `n` as assertions.
pub fn build_omega_n(n: usize, sig: &Signature) -> Vec<Axiom> {
    let (b, c) = slot_constants(n);
    let t = t_symbol();
    let mut axioms = vec![Axiom::concept(&b), Axiom::role(&t, &b, &b), Axiom::role(&t, &c, &c)];
    for r in sig.letters() {
        axioms.push(Axiom::role(r, &b, &b));
        axioms.push(Axiom::role(r, &b, &c));
        axioms.push(Axiom::role(r, &c, &c));
    }
    axioms
}

/// `Ω^𝕟 = Ω_1 ∧ … ∧ Ω_𝕟`.
pub fn build_omega_upto(slots: usize, sig: &Signature) -> Vec<Axiom> {
    (1..=slots).flat_map(|n| build_omega_n(n, sig)).collect()
}

/// `𝒪 ∧ Ω^𝕟` with `𝕟` slots for the given variant.
pub fn build_o_variant(inst: &ThueInstance, variant: Variant) -> Ontology {
    let sig = Signature::from_instance(inst);
    let slots = inst.slot_count(variant);
    let mut constants = vec![CONSTANT_A.to_string()];
    constants.extend((1..=slots).map(|n| slot_constants(n).0));
    constants.extend((1..=slots).map(|n| slot_constants(n).1));
    let mut axioms = core_axioms(&sig);
    axioms.extend(build_omega_upto(slots, &sig));
    Ontology::new(constants, axioms).expect("well formed")
}

/// `𝒪^≠`, with `𝕟 = 𝕜 + 𝕞`.
pub fn build_o_neq(inst: &ThueInstance) -> Ontology {
    build_o_variant(inst, Variant::Neq)
}

/// `𝒪^¬`, with `𝕟 = 2(𝕜 + 𝕞)`.
pub fn build_o_neg(inst: &ThueInstance) -> Ontology {
    build_o_variant(inst, Variant::Neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thue::test_util::*;

    #[test]
    fn core_axiom_counts() {
        assert_eq!(build_core_ontology(&inst("ab", &[], "a", "b")).axioms().len(), 8);
        assert_eq!(build_core_ontology(&inst("a", &[], "a", "aa")).axioms().len(), 4);
    }

    #[test]
    fn omega_counts() {
        let sig = Signature::new(vec![sym("a"), sym("b")]).unwrap();
        assert_eq!(build_omega_n(1, &sig).len(), 9);
        assert!(build_omega_upto(0, &sig).is_empty());
        assert_eq!(build_omega_upto(3, &sig).len(), 27);
    }

    #[test]
    fn variant_constants() {
        let i = inst("ab", &[("ab", "ba")], "a", "b");
        let neq = build_o_neq(&i);
        assert_eq!(neq.constants().len(), 1 + 6);
        assert_eq!(neq.constants()[..4], ["a", "b_1", "b_2", "b_3"]);
        assert_eq!(neq.axioms().len(), 8 + 3 * 9);
        assert_eq!(build_o_neg(&i).constants().len(), 1 + 12);
        let small = inst("a", &[], "a", "aa");
        assert_eq!(build_o_neq(&small).constants(), ["a", "b_1", "c_1"]);
    }

    #[test]
    fn validation() {
        assert_eq!(
            Ontology::new(vec![], vec![Axiom::concept("a")]),
            Err(OntologyError::UndeclaredConstant("a".into()))
        );
        assert_eq!(
            Ontology::new(vec!["a".into(), "a".into()], vec![]),
            Err(OntologyError::DuplicateConstant("a".into()))
        );
        assert_eq!(
            Ontology::new(
                vec![],
                vec![Axiom::Inclusion {
                    lhs: BasicConcept::Atomic,
                    rhs: BasicConcept::exists(&sym("A")),
                }]
            ),
            Err(OntologyError::ReservedRole)
        );
    }
}
