//! Model checking under the unique name assumption (UNA) and the partial
//! closed world assumption (PCWA).
//!
//! PCWA: every fact of the structure whose arguments are all interpretations
//! of constants of the ontology must be the image of an assertion.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::structures::{Fact, Structure, VertexId};

use super::{Axiom, BasicConcept, Ontology, OntologyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelCheckFlags {
    pub una: bool,
    pub pcwa: bool,
}

impl ModelCheckFlags {
    pub const OPEN: ModelCheckFlags = ModelCheckFlags {
        una: false,
        pcwa: false,
    };
    pub const STRICT: ModelCheckFlags = ModelCheckFlags { una: true, pcwa: true };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelViolation {
    Assertion {
        axiom: String,
    },
    UniqueName {
        first: String,
        second: String,
        vertex: VertexId,
    },
    Inclusion {
        axiom: String,
        vertex: VertexId,
    },
    Disjointness {
        axiom: String,
        vertex: VertexId,
    },
    ClosedWorld {
        fact: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub violations: Vec<ModelViolation>,
}

impl ModelReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Membership of every vertex in the extension of a basic concept.
pub(crate) fn extension(d: &Structure, c: &BasicConcept) -> Vec<bool> {
    let mut member = vec![false; d.vertex_count()];
    match c {
        BasicConcept::Atomic => d.a_vertices().iter().for_each(|&v| member[v] = true),
        BasicConcept::Exists { role, inverse: false } => d.edges(role).for_each(|(s, _)| member[s] = true),
        BasicConcept::Exists { role, inverse: true } => d.edges(role).for_each(|(_, t)| member[t] = true),
    }
    member
}

fn interpret(axiom: &Axiom, consts: &BTreeMap<&str, VertexId>) -> Option<Fact> {
    match axiom {
        Axiom::ConceptAssertion { constant } => Some(Fact::A(consts[constant.as_str()])),
        Axiom::RoleAssertion { role, from, to } => {
            Some(Fact::Binary(role.clone(), consts[from.as_str()], consts[to.as_str()]))
        }
        _ => None,
    }
}

pub fn check_model(d: &Structure, o: &Ontology, flags: ModelCheckFlags) -> Result<ModelReport, OntologyError> {
    let mut consts: BTreeMap<&str, VertexId> = BTreeMap::new();
    for c in o.constants() {
        let v = d
            .constant(c)
            .ok_or_else(|| OntologyError::MissingConstantInterpretation(c.clone()))?;
        consts.insert(c, v);
    }
    let mut violations = Vec::new();

    let mut asserted = BTreeSet::new();
    for ax in o.axioms() {
        if let Some(fact) = interpret(ax, &consts) {
            if !d.has_fact(&fact) {
                violations.push(ModelViolation::Assertion { axiom: ax.to_string() });
            }
            if flags.pcwa {
                asserted.insert(fact);
            }
        }
    }

    if flags.una {
        let mut seen: BTreeMap<VertexId, &str> = BTreeMap::new();
        for c in o.constants() {
            let v = consts[c.as_str()];
            match seen.get(&v) {
                Some(first) => violations.push(ModelViolation::UniqueName {
                    first: first.to_string(),
                    second: c.clone(),
                    vertex: v,
                }),
                None => {
                    seen.insert(v, c);
                }
            }
        }
    }

    for ax in o.axioms() {
        let (lhs, rhs, disjoint) = match ax {
            Axiom::Inclusion { lhs, rhs } => (lhs, rhs, false),
            Axiom::DisjointInclusion { lhs, rhs } => (lhs, rhs, true),
            _ => continue,
        };
        let other = extension(d, rhs);
        let offending: Vec<VertexId> = extension(d, lhs)
            .iter()
            .enumerate()
            .filter(|&(v, &inside)| inside && other[v] == disjoint)
            .map(|(v, _)| v)
            .collect();
        if offending.is_empty() {
            continue;
        }
        let axiom = ax.to_string();
        for vertex in offending {
            violations.push(if disjoint {
                ModelViolation::Disjointness {
                    axiom: axiom.clone(),
                    vertex,
                }
            } else {
                ModelViolation::Inclusion {
                    axiom: axiom.clone(),
                    vertex,
                }
            });
        }
    }

    if flags.pcwa {
        // Name each constant vertex after its first constant.
        let mut name: BTreeMap<VertexId, &str> = BTreeMap::new();
        for c in o.constants() {
            name.entry(consts[c.as_str()]).or_insert(c);
        }
        for fact in d.facts() {
            let text = match &fact {
                Fact::A(v) => name.get(v).map(|n| format!("A({n})")),
                Fact::Binary(r, s, t) => match (name.get(s), name.get(t)) {
                    (Some(a), Some(b)) => Some(format!("{r}({a},{b})")),
                    _ => None,
                },
            };
            if let Some(fact_text) = text {
                if !asserted.contains(&fact) {
                    violations.push(ModelViolation::ClosedWorld { fact: fact_text });
                }
            }
        }
    }

    Ok(ModelReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{build_core_ontology, build_o_neq, Ontology};
    use crate::structures::{slot, t_symbol, well_of_positivity, Signature};
    use crate::thue::test_util::*;

    #[test]
    fn well_of_positivity_and_una() {
        let i = inst("ab", &[("ab", "ba")], "a", "b");
        let o = build_o_neq(&i);
        let names: Vec<&str> = o.constants().iter().map(String::as_str).collect();
        let well = well_of_positivity(&Signature::from_instance(&i), &names);
        assert!(check_model(&well, &build_core_ontology(&i), ModelCheckFlags::OPEN)
            .unwrap()
            .is_ok());
        assert!(check_model(&well, &o, ModelCheckFlags::OPEN).unwrap().is_ok());
        let strict = check_model(&well, &o, ModelCheckFlags { una: true, pcwa: false }).unwrap();
        assert!(strict
            .violations
            .iter()
            .all(|v| matches!(v, ModelViolation::UniqueName { .. })));
        assert_eq!(strict.violations.len(), o.constants().len() - 1);
    }

    #[test]
    fn closed_world_names_the_extra_fact() {
        let sig = Signature::new(vec![sym("a")]).unwrap();
        let mut s = slot(1, &sig);
        let o = Ontology::new(
            vec!["b_1".into(), "c_1".into()],
            crate::ontology::build_omega_n(1, &sig),
        )
        .unwrap();
        assert!(check_model(&s, &o, ModelCheckFlags::STRICT).unwrap().is_ok());
        s.add_edge(&t_symbol(), 0, 1);
        assert!(check_model(&s, &o, ModelCheckFlags { una: true, pcwa: false })
            .unwrap()
            .is_ok());
        let r = check_model(&s, &o, ModelCheckFlags::STRICT).unwrap();
        assert_eq!(
            r.violations,
            vec![ModelViolation::ClosedWorld {
                fact: "T(b_1,c_1)".into()
            }]
        );
    }

    #[test]
    fn missing_constant() {
        let i = inst("a", &[], "a", "aa");
        let d = Structure::with_vertices(1);
        assert_eq!(
            check_model(&d, &build_core_ontology(&i), ModelCheckFlags::OPEN),
            Err(OntologyError::MissingConstantInterpretation("a".into()))
        );
    }

    #[test]
    fn inclusion_and_disjointness() {
        let a = sym("a");
        let mut d = Structure::with_vertices(2);
        d.set_constant("a", 0);
        d.add_a(0);
        d.add_edge(&t_symbol(), 0, 0);
        d.add_edge(&a, 0, 1);
        let i = inst("a", &[], "a", "aa");
        let r = check_model(&d, &build_core_ontology(&i), ModelCheckFlags::OPEN).unwrap();
        assert_eq!(
            r.violations,
            vec![ModelViolation::Inclusion {
                axiom: "incl ex a- [= ex a".into(),
                vertex: 1
            }]
        );
        let o = Ontology::new(
            vec![],
            vec![Axiom::DisjointInclusion {
                lhs: BasicConcept::Atomic,
                rhs: BasicConcept::exists(&a),
            }],
        )
        .unwrap();
        let r = check_model(&d, &o, ModelCheckFlags::OPEN).unwrap();
        assert_eq!(r.violations.len(), 1);
    }
}
