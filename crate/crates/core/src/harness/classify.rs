//! Certificates for instances: rewrite paths, separating semigroups and
//! certified finite canonical structures.
//!
//! An instance is only called positive with a validated rewrite path, and
//! only negative with a witness that separates the goal words.

use serde::Serialize;

use crate::structures::{
    build_canonical_finite, disjoint_union, slot, walk, CanonicalSource, Signature, Structure, StructureError,
    CONSTANT_A,
};
use crate::thue::{
    decide_equiv_bounded, find_separating_semigroup, BoundReport, RewritePath, SemigroupWitness, ThueInstance, Variant,
    Verdict,
};

use super::Config;

/// How a finite canonical structure was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CanonicalCertificate {
    /// Congruence closure over words up to `max_len` closed up.
    Quotient { max_len: usize, classes: usize },
    /// `S¹` for a separating semigroup of the given order.
    Semigroup { order: usize },
}

#[derive(Debug, Clone)]
pub struct Canonical {
    pub certificate: CanonicalCertificate,
    pub structure: Structure,
}

impl Canonical {
    /// `walk(a, l) ≠ walk(a, r)`.
    pub fn separates_goal(&self, inst: &ThueInstance) -> bool {
        let a = self
            .structure
            .constant(CONSTANT_A)
            .expect("canonical structures interpret a");
        walk(&self.structure, a, inst.goal_left()) != walk(&self.structure, a, inst.goal_right())
    }

    /// The canonical structure followed by `slots` slot gadgets.
    pub fn with_slots(&self, inst: &ThueInstance, slots: usize) -> Structure {
        let sig = Signature::from_instance(inst);
        let mut parts = vec![self.structure.clone()];
        parts.extend((1..=slots).map(|n| slot(n, &sig)));
        disjoint_union(&parts).expect("slot constants are distinct")
    }

    pub fn with_variant_slots(&self, inst: &ThueInstance, variant: Variant) -> Structure {
        self.with_slots(inst, inst.slot_count(variant))
    }
}

pub fn canonical_from_quotient(inst: &ThueInstance, max_len: usize) -> Option<Canonical> {
    match build_canonical_finite(inst, CanonicalSource::QuotientBounded(max_len)) {
        Ok(structure) => Some(Canonical {
            certificate: CanonicalCertificate::Quotient {
                max_len,
                classes: structure.vertex_count(),
            },
            structure,
        }),
        Err(StructureError::NotClosedAtBound(_) | StructureError::CeilingExceeded { .. }) => None,
        Err(e) => panic!("quotient construction failed on a parsed instance: {e}"),
    }
}

pub fn canonical_from_semigroup(inst: &ThueInstance, witness: &SemigroupWitness) -> Canonical {
    let structure =
        build_canonical_finite(inst, CanonicalSource::Semigroup(witness)).expect("search returns valid witnesses");
    Canonical {
        certificate: CanonicalCertificate::Semigroup { order: witness.order() },
        structure,
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NegativeCertificate {
    Semigroup {
        order: usize,
        table: Vec<Vec<usize>>,
        generators: Vec<(String, usize)>,
    },
    Quotient {
        max_len: usize,
        classes: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum InstanceStatus {
    Positive { path: RewritePath },
    Negative { certificate: NegativeCertificate },
    Unresolved { search: BoundReport },
}

impl InstanceStatus {
    pub fn name(&self) -> &'static str {
        match self {
            InstanceStatus::Positive { .. } => "positive",
            InstanceStatus::Negative { .. } => "negative",
            InstanceStatus::Unresolved { .. } => "unresolved",
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, InstanceStatus::Positive { .. })
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, InstanceStatus::Negative { .. })
    }
}

pub fn witness_certificate(w: &SemigroupWitness) -> NegativeCertificate {
    NegativeCertificate::Semigroup {
        order: w.order(),
        table: w.table().to_vec(),
        generators: w.generator_map().iter().map(|(s, &g)| (s.to_string(), g)).collect(),
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub status: InstanceStatus,
    /// The canonical structure, from the quotient when it closes up and
    /// from the separating semigroup otherwise.
    pub canonical: Option<Canonical>,
    pub witness: Option<SemigroupWitness>,
}

pub fn classify(inst: &ThueInstance, cfg: &Config) -> Classification {
    let verdict = decide_equiv_bounded(
        inst.goal_left(),
        inst.goal_right(),
        inst.rules(),
        cfg.search_bounds(inst),
    );
    let witness = match verdict {
        Verdict::Equivalent(_) => None,
        Verdict::Unknown(_) => find_separating_semigroup(inst, cfg.max_semigroup_order),
    };
    let quotient = match cfg.quotient_max_len {
        0 => None,
        len => canonical_from_quotient(inst, len),
    };
    let status = match verdict {
        Verdict::Equivalent(path) => InstanceStatus::Positive { path },
        Verdict::Unknown(search) => match (&witness, &quotient) {
            (Some(w), _) => InstanceStatus::Negative {
                certificate: witness_certificate(w),
            },
            (None, Some(q)) if q.separates_goal(inst) => InstanceStatus::Negative {
                certificate: match q.certificate {
                    CanonicalCertificate::Quotient { max_len, classes } => {
                        NegativeCertificate::Quotient { max_len, classes }
                    }
                    CanonicalCertificate::Semigroup { .. } => unreachable!("built from the quotient"),
                },
            },
            _ => InstanceStatus::Unresolved { search },
        },
    };
    let canonical = quotient.or_else(|| witness.as_ref().map(|w| canonical_from_semigroup(inst, w)));
    Classification {
        status,
        canonical,
        witness,
    }
}
