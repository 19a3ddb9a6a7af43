//! Exhaustive property runs over small structures.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ontology::{build_core_ontology_for, check_model, ModelCheckFlags};
use crate::queries::{build_big_gamma_neg, build_big_gamma_neq, violated_literal, Evaluator, UnionQuery};
use crate::structures::{
    enumerate_candidate_structures, is_candidate, is_perfect, write_structure, Signature, Structure, StructureSpace,
};
use crate::thue::ThueInstance;

use super::HarnessError;

/// Largest structure space (per vertex count) explored by default.
pub const SPACE_BUDGET: u64 = 1 << 22;

/// Violations kept verbatim in a report; the rest are only counted.
const KEPT_VIOLATIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationCheck {
    ImperfectImpliesGammaNeq,
    ImperfectImpliesGammaNeg,
    OntologyIffCandidate,
}

impl EnumerationCheck {
    pub const ALL: [EnumerationCheck; 3] = [
        EnumerationCheck::ImperfectImpliesGammaNeq,
        EnumerationCheck::ImperfectImpliesGammaNeg,
        EnumerationCheck::OntologyIffCandidate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnumerationCheck::ImperfectImpliesGammaNeq => "imperfect-implies-gamma-neq",
            EnumerationCheck::ImperfectImpliesGammaNeg => "imperfect-implies-gamma-neg",
            EnumerationCheck::OntologyIffCandidate => "ontology-iff-candidate",
        }
    }

    pub fn needs_rules(self) -> bool {
        self != EnumerationCheck::OntologyIffCandidate
    }
}

impl fmt::Display for EnumerationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnumerationCheck {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|c| c.name()).collect();
            HarnessError::Usage(format!("unknown check `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationViolation {
    pub instance: Option<String>,
    pub detail: String,
    pub structure: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationReport {
    pub check: EnumerationCheck,
    pub alphabet: Vec<String>,
    pub instances: Vec<String>,
    pub max_vertices: usize,
    /// Structures visited.
    pub structures: u64,
    /// Structures the property constrains: imperfect (structure, instance)
    /// pairs, or candidates for the ontology check.
    pub relevant: u64,
    pub violation_count: u64,
    pub violations: Vec<EnumerationViolation>,
}

impl EnumerationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn record(&mut self, instance: Option<&str>, detail: String, d: &Structure) {
        self.violation_count += 1;
        if self.violations.len() < KEPT_VIOLATIONS {
            self.violations.push(EnumerationViolation {
                instance: instance.map(str::to_string),
                detail,
                structure: write_structure(d),
            });
        }
    }
}

/// Largest vertex count up to `max_vertices` whose unfiltered structure
/// space stays within [`SPACE_BUDGET`].
pub fn enumeration_bound(sig: &Signature, max_vertices: usize) -> usize {
    (1..=max_vertices)
        .take_while(|&n| StructureSpace::new(sig, n).is_ok_and(|s| s.len() <= SPACE_BUDGET))
        .last()
        .unwrap_or(0)
}

pub fn run_enumeration(
    sig: &Signature,
    instances: &[(String, ThueInstance)],
    max_vertices: usize,
    check: EnumerationCheck,
) -> Result<EnumerationReport, HarnessError> {
    let mut report = EnumerationReport {
        check,
        alphabet: sig.letters().iter().map(ToString::to_string).collect(),
        instances: instances.iter().map(|(id, _)| id.clone()).collect(),
        max_vertices,
        structures: 0,
        relevant: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    match check {
        EnumerationCheck::OntologyIffCandidate => ontology_iff_candidate(sig, max_vertices, &mut report)?,
        EnumerationCheck::ImperfectImpliesGammaNeq | EnumerationCheck::ImperfectImpliesGammaNeg => {
            let gammas: Vec<UnionQuery> = instances
                .iter()
                .map(|(_, inst)| match check {
                    EnumerationCheck::ImperfectImpliesGammaNeq => build_big_gamma_neq(inst),
                    _ => build_big_gamma_neg(inst),
                })
                .collect();
            for d in enumerate_candidate_structures(sig, max_vertices)? {
                report.structures += 1;
                let eval = Evaluator::new(&d);
                for ((id, inst), gamma) in instances.iter().zip(&gammas) {
                    if is_perfect(&d, inst)?.is_perfect() {
                        continue;
                    }
                    report.relevant += 1;
                    match eval.evaluate_union(gamma)? {
                        Some((k, a)) if violated_literal(&d, &gamma.disjuncts[k], &a).is_none() => {}
                        Some((k, _)) => report.record(Some(id), format!("witness for disjunct {k} does not check"), &d),
                        None => report.record(Some(id), "imperfect but no disjunct holds".into(), &d),
                    }
                }
            }
        }
    }
    Ok(report)
}

fn ontology_iff_candidate(
    sig: &Signature,
    max_vertices: usize,
    report: &mut EnumerationReport,
) -> Result<(), HarnessError> {
    let o = build_core_ontology_for(sig);
    for n in 1..=max_vertices {
        let space = StructureSpace::new(sig, n)?;
        for index in 0..space.len() {
            let d = space.get(index);
            report.structures += 1;
            let model = check_model(&d, &o, ModelCheckFlags::OPEN)?.is_ok();
            let candidate = is_candidate(&d, sig)?.is_ok();
            if candidate {
                report.relevant += 1;
            }
            if model != candidate {
                report.record(None, format!("model: {model}, candidate: {candidate}"), &d);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thue::test_util::*;

    #[test]
    fn names_round_trip() {
        for c in EnumerationCheck::ALL {
            assert_eq!(c.name().parse::<EnumerationCheck>().unwrap(), c);
        }
        assert!(matches!(
            "nope".parse::<EnumerationCheck>(),
            Err(HarnessError::Usage(_))
        ));
    }

    #[test]
    fn bounds_respect_the_budget() {
        let a = Signature::new(vec![sym("a")]).unwrap();
        let ab = Signature::new(vec![sym("a"), sym("b")]).unwrap();
        assert_eq!(enumeration_bound(&a, 3), 3);
        assert_eq!(enumeration_bound(&ab, 3), 2);
        assert_eq!(enumeration_bound(&a, 0), 0);
    }

    #[test]
    fn small_runs_have_no_violations() {
        let sig = Signature::new(vec![sym("a")]).unwrap();
        let instances = vec![("t".to_string(), inst("a", &[("aa", "a")], "a", "aa"))];
        for c in EnumerationCheck::ALL {
            let r = run_enumeration(&sig, &instances, 2, c).unwrap();
            assert!(r.passed(), "{c}");
            assert!(r.relevant > 0, "{c}");
        }
    }
}
