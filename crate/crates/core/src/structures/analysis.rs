//! Walks, the candidate conditions and perfection.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::thue::{Direction, Symbol, ThueInstance, Word};

use super::{t_symbol, Signature, Structure, StructureError, VertexId, CONSTANT_A};

/// Endpoints of all paths from `start` spelling `w`.
pub fn walk(d: &Structure, start: VertexId, w: &Word) -> BTreeSet<VertexId> {
    let mut current: BTreeSet<VertexId> = [start].into();
    for s in w {
        current = current.iter().flat_map(|&v| d.successors(s, v)).collect();
        if current.is_empty() {
            break;
        }
    }
    current
}

/// Vertices reachable from `start` along letters of `sig`, including `start`.
pub fn reachable_from(d: &Structure, sig: &Signature, start: VertexId) -> BTreeSet<VertexId> {
    let mut seen: BTreeSet<VertexId> = [start].into();
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for r in sig.letters() {
            for t in d.successors(r, v) {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateViolation {
    /// `A(a)` missing.
    MissingA { vertex: VertexId },
    /// `T(a,a)` missing.
    MissingTLoop { vertex: VertexId },
    /// An `A`-vertex without an outgoing edge for this letter.
    MissingSuccessorAtA { vertex: VertexId, symbol: Symbol },
    /// A vertex with an incoming letter edge but no outgoing edge for this letter.
    MissingSuccessor { vertex: VertexId, symbol: Symbol },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub violations: Vec<CandidateViolation>,
}

impl CandidateReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `A(a) ∧ T(a,a)`, that every `A`-vertex has every successor, and
/// that every vertex entered by a letter edge has every successor.
pub fn is_candidate(d: &Structure, sig: &Signature) -> Result<CandidateReport, StructureError> {
    let a = d.require_constant(CONSTANT_A)?;
    let mut violations = Vec::new();
    if !d.has_a(a) {
        violations.push(CandidateViolation::MissingA { vertex: a });
    }
    if !d.has_edge(&t_symbol(), a, a) {
        violations.push(CandidateViolation::MissingTLoop { vertex: a });
    }
    let mut entered = vec![false; d.vertex_count()];
    for r in sig.letters() {
        for (_, t) in d.edges(r) {
            entered[t] = true;
        }
    }
    for v in d.vertices() {
        for s in sig.letters() {
            if d.has_successor(s, v) {
                continue;
            }
            if d.has_a(v) {
                violations.push(CandidateViolation::MissingSuccessorAtA {
                    vertex: v,
                    symbol: s.clone(),
                });
            }
            if entered[v] {
                violations.push(CandidateViolation::MissingSuccessor {
                    vertex: v,
                    symbol: s.clone(),
                });
            }
        }
    }
    Ok(CandidateReport { violations })
}

/// `walk(vertex, l_k)` and `walk(vertex, r_k)` differ at `endpoint`.
/// `LeftToRight` means the endpoint is reached by `l_k` but not by `r_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImperfectionWitness {
    pub vertex: VertexId,
    pub rule: usize,
    pub direction: Direction,
    pub endpoint: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Perfection {
    Perfect,
    Imperfect(ImperfectionWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerfectionReport {
    pub verdict: Perfection,
    pub reachable_count: usize,
}

impl PerfectionReport {
    pub fn is_perfect(&self) -> bool {
        self.verdict == Perfection::Perfect
    }
}

/// Perfect iff for every `s` reachable from `a` (including `a`) and every
/// rule `k`, `walk(s, l_k) = walk(s, r_k)`. The first witness in vertex, then
/// rule order is reported.
pub fn is_perfect(d: &Structure, inst: &ThueInstance) -> Result<PerfectionReport, StructureError> {
    let a = d.require_constant(CONSTANT_A)?;
    let reachable = reachable_from(d, &Signature::from_instance(inst), a);
    for &s in &reachable {
        for (k, rule) in inst.rules().iter().enumerate() {
            let left = walk(d, s, &rule.left);
            let right = walk(d, s, &rule.right);
            let found = left
                .difference(&right)
                .next()
                .map(|&e| (Direction::LeftToRight, e))
                .or_else(|| right.difference(&left).next().map(|&e| (Direction::RightToLeft, e)));
            if let Some((direction, endpoint)) = found {
                return Ok(PerfectionReport {
                    verdict: Perfection::Imperfect(ImperfectionWitness {
                        vertex: s,
                        rule: k + 1,
                        direction,
                        endpoint,
                    }),
                    reachable_count: reachable.len(),
                });
            }
        }
    }
    Ok(PerfectionReport {
        verdict: Perfection::Perfect,
        reachable_count: reachable.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{build_canonical_finite, slot, well_of_positivity, CanonicalSource};
    use crate::thue::test_util::*;

    fn sig(letters: &str) -> Signature {
        Signature::new(letters.chars().map(|c| sym(&c.to_string())).collect()).unwrap()
    }

    #[test]
    fn well_of_positivity_is_a_perfect_candidate() {
        let d = well_of_positivity(&sig("ab"), &[]);
        assert!(is_candidate(&d, &sig("ab")).unwrap().is_ok());
        let i = inst("ab", &[("ab", "b"), ("aaa", "b")], "a", "b");
        let r = is_perfect(&d, &i).unwrap();
        assert!(r.is_perfect());
        assert_eq!(r.reachable_count, 1);
    }

    #[test]
    fn slot_without_a_is_rejected() {
        let s = slot(1, &sig("a"));
        assert_eq!(
            is_candidate(&s, &sig("a")),
            Err(StructureError::MissingConstant("a".into()))
        );
        let i = inst("a", &[], "a", "aa");
        assert!(is_perfect(&s, &i).is_err());
    }

    #[test]
    fn dangling_successor() {
        let a = sym("a");
        let mut d = Structure::with_vertices(2);
        d.set_constant("a", 0);
        d.add_a(0);
        d.add_edge(&t_symbol(), 0, 0);
        d.add_edge(&a, 0, 1);
        let r = is_candidate(&d, &sig("a")).unwrap();
        assert_eq!(
            r.violations,
            vec![CandidateViolation::MissingSuccessor { vertex: 1, symbol: a }]
        );
    }

    #[test]
    fn walks() {
        let s = slot(1, &sig("r"));
        let b = s.constant("b_1").unwrap();
        let c = s.constant("c_1").unwrap();
        assert_eq!(walk(&s, b, &word_over("rr")), [b, c].into());
        assert_eq!(walk(&s, c, &Word::empty()), [c].into());

        let i = inst("a", &[("aa", "a")], "a", "aa");
        let d = build_canonical_finite(&i, CanonicalSource::QuotientBounded(3)).unwrap();
        assert_eq!(walk(&d, 0, &word("aaa")), [1].into());
    }

    fn word_over(text: &str) -> Word {
        Word::from_symbols(text.chars().map(|c| sym(&c.to_string())).collect())
    }

    #[test]
    fn imperfection_at_a() {
        // a -a-> t exists, but no b-path from a.
        let (a, b) = (sym("a"), sym("b"));
        let mut d = Structure::with_vertices(2);
        d.set_constant("a", 0);
        d.add_a(0);
        d.add_edge(&t_symbol(), 0, 0);
        d.add_edge(&a, 0, 1);
        let i = inst("ab", &[("a", "b")], "a", "b");
        let r = is_perfect(&d, &i).unwrap();
        assert_eq!(
            r.verdict,
            Perfection::Imperfect(ImperfectionWitness {
                vertex: 0,
                rule: 1,
                direction: Direction::LeftToRight,
                endpoint: 1
            })
        );
        d.add_edge(&b, 0, 1);
        assert!(is_perfect(&d, &i).unwrap().is_perfect());
    }

    #[test]
    fn canonical_quotient_passes_both_checks() {
        let i = inst("a", &[("aa", "a")], "a", "aa");
        let d = build_canonical_finite(&i, CanonicalSource::QuotientBounded(4)).unwrap();
        assert!(is_candidate(&d, &Signature::from_instance(&i)).unwrap().is_ok());
        let r = is_perfect(&d, &i).unwrap();
        assert!(r.is_perfect());
        assert_eq!(r.reachable_count, 2);
    }
}
