//! Acceptance run: one line per criterion with its verdict and runtime.
//! Built with `harness = false`; exits non-zero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use thue2dlite_core::harness::fixtures::{fixtures_with, Expected, FIXTURES};
use thue2dlite_core::harness::{classify, cmd_countermodel, exit, slot_families, Config};
use thue2dlite_core::ontology::{
    build_core_ontology_for, build_o_neq, build_o_variant, build_omega_n, check_model, ModelCheckFlags, Ontology,
};
use thue2dlite_core::queries::{
    build_big_gamma_neg, build_big_gamma_neq, build_big_phi, build_big_psi, build_phi, build_psi, Evaluator,
    PhiOptions, UnionQuery,
};
use thue2dlite_core::structures::{
    enumerate_candidate_structures, is_candidate, is_perfect, parse_structure, slot, slot_constants, t_symbol,
    well_of_positivity, Signature, Structure, StructureSpace,
};
use thue2dlite_core::thue::{ThueInstance, Variant};

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn instances_over(letters: &[&str]) -> Vec<(&'static str, ThueInstance)> {
    FIXTURES
        .iter()
        .map(|f| (f.id, f.instance()))
        .filter(|(_, inst)| {
            let names: Vec<&str> = inst.alphabet().iter().map(|s| s.as_str()).collect();
            names == letters
        })
        .collect()
}

const CORPORA: [(&[&str], usize); 2] = [(&["a"], 3), (&["a", "b"], 2)];

fn ontology_iff_candidate() -> Verdict {
    let mut structures = 0u64;
    let mut candidates = 0u64;
    for (letters, max) in CORPORA {
        let sig = sig(letters);
        let o = build_core_ontology_for(&sig);
        for n in 1..=max {
            let space = StructureSpace::new(&sig, n).map_err(|e| e.to_string())?;
            for i in 0..space.len() {
                let d = space.get(i);
                structures += 1;
                let model = check_model(&d, &o, ModelCheckFlags::OPEN).unwrap().is_ok();
                let candidate = is_candidate(&d, &sig).unwrap().is_ok();
                let expected = candidate_oracle(&d, &sig);
                candidates += expected as u64;
                ensure(model == candidate && candidate == expected, || {
                    format!("{letters:?} n={n} index {i}: model {model}, candidate {candidate}, oracle {expected}")
                })?;
            }
        }
    }
    Ok(format!(
        "{structures} structures, {candidates} candidates, 0 exceptions"
    ))
}

fn witness_holds(d: &Structure, u: &UnionQuery, hit: Option<(usize, BTreeMap<String, usize>)>) -> bool {
    hit.is_some_and(|(k, a)| revalidate(d, &u.disjuncts[k], &a))
}

fn imperfection_detection() -> Verdict {
    let mut imperfect = 0u64;
    let mut structures = 0u64;
    for (letters, max) in CORPORA {
        let sig = sig(letters);
        let corpus: Vec<_> = instances_over(letters)
            .into_iter()
            .filter(|(_, inst)| inst.rule_count() > 0)
            .map(|(id, inst)| {
                let neq = build_big_gamma_neq(&inst);
                let neg = build_big_gamma_neg(&inst);
                (id, inst, neq, neg)
            })
            .collect();
        for d in enumerate_candidate_structures(&sig, max).map_err(|e| e.to_string())? {
            structures += 1;
            ensure(candidate_oracle(&d, &sig), || {
                "the enumeration yields a non-candidate".into()
            })?;
            let eval = Evaluator::new(&d);
            for (id, inst, neq, neg) in &corpus {
                let perfect = perfect_oracle(&d, inst);
                ensure(perfect == is_perfect(&d, inst).unwrap().is_perfect(), || {
                    format!("{id}: perfection disagrees with the oracle")
                })?;
                if perfect {
                    continue;
                }
                imperfect += 1;
                for (name, u) in [("neq", neq), ("neg", neg)] {
                    ensure(witness_holds(&d, u, eval.evaluate_union(u).unwrap()), || {
                        format!("{id}: imperfect structure without a valid {name} witness")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{structures} candidate structures, {imperfect} imperfect (structure, instance) pairs, 0 exceptions"
    ))
}

fn union_oracle(d: &Structure, u: &UnionQuery) -> bool {
    u.disjuncts.iter().any(|q| oracle(d, q))
}

fn canonical_rejection() -> Verdict {
    let cfg = Config::default();
    let mut checked = Vec::new();
    for f in FIXTURES {
        let inst = f.instance();
        let Some(canonical) = classify(&inst, &cfg).canonical else {
            continue;
        };
        let d = &canonical.structure;
        let eval = Evaluator::new(d);
        ensure(
            perfect_oracle(d, &inst) && is_perfect(d, &inst).unwrap().is_perfect(),
            || format!("{}: canonical structure is not perfect", f.id),
        )?;
        for u in [build_big_gamma_neq(&inst), build_big_gamma_neg(&inst)] {
            ensure(
                eval.evaluate_union(&u).unwrap().is_none() && !union_oracle(d, &u),
                || format!("{}: canonical structure satisfies a gamma disjunct", f.id),
            )?;
        }
        if f.expected == Expected::Positive {
            let q = thue2dlite_core::queries::build_gamma_diamond(&inst);
            let hit = eval.evaluate(&q).unwrap();
            ensure(hit.is_some_and(|a| revalidate(d, &q, &a)) && oracle(d, &q), || {
                format!("{}: gamma_diamond fails on the canonical structure", f.id)
            })?;
        }
        checked.push(f.id);
    }
    ensure(checked.len() >= 4, || {
        format!("only {} fixtures have a canonical structure", checked.len())
    })?;
    Ok(format!("checked {}", checked.join(", ")))
}

fn slot_observations() -> Verdict {
    let mut failures = Vec::new();
    let mut queries = 0;
    for f in FIXTURES {
        let inst = f.instance();
        let s = slot(1, &Signature::from_instance(&inst));
        let b = s.constant("b_1").unwrap();
        for family in slot_families(&inst) {
            for q in &family.queries {
                queries += 1;
                let solutions = all_solutions(&s, q);
                ensure(solutions.len() as u64 == naive_count(&s, q), || {
                    format!("{} {}: backtracking and exhaustive counts differ", f.id, family.name)
                })?;
                let x = q.distinguished().unwrap();
                if solutions.is_empty() {
                    failures.push(format!("{} {}: no homomorphism into the slot", f.id, family.name));
                } else if family.pins_distinguished && solutions.iter().any(|a| a[x] != b) {
                    failures.push(format!(
                        "{} {}: distinguished variable not pinned to b",
                        f.id, family.name
                    ));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{queries} queries embed, gamma families pinned to b"))
    } else {
        Err(format!(
            "{} of {queries} queries: {}",
            failures.len(),
            failures.join("; ")
        ))
    }
}

fn end_to_end_negative() -> Verdict {
    let cfg = Config::default();
    let mut sizes = BTreeMap::new();
    for f in fixtures_with(Expected::Negative) {
        let inst = f.instance();
        for variant in [Variant::Neq, Variant::Neg] {
            let dir = tempfile::tempdir().unwrap();
            let out =
                cmd_countermodel(&fixture_path(f.id), variant, Some(dir.path()), &cfg).map_err(|e| e.to_string())?;
            ensure(out.code == exit::SUCCESS, || {
                format!("{} {}: exit {}", f.id, variant.name(), out.code)
            })?;
            let text = std::fs::read_to_string(dir.path().join("model.struct")).unwrap();
            let d = parse_structure(&text).map_err(|e| e.to_string())?;
            let report = check_model(&d, &build_o_variant(&inst, variant), ModelCheckFlags::STRICT).unwrap();
            ensure(report.is_ok(), || {
                format!("{} {}: {:?}", f.id, variant.name(), report.violations)
            })?;
            let q = match variant {
                Variant::Neq => build_psi(&inst),
                Variant::Neg => build_phi(&inst, PhiOptions::default()),
            };
            ensure(!oracle(&d, &q), || {
                format!("{} {}: the oracle satisfies the query", f.id, variant.name())
            })?;
            sizes.insert(format!("{} {}", f.id, variant.name()), d.vertex_count());
        }
    }
    let n1 = (sizes.get("n1_free neq").copied(), sizes.get("n1_free neg").copied());
    ensure(n1 == (Some(7), Some(11)), || {
        format!("n1 countermodel sizes {n1:?}, expected 7 and 11")
    })?;
    Ok(format!("{} countermodels verified; n1 sizes 7 and 11", sizes.len()))
}

fn end_to_end_positive() -> Verdict {
    let cfg = Config::default();
    let mut failures = Vec::new();
    let mut checked = 0;
    for f in fixtures_with(Expected::Positive) {
        let inst = f.instance();
        let Some(canonical) = classify(&inst, &cfg).canonical else {
            continue;
        };
        checked += 1;
        for (variant, q) in [
            (Variant::Neq, build_psi(&inst)),
            (Variant::Neg, build_phi(&inst, PhiOptions::default())),
        ] {
            let dn = canonical.with_variant_slots(&inst, variant);
            let hit = Evaluator::new(&dn).evaluate(&q).unwrap();
            match hit {
                Some(a) if revalidate(&dn, &q, &a) => {}
                Some(_) => failures.push(format!("{} {}: assignment does not check", f.id, variant.name())),
                None => {
                    let confirmed = if oracle(&dn, &q) {
                        "oracle disagrees"
                    } else {
                        "oracle agrees"
                    };
                    failures.push(format!("{} {}: not satisfied ({confirmed})", f.id, variant.name()));
                }
            }
        }
        let d = &canonical.structure;
        let eval = Evaluator::new(d);
        for (name, u) in [("Psi", build_big_psi(&inst)), ("Phi", build_big_phi(&inst))] {
            let diamond = u.disjuncts.len() - 1;
            let q = &u.disjuncts[diamond];
            let hit = eval.evaluate(q).unwrap();
            if !hit.is_some_and(|a| revalidate(d, q, &a)) {
                failures.push(format!("{} {name}: diamond disjunct fails", f.id));
            }
        }
    }
    if checked == 0 {
        return Err("no positive fixture has a canonical structure".into());
    }
    if failures.is_empty() {
        Ok(format!("{checked} positive fixtures"))
    } else {
        Err(failures.join("; "))
    }
}

fn fixture_structures() -> Vec<(String, Structure)> {
    let cfg = Config::default();
    let mut out = Vec::new();
    for f in FIXTURES {
        let inst = f.instance();
        let sig = Signature::from_instance(&inst);
        out.push((format!("{} slot", f.id), slot(1, &sig)));
        out.push((format!("{} well", f.id), well_of_positivity(&sig, &[])));
        if let Some(c) = classify(&inst, &cfg).canonical {
            for variant in [Variant::Neq, Variant::Neg] {
                out.push((
                    format!("{} D_{}", f.id, variant.name()),
                    c.with_variant_slots(&inst, variant),
                ));
            }
            out.push((format!("{} D", f.id), c.structure));
        }
    }
    out.retain(|(_, d)| d.vertex_count() <= 7);
    out
}

fn evaluator_oracle() -> Verdict {
    let structures = fixture_structures();
    let mut pairs = 0;
    for f in FIXTURES {
        let inst = f.instance();
        for (qname, q) in built_queries(&inst) {
            for (dname, d) in &structures {
                pairs += 1;
                let got = Evaluator::new(d).evaluate(&q).unwrap();
                let expected = oracle(d, &q);
                ensure(got.is_some() == expected, || {
                    format!(
                        "{} {qname} on {dname}: evaluator {}, oracle {expected}",
                        f.id,
                        got.is_some()
                    )
                })?;
                if let Some(a) = got {
                    ensure(revalidate(d, &q, &a), || {
                        format!("{} {qname} on {dname}: bad assignment", f.id)
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{pairs} (query, structure) pairs over {} structures agree",
        structures.len()
    ))
}

fn semantics_edge_cases() -> Verdict {
    let mut checked = 0;
    for f in FIXTURES {
        let inst = f.instance();
        let sig = Signature::from_instance(&inst);
        for variant in [Variant::Neq, Variant::Neg] {
            let o = build_o_variant(&inst, variant);
            let names: Vec<&str> = o.constants().iter().map(String::as_str).collect();
            let well = well_of_positivity(&sig, &names);
            let open = check_model(&well, &o, ModelCheckFlags::OPEN).unwrap();
            ensure(open.is_ok(), || {
                format!("{} {}: well rejected without UNA", f.id, variant.name())
            })?;
            let una = check_model(&well, &o, ModelCheckFlags { una: true, pcwa: false }).unwrap();
            ensure(!una.is_ok(), || {
                format!("{} {}: well accepted with UNA", f.id, variant.name())
            })?;
        }
        let well = well_of_positivity(&sig, &[]);
        for (qname, q) in built_queries(&inst) {
            if q.count_literals(|l| matches!(l, thue2dlite_core::queries::Literal::Inequality(..))) > 0 {
                ensure(!naive(&well, &q), || format!("{} {qname}: satisfied on the well", f.id))?;
                ensure(Evaluator::new(&well).evaluate(&q).unwrap().is_none(), || {
                    format!("{} {qname}: evaluator satisfies it on the well", f.id)
                })?;
            }
        }

        let (b, c) = slot_constants(1);
        let omega = Ontology::new(vec![b.clone(), c.clone()], build_omega_n(1, &sig)).unwrap();
        let s = slot(1, &sig);
        ensure(
            check_model(&s, &omega, ModelCheckFlags::STRICT).unwrap().is_ok(),
            || format!("{}: plain slot rejected", f.id),
        )?;
        let (vb, vc) = (s.constant(&b).unwrap(), s.constant(&c).unwrap());
        let relations: Vec<_> = sig.letters().iter().cloned().chain([t_symbol()]).collect();
        for r in &relations {
            for (u, v) in [(vb, vb), (vb, vc), (vc, vb), (vc, vc)] {
                if s.has_edge(r, u, v) {
                    continue;
                }
                let mut extra = s.clone();
                extra.add_edge(r, u, v);
                let open = check_model(&extra, &omega, ModelCheckFlags { una: true, pcwa: false }).unwrap();
                let closed = check_model(&extra, &omega, ModelCheckFlags::STRICT).unwrap();
                ensure(open.is_ok() && !closed.is_ok(), || {
                    format!(
                        "{}: extra {r}({u},{v}): accepted without pcwa {}, with pcwa {}",
                        f.id,
                        open.is_ok(),
                        closed.is_ok()
                    )
                })?;
                checked += 1;
            }
        }
        // The well is also a model of the core ontology alone.
        let o = build_o_neq(&inst);
        let names: Vec<&str> = o.constants().iter().map(String::as_str).collect();
        ensure(
            check_model(
                &well_of_positivity(&sig, &names),
                &build_core_ontology_for(&sig),
                ModelCheckFlags::OPEN,
            )
            .unwrap()
            .is_ok(),
            || format!("{}: well is not a model of the core ontology", f.id),
        )?;
    }
    Ok(format!("{} fixtures, {checked} augmented slots", FIXTURES.len()))
}

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Duration,
    run: fn() -> Verdict,
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        number: 1,
        name: "ontology/candidate equivalence",
        limit: Duration::from_secs(10),
        run: ontology_iff_candidate,
    },
    Criterion {
        number: 2,
        name: "imperfection detection",
        limit: Duration::from_secs(30),
        run: imperfection_detection,
    },
    Criterion {
        number: 3,
        name: "canonical rejection",
        limit: Duration::from_secs(1),
        run: canonical_rejection,
    },
    Criterion {
        number: 4,
        name: "slot observations",
        limit: Duration::from_secs(5),
        run: slot_observations,
    },
    Criterion {
        number: 5,
        name: "end-to-end negative",
        limit: Duration::from_secs(60),
        run: end_to_end_negative,
    },
    Criterion {
        number: 6,
        name: "end-to-end positive",
        limit: Duration::from_secs(60),
        run: end_to_end_positive,
    },
    Criterion {
        number: 7,
        name: "evaluator/oracle agreement",
        limit: Duration::from_secs(120),
        run: evaluator_oracle,
    },
    Criterion {
        number: 8,
        name: "semantics edge cases",
        limit: Duration::from_secs(1),
        run: semantics_edge_cases,
    },
];

fn main() -> ExitCode {
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| only.is_none_or(|n| n == c.number)) {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (verdict, detail) = match result {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over the {:?} limit; {d}", c.limit)),
            Err(e) => ("FAIL", e),
        };
        failed += (verdict == "FAIL") as usize;
        println!(
            "criterion {} ({}): {verdict} in {:.2?} [{detail}]",
            c.number, c.name, elapsed
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
