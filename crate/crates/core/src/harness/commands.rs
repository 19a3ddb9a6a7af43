//! One function per subcommand.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::ontology::{build_o_variant, check_model, parse_ontology, write_ontology, ModelCheckFlags};
use crate::queries::{
    build_phi, build_psi, first_unsafe_variable, max_matching, parse_union, write_query, ConjunctiveQuery, Evaluator,
    QueryError,
};
use crate::structures::{parse_structure, write_structure, Signature, Structure, VertexId};
use crate::thue::{decide_equiv_bounded, find_separating_semigroup, parse_thue, ThueInstance, Variant, Verdict};

use super::classify::{canonical_from_quotient, canonical_from_semigroup, witness_certificate, NegativeCertificate};
use super::enumeration::{run_enumeration, EnumerationCheck};
use super::fixtures::FIXTURES;
use super::verify::{labelled, verify_instance};
use super::{exit, read_file, write_atomic, CanonicalCertificate, Config, HarnessError, Outcome};

fn load_instance(path: &Path) -> Result<ThueInstance, HarnessError> {
    parse_thue(&read_file(path)?).map_err(|e| HarnessError::parse(path, e))
}

fn load_structure(path: &Path) -> Result<Structure, HarnessError> {
    parse_structure(&read_file(path)?).map_err(|e| HarnessError::parse(path, e))
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn create_dir(dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn pretty(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn combined_query(inst: &ThueInstance, variant: Variant, cfg: &Config) -> ConjunctiveQuery {
    match variant {
        Variant::Neq => build_psi(inst),
        Variant::Neg => build_phi(inst, cfg.phi_options()),
    }
}

pub fn cmd_compile(instance: &Path, variant: Variant, out_dir: &Path, cfg: &Config) -> Result<Outcome, HarnessError> {
    let inst = load_instance(instance)?;
    let o = build_o_variant(&inst, variant);
    let q = combined_query(&inst, variant, cfg);
    create_dir(out_dir)?;
    let files = ["ontology.onto", "query.cq", "manifest.json"];
    let components: Vec<&str> = q.components().iter().map(|c| c.id.as_str()).collect();
    let manifest = json!({
        "instance": instance.display().to_string(),
        "variant": variant.name(),
        "rules": inst.rule_count(),
        "letters": inst.alphabet_size(),
        "slots": inst.slot_count(variant),
        "components": components,
        "constants": o.constants().len(),
        "axioms": o.axioms().len(),
        "phi_negate_t": variant == Variant::Neg && cfg.phi_negate_t,
        "files": files,
    });
    write_atomic(&out_dir.join(files[0]), &write_ontology(&o))?;
    write_atomic(&out_dir.join(files[1]), &write_query(&q))?;
    write_atomic(&out_dir.join(files[2]), &pretty(&manifest))?;
    let text = format!(
        "wrote {} ({} slots, {} components: {})\n",
        out_dir.display(),
        inst.slot_count(variant),
        components.len(),
        components.join(" ")
    );
    Ok(Outcome {
        code: exit::SUCCESS,
        report: manifest,
        text,
    })
}

pub fn cmd_rewrite(instance: &Path, cfg: &Config) -> Result<Outcome, HarnessError> {
    let inst = load_instance(instance)?;
    let verdict = decide_equiv_bounded(
        inst.goal_left(),
        inst.goal_right(),
        inst.rules(),
        cfg.search_bounds(&inst),
    );
    let mut report = serde_json::to_value(&verdict).expect("serializable");
    report["instance"] = json!(instance_id(instance));
    Ok(match &verdict {
        Verdict::Equivalent(path) => Outcome {
            code: exit::SUCCESS,
            report,
            text: format!("equivalent in {} steps\n{path}\n", path.len()),
        },
        Verdict::Unknown(b) => Outcome {
            code: exit::BOUNDS_EXHAUSTED,
            report,
            text: format!(
                "unknown: {:?} after {} expansions ({} words visited)\n",
                b.reason, b.expansions, b.visited
            ),
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentHost {
    pub id: String,
    /// Vertices (by label) the distinguished variable can take when the
    /// component is evaluated alone.
    pub hosts: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentHosts {
    pub components: Vec<ComponentHost>,
    /// Largest number of components placeable on pairwise distinct hosts.
    pub distinct_placement: usize,
    pub explanation: String,
}

/// Where each component of `q` can embed on its own in `d`, and why the
/// components cannot be combined when they fail together.
pub fn component_hosts(d: &Structure, q: &ConjunctiveQuery) -> Result<ComponentHosts, HarnessError> {
    let eval = Evaluator::new(d);
    let mut components = Vec::new();
    let mut options: Vec<Vec<VertexId>> = Vec::new();
    for c in q.components() {
        let single = ConjunctiveQuery::new(vec![c.clone()], Vec::new())?;
        let mut hosts = Vec::new();
        match &c.distinguished {
            Some(x) => {
                for v in d.vertices() {
                    let restrict = BTreeMap::from([(x.clone(), [v].into())]);
                    if eval.evaluate_restricted(&single, &restrict)?.is_some() {
                        hosts.push(v);
                    }
                }
            }
            None => hosts.extend(eval.evaluate(&single)?.map(|_| 0)),
        }
        components.push(ComponentHost {
            id: c.id.clone(),
            hosts: hosts.iter().map(|&v| d.label(v).to_string()).collect(),
        });
        options.push(hosts);
    }
    let distinct_placement = max_matching(&options);
    let homeless: Vec<&str> = components
        .iter()
        .filter(|c| c.hosts.is_empty())
        .map(|c| c.id.as_str())
        .collect();
    let explanation = if !homeless.is_empty() {
        format!("components with no embedding: {}", homeless.join(", "))
    } else if distinct_placement < components.len() {
        format!(
            "at most {distinct_placement} of the {} components can sit on pairwise distinct vertices",
            components.len()
        )
    } else {
        "every component embeds on its own".into()
    };
    Ok(ComponentHosts {
        components,
        distinct_placement,
        explanation,
    })
}

pub fn cmd_countermodel(
    instance: &Path,
    variant: Variant,
    out_dir: Option<&Path>,
    cfg: &Config,
) -> Result<Outcome, HarnessError> {
    let inst = load_instance(instance)?;
    let witness = find_separating_semigroup(&inst, cfg.max_semigroup_order);
    let found = match &witness {
        Some(w) => Some((canonical_from_semigroup(&inst, w), witness_certificate(w))),
        None => match cfg.quotient_max_len {
            0 => None,
            len => canonical_from_quotient(&inst, len)
                .filter(|c| c.separates_goal(&inst))
                .map(|c| {
                    let cert = match c.certificate {
                        CanonicalCertificate::Quotient { max_len, classes } => {
                            NegativeCertificate::Quotient { max_len, classes }
                        }
                        CanonicalCertificate::Semigroup { .. } => unreachable!("built from the quotient"),
                    };
                    (c, cert)
                }),
        },
    };
    let Some((canonical, certificate)) = found else {
        let report = json!({
            "instance": instance_id(instance),
            "variant": variant.name(),
            "found": false,
            "max_semigroup_order": cfg.max_semigroup_order,
            "quotient_max_len": cfg.quotient_max_len,
        });
        return Ok(Outcome {
            code: exit::BOUNDS_EXHAUSTED,
            report,
            text: format!(
                "no countermodel: no separating semigroup of order <= {} and no separating quotient at word length {}\n",
                cfg.max_semigroup_order, cfg.quotient_max_len
            ),
        });
    };

    let dn = canonical.with_variant_slots(&inst, variant);
    let o = build_o_variant(&inst, variant);
    let model = check_model(&dn, &o, ModelCheckFlags::STRICT)?;
    let q = combined_query(&inst, variant, cfg);
    let satisfied = Evaluator::new(&dn).evaluate(&q)?;
    let hosts = component_hosts(&dn, &q)?;
    let code = if !model.is_ok() {
        exit::MODEL_FAILS
    } else if satisfied.is_some() {
        exit::NEGATIVE
    } else {
        exit::SUCCESS
    };
    let report = json!({
        "instance": instance_id(instance),
        "variant": variant.name(),
        "found": true,
        "verified": code == exit::SUCCESS,
        "certificate": certificate,
        "slots": inst.slot_count(variant),
        "vertices": dn.vertex_count(),
        "model_check": { "flags": ModelCheckFlags::STRICT, "violations": model.violations },
        "query_satisfied": satisfied.as_ref().map(|a| labelled(&dn, a)),
        "components": hosts,
    });
    if let Some(dir) = out_dir {
        create_dir(dir)?;
        write_atomic(&dir.join("model.struct"), &write_structure(&dn))?;
        write_atomic(&dir.join("report.json"), &pretty(&report))?;
    }
    let text = match code {
        exit::SUCCESS => format!(
            "countermodel with {} vertices refutes the {} query; {}\n",
            dn.vertex_count(),
            variant.name(),
            hosts.explanation
        ),
        exit::MODEL_FAILS => format!("candidate countermodel fails the ontology: {:?}\n", model.violations),
        _ => "candidate countermodel satisfies the query\n".into(),
    };
    Ok(Outcome { code, report, text })
}

pub fn cmd_eval(query: &Path, model: &Path, ontology: Option<&Path>, cfg: &Config) -> Result<Outcome, HarnessError> {
    let u = parse_union(&read_file(query)?).map_err(|e| HarnessError::parse(query, e))?;
    for q in &u.disjuncts {
        if let Some(x) = first_unsafe_variable(q) {
            return Err(QueryError::UnsafeQuery(x).into());
        }
    }
    let d = load_structure(model)?;
    if let Some(path) = ontology {
        let o = parse_ontology(&read_file(path)?).map_err(|e| HarnessError::parse(path, e))?;
        let report = check_model(&d, &o, cfg.model_flags())?;
        if !report.is_ok() {
            return Ok(Outcome {
                code: exit::MODEL_FAILS,
                report: json!({ "satisfied": null, "model_check": report }),
                text: format!(
                    "the model fails the ontology with {} violations\n",
                    report.violations.len()
                ),
            });
        }
    }
    Ok(match Evaluator::new(&d).evaluate_union(&u)? {
        Some((k, a)) => Outcome {
            code: exit::SUCCESS,
            report: json!({ "satisfied": true, "disjunct": k, "witness": labelled(&d, &a) }),
            text: format!("satisfied (disjunct {k})\n"),
        },
        None => Outcome {
            code: exit::NEGATIVE,
            report: json!({ "satisfied": false }),
            text: "not satisfied\n".into(),
        },
    })
}

pub fn cmd_check_model(model: &Path, ontology: &Path, cfg: &Config) -> Result<Outcome, HarnessError> {
    let d = load_structure(model)?;
    let o = parse_ontology(&read_file(ontology)?).map_err(|e| HarnessError::parse(ontology, e))?;
    let report = check_model(&d, &o, cfg.model_flags())?;
    let mut text = if report.is_ok() {
        "model ok\n".to_string()
    } else {
        format!("{} violations\n", report.violations.len())
    };
    for v in &report.violations {
        text.push_str(&format!("  {}\n", serde_json::to_string(v).expect("serializable")));
    }
    Ok(Outcome {
        code: if report.is_ok() { exit::SUCCESS } else { exit::NEGATIVE },
        report: json!({ "ok": report.is_ok(), "flags": cfg.model_flags(), "violations": report.violations }),
        text,
    })
}

pub fn cmd_verify(instance: &Path, cfg: &Config) -> Result<Outcome, HarnessError> {
    let inst = load_instance(instance)?;
    let report = verify_instance(&instance_id(instance), &inst, cfg)?;
    Ok(Outcome {
        code: if report.passed() { exit::SUCCESS } else { exit::NEGATIVE },
        text: report.to_text(),
        report: serde_json::to_value(&report).expect("serializable"),
    })
}

pub enum EnumerateTarget {
    /// Signature and rules from an instance file.
    Instance(PathBuf),
    /// A bare signature; rule-dependent checks use every built-in fixture
    /// over exactly this alphabet.
    Alphabet(Vec<String>),
}

pub fn cmd_enumerate(
    target: &EnumerateTarget,
    max_vertices: Option<usize>,
    check: &str,
    cfg: &Config,
) -> Result<Outcome, HarnessError> {
    let check: EnumerationCheck = check.parse()?;
    let max_vertices = max_vertices.unwrap_or(cfg.enum_max_vertices);
    let (sig, instances) = match target {
        EnumerateTarget::Instance(path) => {
            let inst = load_instance(path)?;
            (Signature::from_instance(&inst), vec![(instance_id(path), inst)])
        }
        EnumerateTarget::Alphabet(letters) => {
            let symbols = letters
                .iter()
                .map(|l| crate::thue::Symbol::new(l).map_err(|e| HarnessError::Usage(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let sig = Signature::new(symbols).map_err(|e| HarnessError::Usage(e.to_string()))?;
            let instances: Vec<(String, ThueInstance)> = FIXTURES
                .iter()
                .map(|f| (f.id.to_string(), f.instance()))
                .filter(|(_, inst)| inst.alphabet() == sig.letters())
                .collect();
            (sig, instances)
        }
    };
    if check.needs_rules() && instances.is_empty() {
        return Err(HarnessError::Usage(format!(
            "`{check}` needs rules: no built-in fixture uses this alphabet, pass an instance file"
        )));
    }
    let report = run_enumeration(&sig, &instances, max_vertices, check)?;
    let text = format!(
        "{check}: {} structures, {} relevant, {} violations\n",
        report.structures, report.relevant, report.violation_count
    );
    Ok(Outcome {
        code: if report.passed() { exit::SUCCESS } else { exit::NEGATIVE },
        report: serde_json::to_value(&report).expect("serializable"),
        text,
    })
}
