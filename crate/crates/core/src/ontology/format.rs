//! The `.onto` text format.
//!
//! ```text
//! const a b_1 c_1
//! assert A(a)
//! assert T(a,a)
//! incl A [= ex a
//! incl ex a- [= ex a
//! disj A [= not ex b
//! ```
//!
//! The writer emits the constants line followed by the axioms in their
//! canonical (sorted) order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::thue::Symbol;

use super::{Axiom, BasicConcept, Ontology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{0}")]
    Invalid(#[from] super::OntologyError),
}

pub fn write_ontology(o: &Ontology) -> String {
    let mut out = String::new();
    if !o.constants().is_empty() {
        writeln!(out, "const {}", o.constants().join(" ")).unwrap();
    }
    for ax in o.axioms() {
        writeln!(out, "{ax}").unwrap();
    }
    out
}

pub fn parse_ontology(text: &str) -> Result<Ontology, OntologyParseError> {
    let mut constants = Vec::new();
    let mut axioms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let malformed = |message: String| OntologyParseError::Malformed { line, message };
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match keyword {
            "const" => constants.extend(rest.split_whitespace().map(str::to_string)),
            "assert" => axioms.push(assertion(rest).map_err(malformed)?),
            "incl" | "disj" => {
                let (lhs, rhs) = rest
                    .split_once("[=")
                    .ok_or_else(|| malformed(format!("expected `[=` in `{content}`")))?;
                let lhs = concept(lhs).map_err(malformed)?;
                if keyword == "incl" {
                    axioms.push(Axiom::Inclusion {
                        lhs,
                        rhs: concept(rhs).map_err(malformed)?,
                    });
                } else {
                    let rhs = rhs
                        .trim()
                        .strip_prefix("not ")
                        .ok_or_else(|| malformed(format!("expected `not` after `[=` in `{content}`")))?;
                    axioms.push(Axiom::DisjointInclusion {
                        lhs,
                        rhs: concept(rhs).map_err(malformed)?,
                    });
                }
            }
            other => return Err(malformed(format!("unknown keyword `{other}`"))),
        }
    }
    Ok(Ontology::new(constants, axioms)?)
}

fn symbol(text: &str) -> Result<Symbol, String> {
    Symbol::new(text.trim()).map_err(|e| e.to_string())
}

fn assertion(text: &str) -> Result<Axiom, String> {
    let (head, args) = text
        .strip_suffix(')')
        .and_then(|t| t.split_once('('))
        .ok_or_else(|| format!("expected an assertion, found `{text}`"))?;
    let args: Vec<String> = args.split(',').map(|a| a.trim().to_string()).collect();
    if args.iter().any(|a| a.is_empty() || a.contains(char::is_whitespace)) {
        return Err(format!("invalid constant list in `{text}`"));
    }
    match (head.trim(), args.as_slice()) {
        ("A", [c]) => Ok(Axiom::ConceptAssertion { constant: c.clone() }),
        ("A", _) => Err("`A` is unary".into()),
        (r, [from, to]) => Ok(Axiom::RoleAssertion {
            role: symbol(r)?,
            from: from.clone(),
            to: to.clone(),
        }),
        (r, _) => Err(format!("`{r}` is binary")),
    }
}

fn concept(text: &str) -> Result<BasicConcept, String> {
    let text = text.trim();
    if text == "A" {
        return Ok(BasicConcept::Atomic);
    }
    let role = text
        .strip_prefix("ex ")
        .ok_or_else(|| format!("expected `A`, `ex R` or `ex R-`, found `{text}`"))?
        .trim();
    Ok(match role.strip_suffix('-') {
        Some(r) => BasicConcept::exists_inverse(&symbol(r)?),
        None => BasicConcept::exists(&symbol(role)?),
    })
}
