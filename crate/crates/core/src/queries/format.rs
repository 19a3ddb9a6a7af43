//! The `.cq` text format.
//!
//! ```text
//! component 1 distinguished x_k1
//! a(x_k1,u1_k1)
//! b(u1_k1,y_k1)
//! y_k1 != y'_k1
//! links
//! x_sym_a != x_k1
//! !a(x_sym_a,x_k1)
//! ```
//!
//! `component <id> [distinguished <var>]` opens a component; `links` opens
//! the block of literals between components. Literals before any header
//! form a component named `main`. Union files separate disjuncts with
//! `--- disjunct` lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::thue::Symbol;

use super::{valid_variable_name, Component, ConjunctiveQuery, Literal, UnionQuery};

const DISJUNCT_SEPARATOR: &str = "--- disjunct";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

pub fn write_query(q: &ConjunctiveQuery) -> String {
    let mut out = String::new();
    for c in q.components() {
        match &c.distinguished {
            Some(x) => writeln!(out, "component {} distinguished {x}", c.id).unwrap(),
            None => writeln!(out, "component {}", c.id).unwrap(),
        }
        for l in &c.literals {
            writeln!(out, "{l}").unwrap();
        }
    }
    if !q.links().is_empty() {
        out.push_str("links\n");
        for l in q.links() {
            writeln!(out, "{l}").unwrap();
        }
    }
    out
}

pub fn write_union(u: &UnionQuery) -> String {
    let parts: Vec<String> = u.disjuncts.iter().map(write_query).collect();
    parts.join(&format!("{DISJUNCT_SEPARATOR}\n"))
}

enum Block {
    None,
    Component,
    Links,
}

pub fn parse_query(text: &str) -> Result<ConjunctiveQuery, QueryParseError> {
    parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)), 1)
}

/// Parses a union; a file without separators is a single disjunct, and an
/// empty file is the empty union.
pub fn parse_union(text: &str) -> Result<UnionQuery, QueryParseError> {
    let mut groups: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (i, raw) in text.lines().enumerate() {
        if raw.trim() == DISJUNCT_SEPARATOR {
            groups.push(Vec::new());
        } else {
            groups.last_mut().expect("non-empty").push((i + 1, raw));
        }
    }
    if groups.len() == 1 && groups[0].iter().all(|(_, l)| strip(l).is_empty()) {
        return Ok(UnionQuery::new(Vec::new()));
    }
    let mut disjuncts = Vec::new();
    for g in groups {
        let first = g.first().map_or(1, |(l, _)| *l);
        disjuncts.push(parse_lines(g.into_iter(), first)?);
    }
    Ok(UnionQuery::new(disjuncts))
}

fn strip(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

fn parse_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    first_line: usize,
) -> Result<ConjunctiveQuery, QueryParseError> {
    let mut components: Vec<Component> = Vec::new();
    let mut links = Vec::new();
    let mut block = Block::None;
    for (line, raw) in lines {
        let content = strip(raw);
        if content.is_empty() {
            continue;
        }
        let malformed = |message: String| QueryParseError::Malformed { line, message };
        if let Some(rest) = content.strip_prefix("component ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let distinguished = match words.as_slice() {
                [_] => None,
                [_, "distinguished", x] => Some(x.to_string()),
                _ => {
                    return Err(malformed(format!(
                        "expected `component <id> [distinguished <var>]`, found `{content}`"
                    )))
                }
            };
            components.push(Component {
                id: words[0].to_string(),
                distinguished,
                literals: Vec::new(),
            });
            block = Block::Component;
        } else if content == "links" {
            block = Block::Links;
        } else {
            let lit = parse_literal(content).map_err(malformed)?;
            match block {
                Block::None => {
                    components.push(Component {
                        id: "main".into(),
                        distinguished: None,
                        literals: vec![lit],
                    });
                    block = Block::Component;
                }
                Block::Component => components.last_mut().expect("open component").literals.push(lit),
                Block::Links => links.push(lit),
            }
        }
    }
    ConjunctiveQuery::new(components, links).map_err(|e| QueryParseError::Invalid {
        line: first_line,
        message: e.to_string(),
    })
}

fn variable(text: &str) -> Result<String, String> {
    let v = text.trim();
    if valid_variable_name(v) {
        Ok(v.to_string())
    } else {
        Err(format!("invalid variable `{v}`"))
    }
}

fn parse_literal(content: &str) -> Result<Literal, String> {
    if let Some((x, y)) = content.split_once("!=") {
        return Ok(Literal::Inequality(variable(x)?, variable(y)?));
    }
    let (negated, atom) = match content.strip_prefix('!') {
        Some(rest) => (true, rest.trim()),
        None => (false, content),
    };
    let (head, args) = atom
        .strip_suffix(')')
        .and_then(|a| a.split_once('('))
        .ok_or_else(|| format!("expected a literal, found `{content}`"))?;
    let args: Vec<&str> = args.split(',').collect();
    match (head.trim(), args.as_slice(), negated) {
        ("A", [x], false) => Ok(Literal::PositiveUnary(variable(x)?)),
        ("A", [_], true) => Err("negated unary atoms are not supported".into()),
        ("A", _, _) => Err("`A` is unary".into()),
        (r, [x, y], neg) => {
            let r = Symbol::new(r).map_err(|e| e.to_string())?;
            let (x, y) = (variable(x)?, variable(y)?);
            Ok(if neg {
                Literal::NegatedBinary(r, x, y)
            } else {
                Literal::PositiveBinary(r, x, y)
            })
        }
        (r, _, _) => Err(format!("`{r}` is binary")),
    }
}
