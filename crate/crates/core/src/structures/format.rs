//! The `.struct` text format.
//!
//! ```text
//! vertex 0 [ε]
//! vertex 1 [a]
//! const a = 0
//! A(0)
//! T(0,0)
//! a(0,1)
//! ```
//!
//! Vertex ids must be `0..n` in order; the label after the id is optional
//! and may not contain whitespace. The writer emits vertices, then constants
//! by name, then facts in sorted order, so output is canonical.

use std::fmt::Write as _;

use thiserror::Error;

use crate::thue::Symbol;

use super::{Fact, Structure, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex {found} declared out of order (expected {expected})")]
    VertexOrder { line: usize, expected: usize, found: usize },
    #[error("line {line}: unknown vertex {vertex}")]
    UnknownVertex { line: usize, vertex: usize },
    #[error("line {line}: constant `{name}` declared twice")]
    DuplicateConstant { line: usize, name: String },
}

pub fn write_structure(d: &Structure) -> String {
    let mut out = String::new();
    for v in d.vertices() {
        let label: String = d
            .label(v)
            .chars()
            .map(|c| if c.is_whitespace() { '_' } else { c })
            .collect();
        if label.is_empty() || label == v.to_string() {
            writeln!(out, "vertex {v}").unwrap();
        } else {
            writeln!(out, "vertex {v} {label}").unwrap();
        }
    }
    for (name, v) in d.constants() {
        writeln!(out, "const {name} = {v}").unwrap();
    }
    for fact in d.facts() {
        match fact {
            Fact::A(v) => writeln!(out, "A({v})").unwrap(),
            Fact::Binary(r, s, t) => writeln!(out, "{r}({s},{t})").unwrap(),
        }
    }
    out
}

pub fn parse_structure(text: &str) -> Result<Structure, StructureParseError> {
    let mut d = Structure::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let malformed = |message: String| StructureParseError::Malformed { line, message };
        if let Some(rest) = content.strip_prefix("vertex ") {
            let mut parts = rest.split_whitespace();
            let id = parse_id(parts.next().unwrap_or(""), line)?;
            let label = parts.next();
            if parts.next().is_some() {
                return Err(malformed("labels may not contain whitespace".into()));
            }
            if id != d.vertex_count() {
                return Err(StructureParseError::VertexOrder {
                    line,
                    expected: d.vertex_count(),
                    found: id,
                });
            }
            d.add_vertex(label.map_or_else(|| id.to_string(), str::to_string));
        } else if let Some(rest) = content.strip_prefix("const ") {
            let (name, id) = rest
                .split_once('=')
                .ok_or_else(|| malformed(format!("expected `const <name> = <id>`, found `{content}`")))?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(malformed(format!("invalid constant name `{name}`")));
            }
            let v = vertex(&d, id.trim(), line)?;
            if d.constant(name).is_some() {
                return Err(StructureParseError::DuplicateConstant {
                    line,
                    name: name.to_string(),
                });
            }
            d.set_constant(name, v);
        } else {
            let (head, args) = content
                .strip_suffix(')')
                .and_then(|c| c.split_once('('))
                .ok_or_else(|| malformed(format!("expected a fact, found `{content}`")))?;
            let args: Vec<&str> = args.split(',').map(str::trim).collect();
            match (head.trim(), args.as_slice()) {
                ("A", [v]) => {
                    let v = vertex(&d, v, line)?;
                    d.add_a(v);
                }
                ("A", _) => return Err(malformed("`A` is unary".into())),
                (r, [s, t]) => {
                    let r = Symbol::new(r).map_err(|e| malformed(e.to_string()))?;
                    let (s, t) = (vertex(&d, s, line)?, vertex(&d, t, line)?);
                    d.add_edge(&r, s, t);
                }
                (r, _) => return Err(malformed(format!("`{r}` is binary"))),
            }
        }
    }
    Ok(d)
}

fn parse_id(text: &str, line: usize) -> Result<usize, StructureParseError> {
    text.parse().map_err(|_| StructureParseError::Malformed {
        line,
        message: format!("expected a vertex id, found `{text}`"),
    })
}

fn vertex(d: &Structure, text: &str, line: usize) -> Result<VertexId, StructureParseError> {
    let v = parse_id(text, line)?;
    if v >= d.vertex_count() {
        return Err(StructureParseError::UnknownVertex { line, vertex: v });
    }
    Ok(v)
}
