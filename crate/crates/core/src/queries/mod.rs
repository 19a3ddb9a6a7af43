//! Boolean conjunctive queries with inequalities and safe negation.
//!
//! A query is a list of components, each a conjunction of literals with at
//! most one distinguished variable, plus `links`: literals that tie
//! components together (the pairwise constraints of the combined queries).
//! Variables are renamed apart, so no variable occurs in two components.

mod build;
mod eval;
mod format;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::thue::Symbol;

pub use build::{
    build_beta_diamond, build_beta_lk, build_beta_r, build_beta_rbar, build_beta_rk, build_big_gamma_neg,
    build_big_gamma_neq, build_big_phi, build_big_psi, build_gamma_diamond, build_gamma_k, build_gamma_r, build_phi,
    build_psi, component_id, ComponentKind, PhiOptions,
};
pub(crate) use eval::max_matching;
pub use eval::{evaluate, evaluate_restricted, evaluate_union, violated_literal, Assignment, Evaluator};
pub use format::{parse_query, parse_union, write_query, write_union, QueryParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("rule index {index} out of range (instance has {count} rules)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(Symbol),
    #[error("variable `{0}` occurs only in inequalities or negated atoms")]
    UnsafeQuery(String),
    #[error("invalid query: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Literal {
    /// `A(x)`
    PositiveUnary(String),
    /// `R(x,y)` with `R ∈ 𝔄 ∪ {T}`
    PositiveBinary(Symbol, String, String),
    /// `x != y`
    Inequality(String, String),
    /// `!R(x,y)`
    NegatedBinary(Symbol, String, String),
}

impl Literal {
    pub fn variables(&self) -> Vec<&str> {
        match self {
            Literal::PositiveUnary(x) => vec![x],
            Literal::PositiveBinary(_, x, y) | Literal::Inequality(x, y) | Literal::NegatedBinary(_, x, y) => {
                vec![x, y]
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Literal::PositiveUnary(_) | Literal::PositiveBinary(..))
    }

    pub(crate) fn rename(&self, f: impl Fn(&str) -> String) -> Literal {
        match self {
            Literal::PositiveUnary(x) => Literal::PositiveUnary(f(x)),
            Literal::PositiveBinary(r, x, y) => Literal::PositiveBinary(r.clone(), f(x), f(y)),
            Literal::Inequality(x, y) => Literal::Inequality(f(x), f(y)),
            Literal::NegatedBinary(r, x, y) => Literal::NegatedBinary(r.clone(), f(x), f(y)),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::PositiveUnary(x) => write!(f, "A({x})"),
            Literal::PositiveBinary(r, x, y) => write!(f, "{r}({x},{y})"),
            Literal::Inequality(x, y) => write!(f, "{x} != {y}"),
            Literal::NegatedBinary(r, x, y) => write!(f, "!{r}({x},{y})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub id: String,
    pub distinguished: Option<String>,
    pub literals: Vec<Literal>,
}

impl Component {
    pub fn variables(&self) -> BTreeSet<&str> {
        self.literals.iter().flat_map(Literal::variables).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjunctiveQuery {
    components: Vec<Component>,
    links: Vec<Literal>,
}

pub(crate) fn valid_variable_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl ConjunctiveQuery {
    /// Checks that component ids are unique, variables are renamed apart and
    /// each distinguished variable occurs in its component. Safety is a
    /// separate property, see [`is_safe`].
    pub fn new(components: Vec<Component>, links: Vec<Literal>) -> Result<Self, QueryError> {
        let mut owner: HashMap<&str, &str> = HashMap::new();
        let mut ids = BTreeSet::new();
        for c in &components {
            if !ids.insert(c.id.as_str()) {
                return Err(QueryError::Invalid(format!("component `{}` appears twice", c.id)));
            }
            let vars = c.variables();
            for v in &vars {
                if !valid_variable_name(v) {
                    return Err(QueryError::Invalid(format!("invalid variable name `{v}`")));
                }
                if let Some(other) = owner.insert(v, &c.id) {
                    return Err(QueryError::Invalid(format!(
                        "variable `{v}` occurs in components `{other}` and `{}`",
                        c.id
                    )));
                }
            }
            if let Some(x) = &c.distinguished {
                if !vars.contains(x.as_str()) {
                    return Err(QueryError::Invalid(format!(
                        "distinguished variable `{x}` does not occur in component `{}`",
                        c.id
                    )));
                }
            }
        }
        for l in &links {
            if let Some(v) = l.variables().into_iter().find(|v| !valid_variable_name(v)) {
                return Err(QueryError::Invalid(format!("invalid variable name `{v}`")));
            }
        }
        Ok(ConjunctiveQuery { components, links })
    }

    /// A query with a single component.
    pub fn single(
        id: impl Into<String>,
        distinguished: Option<String>,
        literals: Vec<Literal>,
    ) -> Result<Self, QueryError> {
        Self::new(
            vec![Component {
                id: id.into(),
                distinguished,
                literals,
            }],
            Vec::new(),
        )
    }

    pub fn empty() -> Self {
        ConjunctiveQuery {
            components: Vec::new(),
            links: Vec::new(),
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn links(&self) -> &[Literal] {
        &self.links
    }

    /// Component literals in order, then links.
    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.components
            .iter()
            .flat_map(|c| c.literals.iter())
            .chain(&self.links)
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for l in self.literals() {
            for v in l.variables() {
                if seen.insert(v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// The distinguished variable of the only (or first) component.
    pub fn distinguished(&self) -> Option<&str> {
        self.components.first().and_then(|c| c.distinguished.as_deref())
    }

    pub fn count_literals(&self, pred: impl Fn(&Literal) -> bool) -> usize {
        self.literals().filter(|l| pred(l)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionQuery {
    pub disjuncts: Vec<ConjunctiveQuery>,
}

impl UnionQuery {
    pub fn new(disjuncts: Vec<ConjunctiveQuery>) -> Self {
        UnionQuery { disjuncts }
    }

    pub fn len(&self) -> usize {
        self.disjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disjuncts.is_empty()
    }
}

/// Every variable of an inequality or negated atom also occurs in a positive
/// literal.
pub fn is_safe(q: &ConjunctiveQuery) -> bool {
    first_unsafe_variable(q).is_none()
}

pub(crate) fn first_unsafe_variable(q: &ConjunctiveQuery) -> Option<String> {
    let positive: BTreeSet<&str> = q
        .literals()
        .filter(|l| l.is_positive())
        .flat_map(Literal::variables)
        .collect();
    q.literals()
        .filter(|l| !l.is_positive())
        .flat_map(Literal::variables)
        .find(|v| !positive.contains(v))
        .map(str::to_string)
}
