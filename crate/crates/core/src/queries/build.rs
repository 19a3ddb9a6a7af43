//! The query families of the reduction.
//!
//! Every single-family builder returns a one-component query whose
//! distinguished variable is `x`. Paths `s →w t` are expanded left to right
//! with fresh auxiliaries `u1, u2, …` shared across the component. The
//! combined queries rename each component apart by suffixing `_<tag>`.

use serde::Serialize;

use crate::structures::t_symbol;
use crate::thue::{Symbol, ThueInstance, Word};

use super::{Component, ConjunctiveQuery, Literal, QueryError, UnionQuery};

const X: &str = "x";
const Y: &str = "y";
const Y2: &str = "y'";
const Z: &str = "z";

/// The index set members of the combined queries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum ComponentKind {
    Letter(Symbol),
    LetterBar(Symbol),
    Diamond,
    Rule(usize),
    RuleLeft(usize),
    RuleRight(usize),
}

/// Public id of a component: `a`, `a-bar`, `◇`, `1`, `[l,1]`, `[r,1]`.
pub fn component_id(kind: &ComponentKind) -> String {
    match kind {
        ComponentKind::Letter(s) => s.to_string(),
        ComponentKind::LetterBar(s) => format!("{s}-bar"),
        ComponentKind::Diamond => "◇".into(),
        ComponentKind::Rule(k) => k.to_string(),
        ComponentKind::RuleLeft(k) => format!("[l,{k}]"),
        ComponentKind::RuleRight(k) => format!("[r,{k}]"),
    }
}

/// Suffix used when renaming a component apart. Letter tags carry a prefix
/// so a letter named like a rule tag cannot collide with it.
fn variable_tag(kind: &ComponentKind) -> String {
    match kind {
        ComponentKind::Letter(s) => format!("sym_{s}"),
        ComponentKind::LetterBar(s) => format!("bar_{s}"),
        ComponentKind::Diamond => "dia".into(),
        ComponentKind::Rule(k) => format!("k{k}"),
        ComponentKind::RuleLeft(k) => format!("l{k}"),
        ComponentKind::RuleRight(k) => format!("r{k}"),
    }
}

#[derive(Default)]
struct Builder {
    literals: Vec<Literal>,
    aux: usize,
}

impl Builder {
    fn push(&mut self, l: Literal) {
        self.literals.push(l);
    }

    fn atom(&mut self, r: &Symbol, s: &str, t: &str) {
        self.push(Literal::PositiveBinary(r.clone(), s.into(), t.into()));
    }

    /// `from →w to`; for `w = ε` the caller must already have identified the
    /// endpoints.
    fn path(&mut self, from: &str, w: &Word, to: &str) {
        let n = w.len();
        assert!(n > 0 || from == to, "empty path between distinct variables");
        let mut current = from.to_string();
        for (i, s) in w.iter().enumerate() {
            let next = if i + 1 == n {
                to.to_string()
            } else {
                self.aux += 1;
                format!("u{}", self.aux)
            };
            self.atom(s, &current, &next);
            current = next;
        }
    }

    /// Endpoint variable for a path that may be empty: the start itself
    /// when `w = ε`.
    fn path_to<'a>(&mut self, from: &'a str, w: &Word, to: &'a str) -> &'a str {
        if w.is_empty() {
            from
        } else {
            self.path(from, w, to);
            to
        }
    }

    fn finish(self, kind: &ComponentKind) -> ConjunctiveQuery {
        ConjunctiveQuery::single(component_id(kind), Some(X.into()), self.literals)
            .expect("builders produce valid queries")
    }
}

fn rule_index(inst: &ThueInstance, k: usize) -> Result<(), QueryError> {
    if k == 0 || k > inst.rule_count() {
        return Err(QueryError::IndexOutOfRange {
            index: k,
            count: inst.rule_count(),
        });
    }
    Ok(())
}

fn letter(inst: &ThueInstance, r: &Symbol) -> Result<(), QueryError> {
    if !inst.contains_symbol(r) {
        return Err(QueryError::UnknownSymbol(r.clone()));
    }
    Ok(())
}

/// `γ_k`: `x →l_k y ∧ x →r_k y' ∧ y ≠ y'`.
pub fn build_gamma_k(inst: &ThueInstance, k: usize) -> Result<ConjunctiveQuery, QueryError> {
    rule_index(inst, k)?;
    let rule = inst.rule(k).expect("checked");
    let mut b = Builder::default();
    b.path(X, &rule.left, Y);
    b.path(X, &rule.right, Y2);
    b.push(Literal::Inequality(Y.into(), Y2.into()));
    Ok(b.finish(&ComponentKind::Rule(k)))
}

/// `γ_R`: `R(x,y) ∧ A(y)`.
pub fn build_gamma_r(inst: &ThueInstance, r: &Symbol) -> Result<ConjunctiveQuery, QueryError> {
    letter(inst, r)?;
    let mut b = Builder::default();
    b.atom(r, X, Y);
    b.push(Literal::PositiveUnary(Y.into()));
    Ok(b.finish(&ComponentKind::Letter(r.clone())))
}

/// `γ_◇`: `A(x) ∧ x →l y ∧ x →r y`.
pub fn build_gamma_diamond(inst: &ThueInstance) -> ConjunctiveQuery {
    let mut b = Builder::default();
    b.push(Literal::PositiveUnary(X.into()));
    b.path(X, inst.goal_left(), Y);
    b.path(X, inst.goal_right(), Y);
    b.finish(&ComponentKind::Diamond)
}

/// The same query as [`build_gamma_diamond`], under its other name.
pub fn build_beta_diamond(inst: &ThueInstance) -> ConjunctiveQuery {
    build_gamma_diamond(inst)
}

/// `β_[l,k]`: with `l_k = l'·L`, `x →l' y ∧ x →r_k y' ∧ ¬L(y,y')`.
/// When `l' = ε` the variable `y` is `x` itself.
pub fn build_beta_lk(inst: &ThueInstance, k: usize) -> Result<ConjunctiveQuery, QueryError> {
    rule_index(inst, k)?;
    let rule = inst.rule(k).expect("checked");
    let (prefix, last) = rule.left.split_last().expect("rule sides are non-empty");
    let mut b = Builder::default();
    let y = b.path_to(X, &prefix, Y);
    b.path(X, &rule.right, Y2);
    b.push(Literal::NegatedBinary(last, y.into(), Y2.into()));
    Ok(b.finish(&ComponentKind::RuleLeft(k)))
}

/// `β_[r,k]`: with `r_k = r'·R`, `x →l_k y ∧ x →r' y' ∧ ¬R(y',y)`.
/// When `r' = ε` the variable `y'` is `x` itself.
pub fn build_beta_rk(inst: &ThueInstance, k: usize) -> Result<ConjunctiveQuery, QueryError> {
    rule_index(inst, k)?;
    let rule = inst.rule(k).expect("checked");
    let (prefix, last) = rule.right.split_last().expect("rule sides are non-empty");
    let mut b = Builder::default();
    b.path(X, &rule.left, Y);
    let y2 = b.path_to(X, &prefix, Y2);
    b.push(Literal::NegatedBinary(last, y2.into(), Y.into()));
    Ok(b.finish(&ComponentKind::RuleRight(k)))
}

/// `β_R`: `T(x,y) ∧ R(y,z) ∧ ¬T(x,z)`.
pub fn build_beta_r(inst: &ThueInstance, r: &Symbol) -> Result<ConjunctiveQuery, QueryError> {
    letter(inst, r)?;
    let t = t_symbol();
    let mut b = Builder::default();
    b.atom(&t, X, Y);
    b.atom(r, Y, Z);
    b.push(Literal::NegatedBinary(t, X.into(), Z.into()));
    Ok(b.finish(&ComponentKind::Letter(r.clone())))
}

/// `β_R̄`: `T(x,y) ∧ R(z,y) ∧ ¬T(x,z)`.
pub fn build_beta_rbar(inst: &ThueInstance, r: &Symbol) -> Result<ConjunctiveQuery, QueryError> {
    letter(inst, r)?;
    let t = t_symbol();
    let mut b = Builder::default();
    b.atom(&t, X, Y);
    b.atom(r, Z, Y);
    b.push(Literal::NegatedBinary(t, X.into(), Z.into()));
    Ok(b.finish(&ComponentKind::LetterBar(r.clone())))
}

/// `Γ^≠ = ⋁_k γ_k`.
pub fn build_big_gamma_neq(inst: &ThueInstance) -> UnionQuery {
    UnionQuery::new(
        (1..=inst.rule_count())
            .map(|k| build_gamma_k(inst, k).expect("index in range"))
            .collect(),
    )
}

/// `Γ^¬ = ⋁_k β_[l,k] ∨ β_[r,k]`.
pub fn build_big_gamma_neg(inst: &ThueInstance) -> UnionQuery {
    let mut d = Vec::new();
    for k in 1..=inst.rule_count() {
        d.push(build_beta_lk(inst, k).expect("index in range"));
        d.push(build_beta_rk(inst, k).expect("index in range"));
    }
    UnionQuery::new(d)
}

/// `Ψ = Γ^≠ ∨ γ_◇`.
pub fn build_big_psi(inst: &ThueInstance) -> UnionQuery {
    let mut u = build_big_gamma_neq(inst);
    u.disjuncts.push(build_gamma_diamond(inst));
    u
}

/// `Φ = Γ^¬ ∨ β_◇`.
pub fn build_big_phi(inst: &ThueInstance) -> UnionQuery {
    let mut u = build_big_gamma_neg(inst);
    u.disjuncts.push(build_beta_diamond(inst));
    u
}

fn combine(
    parts: Vec<(ComponentKind, ConjunctiveQuery)>,
    links: impl Fn(&[String]) -> Vec<Literal>,
) -> ConjunctiveQuery {
    let mut components = Vec::with_capacity(parts.len());
    let mut distinguished = Vec::with_capacity(parts.len());
    for (kind, q) in parts {
        let tag = variable_tag(&kind);
        let rename = |v: &str| format!("{v}_{tag}");
        let c = &q.components()[0];
        let x = rename(c.distinguished.as_deref().expect("family queries are distinguished"));
        distinguished.push(x.clone());
        components.push(Component {
            id: component_id(&kind),
            distinguished: Some(x),
            literals: c.literals.iter().map(|l| l.rename(rename)).collect(),
        });
    }
    let links = links(&distinguished);
    ConjunctiveQuery::new(components, links).expect("components are renamed apart")
}

/// `ψ`: components `γ_R` for each letter, `γ_◇`, `γ_k` for each rule, and
/// `x_i ≠ x_j` for every unordered pair of components.
pub fn build_psi(inst: &ThueInstance) -> ConjunctiveQuery {
    let mut parts = Vec::new();
    for r in inst.alphabet() {
        parts.push((
            ComponentKind::Letter(r.clone()),
            build_gamma_r(inst, r).expect("letter"),
        ));
    }
    parts.push((ComponentKind::Diamond, build_gamma_diamond(inst)));
    for k in 1..=inst.rule_count() {
        parts.push((ComponentKind::Rule(k), build_gamma_k(inst, k).expect("index")));
    }
    combine(parts, |xs| {
        let mut links = Vec::new();
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                links.push(Literal::Inequality(xs[i].clone(), xs[j].clone()));
            }
        }
        links
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PhiOptions {
    /// Also forbid `T(x_i,x_j)` between components.
    pub negate_t: bool,
}

/// `φ`: components `β_R`, `β_R̄` for each letter, `β_◇`, then `β_[l,k]`,
/// `β_[r,k]` for each rule; `¬R(x_i,x_j)` for every ordered pair of distinct
/// components and every letter `R`.
pub fn build_phi(inst: &ThueInstance, options: PhiOptions) -> ConjunctiveQuery {
    let mut parts = Vec::new();
    for r in inst.alphabet() {
        parts.push((ComponentKind::Letter(r.clone()), build_beta_r(inst, r).expect("letter")));
    }
    for r in inst.alphabet() {
        parts.push((
            ComponentKind::LetterBar(r.clone()),
            build_beta_rbar(inst, r).expect("letter"),
        ));
    }
    parts.push((ComponentKind::Diamond, build_beta_diamond(inst)));
    for k in 1..=inst.rule_count() {
        parts.push((ComponentKind::RuleLeft(k), build_beta_lk(inst, k).expect("index")));
        parts.push((ComponentKind::RuleRight(k), build_beta_rk(inst, k).expect("index")));
    }
    let mut relations: Vec<Symbol> = inst.alphabet().to_vec();
    if options.negate_t {
        relations.push(t_symbol());
    }
    combine(parts, |xs| {
        let mut links = Vec::new();
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                if i == j {
                    continue;
                }
                for r in &relations {
                    links.push(Literal::NegatedBinary(r.clone(), xs[i].clone(), xs[j].clone()));
                }
            }
        }
        links
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::queries::is_safe;
    use crate::thue::test_util::*;

    fn lits(q: &ConjunctiveQuery) -> Vec<String> {
        q.literals().map(ToString::to_string).collect()
    }

    fn binary(q: &ConjunctiveQuery) -> usize {
        q.count_literals(|l| matches!(l, Literal::PositiveBinary(..)))
    }

    #[test]
    fn gamma_k_expands_paths() {
        let i = inst("ab", &[("ab", "ba")], "aab", "aba");
        let q = build_gamma_k(&i, 1).unwrap();
        assert_eq!(lits(&q), ["a(x,u1)", "b(u1,y)", "b(x,u2)", "a(u2,y')", "y != y'"]);
        assert_eq!(q.distinguished(), Some("x"));
        assert!(matches!(
            build_gamma_k(&i, 2),
            Err(QueryError::IndexOutOfRange { index: 2, count: 1 })
        ));
        assert!(build_gamma_k(&i, 0).is_err());

        let short = inst("ab", &[("a", "b")], "a", "b");
        let q = build_gamma_k(&short, 1).unwrap();
        assert_eq!(binary(&q), 2);
        assert_eq!(q.count_literals(|l| matches!(l, Literal::Inequality(..))), 1);
    }

    #[test]
    fn gamma_r_and_diamond() {
        let i = inst("a", &[], "a", "aa");
        assert_eq!(lits(&build_gamma_r(&i, &sym("a")).unwrap()), ["a(x,y)", "A(y)"]);
        assert_eq!(build_gamma_r(&i, &sym("b")), Err(QueryError::UnknownSymbol(sym("b"))));
        assert_eq!(lits(&build_gamma_diamond(&i)), ["A(x)", "a(x,y)", "a(x,u1)", "a(u1,y)"]);
        assert_eq!(build_beta_diamond(&i), build_gamma_diamond(&i));
    }

    #[test]
    fn beta_rule_splits() {
        let i = inst("ab", &[("ab", "ba")], "a", "b");
        assert_eq!(
            lits(&build_beta_rk(&i, 1).unwrap()),
            ["a(x,u1)", "b(u1,y)", "b(x,y')", "!a(y',y)"]
        );
        assert_eq!(
            lits(&build_beta_lk(&i, 1).unwrap()),
            ["a(x,y)", "b(x,u1)", "a(u1,y')", "!b(y,y')"]
        );

        // Length-one sides: the empty prefix identifies the endpoint with x.
        let short = inst("ab", &[("a", "b")], "a", "b");
        assert_eq!(lits(&build_beta_lk(&short, 1).unwrap()), ["b(x,y')", "!a(x,y')"]);
        assert_eq!(lits(&build_beta_rk(&short, 1).unwrap()), ["a(x,y)", "!b(x,y)"]);
        assert!(is_safe(&build_beta_lk(&short, 1).unwrap()));
    }

    #[test]
    fn beta_letters() {
        let i = inst("a", &[], "a", "aa");
        assert_eq!(
            lits(&build_beta_r(&i, &sym("a")).unwrap()),
            ["T(x,y)", "a(y,z)", "!T(x,z)"]
        );
        assert_eq!(
            lits(&build_beta_rbar(&i, &sym("a")).unwrap()),
            ["T(x,y)", "a(z,y)", "!T(x,z)"]
        );
    }

    #[test]
    fn union_sizes() {
        let one = inst("a", &[("aa", "a")], "a", "aa");
        assert_eq!(build_big_gamma_neq(&one).len(), 1);
        assert_eq!(build_big_gamma_neg(&one).len(), 2);
        assert_eq!(build_big_psi(&one).len(), 2);
        assert_eq!(build_big_phi(&one).len(), 3);
        let none = inst("a", &[], "a", "aa");
        assert!(build_big_gamma_neq(&none).is_empty());
        assert_eq!(
            build_big_psi(&none).disjuncts.last().unwrap(),
            &build_gamma_diamond(&none)
        );
    }

    #[test]
    fn psi_shape() {
        let i = inst("ab", &[("ab", "ba")], "a", "b");
        let q = build_psi(&i);
        let ids: Vec<_> = q.components().iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "◇", "1"]);
        assert_eq!(q.links().len(), 6);
        assert!(q.links().iter().all(|l| matches!(l, Literal::Inequality(..))));
        assert!(is_safe(&q));

        let small = build_psi(&inst("a", &[], "a", "aa"));
        assert_eq!(small.components().len(), 2);
        assert_eq!(small.links().len(), 1);
        assert_eq!(small.links()[0].to_string(), "x_sym_a != x_dia");
    }

    #[test]
    fn phi_shape() {
        let i = inst("a", &[("aa", "a")], "a", "aa");
        let q = build_phi(&i, PhiOptions::default());
        let ids: Vec<_> = q.components().iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["a", "a-bar", "◇", "[l,1]", "[r,1]"]);
        assert_eq!(q.links().len(), 20);
        assert!(is_safe(&q));
        let with_t = build_phi(&i, PhiOptions { negate_t: true });
        assert_eq!(with_t.links().len(), 40);

        let none = build_phi(&inst("a", &[], "a", "aa"), PhiOptions::default());
        assert_eq!(none.components().len(), 3);
    }
}
