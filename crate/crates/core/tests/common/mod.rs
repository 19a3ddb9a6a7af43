//! Reference implementations used as oracles by the integration tests.
//!
//! Nothing here calls the evaluator. Satisfiability is decided either by
//! enumerating every total assignment, or by plain backtracking in
//! first-occurrence order that checks each literal as soon as its variables
//! are bound. Combined queries are additionally split into components: the
//! host set of each component is computed by backtracking, and the links
//! (which for the built queries impose the same binary constraint on every
//! pair of components) are solved by a dynamic program over sets of used
//! vertices.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thue2dlite_core::queries::{Component, ConjunctiveQuery, Literal};
use thue2dlite_core::structures::{Signature, Structure, VertexId};
use thue2dlite_core::thue::{parse_thue, ThueInstance, Word};

pub fn instance(text: &str) -> ThueInstance {
    parse_thue(text).unwrap()
}

pub fn sig(letters: &[&str]) -> Signature {
    Signature::new(
        letters
            .iter()
            .map(|l| thue2dlite_core::thue::Symbol::new(l).unwrap())
            .collect(),
    )
    .unwrap()
}

fn value(a: &HashMap<&str, VertexId>, x: &str) -> Option<VertexId> {
    a.get(x).copied()
}

/// Truth of a literal; `None` while a variable is unbound.
pub fn literal_holds(d: &Structure, l: &Literal, a: &HashMap<&str, VertexId>) -> Option<bool> {
    Some(match l {
        Literal::PositiveUnary(x) => d.has_a(value(a, x)?),
        Literal::PositiveBinary(r, x, y) => d.has_edge(r, value(a, x)?, value(a, y)?),
        Literal::Inequality(x, y) => value(a, x)? != value(a, y)?,
        Literal::NegatedBinary(r, x, y) => !d.has_edge(r, value(a, x)?, value(a, y)?),
    })
}

fn literals_of(q: &ConjunctiveQuery) -> Vec<&Literal> {
    q.literals().collect()
}

/// Every total assignment, counted. Only for tiny inputs.
pub fn naive_count(d: &Structure, q: &ConjunctiveQuery) -> u64 {
    let vars = q.variables();
    let lits = literals_of(q);
    let n = d.vertex_count();
    if vars.is_empty() {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    let mut a: HashMap<&str, VertexId> = vars.iter().map(|&x| (x, 0)).collect();
    let mut count = 0;
    loop {
        if lits.iter().all(|l| literal_holds(d, l, &a) == Some(true)) {
            count += 1;
        }
        // Odometer step over the variables in order.
        let mut i = 0;
        loop {
            if i == vars.len() {
                return count;
            }
            let slot = a.get_mut(vars[i]).expect("every variable is bound");
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
            i += 1;
        }
    }
}

pub fn naive(d: &Structure, q: &ConjunctiveQuery) -> bool {
    naive_count(d, q) > 0
}

/// Assignment space size, saturating.
pub fn space(d: &Structure, q: &ConjunctiveQuery) -> u64 {
    (d.vertex_count() as u64).saturating_pow(q.variables().len() as u32)
}

/// Backtracking over the variables of `lits`, with some variables fixed in
/// advance. Calls `visit` on every full satisfying assignment until it
/// returns `false`.
fn backtrack<'a>(
    d: &Structure,
    vars: &[&'a str],
    lits: &[&'a Literal],
    a: &mut HashMap<&'a str, VertexId>,
    i: usize,
    visit: &mut dyn FnMut(&HashMap<&'a str, VertexId>) -> bool,
) -> bool {
    if i == vars.len() {
        return visit(a);
    }
    for v in 0..d.vertex_count() {
        a.insert(vars[i], v);
        if lits.iter().all(|l| literal_holds(d, l, a) != Some(false)) && !backtrack(d, vars, lits, a, i + 1, visit) {
            a.remove(vars[i]);
            return false;
        }
    }
    a.remove(vars[i]);
    true
}

fn first_occurrence<'a>(lits: &[&'a Literal]) -> Vec<&'a str> {
    let mut seen = Vec::new();
    for l in lits {
        for x in l.variables() {
            if !seen.contains(&x) {
                seen.push(x);
            }
        }
    }
    seen
}

/// Satisfiable by backtracking over all variables.
pub fn backtracking(d: &Structure, q: &ConjunctiveQuery) -> bool {
    let lits = literals_of(q);
    let vars = first_occurrence(&lits);
    if vars.is_empty() {
        return lits.is_empty();
    }
    let mut found = false;
    backtrack(d, &vars, &lits, &mut HashMap::new(), 0, &mut |_| {
        found = true;
        false
    });
    found
}

/// Every satisfying assignment, by backtracking.
pub fn all_solutions(d: &Structure, q: &ConjunctiveQuery) -> Vec<BTreeMap<String, VertexId>> {
    let lits = literals_of(q);
    let vars = first_occurrence(&lits);
    let mut out = Vec::new();
    backtrack(d, &vars, &lits, &mut HashMap::new(), 0, &mut |a| {
        out.push(a.iter().map(|(k, &v)| (k.to_string(), v)).collect());
        true
    });
    out
}

/// Vertices the distinguished variable of `c` can take when `c` is solved
/// alone.
pub fn hosts(d: &Structure, c: &Component) -> BTreeSet<VertexId> {
    let lits: Vec<&Literal> = c.literals.iter().collect();
    let x = c
        .distinguished
        .as_deref()
        .expect("component with a distinguished variable");
    let vars: Vec<&str> = first_occurrence(&lits).into_iter().filter(|v| *v != x).collect();
    let mut out = BTreeSet::new();
    for v in 0..d.vertex_count() {
        let mut a = HashMap::from([(x, v)]);
        if lits.iter().any(|l| literal_holds(d, l, &a) == Some(false)) {
            continue;
        }
        let mut found = false;
        backtrack(d, &vars, &lits, &mut a, 0, &mut |_| {
            found = true;
            false
        });
        if found {
            out.insert(v);
        }
    }
    out
}

fn rename(l: &Literal, m: &BTreeMap<String, String>) -> Literal {
    let f = |x: &String| m.get(x).cloned().unwrap_or_else(|| x.clone());
    match l {
        Literal::PositiveUnary(x) => Literal::PositiveUnary(f(x)),
        Literal::PositiveBinary(r, x, y) => Literal::PositiveBinary(r.clone(), f(x), f(y)),
        Literal::Inequality(x, y) => Literal::Inequality(f(x), f(y)),
        Literal::NegatedBinary(r, x, y) => Literal::NegatedBinary(r.clone(), f(x), f(y)),
    }
}

/// Inequalities are symmetric; write them with the smaller name first.
fn normalize(l: Literal) -> String {
    match l {
        Literal::Inequality(x, y) if x > y => Literal::Inequality(y, x).to_string(),
        other => other.to_string(),
    }
}

/// The link literals between two components, with their distinguished
/// variables renamed to `first` and `second`, as a canonical key.
fn pair_key(q: &ConjunctiveQuery, xi: &str, xj: &str, first: &str, second: &str) -> BTreeSet<String> {
    let m = BTreeMap::from([
        (xi.to_string(), first.to_string()),
        (xj.to_string(), second.to_string()),
    ]);
    q.links()
        .iter()
        .filter(|l| {
            let vars = l.variables();
            vars.iter().all(|v| *v == xi || *v == xj) && vars.contains(&xi) && vars.contains(&xj)
        })
        .map(|l| normalize(rename(l, &m)))
        .collect()
}

/// Decomposed decision: component host sets, then a set DP over the links.
/// Returns `None` when the query does not have the uniform pairwise link
/// shape the DP needs.
pub fn decomposed(d: &Structure, q: &ConjunctiveQuery) -> Option<bool> {
    let comps = q.components();
    let xs: Vec<&str> = comps
        .iter()
        .map(|c| c.distinguished.as_deref())
        .collect::<Option<_>>()?;
    let key = |i: usize, j: usize| pair_key(q, xs[i], xs[j], "X", "Y");
    let covered: usize = (0..comps.len())
        .flat_map(|i| (i + 1..comps.len()).map(move |j| (i, j)))
        .map(|(i, j)| key(i, j).len())
        .sum();
    if covered != q.links().len() {
        return None;
    }
    let shape = if comps.len() > 1 { key(0, 1) } else { BTreeSet::new() };
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            if key(i, j) != shape {
                return None;
            }
        }
    }
    if comps.len() > 1 && pair_key(q, xs[0], xs[1], "Y", "X") != shape {
        return None;
    }
    // compat(u, v): the shape holds with X = u, Y = v, read in both orders.
    let shape_lits: Vec<Literal> = if comps.len() > 1 {
        let m = BTreeMap::from([
            (xs[0].to_string(), "X".to_string()),
            (xs[1].to_string(), "Y".to_string()),
        ]);
        q.links()
            .iter()
            .map(|l| rename(l, &m))
            .filter(|l| l.variables().iter().all(|v| *v == "X" || *v == "Y"))
            .collect()
    } else {
        Vec::new()
    };
    let compat = |u: VertexId, v: VertexId| {
        let a = HashMap::from([("X", u), ("Y", v)]);
        let b = HashMap::from([("X", v), ("Y", u)]);
        shape_lits
            .iter()
            .all(|l| literal_holds(d, l, &a) == Some(true) && literal_holds(d, l, &b) == Some(true))
    };
    let host_sets: Vec<BTreeSet<VertexId>> = comps.iter().map(|c| hosts(d, c)).collect();
    // States: sets of vertices used so far (as sorted vectors).
    let mut states: HashSet<Vec<VertexId>> = HashSet::from([Vec::new()]);
    for hs in &host_sets {
        let mut next = HashSet::new();
        for s in &states {
            for &v in hs {
                if s.iter().all(|&u| compat(u, v)) && (!s.contains(&v) || compat(v, v)) {
                    let mut t = s.clone();
                    if !t.contains(&v) {
                        t.push(v);
                        t.sort_unstable();
                    }
                    next.insert(t);
                }
            }
        }
        if next.is_empty() {
            return Some(false);
        }
        states = next;
    }
    Some(true)
}

/// The most appropriate oracle for the size of the input.
pub fn oracle(d: &Structure, q: &ConjunctiveQuery) -> bool {
    if space(d, q) <= 200_000 {
        return naive(d, q);
    }
    if q.components().len() > 1 {
        if let Some(answer) = decomposed(d, q) {
            return answer;
        }
    }
    backtracking(d, q)
}

/// Endpoints of `w` from `s`, walked letter by letter.
pub fn walk_oracle(d: &Structure, s: VertexId, w: &Word) -> BTreeSet<VertexId> {
    let mut current = BTreeSet::from([s]);
    for r in w.iter() {
        current = current
            .iter()
            .flat_map(|&u| (0..d.vertex_count()).filter(move |&v| d.has_edge(r, u, v)))
            .collect();
    }
    current
}

/// Perfection recomputed from scratch: reachability over the alphabet from
/// the constant `a`, then rule endpoints from every reachable vertex.
pub fn perfect_oracle(d: &Structure, inst: &ThueInstance) -> bool {
    let a = d.constant("a").unwrap();
    let mut reach = BTreeSet::from([a]);
    let mut frontier = vec![a];
    while let Some(u) = frontier.pop() {
        for r in inst.alphabet() {
            for v in 0..d.vertex_count() {
                if d.has_edge(r, u, v) && reach.insert(v) {
                    frontier.push(v);
                }
            }
        }
    }
    reach.iter().all(|&s| {
        inst.rules()
            .iter()
            .all(|rule| walk_oracle(d, s, &rule.left) == walk_oracle(d, s, &rule.right))
    })
}

/// Candidate conditions recomputed from scratch.
pub fn candidate_oracle(d: &Structure, sig: &Signature) -> bool {
    let a = d.constant("a").unwrap();
    let t = thue2dlite_core::structures::t_symbol();
    if !d.has_a(a) || !d.has_edge(&t, a, a) {
        return false;
    }
    let n = d.vertex_count();
    let has_succ = |r, v| (0..n).any(|w| d.has_edge(r, v, w));
    (0..n).all(|v| {
        let entered = sig.letters().iter().any(|r| (0..n).any(|u| d.has_edge(r, u, v)));
        !(d.has_a(v) || entered) || sig.letters().iter().all(|r| has_succ(r, v))
    })
}

/// Every literal of `q` holds under `a`, checked one by one.
pub fn revalidate(d: &Structure, q: &ConjunctiveQuery, a: &BTreeMap<String, VertexId>) -> bool {
    let a: HashMap<&str, VertexId> = a.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    q.literals().all(|l| literal_holds(d, l, &a) == Some(true))
}

pub fn fixture_path(id: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{id}.thue"))
}

/// Every query the builders produce for `inst`, named.
pub fn built_queries(inst: &ThueInstance) -> Vec<(String, ConjunctiveQuery)> {
    use thue2dlite_core::queries::*;
    let mut out = Vec::new();
    for k in 1..=inst.rule_count() {
        out.push((format!("gamma_{k}"), build_gamma_k(inst, k).unwrap()));
        out.push((format!("beta_[l,{k}]"), build_beta_lk(inst, k).unwrap()));
        out.push((format!("beta_[r,{k}]"), build_beta_rk(inst, k).unwrap()));
    }
    for r in inst.alphabet() {
        out.push((format!("gamma_{r}"), build_gamma_r(inst, r).unwrap()));
        out.push((format!("beta_{r}"), build_beta_r(inst, r).unwrap()));
        out.push((format!("beta_{r}-bar"), build_beta_rbar(inst, r).unwrap()));
    }
    out.push(("gamma_diamond".into(), build_gamma_diamond(inst)));
    out.push(("beta_diamond".into(), build_beta_diamond(inst)));
    out.push(("psi".into(), build_psi(inst)));
    out.push(("phi".into(), build_phi(inst, PhiOptions::default())));
    out.push(("phi_negate_t".into(), build_phi(inst, PhiOptions { negate_t: true })));
    out
}
