//! Homomorphism search for conjunctive queries with `≠` and safe negation.
//!
//! Domains are vertex bitsets. Unary atoms and self-loops filter the initial
//! domains, arc consistency runs over positive binary atoms, and the search
//! assigns the variable with the smallest domain (ties: highest degree,
//! then first occurrence) with forward checking on every literal.
//!
//! When every component of the query meets the links in at most one
//! variable, each component is solved on its own for every candidate value
//! of that variable, and only the resulting value sets enter the search over
//! the links. Groups of link variables that can never share a value are
//! additionally checked with a bipartite matching, which settles
//! pigeonhole-shaped queries such as `ψ` and `φ` without enumerating
//! permutations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::structures::{Structure, VertexId};
use crate::thue::Symbol;

use super::{first_unsafe_variable, ConjunctiveQuery, Literal, QueryError, UnionQuery};

pub type Assignment = BTreeMap<String, VertexId>;

/// Adjacency bitsets of one relation.
struct Matrix {
    out: Vec<u64>,
    inn: Vec<u64>,
}

/// A structure prepared for repeated query evaluation.
pub struct Evaluator<'a> {
    structure: &'a Structure,
    n: usize,
    width: usize,
    a_set: Vec<u64>,
    relations: HashMap<Symbol, usize>,
    matrices: Vec<Matrix>,
    full: Vec<u64>,
}

#[derive(Clone, Copy)]
enum Kind {
    Pos(usize),
    Neg(usize),
    Neq,
}

#[derive(Clone, Copy)]
struct Con {
    kind: Kind,
    a: usize,
    b: usize,
}

struct Compiled {
    names: Vec<String>,
    cons: Vec<Con>,
    adj: Vec<Vec<usize>>,
    /// Variables of each component, and the constraints they own.
    components: Vec<(Vec<usize>, Vec<usize>)>,
    link_cons: Vec<usize>,
}

fn bit(v: usize) -> (usize, u64) {
    (v / 64, 1u64 << (v % 64))
}

impl<'a> Evaluator<'a> {
    pub fn new(structure: &'a Structure) -> Self {
        let n = structure.vertex_count();
        let width = n.div_ceil(64).max(1);
        let mut full = vec![0u64; width];
        for v in 0..n {
            let (w, b) = bit(v);
            full[w] |= b;
        }
        let mut a_set = vec![0u64; width];
        for &v in structure.a_vertices() {
            let (w, b) = bit(v);
            a_set[w] |= b;
        }
        let mut relations = HashMap::new();
        // Index 0 is the empty relation used for symbols the structure lacks.
        let mut matrices = vec![Matrix {
            out: vec![0; n * width],
            inn: vec![0; n * width],
        }];
        for r in structure.relations() {
            let mut m = Matrix {
                out: vec![0; n * width],
                inn: vec![0; n * width],
            };
            for (s, t) in structure.edges(r) {
                let (w, b) = bit(t);
                m.out[s * width + w] |= b;
                let (w, b) = bit(s);
                m.inn[t * width + w] |= b;
            }
            relations.insert(r.clone(), matrices.len());
            matrices.push(m);
        }
        Evaluator {
            structure,
            n,
            width,
            a_set,
            relations,
            matrices,
            full,
        }
    }

    pub fn structure(&self) -> &Structure {
        self.structure
    }

    fn rel(&self, r: &Symbol) -> usize {
        self.relations.get(r).copied().unwrap_or(0)
    }

    fn out_row(&self, rel: usize, v: usize) -> &[u64] {
        &self.matrices[rel].out[v * self.width..(v + 1) * self.width]
    }

    fn in_row(&self, rel: usize, v: usize) -> &[u64] {
        &self.matrices[rel].inn[v * self.width..(v + 1) * self.width]
    }

    fn has(&self, rel: usize, s: usize, t: usize) -> bool {
        let (w, b) = bit(t);
        self.out_row(rel, s)[w] & b != 0
    }

    fn compile(&self, q: &ConjunctiveQuery) -> Compiled {
        let names: Vec<String> = q.variables().into_iter().map(str::to_string).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut cons = Vec::new();
        let mut adj = vec![Vec::new(); names.len()];
        let mut push = |l: &Literal, cons: &mut Vec<Con>| -> Option<usize> {
            let (kind, a, b) = match l {
                Literal::PositiveUnary(_) => return None,
                Literal::PositiveBinary(r, x, y) => (Kind::Pos(self.rel(r)), x, y),
                Literal::NegatedBinary(r, x, y) => (Kind::Neg(self.rel(r)), x, y),
                Literal::Inequality(x, y) => (Kind::Neq, x, y),
            };
            let (a, b) = (index[a.as_str()], index[b.as_str()]);
            let id = cons.len();
            cons.push(Con { kind, a, b });
            adj[a].push(id);
            if b != a {
                adj[b].push(id);
            }
            Some(id)
        };
        let mut components = Vec::new();
        for c in q.components() {
            let vars: Vec<usize> = c.variables().into_iter().map(|v| index[v]).collect();
            let owned: Vec<usize> = c.literals.iter().filter_map(|l| push(l, &mut cons)).collect();
            components.push((vars, owned));
        }
        let link_cons = q.links().iter().filter_map(|l| push(l, &mut cons)).collect();
        Compiled {
            names,
            cons,
            adj,
            components,
            link_cons,
        }
    }

    fn initial_domains(&self, q: &ConjunctiveQuery, cq: &Compiled) -> Option<Vec<u64>> {
        let w = self.width;
        let mut doms: Vec<u64> = Vec::with_capacity(cq.names.len() * w);
        for _ in &cq.names {
            doms.extend_from_slice(&self.full);
        }
        let index: HashMap<&str, usize> = cq.names.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        for l in q.literals() {
            if let Literal::PositiveUnary(x) = l {
                let x = index[x.as_str()];
                for k in 0..w {
                    doms[x * w + k] &= self.a_set[k];
                }
            }
        }
        for c in &cq.cons {
            if c.a != c.b {
                continue;
            }
            match c.kind {
                Kind::Neq => return None,
                Kind::Pos(r) | Kind::Neg(r) => {
                    let keep_loops = matches!(c.kind, Kind::Pos(_));
                    for v in 0..self.n {
                        if self.has(r, v, v) != keep_loops {
                            let (k, b) = bit(v);
                            doms[c.a * w + k] &= !b;
                        }
                    }
                }
            }
        }
        Some(doms)
    }

    fn is_empty(&self, doms: &[u64], x: usize) -> bool {
        doms[x * self.width..(x + 1) * self.width].iter().all(|&b| b == 0)
    }

    fn size(&self, doms: &[u64], x: usize) -> u32 {
        doms[x * self.width..(x + 1) * self.width]
            .iter()
            .map(|b| b.count_ones())
            .sum()
    }

    fn values(&self, doms: &[u64], x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &word) in doms[x * self.width..(x + 1) * self.width].iter().enumerate() {
            let mut b = word;
            while b != 0 {
                out.push(k * 64 + b.trailing_zeros() as usize);
                b &= b - 1;
            }
        }
        out
    }

    fn set_single(&self, doms: &mut [u64], x: usize, v: usize) {
        let w = self.width;
        doms[x * w..(x + 1) * w].fill(0);
        let (k, b) = bit(v);
        doms[x * w + k] = b;
    }

    /// Arc consistency over the positive binary atoms among `active`.
    fn arc_consistency(&self, cq: &Compiled, active: &[bool], doms: &mut [u64]) -> bool {
        let w = self.width;
        let mut queue: Vec<usize> = (0..cq.cons.len())
            .filter(|&c| active[c] && matches!(cq.cons[c].kind, Kind::Pos(_)) && cq.cons[c].a != cq.cons[c].b)
            .collect();
        let mut queued: HashSet<usize> = queue.iter().copied().collect();
        while let Some(ci) = queue.pop() {
            queued.remove(&ci);
            let c = cq.cons[ci];
            let Kind::Pos(r) = c.kind else { unreachable!() };
            for (x, y, forward) in [(c.a, c.b, true), (c.b, c.a, false)] {
                let mut changed = false;
                for v in self.values(doms, x) {
                    let row = if forward { self.out_row(r, v) } else { self.in_row(r, v) };
                    let supported = (0..w).any(|k| row[k] & doms[y * w + k] != 0);
                    if !supported {
                        let (k, b) = bit(v);
                        doms[x * w + k] &= !b;
                        changed = true;
                    }
                }
                if changed {
                    if self.is_empty(doms, x) {
                        return false;
                    }
                    for &other in &cq.adj[x] {
                        if other != ci
                            && active[other]
                            && matches!(cq.cons[other].kind, Kind::Pos(_))
                            && cq.cons[other].a != cq.cons[other].b
                            && queued.insert(other)
                        {
                            queue.push(other);
                        }
                    }
                }
            }
        }
        true
    }

    /// Forward checking after `x := v`.
    fn propagate(&self, cq: &Compiled, active: &[bool], doms: &mut [u64], x: usize, v: usize) -> bool {
        let w = self.width;
        for &ci in &cq.adj[x] {
            if !active[ci] {
                continue;
            }
            let c = cq.cons[ci];
            if c.a == c.b {
                continue;
            }
            let (y, forward) = if c.a == x { (c.b, true) } else { (c.a, false) };
            match c.kind {
                Kind::Pos(r) | Kind::Neg(r) => {
                    let row = if forward { self.out_row(r, v) } else { self.in_row(r, v) };
                    let negate = matches!(c.kind, Kind::Neg(_));
                    for k in 0..w {
                        let mask = if negate { !row[k] } else { row[k] };
                        doms[y * w + k] &= mask;
                    }
                }
                Kind::Neq => {
                    let (k, b) = bit(v);
                    doms[y * w + k] &= !b;
                }
            }
            if self.is_empty(doms, y) {
                return false;
            }
        }
        true
    }

    fn search(&self, ctx: &Search<'_>, doms: &mut Vec<u64>, assign: &mut [Option<usize>]) -> bool {
        let mut best: Option<(u32, usize, usize)> = None;
        for &x in ctx.vars {
            if assign[x].is_some() {
                continue;
            }
            let size = self.size(doms, x);
            if size == 0 {
                return false;
            }
            let deg = ctx.degree[x];
            let better = match best {
                None => true,
                Some((s, d, _)) => size < s || (size == s && deg > d),
            };
            if better {
                best = Some((size, deg, x));
            }
        }
        let Some((_, _, x)) = best else {
            return true;
        };
        for v in self.values(doms, x) {
            let saved = doms.clone();
            assign[x] = Some(v);
            self.set_single(doms, x, v);
            if self.propagate(ctx.cq, ctx.active, doms, x, v)
                && ctx.cliques.iter().all(|c| self.hall_ok(c, doms))
                && self.search(ctx, doms, assign)
            {
                return true;
            }
            *doms = saved;
        }
        assign[x] = None;
        false
    }

    /// A perfect matching of `clique` into values exists.
    fn hall_ok(&self, clique: &[usize], doms: &[u64]) -> bool {
        let options: Vec<Vec<usize>> = clique.iter().map(|&x| self.values(doms, x)).collect();
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for i in 0..options.len() {
            let mut seen = HashSet::new();
            if !augment(i, &options, &mut owner, &mut seen) {
                return false;
            }
        }
        true
    }

    pub fn evaluate(&self, q: &ConjunctiveQuery) -> Result<Option<Assignment>, QueryError> {
        self.evaluate_restricted(q, &BTreeMap::new())
    }

    /// As [`Evaluator::evaluate`], with the listed variables confined to the
    /// given vertices.
    pub fn evaluate_restricted(
        &self,
        q: &ConjunctiveQuery,
        restrict: &BTreeMap<String, BTreeSet<VertexId>>,
    ) -> Result<Option<Assignment>, QueryError> {
        if let Some(v) = first_unsafe_variable(q) {
            return Err(QueryError::UnsafeQuery(v));
        }
        let cq = self.compile(q);
        let Some(mut doms) = self.initial_domains(q, &cq) else {
            return Ok(None);
        };
        let w = self.width;
        for (name, allowed) in restrict {
            let Some(x) = cq.names.iter().position(|n| n == name) else {
                continue;
            };
            let mut mask = vec![0u64; w];
            for &v in allowed.iter().filter(|&&v| v < self.n) {
                let (k, b) = bit(v);
                mask[k] |= b;
            }
            for k in 0..w {
                doms[x * w + k] &= mask[k];
            }
        }
        let all_active = vec![true; cq.cons.len()];
        if (0..cq.names.len()).any(|x| self.is_empty(&doms, x)) || !self.arc_consistency(&cq, &all_active, &mut doms) {
            return Ok(None);
        }
        let found = self.solve(&cq, doms);
        Ok(found.map(|assign| {
            assign
                .into_iter()
                .enumerate()
                .map(|(i, v)| (cq.names[i].clone(), v.expect("total assignment")))
                .collect()
        }))
    }

    fn solve(&self, cq: &Compiled, doms: Vec<u64>) -> Option<Vec<Option<usize>>> {
        let nvars = cq.names.len();
        let mut link_vars: BTreeSet<usize> = BTreeSet::new();
        for &ci in &cq.link_cons {
            link_vars.insert(cq.cons[ci].a);
            link_vars.insert(cq.cons[ci].b);
        }
        let interfaces: Vec<Vec<usize>> = cq
            .components
            .iter()
            .map(|(vars, _)| vars.iter().copied().filter(|v| link_vars.contains(v)).collect())
            .collect();
        if interfaces.iter().any(|i| i.len() > 1) {
            return self.solve_whole(cq, doms);
        }

        let mut assign: Vec<Option<usize>> = vec![None; nvars];
        let mut cross_doms = doms.clone();
        // Per component: the witness for each feasible interface value.
        let mut witnesses: Vec<HashMap<usize, Vec<Option<usize>>>> = Vec::new();
        for ((vars, owned), iface) in cq.components.iter().zip(&interfaces) {
            let mut active = vec![false; cq.cons.len()];
            for &c in owned {
                active[c] = true;
            }
            let degree = degrees(cq, &active);
            let ctx = Search {
                cq,
                vars,
                active: &active,
                degree: &degree,
                cliques: &[],
            };
            match iface.first() {
                None => {
                    let mut local = doms.clone();
                    let mut a = vec![None; nvars];
                    if !self.search(&ctx, &mut local, &mut a) {
                        return None;
                    }
                    merge(&mut assign, &a);
                    witnesses.push(HashMap::new());
                }
                Some(&x) => {
                    let mut feasible = HashMap::new();
                    for v in self.values(&doms, x) {
                        let mut local = doms.clone();
                        let mut a = vec![None; nvars];
                        a[x] = Some(v);
                        self.set_single(&mut local, x, v);
                        if self.propagate(cq, &active, &mut local, x, v) && self.search(&ctx, &mut local, &mut a) {
                            feasible.insert(v, a);
                        }
                    }
                    if feasible.is_empty() {
                        return None;
                    }
                    let row = &mut cross_doms[x * self.width..(x + 1) * self.width];
                    row.fill(0);
                    for &v in feasible.keys() {
                        let (k, b) = bit(v);
                        row[k] |= b;
                    }
                    witnesses.push(feasible);
                }
            }
        }

        let cross_vars: Vec<usize> = link_vars.iter().copied().collect();
        let mut active = vec![false; cq.cons.len()];
        for &c in &cq.link_cons {
            active[c] = true;
        }
        let cliques = self.exclusive_cliques(cq, &cross_vars, &active, &cross_doms);
        if !cliques.iter().all(|c| self.hall_ok(c, &cross_doms)) {
            return None;
        }
        let degree = degrees(cq, &active);
        let ctx = Search {
            cq,
            vars: &cross_vars,
            active: &active,
            degree: &degree,
            cliques: &cliques,
        };
        let mut cross = vec![None; nvars];
        if !self.search(&ctx, &mut cross_doms, &mut cross) {
            return None;
        }
        merge(&mut assign, &cross);
        for (iface, feasible) in interfaces.iter().zip(&witnesses) {
            if let Some(&x) = iface.first() {
                let v = cross[x].expect("link variable assigned");
                merge(&mut assign, &feasible[&v]);
            }
        }
        Some(assign)
    }

    fn solve_whole(&self, cq: &Compiled, mut doms: Vec<u64>) -> Option<Vec<Option<usize>>> {
        let vars: Vec<usize> = (0..cq.names.len()).collect();
        let active = vec![true; cq.cons.len()];
        let degree = degrees(cq, &active);
        let ctx = Search {
            cq,
            vars: &vars,
            active: &active,
            degree: &degree,
            cliques: &[],
        };
        let mut assign = vec![None; vars.len()];
        self.search(&ctx, &mut doms, &mut assign).then_some(assign)
    }

    /// Greedy cover of the link variables by groups in which no two
    /// variables can take the same value.
    fn exclusive_cliques(&self, cq: &Compiled, vars: &[usize], active: &[bool], doms: &[u64]) -> Vec<Vec<usize>> {
        let exclusive = |i: usize, j: usize| -> bool {
            let shared: Vec<usize> = self
                .values(doms, i)
                .into_iter()
                .filter(|&v| {
                    let (k, b) = bit(v);
                    doms[j * self.width + k] & b != 0
                })
                .collect();
            shared.iter().all(|&v| {
                cq.adj[i].iter().any(|&ci| {
                    let c = cq.cons[ci];
                    if !active[ci] || !((c.a == i && c.b == j) || (c.a == j && c.b == i)) {
                        return false;
                    }
                    match c.kind {
                        Kind::Neq => true,
                        Kind::Neg(r) => self.has(r, v, v),
                        Kind::Pos(r) => !self.has(r, v, v),
                    }
                })
            })
        };
        let mut remaining: Vec<usize> = vars.to_vec();
        let mut cliques = Vec::new();
        while let Some(first) = remaining.first().copied() {
            let mut clique = vec![first];
            let mut rest = Vec::new();
            for &v in &remaining[1..] {
                if clique.iter().all(|&u| exclusive(u, v)) {
                    clique.push(v);
                } else {
                    rest.push(v);
                }
            }
            if clique.len() > 1 {
                cliques.push(clique);
            }
            remaining = rest;
        }
        cliques
    }

    /// First satisfied disjunct, with its witness.
    pub fn evaluate_union(&self, u: &UnionQuery) -> Result<Option<(usize, Assignment)>, QueryError> {
        for (i, q) in u.disjuncts.iter().enumerate() {
            if let Some(a) = self.evaluate(q)? {
                return Ok(Some((i, a)));
            }
        }
        Ok(None)
    }
}

struct Search<'c> {
    cq: &'c Compiled,
    vars: &'c [usize],
    active: &'c [bool],
    degree: &'c [usize],
    cliques: &'c [Vec<usize>],
}

fn degrees(cq: &Compiled, active: &[bool]) -> Vec<usize> {
    let mut d = vec![0; cq.names.len()];
    for (ci, c) in cq.cons.iter().enumerate() {
        if active[ci] && c.a != c.b {
            d[c.a] += 1;
            d[c.b] += 1;
        }
    }
    d
}

fn merge(into: &mut [Option<usize>], from: &[Option<usize>]) {
    for (slot, v) in into.iter_mut().zip(from) {
        if v.is_some() {
            *slot = *v;
        }
    }
}

fn augment(i: usize, options: &[Vec<usize>], owner: &mut HashMap<usize, usize>, seen: &mut HashSet<usize>) -> bool {
    for &v in &options[i] {
        if !seen.insert(v) {
            continue;
        }
        let free = match owner.get(&v) {
            None => true,
            Some(&j) => augment(j, options, owner, seen),
        };
        if free {
            owner.insert(v, i);
            return true;
        }
    }
    false
}

/// Size of a maximum matching between items and the values they accept.
pub(crate) fn max_matching(options: &[Vec<usize>]) -> usize {
    let mut owner = HashMap::new();
    (0..options.len())
        .filter(|&i| augment(i, options, &mut owner, &mut HashSet::new()))
        .count()
}

/// The first literal of `q` that `assignment` violates in `d`, checked
/// directly against the facts. An unassigned variable violates every
/// literal it occurs in.
pub fn violated_literal<'q>(d: &Structure, q: &'q ConjunctiveQuery, assignment: &Assignment) -> Option<&'q Literal> {
    let value = |x: &String| assignment.get(x).copied().filter(|&v| v < d.vertex_count());
    q.literals().find(|l| {
        let holds = match l {
            Literal::PositiveUnary(x) => value(x).is_some_and(|v| d.has_a(v)),
            Literal::PositiveBinary(r, x, y) => match (value(x), value(y)) {
                (Some(s), Some(t)) => d.has_edge(r, s, t),
                _ => false,
            },
            Literal::Inequality(x, y) => match (value(x), value(y)) {
                (Some(s), Some(t)) => s != t,
                _ => false,
            },
            Literal::NegatedBinary(r, x, y) => match (value(x), value(y)) {
                (Some(s), Some(t)) => !d.has_edge(r, s, t),
                _ => false,
            },
        };
        !holds
    })
}

pub fn evaluate(d: &Structure, q: &ConjunctiveQuery) -> Result<Option<Assignment>, QueryError> {
    Evaluator::new(d).evaluate(q)
}

pub fn evaluate_restricted(
    d: &Structure,
    q: &ConjunctiveQuery,
    restrict: &BTreeMap<String, BTreeSet<VertexId>>,
) -> Result<Option<Assignment>, QueryError> {
    Evaluator::new(d).evaluate_restricted(q, restrict)
}

pub fn evaluate_union(d: &Structure, u: &UnionQuery) -> Result<Option<(usize, Assignment)>, QueryError> {
    Evaluator::new(d).evaluate_union(u)
}
