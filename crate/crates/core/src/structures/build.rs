//! Builders: slots, disjoint unions and the finite canonical structure.

use std::collections::{BTreeMap, HashMap};

use crate::thue::{rewrite_neighbors, SemigroupWitness, ThueInstance, Word};

use super::{t_symbol, Signature, Structure, StructureError, VertexId};

/// Name of the constant interpreted at the ε-class / adjoined identity.
pub const CONSTANT_A: &str = "a";

/// Words beyond this many would not fit comfortably in memory.
const QUOTIENT_WORD_LIMIT: usize = 1 << 22;

/// Constant names `(b_n, c_n)` of slot `n`.
pub fn slot_constants(n: usize) -> (String, String) {
    (format!("b_{n}"), format!("c_{n}"))
}

/// The two-vertex gadget `𝕊_n`: `A(b)`, `T(b,b)`, `T(c,c)` and, for each
/// letter `R`, `R(b,b)`, `R(b,c)`, `R(c,c)`. There is no `T` between `b` and `c`.
pub fn slot(n: usize, sig: &Signature) -> Structure {
    assert!(n >= 1, "slots are numbered from 1");
    let (bn, cn) = slot_constants(n);
    let mut d = Structure::new();
    let b = d.add_vertex(bn.clone());
    let c = d.add_vertex(cn.clone());
    d.add_a(b);
    let t = t_symbol();
    d.add_edge(&t, b, b);
    d.add_edge(&t, c, c);
    for r in sig.letters() {
        d.add_edge(r, b, b);
        d.add_edge(r, b, c);
        d.add_edge(r, c, c);
    }
    d.set_constant(bn, b);
    d.set_constant(cn, c);
    d
}

/// A single vertex `a` carrying every fact: `A(a)`, `T(a,a)`, `R(a,a)`.
pub fn well_of_positivity(sig: &Signature, constants: &[&str]) -> Structure {
    let mut d = Structure::new();
    let v = d.add_vertex("well");
    d.add_a(v);
    d.add_edge(&t_symbol(), v, v);
    for r in sig.letters() {
        d.add_edge(r, v, v);
    }
    d.set_constant(CONSTANT_A, v);
    for c in constants {
        d.set_constant(*c, v);
    }
    d
}

/// Places the parts side by side, shifting vertex ids by the sizes of the
/// preceding parts.
pub fn disjoint_union(parts: &[Structure]) -> Result<Structure, StructureError> {
    let mut out = Structure::new();
    for part in parts {
        let offset = out.vertex_count();
        for v in part.vertices() {
            out.add_vertex(part.label(v));
        }
        for fact in part.facts() {
            match fact {
                super::Fact::A(v) => out.add_a(v + offset),
                super::Fact::Binary(r, s, t) => out.add_edge(&r, s + offset, t + offset),
            };
        }
        for (name, &v) in part.constants() {
            if out.constant(name).is_some() {
                return Err(StructureError::DuplicateConstant(name.clone()));
            }
            out.set_constant(name.clone(), v + offset);
        }
    }
    Ok(out)
}

pub enum CanonicalSource<'a> {
    /// Congruence closure over all words up to the given length.
    QuotientBounded(usize),
    /// `S¹` for a separating semigroup.
    Semigroup(&'a SemigroupWitness),
}

/// Builds the canonical structure `𝔻` from a finite certificate.
///
/// Both sources produce `[w] →R [wR]` edges, `A` exactly at the ε-vertex,
/// `T` from the ε-vertex to every vertex, and the constant `a` at ε.
pub fn build_canonical_finite(inst: &ThueInstance, source: CanonicalSource<'_>) -> Result<Structure, StructureError> {
    match source {
        CanonicalSource::QuotientBounded(max_len) => from_quotient(inst, max_len),
        CanonicalSource::Semigroup(w) => from_semigroup(inst, w),
    }
}

fn from_semigroup(inst: &ThueInstance, w: &SemigroupWitness) -> Result<Structure, StructureError> {
    if let Some(s) = inst.alphabet().iter().find(|s| w.generator(s).is_none()) {
        return Err(StructureError::InvalidWitness(format!("letter `{s}` has no image")));
    }
    if let Some(k) = inst.rules().iter().position(|r| w.eval(&r.left) != w.eval(&r.right)) {
        return Err(StructureError::InvalidWitness(format!("rule {} does not hold", k + 1)));
    }
    if w.eval(inst.goal_left()) == w.eval(inst.goal_right()) {
        return Err(StructureError::InvalidWitness("goal words are identified".into()));
    }
    // Vertex 0 is the adjoined identity, vertex i+1 is element e_i.
    let mut d = Structure::new();
    let one = d.add_vertex("1");
    for e in 0..w.order() {
        d.add_vertex(format!("e{e}"));
    }
    for r in inst.alphabet() {
        let g = w.generator(r).expect("checked above");
        d.add_edge(r, one, g + 1);
        for e in 0..w.order() {
            d.add_edge(r, e + 1, w.multiply(e, g) + 1);
        }
    }
    finish_canonical(&mut d, one);
    Ok(d)
}

fn finish_canonical(d: &mut Structure, eps: VertexId) {
    d.add_a(eps);
    let t = t_symbol();
    for v in d.vertices() {
        d.add_edge(&t, eps, v);
    }
    d.set_constant(CONSTANT_A, eps);
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Certified finite quotient.
///
/// Words of length `≤ L` are merged along one-step rewrites that stay within
/// length `L`. The result is accepted only if
///
/// * every class has a member of length `≤ L-1`,
/// * `[w] ↦ [wR]` is well defined on those short members, and
/// * every class `c` satisfies `c·l_k = c·r_k` for every rule.
///
/// Under these checks `w ~ w'` iff both reach the same class from `[ε]` is a
/// congruence containing every rule, and every merge above is a genuine
/// `≃_Π` step, so the classes are exactly the `≃_Π` classes.
fn from_quotient(inst: &ThueInstance, max_len: usize) -> Result<Structure, StructureError> {
    let not_closed = StructureError::NotClosedAtBound(max_len);
    if max_len == 0 {
        return Err(not_closed);
    }
    let letters = inst.alphabet();
    let m = letters.len();
    let mut total = 0usize;
    let mut layer = 1usize;
    for _ in 0..=max_len {
        total = total.checked_add(layer).ok_or(not_closed.clone())?;
        layer = layer.saturating_mul(m);
    }
    if total > QUOTIENT_WORD_LIMIT {
        return Err(not_closed);
    }

    // All words up to max_len in shortlex order.
    let mut words: Vec<Word> = vec![Word::empty()];
    let mut start = 0;
    for _ in 0..max_len {
        let end = words.len();
        for i in start..end {
            for s in letters {
                let w = words[i].push(s.clone());
                words.push(w);
            }
        }
        start = end;
    }
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();

    let mut uf = UnionFind::new(words.len());
    for (i, w) in words.iter().enumerate() {
        for (n, _) in rewrite_neighbors(w, inst.rules()) {
            if let Some(&j) = index.get(&n) {
                uf.union(i, j);
            }
        }
    }

    // Class ids follow the shortlex order of least members.
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    let mut class_of = vec![0usize; words.len()];
    let mut reps: Vec<usize> = Vec::new();
    for (i, class) in class_of.iter_mut().enumerate() {
        let root = uf.find(i);
        *class = *class_of_root.entry(root).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
    }
    if reps.iter().any(|&i| words[i].len() >= max_len) {
        return Err(not_closed);
    }

    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; m]; reps.len()];
    for (i, w) in words.iter().enumerate() {
        if w.len() >= max_len {
            continue;
        }
        let c = class_of[i];
        for (li, s) in letters.iter().enumerate() {
            let d = class_of[index[&w.push(s.clone())]];
            match delta[c][li] {
                None => delta[c][li] = Some(d),
                Some(prev) if prev != d => return Err(not_closed),
                Some(_) => {}
            }
        }
    }
    let delta: Vec<Vec<usize>> = delta
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|d| d.expect("every class has a short member"))
                .collect()
        })
        .collect();
    let letter_index: BTreeMap<_, _> = letters.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let run = |c: usize, w: &Word| w.iter().fold(c, |acc, s| delta[acc][letter_index[s]]);
    for c in 0..reps.len() {
        if inst.rules().iter().any(|r| run(c, &r.left) != run(c, &r.right)) {
            return Err(not_closed);
        }
    }

    let mut d = Structure::new();
    for &i in &reps {
        d.add_vertex(format!("[{}]", words[i]));
    }
    for (c, row) in delta.iter().enumerate() {
        for (li, &target) in row.iter().enumerate() {
            d.add_edge(&letters[li], c, target);
        }
    }
    // ε is the first word, so its class is 0.
    finish_canonical(&mut d, 0);
    Ok(d)
}
