//! Exhaustive enumeration of small structures with the constant `a` at
//! vertex 0.
//!
//! A structure on `n` vertices is encoded as three bit masks: `A` on
//! vertices `1..n` (vertex 0 is forced for candidates), one `n×n` adjacency
//! matrix per letter, and the `T` matrix.

use super::{t_symbol, Signature, Structure, StructureError, CONSTANT_A};

pub const DEFAULT_ENUM_CEILING: usize = 4;

/// Masks wider than this are refused.
const MAX_MASK_BITS: u32 = 62;

fn ceiling_check(max_vertices: usize, ceiling: usize) -> Result<(), StructureError> {
    if max_vertices > ceiling {
        return Err(StructureError::CeilingExceeded {
            requested: max_vertices,
            ceiling,
        });
    }
    Ok(())
}

fn decode(sig: &Signature, n: usize, a_mask: u64, letter_mask: u64, t_mask: u64) -> Structure {
    let mut d = Structure::with_vertices(n);
    for v in 0..n {
        if a_mask >> v & 1 == 1 {
            d.add_a(v);
        }
    }
    let nn = n * n;
    for (li, r) in sig.letters().iter().enumerate() {
        for p in 0..nn {
            if letter_mask >> (li * nn + p) & 1 == 1 {
                d.add_edge(r, p / n, p % n);
            }
        }
    }
    let t = t_symbol();
    for p in 0..nn {
        if t_mask >> p & 1 == 1 {
            d.add_edge(&t, p / n, p % n);
        }
    }
    d.set_constant(CONSTANT_A, 0);
    d
}

/// Every structure on exactly `n` vertices over `sig` with `a ↦ 0`, indexed
/// by `0..len()`. No filtering.
#[derive(Debug, Clone)]
pub struct StructureSpace {
    sig: Signature,
    n: usize,
}

impl StructureSpace {
    pub fn new(sig: &Signature, n: usize) -> Result<Self, StructureError> {
        let space = StructureSpace { sig: sig.clone(), n };
        if n == 0 || space.bits() > MAX_MASK_BITS {
            return Err(StructureError::CeilingExceeded {
                requested: n,
                ceiling: n.saturating_sub(1),
            });
        }
        Ok(space)
    }

    fn bits(&self) -> u32 {
        (self.n + (self.sig.letters().len() + 1) * self.n * self.n) as u32
    }

    pub fn len(&self) -> u64 {
        1u64 << self.bits()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: u64) -> Structure {
        assert!(index < self.len(), "index {index} out of range");
        let n = self.n;
        let nn = n * n;
        let m = self.sig.letters().len();
        let a_mask = index & ((1 << n) - 1);
        let letter_mask = (index >> n) & ((1u64 << (m * nn)) - 1);
        let t_mask = index >> (n + m * nn);
        decode(&self.sig, n, a_mask, letter_mask, t_mask)
    }
}

/// Candidate structures over `sig` with `1..=max_vertices` vertices, in a
/// fixed order: vertex count, then `A` mask, then letter mask, then `T` mask.
pub fn enumerate_candidate_structures(
    sig: &Signature,
    max_vertices: usize,
) -> Result<CandidateStructures, StructureError> {
    enumerate_candidate_structures_with_ceiling(sig, max_vertices, DEFAULT_ENUM_CEILING)
}

pub fn enumerate_candidate_structures_with_ceiling(
    sig: &Signature,
    max_vertices: usize,
    ceiling: usize,
) -> Result<CandidateStructures, StructureError> {
    ceiling_check(max_vertices, ceiling)?;
    let m = sig.letters().len();
    if max_vertices > 0 && (max_vertices + (m + 1) * max_vertices * max_vertices) as u32 > MAX_MASK_BITS {
        return Err(StructureError::CeilingExceeded {
            requested: max_vertices,
            ceiling: max_vertices - 1,
        });
    }
    Ok(CandidateStructures {
        sig: sig.clone(),
        max_vertices,
        n: 1,
        a_mask: 0,
        letter_mask: 0,
        t_mask: 0,
        in_pair: false,
        exhausted: max_vertices == 0,
    })
}

/// Number of candidate structures the enumerator yields.
pub fn count_candidate_structures(sig: &Signature, max_vertices: usize) -> Result<u64, StructureError> {
    let it = enumerate_candidate_structures_with_ceiling(sig, max_vertices, max_vertices)?;
    let mut total = 0u64;
    for n in 1..=max_vertices {
        let valid_pairs = (0..1u64 << (n - 1))
            .flat_map(|a| (0..1u64 << (it.letter_bits(n))).map(move |l| (a, l)))
            .filter(|&(a, l)| it.letters_valid(n, a << 1 | 1, l))
            .count() as u64;
        total += valid_pairs << (n * n - 1);
    }
    Ok(total)
}

/// Lazy stream of candidate structures; see [`enumerate_candidate_structures`].
#[derive(Debug, Clone)]
pub struct CandidateStructures {
    sig: Signature,
    max_vertices: usize,
    n: usize,
    // A on vertices 1..n (vertex 0 always carries A).
    a_mask: u64,
    letter_mask: u64,
    // T on all pairs except (0,0), which is always present.
    t_mask: u64,
    in_pair: bool,
    exhausted: bool,
}

impl CandidateStructures {
    fn letter_bits(&self, n: usize) -> usize {
        self.sig.letters().len() * n * n
    }

    /// Conditions on `A` and the letters: every `A`-vertex and every vertex
    /// with an incoming letter edge has an outgoing edge for each letter.
    fn letters_valid(&self, n: usize, full_a: u64, letter_mask: u64) -> bool {
        let nn = n * n;
        let m = self.sig.letters().len();
        let row = (1u64 << n) - 1;
        let mut has_out = vec![0u64; m];
        let mut entered = 0u64;
        for (li, out) in has_out.iter_mut().enumerate() {
            let matrix = letter_mask >> (li * nn);
            for i in 0..n {
                let r = (matrix >> (i * n)) & row;
                if r != 0 {
                    *out |= 1 << i;
                }
                entered |= r;
            }
        }
        let needs = full_a | entered;
        has_out.iter().all(|&out| needs & !out == 0)
    }

    fn advance_pair(&mut self) -> bool {
        let n = self.n;
        let letter_limit = 1u64 << self.letter_bits(n);
        let a_limit = 1u64 << (n - 1);
        loop {
            self.letter_mask += 1;
            if self.letter_mask == letter_limit {
                self.letter_mask = 0;
                self.a_mask += 1;
                if self.a_mask == a_limit {
                    return false;
                }
            }
            if self.letters_valid(n, self.a_mask << 1 | 1, self.letter_mask) {
                return true;
            }
        }
    }

    fn first_pair(&mut self) -> bool {
        self.a_mask = 0;
        self.letter_mask = 0;
        if self.letters_valid(self.n, 1, 0) {
            return true;
        }
        self.advance_pair()
    }
}

impl Iterator for CandidateStructures {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        while !self.exhausted {
            if !self.in_pair {
                if self.first_pair() {
                    self.in_pair = true;
                    self.t_mask = 0;
                } else {
                    self.n += 1;
                    if self.n > self.max_vertices {
                        self.exhausted = true;
                    }
                    continue;
                }
            }
            let n = self.n;
            let d = decode(
                &self.sig,
                n,
                self.a_mask << 1 | 1,
                self.letter_mask,
                self.t_mask << 1 | 1,
            );
            self.t_mask += 1;
            if self.t_mask == 1u64 << (n * n - 1) {
                self.t_mask = 0;
                if !self.advance_pair() {
                    self.in_pair = false;
                    self.n += 1;
                    if self.n > self.max_vertices {
                        self.exhausted = true;
                    }
                }
            }
            return Some(d);
        }
        None
    }
}
