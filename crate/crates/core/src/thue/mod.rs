//! Thue instances and the congruence `≃_Π` they induce on words.
//!
//! A [`ThueInstance`] fixes a finite alphabet, a list of rewrite pairs and a
//! goal pair of words. The submodules provide the `.thue` parser, one-step
//! rewriting with a bounded bidirectional search for rewrite paths, and an
//! exhaustive search for finite semigroups that separate the goal words.

mod parse;
mod rewrite;
mod semigroup;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use parse::{parse_thue, parse_word, ParseError};
pub use rewrite::{
    decide_equiv_bounded, rewrite_neighbors, BoundReport, Direction, RewritePath, RewriteStep, SearchBounds,
    UnknownReason, Verdict,
};
pub use semigroup::{
    eval_in_semigroup, find_separating_semigroup, for_each_associative_table, SemigroupWitness, WitnessError,
};

/// Names that may not be used as alphabet letters: `A` is the unary concept of
/// the target signature and `T` its extra binary relation.
pub const RESERVED_NAMES: [&str; 2] = ["A", "T"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("symbol names must be non-empty")]
    Empty,
    #[error("symbol `{0}` contains characters outside [a-zA-Z0-9_]")]
    InvalidCharacter(String),
}

/// A letter of the alphabet, also used as the name of a binary relation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Self, SymbolError> {
        if name.is_empty() {
            return Err(SymbolError::Empty);
        }
        if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(SymbolError::InvalidCharacter(name.to_string()));
        }
        Ok(Symbol(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        RESERVED_NAMES.contains(&self.as_str())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Symbol::new(&s).map_err(serde::de::Error::custom)
    }
}

/// A finite word over the alphabet. The empty word is allowed.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    /// `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn push(&self, symbol: Symbol) -> Word {
        let mut out = self.0.clone();
        out.push(symbol);
        Word(out)
    }

    /// Splits a non-empty word into its prefix and last letter.
    pub fn split_last(&self) -> Option<(Word, Symbol)> {
        let (last, prefix) = self.0.split_last()?;
        Some((Word(prefix.to_vec()), last.clone()))
    }

    /// Shortlex order: shorter words first, ties broken lexicographically.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let compact = self.0.iter().all(|s| s.as_str().chars().count() == 1);
        for s in &self.0 {
            if compact {
                write!(f, "{s}")?;
            } else {
                write!(f, "({s})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("rule {rule} has an empty side")]
    EmptyRuleSide { rule: usize },
    #[error("goal words must be non-empty")]
    EmptyGoal,
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("symbol `{0}` appears twice in the alphabet")]
    DuplicateAlphabetSymbol(Symbol),
    #[error("`{0}` is reserved and cannot be an alphabet symbol")]
    ReservedSymbol(Symbol),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(Symbol),
}

/// One pair `[l_k, r_k]` of the rule set. Both sides are non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RewritePair {
    pub left: Word,
    pub right: Word,
}

impl RewritePair {
    pub fn new(left: Word, right: Word) -> Option<Self> {
        if left.is_empty() || right.is_empty() {
            return None;
        }
        Some(RewritePair { left, right })
    }

    pub fn side(&self, direction: Direction) -> (&Word, &Word) {
        match direction {
            Direction::LeftToRight => (&self.left, &self.right),
            Direction::RightToLeft => (&self.right, &self.left),
        }
    }
}

/// Which reduction the instance is compiled for: queries with inequalities or
/// queries with safe negation. The two differ in the number of slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Neq,
    Neg,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Neq => "neq",
            Variant::Neg => "neg",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "neq" => Ok(Variant::Neq),
            "neg" => Ok(Variant::Neg),
            other => Err(format!("unknown variant `{other}` (expected `neq` or `neg`)")),
        }
    }
}

/// A word problem instance `[l, r, Π]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThueInstance {
    alphabet: Vec<Symbol>,
    rules: Vec<RewritePair>,
    goal_left: Word,
    goal_right: Word,
}

impl ThueInstance {
    /// Validates and builds an instance. The alphabet is stored sorted.
    pub fn new(
        alphabet: Vec<Symbol>,
        rules: Vec<(Word, Word)>,
        goal_left: Word,
        goal_right: Word,
    ) -> Result<Self, InstanceError> {
        let mut sorted = alphabet;
        sorted.sort();
        if sorted.is_empty() {
            return Err(InstanceError::EmptyAlphabet);
        }
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(InstanceError::DuplicateAlphabetSymbol(pair[0].clone()));
            }
        }
        if let Some(s) = sorted.iter().find(|s| s.is_reserved()) {
            return Err(InstanceError::ReservedSymbol(s.clone()));
        }
        let check = |w: &Word| {
            w.iter()
                .find(|s| sorted.binary_search(s).is_err())
                .map(|s| InstanceError::UnknownSymbol(s.clone()))
                .map_or(Ok(()), Err)
        };
        let mut pairs = Vec::with_capacity(rules.len());
        for (k, (l, r)) in rules.into_iter().enumerate() {
            check(&l)?;
            check(&r)?;
            pairs.push(RewritePair::new(l, r).ok_or(InstanceError::EmptyRuleSide { rule: k + 1 })?);
        }
        if goal_left.is_empty() || goal_right.is_empty() {
            return Err(InstanceError::EmptyGoal);
        }
        check(&goal_left)?;
        check(&goal_right)?;
        Ok(ThueInstance {
            alphabet: sorted,
            rules: pairs,
            goal_left,
            goal_right,
        })
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn rules(&self) -> &[RewritePair] {
        &self.rules
    }

    /// Rule `k`, counted from 1.
    pub fn rule(&self, k: usize) -> Option<&RewritePair> {
        k.checked_sub(1).and_then(|i| self.rules.get(i))
    }

    pub fn goal_left(&self) -> &Word {
        &self.goal_left
    }

    pub fn goal_right(&self) -> &Word {
        &self.goal_right
    }

    /// Number of rules (𝕜).
    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Alphabet size (𝕞).
    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    /// Number of slots (𝕟) used by the given variant.
    pub fn slot_count(&self, variant: Variant) -> usize {
        match variant {
            Variant::Neq => self.rule_count() + self.alphabet_size(),
            Variant::Neg => 2 * (self.rule_count() + self.alphabet_size()),
        }
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.alphabet.binary_search(s).is_ok()
    }

    /// Renders the instance in the `.thue` text format.
    pub fn to_thue_text(&self) -> String {
        let mut out = String::from("alphabet:");
        for s in &self.alphabet {
            out.push(' ');
            out.push_str(s.as_str());
        }
        out.push('\n');
        for rule in &self.rules {
            out.push_str(&format!("rule: {} = {}\n", rule.left, rule.right));
        }
        out.push_str(&format!("goal: {} = {}\n", self.goal_left, self.goal_right));
        out
    }
}


#[cfg(test)]
mod tests {
    use super::test_util::*;
    use super::*;

    #[test]
    fn symbol_validation() {
        assert!(Symbol::new("ab_1").is_ok());
        assert_eq!(Symbol::new(""), Err(SymbolError::Empty));
        assert!(matches!(Symbol::new("a-b"), Err(SymbolError::InvalidCharacter(_))));
    }

    #[test]
    fn word_display_uses_parentheses_for_long_symbols() {
        assert_eq!(word("aab").to_string(), "aab");
        assert_eq!(Word::empty().to_string(), "ε");
        let w = Word::from_symbols(vec![sym("ab"), sym("c")]);
        assert_eq!(w.to_string(), "(ab)(c)");
    }

    #[test]
    fn derived_counts() {
        let i = inst("ab", &[("ab", "ba")], "aab", "aba");
        assert_eq!(i.rule_count(), 1);
        assert_eq!(i.alphabet_size(), 2);
        assert_eq!(i.slot_count(Variant::Neq), 3);
        assert_eq!(i.slot_count(Variant::Neg), 6);
    }

    #[test]
    fn instance_rejects_reserved_and_unknown_symbols() {
        let e = ThueInstance::new(vec![sym("T")], vec![], word("T"), word("T")).unwrap_err();
        assert_eq!(e, InstanceError::ReservedSymbol(sym("T")));
        let e = ThueInstance::new(vec![sym("a")], vec![], word("a"), word("b")).unwrap_err();
        assert_eq!(e, InstanceError::UnknownSymbol(sym("b")));
        let e = ThueInstance::new(vec![sym("a")], vec![(word("a"), Word::empty())], word("a"), word("a")).unwrap_err();
        assert_eq!(e, InstanceError::EmptyRuleSide { rule: 1 });
    }

    #[test]
    fn split_last_and_shortlex() {
        let (p, last) = word("ba").split_last().unwrap();
        assert_eq!(p, word("b"));
        assert_eq!(last, sym("a"));
        assert!(Word::empty().split_last().is_none());
        assert_eq!(word("b").shortlex_cmp(&word("aa")), std::cmp::Ordering::Less);
        assert_eq!(word("ab").shortlex_cmp(&word("ba")), std::cmp::Ordering::Less);
    }
}
