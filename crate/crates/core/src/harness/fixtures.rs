//! The built-in instance corpus, embedded from `fixtures/*.thue`.

use serde::Serialize;

use crate::thue::{parse_thue, ThueInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    /// A short rewrite path joins the goal words.
    Positive,
    /// A separating semigroup of order at most 3 exists.
    Negative,
    /// Neither a path nor a witness is found at the default bounds.
    Unresolved,
}

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub id: &'static str,
    pub text: &'static str,
    pub expected: Expected,
}

impl Fixture {
    pub fn instance(&self) -> ThueInstance {
        parse_thue(self.text).unwrap_or_else(|e| panic!("fixture {} does not parse: {e}", self.id))
    }
}

macro_rules! fixture {
    ($id:literal, $expected:ident) => {
        Fixture {
            id: $id,
            text: include_str!(concat!("../../fixtures/", $id, ".thue")),
            expected: Expected::$expected,
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("p1_idempotent", Positive),
    fixture!("p2_cycle", Positive),
    fixture!("p3_commuting", Positive),
    fixture!("n1_free", Negative),
    fixture!("n2_period_two", Negative),
    fixture!("n3_commutative", Negative),
    fixture!("u1_free_monogenic", Unresolved),
    fixture!("u2_free_commutative", Unresolved),
];

pub fn fixture(id: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.id == id)
}

pub fn fixtures_with(expected: Expected) -> impl Iterator<Item = &'static Fixture> {
    FIXTURES.iter().filter(move |f| f.expected == expected)
}
