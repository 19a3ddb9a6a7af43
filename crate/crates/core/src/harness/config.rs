//! Bounds and flags shared by every command.
//!
//! A config file is TOML with the field names below; missing fields take
//! their defaults and unknown fields are rejected.
//!
//! ```toml
//! max_expansions = 200000
//! max_semigroup_order = 3
//! una = true
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ontology::ModelCheckFlags;
use crate::queries::PhiOptions;
use crate::thue::{SearchBounds, ThueInstance};

use super::HarnessError;

/// Environment variable naming a TOML config file.
pub const CONFIG_ENV: &str = "THUE2DLITE_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Longest word visited by the rewriting search. `None` means
    /// `|l| + |r| + 8` for the instance at hand.
    pub max_word_len: Option<usize>,
    pub max_expansions: usize,
    /// Largest semigroup order tried when looking for a separating witness.
    pub max_semigroup_order: usize,
    /// Word length used when building the bounded quotient.
    pub quotient_max_len: usize,
    pub chase_depth: usize,
    /// Vertex bound for exhaustive enumeration in `verify` and `enumerate`.
    pub enum_max_vertices: usize,
    pub una: bool,
    pub pcwa: bool,
    pub phi_negate_t: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_word_len: None,
            max_expansions: SearchBounds::DEFAULT_MAX_EXPANSIONS,
            max_semigroup_order: 4,
            quotient_max_len: 6,
            chase_depth: 3,
            enum_max_vertices: 3,
            una: true,
            pcwa: true,
            phi_negate_t: false,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_toml(&super::read_file(path)?)
    }

    pub fn search_bounds(&self, inst: &ThueInstance) -> SearchBounds {
        let mut bounds = SearchBounds::default_for(inst.goal_left(), inst.goal_right());
        if let Some(len) = self.max_word_len {
            bounds.max_word_len = len;
        }
        bounds.max_expansions = self.max_expansions;
        bounds
    }

    pub fn model_flags(&self) -> ModelCheckFlags {
        ModelCheckFlags {
            una: self.una,
            pcwa: self.pcwa,
        }
    }

    pub fn phi_options(&self) -> PhiOptions {
        PhiOptions {
            negate_t: self.phi_negate_t,
        }
    }
}
