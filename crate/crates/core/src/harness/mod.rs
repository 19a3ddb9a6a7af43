//! The pipeline behind the command-line tool: configuration, the fixture
//! corpus, certificate search, the verification suite and the commands
//! themselves. Commands return an [`Outcome`] holding an exit code, a JSON
//! report and a short text rendering; the binary only parses arguments and
//! prints.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success: equivalent, satisfied, model ok, countermodel verified, all checks pass |
//! | 1 | a negative answer: query not satisfied, model check failed, a check failed, violations found |
//! | 2 | bounds exhausted without a certificate |
//! | 3 | unreadable or invalid input, including unsafe queries |
//! | 4 | the model given to `eval` fails its ontology |
//! | 64 | usage error |

mod classify;
mod commands;
mod config;
mod enumeration;
pub mod fixtures;
mod report;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use thiserror::Error;

use crate::ontology::OntologyError;
use crate::queries::QueryError;
use crate::structures::StructureError;

pub use classify::{
    canonical_from_quotient, canonical_from_semigroup, classify, Canonical, CanonicalCertificate, Classification,
    InstanceStatus, NegativeCertificate,
};
pub use commands::{
    cmd_check_model, cmd_compile, cmd_countermodel, cmd_enumerate, cmd_eval, cmd_rewrite, cmd_verify, component_hosts,
    ComponentHosts, EnumerateTarget,
};
pub use config::{Config, CONFIG_ENV};
pub use enumeration::{
    enumeration_bound, run_enumeration, EnumerationCheck, EnumerationReport, EnumerationViolation, SPACE_BUDGET,
};
pub use report::{CheckRecord, CheckVerdict, Summary, VerificationReport};
pub use verify::{labelled, slot_families, verify_instance, SlotFamily};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const BOUNDS_EXHAUSTED: i32 = 2;
    pub const INPUT_ERROR: i32 = 3;
    pub const MODEL_FAILS: i32 = 4;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("{0}")]
    Usage(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => exit::USAGE,
            _ => exit::INPUT_ERROR,
        }
    }

    fn parse(path: &Path, e: impl std::fmt::Display) -> Self {
        HarnessError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub text: String,
}

pub(crate) fn read_file(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub(crate) fn write_atomic(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}
