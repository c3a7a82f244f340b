//! Error type carrying the exit-code contract and the machine-readable
//! stderr shape.
//!
//! Exit codes: 0 success, 2 validation failure (bad arguments, window, or
//! config), 3 unobservable ESR under `--strict`, 1 anything else (IO,
//! malformed JSON). Every failure prints one JSON object to stderr:
//! `{"code": ..., "message": ..., "context": {...}}`.

use std::fmt;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_UNOBSERVABLE: i32 = 3;
pub const EXIT_OTHER: i32 = 1;

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub exit_code: i32,
    /// Stable machine-readable identifier, e.g. `invalid_window`.
    pub code: &'static str,
    pub message: String,
    pub context: Map<String, Value>,
}

impl CliError {
    /// Bad arguments, paths, window data, or configuration: exit 2.
    pub fn validation(code: &'static str, message: impl fmt::Display) -> Self {
        Self {
            exit_code: EXIT_VALIDATION,
            code,
            message: message.to_string(),
            context: Map::new(),
        }
    }

    /// Window has no switching transitions and `--strict` was given: exit 3.
    pub fn esr_unobservable(message: impl fmt::Display) -> Self {
        Self {
            exit_code: EXIT_UNOBSERVABLE,
            code: "esr_unobservable",
            message: message.to_string(),
            context: Map::new(),
        }
    }

    /// IO or other unexpected failure: exit 1.
    pub fn io(message: impl fmt::Display) -> Self {
        Self {
            exit_code: EXIT_OTHER,
            code: "io",
            message: message.to_string(),
            context: Map::new(),
        }
    }

    /// Attach a context entry; chainable.
    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.context.insert(key.to_string(), value.into());
        self
    }

    pub fn with_path(self, key: &str, path: &Path) -> Self {
        self.with(key, path.display().to_string())
    }

    /// Print the stderr JSON object for this failure.
    pub fn emit(&self) {
        #[derive(Serialize)]
        struct Wire<'a> {
            code: &'a str,
            message: &'a str,
            context: &'a Map<String, Value>,
        }
        let wire = Wire {
            code: self.code,
            message: &self.message,
            context: &self.context,
        };
        // Serialization of this shape cannot fail; fall back to the plain
        // message if it somehow does.
        match serde_json::to_string(&wire) {
            Ok(json) => eprintln!("{json}"),
            Err(_) => eprintln!("{}", self.message),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
