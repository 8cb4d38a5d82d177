use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "freecurve/1";

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_MATH: u8 = 3;
pub const EXIT_NO_CATALOG: u8 = 4;

/// A command that could not produce its report.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn input(kind: &str, message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: kind.into(),
            message: message.to_string(),
        }
    }

    pub fn no_catalog(path: &Path, e: impl ToString) -> Self {
        Failure {
            code: EXIT_NO_CATALOG,
            kind: "MissingCatalog".into(),
            message: format!("cannot read {}: {}", path.display(), e.to_string()),
        }
    }

    pub fn report(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "error": {"kind": self.kind, "message": self.message, "exit_code": self.code},
        })
    }
}

impl From<freecurve::Error> for Failure {
    fn from(e: freecurve::Error) -> Self {
        Failure {
            code: if e.is_input_error() { EXIT_INPUT } else { EXIT_MATH },
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

/// Structured error for embedding in a report.
pub fn error_value(e: &freecurve::Error) -> Value {
    json!({"kind": e.kind(), "message": e.to_string()})
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

/// Writes the report to `path`, or to stdout without one.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure::input("Io", format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
