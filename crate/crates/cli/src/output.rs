use std::fmt;
use std::time::Instant;

use cantor_arith::{ratio, Error, Ratio};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "cantor-arith/1";

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: msg.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::Domain(_) | Error::Precondition(_) => 1,
            Error::OutOfInterval { .. } | Error::Infeasible { .. } | Error::NoSolution(_) => 2,
            Error::Resource(_) => 3,
            Error::BudgetViolation { .. } | Error::Internal(_) | Error::EvalNotExact(_) => 4,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::usage(format!("bad JSON: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn q(x: &Ratio) -> Value {
    Value::String(ratio::fmt(x))
}

/// What a command produced: the JSON parts, CSV rows, and the exit code
/// (nonzero when a check ran but failed).
pub struct Report {
    pub inputs: Value,
    pub outputs: Value,
    pub certificates: Value,
    pub csv: Vec<Vec<String>>,
    pub code: u8,
}

impl Report {
    pub fn new(inputs: Value, outputs: Value) -> Self {
        Report {
            inputs,
            outputs,
            certificates: Value::Object(Map::new()),
            csv: Vec::new(),
            code: 0,
        }
    }

    pub fn certificates(mut self, c: Value) -> Self {
        self.certificates = c;
        self
    }

    pub fn csv(mut self, rows: Vec<Vec<String>>) -> Self {
        self.csv = rows;
        self
    }

    pub fn envelope(&self, command: &str, started: Instant) -> Value {
        json!({
            "schema": SCHEMA,
            "command": command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "certificates": self.certificates,
            "timing": { "elapsed_ms": started.elapsed().as_millis() as u64 },
        })
    }

    /// Explicit rows, or `key,value` rows from the top-level scalar outputs.
    pub fn csv_text(&self) -> String {
        let rows = if self.csv.is_empty() {
            let mut rows = vec![vec!["key".to_string(), "value".to_string()]];
            if let Value::Object(m) = &self.outputs {
                for (k, v) in m {
                    rows.push(vec![k.clone(), scalar(v)]);
                }
            }
            rows
        } else {
            self.csv.clone()
        };
        rows.iter()
            .map(|r| r.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
