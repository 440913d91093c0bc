use std::fmt;
use std::io::{Read, Write};

use gadgetlab::ErrorKind;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Usage, message: message.into() }
    }

    pub fn to_json(&self) -> String {
        json!({
            "error": self.kind.name(),
            "exit_code": self.kind.exit_code(),
            "message": self.message,
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<gadgetlab::Error> for CliError {
    fn from(e: gadgetlab::Error) -> Self {
        CliError { kind: e.kind(), message: e.to_string() }
    }
}

macro_rules! from_module_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                gadgetlab::Error::from(e).into()
            }
        })*
    };
}

from_module_error!(
    gadgetlab::families::FamilyError,
    gadgetlab::labelcover::LabelCoverError,
    gadgetlab::hypergraph::HypergraphError,
    gadgetlab::reduction::ReductionError,
    gadgetlab::solvers::SolverError,
    gadgetlab::decode::DecodeError
);

pub type CliResult<T> = Result<T, CliError>;

/// A report and whether the checked property held (exit code 1 if not).
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(report: impl Serialize) -> CliResult<Self> {
        Ok(Outcome { report: to_value(report)?, ok: true })
    }

    pub fn check(report: impl Serialize, ok: bool) -> CliResult<Self> {
        Ok(Outcome { report: to_value(report)?, ok })
    }
}

pub fn to_value(report: impl Serialize) -> CliResult<Value> {
    serde_json::to_value(report).map_err(|e| CliError::usage(format!("cannot serialize report: {e}")))
}

pub fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::usage(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))
    }
}

pub fn write_output(path: &str, text: &str) -> CliResult<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| CliError::usage(format!("cannot write stdout: {e}")))
    } else {
        std::fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {path}: {e}")))
    }
}

pub fn render(report: &Value, tsv: bool) -> String {
    if !tsv {
        let mut text = serde_json::to_string_pretty(report).unwrap_or_default();
        text.push('\n');
        return text;
    }
    let mut out = String::new();
    flatten("", report, &mut out);
    out
}

/// One `path<TAB>value` line per scalar, with dotted paths into objects and
/// arrays.
fn flatten(prefix: &str, value: &Value, out: &mut String) {
    let join = |key: &str| if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}\t{s}\n")),
        other => out.push_str(&format!("{prefix}\t{other}\n")),
    }
}

pub fn parse_set(text: &str) -> CliResult<Vec<u64>> {
    serde_json::from_str(text).map_err(|e| CliError::usage(format!("vertex set must be a JSON array of indices: {e}")))
}

pub fn write_set(set: &[u64]) -> String {
    let mut text = serde_json::to_string(set).unwrap_or_default();
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_flattening() {
        let v = json!({"a": 1, "b": {"c": [1, 2], "d": "x"}, "e": [{"f": true}]});
        assert_eq!(render(&v, true), "a\t1\nb.c\t[1,2]\nb.d\tx\ne.0.f\ttrue\n");
        assert!(render(&v, false).ends_with("}\n"));
    }

    #[test]
    fn sets() {
        assert_eq!(parse_set("[3, 1]").unwrap(), vec![3, 1]);
        assert!(parse_set("{}").is_err());
        assert_eq!(write_set(&[1, 2]), "[1,2]\n");
    }
}
