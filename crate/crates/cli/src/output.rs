use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use pcf::{Colouring, Graph};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug)]
pub enum CliError {
    BadInput(String),
    Verification(String),
    Exhausted(String),
}

impl CliError {
    /// 2: bad input, 3: verification failure, 4: restarts or search budget exhausted.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BadInput(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Exhausted(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::BadInput(m) => write!(f, "bad input: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Exhausted(m) => write!(f, "exhausted: {m}"),
        }
    }
}

impl From<pcf::Error> for CliError {
    fn from(e: pcf::Error) -> Self {
        match e {
            pcf::Error::RestartsExhausted { .. } => CliError::Exhausted(e.to_string()),
            pcf::Error::Invariant(_) => CliError::Verification(e.to_string()),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))
}

pub fn read_graph(path: &Path) -> CliResult<Graph> {
    Graph::from_dimacs(&read_text(path)?).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))
}

/// Reads a colouring, either bare or as the `colouring` field of a result document.
pub fn read_colouring(path: &Path) -> CliResult<Colouring> {
    let bad = |e: serde_json::Error| CliError::BadInput(format!("{}: {e}", path.display()));
    let mut value: Value = serde_json::from_str(&read_text(path)?).map_err(bad)?;
    if let Some(inner) = value.get_mut("colouring") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(bad)
}

/// Flag, then `$PCF_SEED`, then the clock; the choice is logged to stderr.
pub fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    let (seed, source) = match (flag, std::env::var("PCF_SEED")) {
        (Some(s), _) => (s, "flag"),
        (None, Ok(v)) => (
            v.trim()
                .parse()
                .map_err(|_| CliError::BadInput(format!("PCF_SEED={v:?} is not a 64-bit unsigned integer")))?,
            "PCF_SEED",
        ),
        (None, Err(_)) => {
            let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos());
            (pcf::seed::splitmix64(nanos as u64), "clock")
        }
    };
    eprintln!("seed: {seed} ({source})");
    Ok(seed)
}

pub fn write_out(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Serializes `doc` as pretty JSON, or as indented `key: value` lines.
pub fn emit<T: Serialize>(doc: &T, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    let value = serde_json::to_value(doc).map_err(|e| CliError::BadInput(e.to_string()))?;
    let text = match fmt {
        Format::Json => serde_json::to_string_pretty(&value).expect("values serialize") + "\n",
        Format::Text => {
            let mut s = String::new();
            render(&value, 0, &mut s);
            s
        }
    };
    write_out(&text, out)
}

const INLINE_ARRAY: usize = 24;

fn render(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(v, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        let _ = writeln!(out, "{pad}{k}: [{} entries]", items.len());
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar(v));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.len() > INLINE_ARRAY => format!("[{} values]", items.len()),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
