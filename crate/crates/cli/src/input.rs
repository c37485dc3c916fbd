use std::fs;
use std::io::{self, Read};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use knotoid_core::GaussCode;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputError {
    pub kind: &'static str,
    pub message: String,
}

/// One input code, or the reason it could not be read.
pub type Record = Result<GaussCode, InputError>;

/// Reads codes from a file (`-` for stdin) plus inline codes.
///
/// A file whose first non-blank character is `[` is a JSON array of strings
/// (text form) or objects (`{"passages": [...]}`); anything else is one code
/// per line, where a blank line is the trivial code.
pub fn read_records(path: Option<&Path>, inline: &[String]) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    if let Some(path) = path {
        let text = if path == Path::new("-") {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).context("reading stdin")?;
            buf
        } else {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        };
        records.extend(parse_records(&text)?);
    }
    records.extend(inline.iter().map(|s| parse_text(s)));
    Ok(records)
}

pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    if text.trim_start().starts_with('[') {
        let items: Vec<Value> = serde_json::from_str(text).context("parsing JSON input")?;
        Ok(items.into_iter().map(parse_value).collect())
    } else {
        Ok(text.lines().map(parse_text).collect())
    }
}

fn parse_text(line: &str) -> Record {
    line.trim().parse::<GaussCode>().map_err(|e| InputError { kind: e.kind(), message: e.to_string() })
}

fn parse_value(value: Value) -> Record {
    match value {
        Value::String(s) => parse_text(&s),
        other => serde_json::from_value::<GaussCode>(other)
            .map_err(|e| InputError { kind: "InvalidJson", message: e.to_string() }),
    }
}
