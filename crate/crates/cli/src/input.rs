//! JSON arguments: inline text, `@path` for a file, or `-` for stdin.

use std::fmt;
use std::io::Read;

use serde::de::DeserializeOwned;

#[derive(Debug)]
pub enum InputError {
    Io { source: String, message: String },
    Json { source: String, line: usize, column: usize, message: String },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io { source, message } => write!(f, "cannot read {source}: {message}"),
            // serde reports semantic errors from validating constructors without a position
            InputError::Json { source, line: 0, message, .. } => write!(f, "invalid input in {source}: {message}"),
            InputError::Json { source, line, column, message } => {
                write!(f, "malformed JSON in {source} at line {line}, column {column}: {message}")
            }
        }
    }
}

fn read_raw(arg: &str) -> Result<(String, String), InputError> {
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| InputError::Io { source: "stdin".into(), message: e.to_string() })?;
        Ok(("stdin".into(), text))
    } else if let Some(path) = arg.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError::Io { source: path.into(), message: e.to_string() })?;
        Ok((path.into(), text))
    } else {
        Ok(("argument".into(), arg.to_string()))
    }
}

/// Parses an argument into `T`; serde's own messages carry the structural
/// errors (unknown fields, bad orders) along with the position.
pub fn parse<T: DeserializeOwned>(arg: &str) -> Result<T, InputError> {
    let (source, text) = read_raw(arg)?;
    serde_json::from_str(&text).map_err(|e| InputError::Json {
        source,
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
