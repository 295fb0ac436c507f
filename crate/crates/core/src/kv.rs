//! Flat `key=value` text blocks with `#` comments.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KvError {
    #[error("line {line}: expected key=value, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: duplicate key {key:?}")]
    Duplicate { line: usize, key: String },
}

/// Parses one `key=value` pair per line. Blank lines and everything after
/// a `#` are ignored; keys and values are trimmed.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, KvError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(KvError::Malformed {
                line: i + 1,
                text: line.to_string(),
            });
        };
        let key = k.trim();
        if key.is_empty() {
            return Err(KvError::Malformed {
                line: i + 1,
                text: line.to_string(),
            });
        }
        if out.insert(key.to_string(), v.trim().to_string()).is_some() {
            return Err(KvError::Duplicate {
                line: i + 1,
                key: key.to_string(),
            });
        }
    }
    Ok(out)
}
