//! Line-oriented `key = value` text format helpers.
//!
//! All on-disk text artifacts (config, calibration, parameter records,
//! scenarios) share this shape: one `key = value` per line, `#` comments,
//! optional `[section]` headers, blank lines between blocks. Floats are
//! written with Rust's shortest round-trip formatting so a parse of the
//! written text reproduces the value bit-for-bit.

use crate::error::CoreError;

/// One parsed block: optional `[section]` name plus ordered key/value pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub section: Option<String>,
    pub entries: Vec<(String, String)>,
}

impl Block {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, CoreError> {
        self.get(key).ok_or_else(|| {
            CoreError::Parse(format!(
                "missing key `{key}`{}",
                match &self.section {
                    Some(s) => format!(" in [{s}] block"),
                    None => String::new(),
                }
            ))
        })
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, CoreError> {
        parse_f64(key, self.require(key)?)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, CoreError> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn require_usize(&self, key: &str) -> Result<usize, CoreError> {
        let raw = self.require(key)?;
        raw.parse::<usize>()
            .map_err(|_| CoreError::Parse(format!("key `{key}`: expected an integer, got `{raw}`")))
    }

    pub fn require_bool(&self, key: &str) -> Result<bool, CoreError> {
        let raw = self.require(key)?;
        match raw {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(CoreError::Parse(format!(
                "key `{key}`: expected true/false, got `{raw}`"
            ))),
        }
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>, CoreError> {
        match self.get(key) {
            None => Ok(None),
            Some(_) => self.require_bool(key).map(Some),
        }
    }
}

pub fn parse_f64(key: &str, raw: &str) -> Result<f64, CoreError> {
    raw.parse::<f64>()
        .map_err(|_| CoreError::Parse(format!("key `{key}`: expected a number, got `{raw}`")))
}

/// Parse text into blocks. A new block starts at a `[section]` header or at
/// a blank line separating key/value runs.
pub fn parse_blocks(text: &str) -> Result<Vec<Block>, CoreError> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut current: Option<Block> = None;

    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() {
            if let Some(b) = current.take() {
                if !b.entries.is_empty() || b.section.is_some() {
                    blocks.push(b);
                }
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(CoreError::Parse(format!(
                    "line {}: unterminated section header `{line}`",
                    lineno + 1
                )));
            }
            if let Some(b) = current.take() {
                if !b.entries.is_empty() || b.section.is_some() {
                    blocks.push(b);
                }
            }
            current = Some(Block {
                section: Some(line[1..line.len() - 1].trim().to_string()),
                entries: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CoreError::Parse(format!(
                "line {}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        current
            .get_or_insert_with(|| Block {
                section: None,
                entries: Vec::new(),
            })
            .entries
            .push((key.trim().to_string(), value.trim().to_string()));
    }
    if let Some(b) = current.take() {
        if !b.entries.is_empty() || b.section.is_some() {
            blocks.push(b);
        }
    }
    Ok(blocks)
}

/// Parse a flat (single-block, no sections) key/value file.
pub fn parse_flat(text: &str) -> Result<Block, CoreError> {
    let blocks = parse_blocks(text)?;
    match blocks.len() {
        0 => Ok(Block {
            section: None,
            entries: Vec::new(),
        }),
        1 if blocks[0].section.is_none() => Ok(blocks.into_iter().next().unwrap()),
        _ => {
            // Tolerate blank-line separation inside a flat file by merging
            // sectionless blocks.
            let mut merged = Block {
                section: None,
                entries: Vec::new(),
            };
            for b in blocks {
                if b.section.is_some() {
                    return Err(CoreError::Parse(
                        "unexpected [section] header in a flat key/value file".into(),
                    ));
                }
                merged.entries.extend(b.entries);
            }
            Ok(merged)
        }
    }
}

/// Render a value with shortest round-trip formatting.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}
