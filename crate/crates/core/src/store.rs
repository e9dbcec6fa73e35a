//! JSONL persistence for invariant tables.
//!
//! The first line is a header object; every further line is one
//! `{"gamma": <config>, "value": "<p/q>"}` record, sorted by configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::configs::CurveConfig;
use crate::error::StoreError;
use crate::lattice::Rational;
use crate::solver::InvariantTable;

pub const FORMAT: &str = "tropgw-invariants";
pub const VERSION: u32 = 1;

/// Name of the table file inside a cache directory.
pub const CACHE_FILE: &str = "invariants.jsonl";

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    max_degree: Option<i64>,
    min_chi: Option<i64>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    gamma: &'a CurveConfig,
    value: &'a Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordIn {
    gamma: serde_json::Value,
    value: String,
}

/// Canonical text of a table. Equal tables give identical text.
pub fn render_table(table: &InvariantTable) -> Result<String, StoreError> {
    if let Some(c) = table.in_progress() {
        return Err(StoreError::Unsolved(c.clone()));
    }
    let (max_degree, min_chi) = table.bounds().unzip();
    let header = Header {
        format: FORMAT.to_string(),
        version: VERSION,
        max_degree,
        min_chi,
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for (gamma, value) in table.solved() {
        out.push_str(&serde_json::to_string(&RecordOut { gamma, value }).expect("record serializes"));
        out.push('\n');
    }
    Ok(out)
}

/// Write the table, replacing `path` atomically.
pub fn save_table(table: &InvariantTable, path: &Path) -> Result<(), StoreError> {
    let text = render_table(table)?;
    let io = |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let tmp = tmp_path(path);
    let mut file = fs::File::create(&tmp).map_err(io)?;
    file.write_all(text.as_bytes()).map_err(io)?;
    file.sync_all().map_err(io)?;
    drop(file);
    fs::rename(&tmp, path).map_err(io)
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

pub fn load_table(path: &Path) -> Result<InvariantTable, StoreError> {
    let text = fs::read_to_string(path).map_err(|source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_table(&text, path)
}

/// Parse table text; `path` is only used in error messages.
pub fn parse_table(text: &str, path: &Path) -> Result<InvariantTable, StoreError> {
    let corrupt = |line: usize, reason: String| StoreError::Corrupt {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| corrupt(1, "missing header".into()))?;
    let header: Header = serde_json::from_str(first).map_err(|e| corrupt(1, format!("bad header: {e}")))?;
    if header.format != FORMAT {
        return Err(corrupt(1, format!("unknown format {:?}", header.format)));
    }
    if header.version != VERSION {
        return Err(StoreError::Version {
            path: path.to_path_buf(),
            found: header.version,
            expected: VERSION,
        });
    }
    let mut table = InvariantTable::new();
    table.set_bounds(match (header.max_degree, header.min_chi) {
        (Some(d), Some(c)) => Some((d, c)),
        (None, None) => None,
        _ => return Err(corrupt(1, "incomplete bounds".into())),
    });
    let mut previous: Option<CurveConfig> = None;
    for (n, line) in lines {
        if line.trim().is_empty() {
            return Err(corrupt(n, "blank line".into()));
        }
        let record: RecordIn = serde_json::from_str(line).map_err(|e| corrupt(n, e.to_string()))?;
        let gamma = CurveConfig::deserialize(&record.gamma).map_err(|e| corrupt(n, e.to_string()))?;
        if serde_json::to_value(&gamma).expect("configuration serializes") != record.gamma {
            return Err(corrupt(
                n,
                format!("non-canonical key, expected {}", gamma.canonical_json()),
            ));
        }
        let value: Rational = record.value.parse().map_err(|e| corrupt(n, format!("{e}")))?;
        if previous.as_ref().is_some_and(|p| p >= &gamma) {
            return Err(corrupt(n, "records out of order or duplicated".into()));
        }
        table
            .insert(gamma.clone(), value)
            .map_err(|e| corrupt(n, e.to_string()))?;
        previous = Some(gamma);
    }
    Ok(table)
}
