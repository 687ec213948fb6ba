//! Calibration records files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "records": [
//!     { "name": "billing-2019", "actual_effort": 5120, "project": { ...project document... } },
//!     { "name": "crm-2021", "actual_effort": "880.5", "project_file": "crm.json" }
//!   ]
//! }
//! ```
//!
//! `project_file` paths are relative to the records file.

use std::path::Path;

use fpnfr_core::json::decimal_from_value;
use fpnfr_core::CalibrationRecord;
use fpnfr_core::Decimal;
use serde_json::Value;
use thiserror::Error;

use crate::document::{parse_project_file, parse_project_value, ParseOptions, ProjectFileError};

#[derive(Debug, Error)]
pub enum RecordsError {
    #[error("records syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("records field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("record `{record}`: {source}")]
    Project {
        record: String,
        #[source]
        source: ProjectFileError,
    },
    #[error("record `{record}`: cannot read {path}: {source}")]
    Io {
        record: String,
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub fn parse_records(bytes: &[u8], base_dir: &Path, options: ParseOptions) -> Result<Vec<CalibrationRecord>, RecordsError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| RecordsError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field = |field: String, message: &str| RecordsError::Field {
        field,
        message: message.to_owned(),
    };
    match value.get("format_version").and_then(Value::as_u64) {
        Some(1) => {}
        _ => return Err(field("format_version".into(), "must be 1")),
    }
    let rows = value
        .get("records")
        .and_then(Value::as_array)
        .ok_or_else(|| field("records".into(), "missing or not an array"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let name = row
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| field(format!("records[{i}].name"), "missing or not a string"))?
                .to_owned();
            let effort: Decimal = row
                .get("actual_effort")
                .and_then(decimal_from_value)
                .ok_or_else(|| field(format!("records[{i}].actual_effort"), "expected a number"))?;
            let parsed = match (row.get("project"), row.get("project_file").and_then(Value::as_str)) {
                (Some(doc), None) => parse_project_value(doc, options),
                (None, Some(rel)) => {
                    let path = base_dir.join(rel);
                    let bytes = std::fs::read(&path).map_err(|source| RecordsError::Io {
                        record: name.clone(),
                        path: path.display().to_string(),
                        source,
                    })?;
                    parse_project_file(&bytes, options)
                }
                _ => {
                    return Err(field(
                        format!("records[{i}]"),
                        "needs exactly one of `project` or `project_file`",
                    ))
                }
            }
            .map_err(|source| RecordsError::Project {
                record: name.clone(),
                source,
            })?;
            Ok(CalibrationRecord {
                name,
                project: parsed.project,
                actual_effort: effort.to_string().parse().unwrap_or(f64::NAN),
            })
        })
        .collect()
}
