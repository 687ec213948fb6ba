//! Project documents: the JSON form of a [`Project`].
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "meta": { "name": "billing", "weight_profile": "ifpug-standard", "metadata": {} },
//!   "inventory": { "external_input.low": 3, "...": 0 },
//!   "gsc": { "data_communications": 4, "...": 0 },
//!   "nfr": { "security": 3, "...": 0 },
//!   "rationale": { "security": "PCI scope" }
//! }
//! ```
//!
//! Parsing happens in two stages. Structural problems (bad syntax, unknown
//! keys, a missing section, non-integer values) are [`ParseError`]s.
//! Anything structurally readable is then checked by
//! [`validate_project`], whose violations come back all at once.

use std::collections::BTreeMap;

use fpnfr_core::{
    validate_project, Characteristic, FunctionCell, FunctionInventory, NfrId, Project, RatingSheet,
    Violation, DEFAULT_PROFILE,
};
use serde_json::{Map, Value};
use thiserror::Error;

pub const FORMAT_VERSION: u64 = 1;

const TOP_LEVEL_FIELDS: &[&str] = &["format_version", "meta", "inventory", "gsc", "nfr", "rationale"];
const META_FIELDS: &[&str] = &["name", "weight_profile", "metadata"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject unknown fields instead of ignoring them with a warning.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("missing required section `{0}`")]
    MissingSection(String),
    #[error("unsupported format_version {0} (expected 1)")]
    UnsupportedVersion(String),
    #[error("unknown {section} key `{key}`")]
    UnknownKey { section: &'static str, key: String },
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("field `{field}`: expected {expected}")]
    InvalidValue { field: String, expected: &'static str },
    #[error("DI out of range 0..5 for {field}: {value}")]
    DiOutOfRange { field: String, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedProject {
    pub project: Project,
    /// Unknown fields ignored in non-strict mode.
    pub warnings: Vec<String>,
}

pub fn parse_project_file(bytes: &[u8], options: ParseOptions) -> Result<ParsedProject, ProjectFileError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    parse_project_value(&value, options)
}

pub fn parse_project_value(value: &Value, options: ParseOptions) -> Result<ParsedProject, ProjectFileError> {
    let project = Reader::new(options).read(value)?;
    validate_project(&project.project).map_err(ProjectFileError::Invalid)?;
    Ok(project)
}

struct Reader {
    options: ParseOptions,
    warnings: Vec<String>,
}

impl Reader {
    fn new(options: ParseOptions) -> Self {
        Reader {
            options,
            warnings: Vec::new(),
        }
    }

    fn read(mut self, value: &Value) -> Result<ParsedProject, ParseError> {
        let root = object(value, "<root>")?;
        match root.get("format_version") {
            None => return Err(ParseError::MissingSection("format_version".into())),
            Some(v) if v.as_u64() == Some(FORMAT_VERSION) => {}
            Some(v) => return Err(ParseError::UnsupportedVersion(v.to_string())),
        }
        self.check_fields(root, TOP_LEVEL_FIELDS, "")?;

        let meta = object(section(root, "meta")?, "meta")?;
        self.check_fields(meta, META_FIELDS, "meta.")?;
        let name = meta
            .get("name")
            .ok_or_else(|| ParseError::MissingSection("meta.name".into()))?
            .as_str()
            .ok_or(ParseError::InvalidValue {
                field: "meta.name".into(),
                expected: "a string",
            })?
            .to_owned();
        let weight_profile = match meta.get("weight_profile") {
            None => DEFAULT_PROFILE.to_owned(),
            Some(v) => v
                .as_str()
                .ok_or(ParseError::InvalidValue {
                    field: "meta.weight_profile".into(),
                    expected: "a string",
                })?
                .to_owned(),
        };
        let mut metadata = BTreeMap::new();
        if let Some(m) = meta.get("metadata") {
            for (k, v) in object(m, "meta.metadata")? {
                let text = v.as_str().ok_or_else(|| ParseError::InvalidValue {
                    field: format!("meta.metadata.{k}"),
                    expected: "a string",
                })?;
                metadata.insert(k.clone(), text.to_owned());
            }
        }

        let mut inventory = FunctionInventory::empty();
        for (key, v) in object(section(root, "inventory")?, "inventory")? {
            let cell: FunctionCell = key.parse().map_err(|_| ParseError::UnknownKey {
                section: "inventory",
                key: key.clone(),
            })?;
            let count = v
                .as_u64()
                .and_then(|c| u32::try_from(c).ok())
                .ok_or_else(|| ParseError::InvalidValue {
                    field: format!("inventory.{key}"),
                    expected: "a non-negative integer count",
                })?;
            inventory.set(cell, count);
        }

        let gsc = read_sheet(section(root, "gsc")?)?;
        let mut nfr = read_sheet::<NfrId>(section(root, "nfr")?)?;
        if let Some(r) = root.get("rationale") {
            for (key, v) in object(r, "rationale")? {
                let id: NfrId = key.parse().map_err(|_| ParseError::UnknownKey {
                    section: "rationale",
                    key: key.clone(),
                })?;
                let text = v.as_str().ok_or_else(|| ParseError::InvalidValue {
                    field: format!("rationale.{key}"),
                    expected: "a string",
                })?;
                nfr.set_rationale(id, text);
            }
        }

        Ok(ParsedProject {
            project: Project {
                name,
                inventory,
                gsc,
                nfr,
                weight_profile,
                metadata,
            },
            warnings: self.warnings,
        })
    }

    fn check_fields(&mut self, obj: &Map<String, Value>, known: &[&str], prefix: &str) -> Result<(), ParseError> {
        for key in obj.keys().filter(|k| !known.contains(&k.as_str())) {
            let field = format!("{prefix}{key}");
            if self.options.strict {
                return Err(ParseError::UnknownField(field));
            }
            self.warnings.push(format!("ignoring unknown field `{field}`"));
        }
        Ok(())
    }
}

fn object<'a>(value: &'a Value, field: &str) -> Result<&'a Map<String, Value>, ParseError> {
    value.as_object().ok_or_else(|| ParseError::InvalidValue {
        field: field.to_owned(),
        expected: "an object",
    })
}

fn section<'a>(root: &'a Map<String, Value>, name: &str) -> Result<&'a Value, ParseError> {
    root.get(name)
        .ok_or_else(|| ParseError::MissingSection(name.to_owned()))
}

fn read_sheet<K: Characteristic>(value: &Value) -> Result<RatingSheet<K>, ParseError> {
    let mut sheet = RatingSheet::empty();
    for (key, v) in object(value, K::GROUP)? {
        let id: K = key.parse().map_err(|_| ParseError::UnknownKey {
            section: K::GROUP,
            key: key.clone(),
        })?;
        let field = format!("{} {key}", K::GROUP);
        let di = match v {
            Value::Number(n) if n.is_u64() => {
                let raw = n.as_u64().unwrap_or(u64::MAX);
                u8::try_from(raw).map_err(|_| ParseError::DiOutOfRange {
                    field,
                    value: raw.to_string(),
                })?
            }
            Value::Number(n) if n.is_i64() => {
                return Err(ParseError::DiOutOfRange {
                    field,
                    value: n.to_string(),
                })
            }
            _ => {
                return Err(ParseError::InvalidValue {
                    field: format!("{}.{key}", K::GROUP),
                    expected: "an integer DI",
                })
            }
        };
        sheet.set(id, di);
    }
    Ok(sheet)
}

/// Canonical JSON form: fixed section order, cells and factors in
/// enumeration order.
pub fn project_to_value(project: &Project) -> Value {
    let mut meta = Map::new();
    meta.insert("name".into(), Value::from(project.name.clone()));
    meta.insert(
        "weight_profile".into(),
        Value::from(project.weight_profile.clone()),
    );
    if !project.metadata.is_empty() {
        meta.insert(
            "metadata".into(),
            Value::Object(
                project
                    .metadata
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::from(v.clone())))
                    .collect(),
            ),
        );
    }
    let inventory: Map<String, Value> = FunctionCell::all()
        .filter_map(|c| project.inventory.get(c).map(|n| (c.to_string(), Value::from(n))))
        .collect();

    let mut root = Map::new();
    root.insert("format_version".into(), Value::from(FORMAT_VERSION));
    root.insert("meta".into(), Value::Object(meta));
    root.insert("inventory".into(), Value::Object(inventory));
    root.insert("gsc".into(), sheet_to_value(&project.gsc));
    root.insert("nfr".into(), sheet_to_value(&project.nfr));
    let rationale: Map<String, Value> = NfrId::ALL
        .iter()
        .filter_map(|&n| {
            project
                .nfr
                .rationale(n)
                .map(|t| (n.name().to_owned(), Value::from(t)))
        })
        .collect();
    if !rationale.is_empty() {
        root.insert("rationale".into(), Value::Object(rationale));
    }
    Value::Object(root)
}

fn sheet_to_value<K: Characteristic>(sheet: &RatingSheet<K>) -> Value {
    Value::Object(
        K::ALL
            .iter()
            .filter_map(|&k| sheet.raw(k).map(|v| (k.name().to_owned(), Value::from(v))))
            .collect(),
    )
}

/// Pretty-printed canonical document with a trailing newline.
pub fn render_project(project: &Project) -> String {
    let mut text = serde_json::to_string_pretty(&project_to_value(project))
        .expect("JSON values always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpnfr_core::{GscId, GscRatingSheet, NfrRatingSheet};
    use proptest::prelude::*;

    fn minimal() -> Value {
        let project = Project::zeroed("minimal", DEFAULT_PROFILE);
        project_to_value(&project)
    }

    fn parse(v: &Value) -> Result<ParsedProject, ProjectFileError> {
        parse_project_file(v.to_string().as_bytes(), ParseOptions::default())
    }

    #[test]
    fn minimal_document_parses() {
        let parsed = parse(&minimal()).unwrap();
        assert_eq!(parsed.project, Project::zeroed("minimal", DEFAULT_PROFILE));
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn di_out_of_range_is_reported() {
        let mut doc = minimal();
        doc["nfr"]["security"] = Value::from(7);
        let err = parse(&doc).unwrap_err();
        assert!(err.to_string().contains("DI out of range 0..5"), "{err}");
        assert!(matches!(err, ProjectFileError::Invalid(_)));

        doc["nfr"]["security"] = Value::from(1000);
        let err = parse(&doc).unwrap_err();
        assert!(err.to_string().contains("DI out of range 0..5"), "{err}");

        doc["nfr"]["security"] = Value::from(-1);
        assert!(matches!(
            parse(&doc).unwrap_err(),
            ProjectFileError::Parse(ParseError::DiOutOfRange { .. })
        ));
    }

    #[test]
    fn missing_section_is_named() {
        let mut doc = minimal();
        doc.as_object_mut().unwrap().remove("nfr");
        let err = parse(&doc).unwrap_err();
        assert_eq!(err, ProjectFileError::Parse(ParseError::MissingSection("nfr".into())));
        assert!(err.to_string().contains("nfr"));
    }

    #[test]
    fn error_kinds_are_distinct() {
        let err = parse_project_file(b"{\n  \"format_version\": 1,\n  oops\n}", ParseOptions::default()).unwrap_err();
        assert!(matches!(err, ProjectFileError::Parse(ParseError::Syntax { line: 3, .. })));

        let mut doc = minimal();
        doc["gsc"]["warp_drive"] = Value::from(1);
        assert_eq!(
            parse(&doc).unwrap_err(),
            ProjectFileError::Parse(ParseError::UnknownKey {
                section: "gsc",
                key: "warp_drive".into()
            })
        );

        let mut doc = minimal();
        doc["gsc"]["performance"] = Value::from("high");
        assert!(matches!(
            parse(&doc).unwrap_err(),
            ProjectFileError::Parse(ParseError::InvalidValue { .. })
        ));

        let mut doc = minimal();
        doc["gsc"]["performance"] = serde_json::from_str("2.5").unwrap();
        assert!(matches!(
            parse(&doc).unwrap_err(),
            ProjectFileError::Parse(ParseError::InvalidValue { .. })
        ));

        let mut doc = minimal();
        doc["format_version"] = Value::from(2);
        assert!(matches!(
            parse(&doc).unwrap_err(),
            ProjectFileError::Parse(ParseError::UnsupportedVersion(_))
        ));
    }

    #[test]
    fn missing_key_is_a_violation() {
        let mut doc = minimal();
        doc["inventory"].as_object_mut().unwrap().remove("external_inquiry.high");
        doc["gsc"].as_object_mut().unwrap().remove("reusability");
        let ProjectFileError::Invalid(v) = parse(&doc).unwrap_err() else {
            panic!("expected violations");
        };
        assert_eq!(v.len(), 2);
        assert!(v[0].to_string().contains("external_inquiry.high"));
    }

    #[test]
    fn unknown_fields_warn_or_fail() {
        let mut doc = minimal();
        doc["colour"] = Value::from("blue");
        doc["meta"]["owner"] = Value::from("ops");
        let parsed = parse(&doc).unwrap();
        assert_eq!(parsed.warnings.len(), 2);
        let err = parse_project_file(doc.to_string().as_bytes(), ParseOptions { strict: true }).unwrap_err();
        assert_eq!(err, ProjectFileError::Parse(ParseError::UnknownField("colour".into())));
    }

    #[test]
    fn rationale_and_metadata_survive() {
        let mut p = Project::zeroed("r", "custom");
        p.nfr.set_rationale(NfrId::Security, "PCI scope");
        p.metadata.insert("team".into(), "payments".into());
        let parsed = parse_project_file(render_project(&p).as_bytes(), ParseOptions { strict: true }).unwrap();
        assert_eq!(parsed.project, p);
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(
            counts in proptest::array::uniform15(0u32..1000),
            gsc in proptest::array::uniform14(0u8..=5),
            nfr in proptest::array::uniform7(0u8..=5),
            name in "[a-z][a-z0-9 _-]{0,12}",
        ) {
            let mut p = Project::zeroed(name, DEFAULT_PROFILE);
            p.inventory = FunctionCell::all().zip(counts).collect();
            p.gsc = GscRatingSheet::from_values(&gsc);
            p.nfr = NfrRatingSheet::from_values(&nfr);
            let first = parse_project_file(render_project(&p).as_bytes(), ParseOptions::default()).unwrap().project;
            let text = render_project(&first);
            let second = parse_project_file(text.as_bytes(), ParseOptions::default()).unwrap().project;
            prop_assert_eq!(&first, &second);
            prop_assert_eq!(&first, &p);
            prop_assert_eq!(render_project(&second), text);
            prop_assert_eq!(first.gsc.value(GscId::FacilitateChange), gsc[13]);
        }
    }
}
