//! Rendering estimate reports as JSON, CSV, plain text and Markdown, and
//! reading JSON reports back.
//!
//! CSV column order is fixed (see [`CSV_COLUMNS`]). Decimal fields keep
//! their exact decimal text in every format.

use std::fmt::Write as _;

use clap::ValueEnum;
use fpnfr_core::json::{decimal_from_value, decimal_to_value, DecimalStyle};
use fpnfr_core::{ConsistencyWarning, Decimal, DegreeOfInfluence, EstimateReport, GscId, NfrId};
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
    Markdown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RenderOptions {
    pub decimal_style: DecimalStyle,
    /// Printed as a `generated:` line in text output only.
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRendering {
    pub format: OutputFormat,
    pub content: Vec<u8>,
}

impl ReportRendering {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.content).expect("renderers emit UTF-8")
    }
}

pub const CSV_COLUMNS: [&str; 11] = [
    "project",
    "ufp",
    "tdi",
    "adi",
    "tdi_n",
    "vaf_classic",
    "vaf_extended",
    "fp_classic",
    "fp_extended",
    "delta",
    "warnings",
];

pub fn render_report(report: &EstimateReport, format: OutputFormat, options: &RenderOptions) -> ReportRendering {
    render_reports(std::slice::from_ref(report), format, options)
}

/// Renders several reports as one document: a JSON array (a bare object
/// for a single report), one CSV row each, or consecutive text/Markdown
/// sections.
pub fn render_reports(reports: &[EstimateReport], format: OutputFormat, options: &RenderOptions) -> ReportRendering {
    let text = match format {
        OutputFormat::Json => {
            let value = match reports {
                [single] => report_to_value(single, options.decimal_style),
                many => Value::Array(
                    many.iter()
                        .map(|r| report_to_value(r, options.decimal_style))
                        .collect(),
                ),
            };
            let mut s = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => render_csv(reports),
        OutputFormat::Text => reports
            .iter()
            .map(|r| render_text(r, options))
            .collect::<Vec<_>>()
            .join("\n"),
        OutputFormat::Markdown => reports
            .iter()
            .map(render_markdown)
            .collect::<Vec<_>>()
            .join("\n"),
    };
    ReportRendering {
        format,
        content: text.into_bytes(),
    }
}

pub fn report_to_value(r: &EstimateReport, style: DecimalStyle) -> Value {
    let dec = |d: Decimal| decimal_to_value(d, style);
    let mut obj = Map::new();
    obj.insert("project".into(), Value::from(r.project.clone()));
    obj.insert("ufp".into(), dec(r.ufp));
    obj.insert("tdi".into(), Value::from(r.tdi));
    obj.insert("adi".into(), Value::from(r.adi));
    obj.insert("tdi_n".into(), Value::from(r.tdi_n));
    obj.insert("vaf_classic".into(), dec(r.vaf_classic));
    obj.insert("vaf_extended".into(), dec(r.vaf_extended));
    obj.insert("fp_classic".into(), dec(r.fp_classic));
    obj.insert("fp_extended".into(), dec(r.fp_extended));
    obj.insert("delta".into(), dec(r.delta()));
    obj.insert(
        "warnings".into(),
        Value::Array(r.warnings.iter().map(warning_to_value).collect()),
    );
    Value::Object(obj)
}

fn warning_to_value(w: &ConsistencyWarning) -> Value {
    let mapped: Vec<Value> = w
        .mapped_gsc_dis
        .iter()
        .map(|(g, d)| {
            let mut m = Map::new();
            m.insert("gsc".into(), Value::from(g.name()));
            m.insert("di".into(), Value::from(d.value()));
            Value::Object(m)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("nfr".into(), Value::from(w.nfr.name()));
    obj.insert("nfr_di".into(), Value::from(w.nfr_di.value()));
    obj.insert("mapped_gsc_dis".into(), Value::Array(mapped));
    obj.insert("suggested_di".into(), Value::from(w.suggested_di.value()));
    obj.insert("message".into(), Value::from(w.message.clone()));
    Value::Object(obj)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportParseError {
    #[error("report syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("report field `{0}` missing or malformed")]
    Field(String),
}

/// Reads a single JSON report back into an [`EstimateReport`]. Decimals may
/// be numbers or strings.
pub fn parse_report_json(text: &str) -> Result<EstimateReport, ReportParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ReportParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    report_from_value(&value)
}

pub fn report_from_value(value: &Value) -> Result<EstimateReport, ReportParseError> {
    let field = |name: &str| ReportParseError::Field(name.to_owned());
    let dec = |name: &str| value.get(name).and_then(decimal_from_value).ok_or_else(|| field(name));
    let int = |name: &str| {
        value
            .get(name)
            .and_then(Value::as_u64)
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| field(name))
    };
    let warnings = value
        .get("warnings")
        .and_then(Value::as_array)
        .ok_or_else(|| field("warnings"))?
        .iter()
        .map(warning_from_value)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EstimateReport {
        project: value
            .get("project")
            .and_then(Value::as_str)
            .ok_or_else(|| field("project"))?
            .to_owned(),
        ufp: dec("ufp")?,
        tdi: int("tdi")?,
        adi: int("adi")?,
        tdi_n: int("tdi_n")?,
        vaf_classic: dec("vaf_classic")?,
        vaf_extended: dec("vaf_extended")?,
        fp_classic: dec("fp_classic")?,
        fp_extended: dec("fp_extended")?,
        warnings,
    })
}

fn warning_from_value(value: &Value) -> Result<ConsistencyWarning, ReportParseError> {
    let field = |name: &str| ReportParseError::Field(format!("warnings[].{name}"));
    let di = |v: Option<&Value>, name: &str| {
        v.and_then(Value::as_u64)
            .and_then(|d| u8::try_from(d).ok())
            .and_then(|d| DegreeOfInfluence::new(d).ok())
            .ok_or_else(|| field(name))
    };
    let nfr: NfrId = value
        .get("nfr")
        .and_then(Value::as_str)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| field("nfr"))?;
    let mapped_gsc_dis = value
        .get("mapped_gsc_dis")
        .and_then(Value::as_array)
        .ok_or_else(|| field("mapped_gsc_dis"))?
        .iter()
        .map(|m| {
            let g: GscId = m
                .get("gsc")
                .and_then(Value::as_str)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| field("mapped_gsc_dis[].gsc"))?;
            Ok((g, di(m.get("di"), "mapped_gsc_dis[].di")?))
        })
        .collect::<Result<Vec<_>, ReportParseError>>()?;
    Ok(ConsistencyWarning {
        nfr,
        nfr_di: di(value.get("nfr_di"), "nfr_di")?,
        mapped_gsc_dis,
        suggested_di: di(value.get("suggested_di"), "suggested_di")?,
        message: value
            .get("message")
            .and_then(Value::as_str)
            .ok_or_else(|| field("message"))?
            .to_owned(),
    })
}

fn render_csv(reports: &[EstimateReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in reports {
        w.write_record([
            r.project.clone(),
            r.ufp.to_string(),
            r.tdi.to_string(),
            r.adi.to_string(),
            r.tdi_n.to_string(),
            r.vaf_classic.to_string(),
            r.vaf_extended.to_string(),
            r.fp_classic.to_string(),
            r.fp_extended.to_string(),
            r.delta().to_string(),
            r.warnings.len().to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv emits UTF-8")
}

fn render_text(r: &EstimateReport, options: &RenderOptions) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "project: {}", r.project);
    if let Some(ts) = &options.timestamp {
        let _ = writeln!(s, "generated: {ts}");
    }
    let _ = writeln!(s, "ufp: {}", r.ufp);
    let _ = writeln!(s, "tdi: {} (14 GSCs)", r.tdi);
    let _ = writeln!(s, "adi: {} (7 NFRs)", r.adi);
    let _ = writeln!(s, "tdi_n: {}", r.tdi_n);
    let _ = writeln!(s, "vaf classic: {}", r.vaf_classic);
    let _ = writeln!(s, "vaf extended: {}", r.vaf_extended);
    let _ = writeln!(s, "fp classic: {}", r.fp_classic);
    let _ = writeln!(s, "fp extended: {}", r.fp_extended);
    let _ = writeln!(s, "delta: {}", r.delta());
    if r.warnings.is_empty() {
        let _ = writeln!(s, "warnings: none");
    } else {
        let _ = writeln!(s, "warnings: {}", r.warnings.len());
        for w in &r.warnings {
            let _ = writeln!(s, "  - {}", w.message);
        }
    }
    s
}

fn render_markdown(r: &EstimateReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "## {}\n", r.project);
    let _ = writeln!(s, "| measure | classic | extended |");
    let _ = writeln!(s, "|---|---:|---:|");
    let _ = writeln!(s, "| UFP | {} | {} |", r.ufp, r.ufp);
    let _ = writeln!(s, "| degree of influence | {} | {} |", r.tdi, r.tdi_n);
    let _ = writeln!(s, "| VAF | {} | {} |", r.vaf_classic, r.vaf_extended);
    let _ = writeln!(s, "| FP | {} | {} |", r.fp_classic, r.fp_extended);
    let _ = writeln!(s, "\nADI: {}  \ndelta: {}\n", r.adi, r.delta());
    if r.warnings.is_empty() {
        let _ = writeln!(s, "No consistency warnings.");
    } else {
        let _ = writeln!(s, "### Consistency warnings\n");
        for w in &r.warnings {
            let _ = writeln!(s, "- {}", w.message);
        }
    }
    s
}
