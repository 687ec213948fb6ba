//! NFR → GSC mappings, the DI guideline rubrics for the four tabled NFRs,
//! rating suggestions for the untabled ones, and the consistency lint that
//! compares an NFR's rating with its mapped GSCs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{DegreeOfInfluence, GscId, GscRatingSheet, NfrId, Project};

/// Rendered in place of guideline text for NFRs that have no rubric.
pub const NO_RUBRIC_MARKER: &str = "no rubric in source";

/// Appended when rendering a guideline whose source text is incomplete.
pub const TRUNCATION_SUFFIX: &str = " [text truncated in source]";

/// Default divergence at which [`consistency_warnings`] fires.
pub const DEFAULT_THRESHOLD: u8 = 2;

const EMBEDDED_RUBRICS: &str = include_str!("../data/rubrics.json");

/// Whether a mapping was taken over from the pre-existing GSC mapping or
/// introduced by the extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingOrigin {
    Existing,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MappingEntry {
    pub nfr: NfrId,
    pub gscs: &'static [GscId],
    pub origin: MappingOrigin,
}

use GscId::*;

static MAPPING: [MappingEntry; 7] = [
    MappingEntry {
        nfr: NfrId::Reliability,
        gscs: &[OperationalEase],
        origin: MappingOrigin::Existing,
    },
    MappingEntry {
        nfr: NfrId::ResponseTime,
        gscs: &[DataCommunications, DistributedDataProcessing, Performance],
        origin: MappingOrigin::Extended,
    },
    MappingEntry {
        nfr: NfrId::Performance,
        gscs: &[Performance, OnlineUpdate, OnlineDataEntry],
        origin: MappingOrigin::Existing,
    },
    MappingEntry {
        nfr: NfrId::Security,
        gscs: &[MultipleSites, OnlineUpdate],
        origin: MappingOrigin::Extended,
    },
    MappingEntry {
        nfr: NfrId::Availability,
        gscs: &[OnlineDataEntry, OperationalEase],
        origin: MappingOrigin::Extended,
    },
    MappingEntry {
        nfr: NfrId::Scalability,
        gscs: &[TransactionRate],
        origin: MappingOrigin::Existing,
    },
    MappingEntry {
        nfr: NfrId::Capacity,
        gscs: &[TransactionRate, MultipleSites],
        origin: MappingOrigin::Extended,
    },
];

/// The full NFR → GSC table, in NFR enumeration order.
pub fn mapping_table() -> &'static [MappingEntry] {
    &MAPPING
}

pub fn mapped_gscs(nfr: NfrId) -> &'static [GscId] {
    MAPPING[nfr as usize].gscs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    #[default]
    Complete,
    TruncatedInSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RubricEntry {
    pub text: String,
    pub completeness: Completeness,
}

/// Result of a guideline lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guideline<'a> {
    Text {
        text: &'a str,
        completeness: Completeness,
    },
    NoRubric,
}

impl Guideline<'_> {
    /// Stored text, verbatim. `None` for NFRs without a rubric.
    pub fn text(&self) -> Option<&str> {
        match self {
            Guideline::Text { text, .. } => Some(text),
            Guideline::NoRubric => None,
        }
    }
}

impl fmt::Display for Guideline<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guideline::Text {
                text,
                completeness: Completeness::Complete,
            } => f.write_str(text),
            Guideline::Text {
                text,
                completeness: Completeness::TruncatedInSource,
            } => write!(f, "{text}{TRUNCATION_SUFFIX}"),
            Guideline::NoRubric => f.write_str(NO_RUBRIC_MARKER),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RubricError {
    #[error("rubric syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported rubric format_version {0}")]
    Version(u32),
    #[error("no rubric may be defined for {0}")]
    Untabled(NfrId),
    #[error("DI out of range 0..5 in rubric for {nfr}: {di}")]
    DiOutOfRange { nfr: NfrId, di: u8 },
    #[error("empty guideline text for {nfr} DI {di}")]
    EmptyText { nfr: NfrId, di: u8 },
    #[error("rubric for {nfr} is missing DI {di}")]
    Missing { nfr: NfrId, di: u8 },
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RubricFile {
    format_version: u32,
    tables: Vec<RubricFileTable>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RubricFileTable {
    nfr: NfrId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    guidelines: Vec<RubricFileRow>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RubricFileRow {
    di: u8,
    #[serde(default)]
    completeness: Completeness,
    text: String,
}

/// The NFRs that carry a six-level guideline rubric.
pub const TABLED_NFRS: [NfrId; 4] = [
    NfrId::ResponseTime,
    NfrId::Security,
    NfrId::Availability,
    NfrId::Capacity,
];

pub fn is_tabled(nfr: NfrId) -> bool {
    TABLED_NFRS.contains(&nfr)
}

/// Guideline texts keyed by (NFR, DI). Always holds all 24 entries for the
/// tabled NFRs and none for the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RubricTable {
    titles: BTreeMap<NfrId, String>,
    entries: BTreeMap<(NfrId, DegreeOfInfluence), RubricEntry>,
}

impl RubricTable {
    /// The shipped rubric data.
    pub fn embedded() -> &'static RubricTable {
        static TABLE: OnceLock<RubricTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            RubricTable::from_json(EMBEDDED_RUBRICS).expect("shipped rubric data is valid")
        })
    }

    /// Raw text of the shipped rubric data file.
    pub fn embedded_source() -> &'static str {
        EMBEDDED_RUBRICS
    }

    /// Parses a complete rubric document. Every tabled NFR must be present
    /// at all six levels.
    pub fn from_json(text: &str) -> Result<RubricTable, RubricError> {
        let mut table = RubricTable {
            titles: BTreeMap::new(),
            entries: BTreeMap::new(),
        };
        table.merge(parse_file(text)?)?;
        for nfr in TABLED_NFRS {
            for di in DegreeOfInfluence::levels() {
                if !table.entries.contains_key(&(nfr, di)) {
                    return Err(RubricError::Missing { nfr, di: di.value() });
                }
            }
        }
        Ok(table)
    }

    /// Returns a copy with guideline texts replaced by those in an override
    /// document. Overrides may cover any subset of the tabled entries.
    pub fn with_overrides(&self, text: &str) -> Result<RubricTable, RubricError> {
        let mut table = self.clone();
        table.merge(parse_file(text)?)?;
        Ok(table)
    }

    fn merge(&mut self, file: RubricFile) -> Result<(), RubricError> {
        for t in file.tables {
            if !is_tabled(t.nfr) {
                return Err(RubricError::Untabled(t.nfr));
            }
            if let Some(title) = t.title {
                self.titles.insert(t.nfr, title);
            }
            for row in t.guidelines {
                let di = DegreeOfInfluence::new(row.di)
                    .map_err(|_| RubricError::DiOutOfRange { nfr: t.nfr, di: row.di })?;
                if row.text.trim().is_empty() {
                    return Err(RubricError::EmptyText { nfr: t.nfr, di: row.di });
                }
                self.entries.insert(
                    (t.nfr, di),
                    RubricEntry {
                        text: row.text,
                        completeness: row.completeness,
                    },
                );
            }
        }
        Ok(())
    }

    pub fn guideline(&self, nfr: NfrId, di: DegreeOfInfluence) -> Guideline<'_> {
        match self.entries.get(&(nfr, di)) {
            Some(entry) => Guideline::Text {
                text: &entry.text,
                completeness: entry.completeness,
            },
            None => Guideline::NoRubric,
        }
    }

    pub fn title(&self, nfr: NfrId) -> Option<&str> {
        self.titles.get(&nfr).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (NfrId, DegreeOfInfluence, &RubricEntry)> {
        self.entries.iter().map(|(&(n, d), e)| (n, d, e))
    }
}

fn parse_file(text: &str) -> Result<RubricFile, RubricError> {
    let file: RubricFile = serde_json::from_str(text).map_err(|e| RubricError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.format_version != 1 {
        return Err(RubricError::Version(file.format_version));
    }
    Ok(file)
}

/// Guideline lookup against the shipped rubric data.
pub fn guideline(nfr: NfrId, di: DegreeOfInfluence) -> Guideline<'static> {
    RubricTable::embedded().guideline(nfr, di)
}

/// Suggested DI for `nfr`: the mean of its mapped GSC ratings, rounded half
/// away from zero.
pub fn suggest_nfr_di(nfr: NfrId, gsc: &GscRatingSheet) -> DegreeOfInfluence {
    let mapped = mapped_gscs(nfr);
    let n = mapped.len() as u32;
    let sum: u32 = mapped
        .iter()
        .map(|&g| u32::from(gsc.value(g).min(DegreeOfInfluence::MAX.value())))
        .sum();
    // non-negative, so half-up is half-away-from-zero
    let rounded = (2 * sum + n) / (2 * n);
    DegreeOfInfluence::new(rounded as u8).expect("mean of 0..=5 stays in 0..=5")
}

/// Raised when an NFR's rating disagrees with what its mapped GSCs suggest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyWarning {
    pub nfr: NfrId,
    pub nfr_di: DegreeOfInfluence,
    pub mapped_gsc_dis: Vec<(GscId, DegreeOfInfluence)>,
    pub suggested_di: DegreeOfInfluence,
    pub message: String,
}

impl ConsistencyWarning {
    pub fn divergence(&self) -> u8 {
        self.nfr_di.value().abs_diff(self.suggested_di.value())
    }
}

/// One warning per NFR whose rating differs from [`suggest_nfr_di`] by at
/// least `threshold`, in NFR enumeration order.
pub fn consistency_warnings(project: &Project, threshold: u8) -> Vec<ConsistencyWarning> {
    NfrId::ALL
        .iter()
        .filter_map(|&nfr| {
            let nfr_di = project.nfr.get(nfr)?;
            let suggested_di = suggest_nfr_di(nfr, &project.gsc);
            if nfr_di.value().abs_diff(suggested_di.value()) < threshold {
                return None;
            }
            let mapped_gsc_dis: Vec<(GscId, DegreeOfInfluence)> = mapped_gscs(nfr)
                .iter()
                .map(|&g| (g, project.gsc.get(g).unwrap_or_default()))
                .collect();
            let listing = mapped_gsc_dis
                .iter()
                .map(|(g, d)| format!("{g}={d}"))
                .collect::<Vec<_>>()
                .join(", ");
            let message = format!(
                "{nfr} rated {nfr_di} but mapped GSCs ({listing}) suggest {suggested_di}; \
                 the NFR may double-count or contradict its GSC ratings"
            );
            Some(ConsistencyWarning {
                nfr,
                nfr_di,
                mapped_gsc_dis,
                suggested_di,
                message,
            })
        })
        .collect()
}
