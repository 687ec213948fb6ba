//! Function point sizing with an NFR-extended value adjustment factor.
//!
//! The classic adjustment sums the 14 General System Characteristic ratings
//! into a total degree of influence (TDI). The extension adds the ratings of
//! seven non-functional requirements (ADI) and applies the same
//! `VAF = 0.65 + 0.01 · TDI_N` formula to `TDI_N = TDI + ADI`.
//!
//! ```
//! use fpnfr_core::{estimate, Project, WeightProfile, NfrRatingSheet};
//!
//! let profile = WeightProfile::builtin("ifpug-standard").unwrap();
//! let mut project = Project::zeroed("demo", "ifpug-standard");
//! project.nfr = NfrRatingSheet::uniform(5);
//! let report = estimate(&project, &profile).unwrap();
//! assert_eq!(report.tdi_n, 35);
//! assert_eq!(report.vaf_extended.to_string(), "1.00");
//! ```

pub mod adjustment;
pub mod analysis;
pub mod counting;
pub mod json;
pub mod model;
pub mod profile;
pub mod rubric;

pub use rust_decimal::Decimal;

pub use adjustment::{
    compute_adi, compute_fp, compute_tdi, compute_tdi_n, compute_vaf, estimate, estimate_with,
    EstimateError, EstimateOptions, EstimateReport, RangeError,
};
pub use analysis::{
    calibrate, calibrate_with, fp_bounds, one_way_sensitivity, tornado, CalibrationError,
    CalibrationRecord, CalibrationResult, EffortModel, Factor, FitSummary, ModelParams,
    SensitivityResult, Vary,
};
pub use counting::compute_ufp;
pub use model::{
    validate_project, Characteristic, Complexity, DegreeOfInfluence, FunctionCell,
    FunctionInventory, FunctionType, GscId, GscRatingSheet, NfrId, NfrRatingSheet, Project,
    RatingSheet, UnknownIdentifier, Violation,
};
pub use profile::{ProfileError, WeightProfile, DEFAULT_PROFILE};
pub use rubric::{
    consistency_warnings, guideline, mapped_gscs, mapping_table, suggest_nfr_di, Completeness,
    ConsistencyWarning, Guideline, MappingEntry, MappingOrigin, RubricError, RubricTable,
    DEFAULT_THRESHOLD,
};
