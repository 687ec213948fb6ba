//! Sensitivity of the extended FP count to individual ratings, and
//! calibration of effort models against historical actuals.

pub mod calibration;
pub mod sensitivity;

pub use calibration::{
    calibrate, calibrate_with, CalibrationError, CalibrationRecord, CalibrationResult, EffortModel,
    FitSummary, ModelParams,
};
pub use sensitivity::{fp_bounds, one_way_sensitivity, tornado, Factor, SensitivityResult, Vary};
