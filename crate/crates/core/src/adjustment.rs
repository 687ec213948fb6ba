//! Degree-of-influence totals, the value adjustment factor and the adjusted
//! function point count, for both the classic 14-GSC adjustment and the
//! NFR-extended one.
//!
//! ```text
//! TDI   = Σ DI(GSC_i), i = 1..14        0..=70
//! ADI   = Σ DI(NFR_i), i = 1..7         0..=35
//! TDI_N = TDI + ADI                     0..=105
//! VAF   = 0.65 + 0.01 · TDI_N
//! FP    = UFP · VAF
//! ```
//!
//! All arithmetic is exact decimal.

use rust_decimal::Decimal;
use thiserror::Error;

use crate::counting::compute_ufp;
use crate::model::{validate_project, GscRatingSheet, NfrRatingSheet, Project, Violation};
use crate::profile::WeightProfile;
use crate::rubric::{consistency_warnings, ConsistencyWarning, DEFAULT_THRESHOLD};

pub const MAX_TDI: u32 = 70;
pub const MAX_ADI: u32 = 35;
pub const MAX_TDI_N: u32 = 105;

/// 0.65
pub const VAF_BASE: Decimal = Decimal::from_parts(65, 0, 0, false, 2);
/// 1.70
pub const VAF_MAX: Decimal = Decimal::from_parts(170, 0, 0, false, 2);

/// An argument outside its legal range.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{field} = {value} is outside the legal range {range}")]
pub struct RangeError {
    pub field: &'static str,
    pub value: String,
    pub range: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EstimateError {
    #[error("project is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Range(#[from] RangeError),
}

pub fn compute_tdi(gsc: &GscRatingSheet) -> u32 {
    gsc.total()
}

pub fn compute_adi(nfr: &NfrRatingSheet) -> u32 {
    nfr.total()
}

pub fn compute_tdi_n(tdi: u32, adi: u32) -> Result<u32, RangeError> {
    if tdi > MAX_TDI {
        return Err(RangeError {
            field: "tdi",
            value: tdi.to_string(),
            range: "0..=70",
        });
    }
    if adi > MAX_ADI {
        return Err(RangeError {
            field: "adi",
            value: adi.to_string(),
            range: "0..=35",
        });
    }
    Ok(tdi + adi)
}

/// `0.65 + 0.01 · tdi`. Serves both the classic total (0..=70) and the
/// extended one (0..=105).
pub fn compute_vaf(tdi: u32) -> Result<Decimal, RangeError> {
    if tdi > MAX_TDI_N {
        return Err(RangeError {
            field: "tdi",
            value: tdi.to_string(),
            range: "0..=105",
        });
    }
    Ok(VAF_BASE + Decimal::new(i64::from(tdi), 2))
}

pub fn compute_fp(ufp: Decimal, vaf: Decimal) -> Result<Decimal, RangeError> {
    if ufp.is_sign_negative() && !ufp.is_zero() {
        return Err(RangeError {
            field: "ufp",
            value: ufp.to_string(),
            range: ">= 0",
        });
    }
    if vaf < VAF_BASE || vaf > VAF_MAX {
        return Err(RangeError {
            field: "vaf",
            value: vaf.to_string(),
            range: "0.65..=1.70",
        });
    }
    Ok(ufp * vaf)
}

/// Everything the estimator reports for one project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimateReport {
    pub project: String,
    pub ufp: Decimal,
    pub tdi: u32,
    pub adi: u32,
    pub tdi_n: u32,
    pub vaf_classic: Decimal,
    pub vaf_extended: Decimal,
    pub fp_classic: Decimal,
    pub fp_extended: Decimal,
    pub warnings: Vec<ConsistencyWarning>,
}

impl EstimateReport {
    /// `fp_extended - fp_classic`: the size attributed to the NFRs.
    pub fn delta(&self) -> Decimal {
        self.fp_extended - self.fp_classic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimateOptions {
    /// Divergence at which an NFR rating is flagged against its mapped GSCs.
    pub warning_threshold: u8,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            warning_threshold: DEFAULT_THRESHOLD,
        }
    }
}

/// Sizes `project` against `profile`. The caller is responsible for
/// resolving the project's profile name to `profile`.
pub fn estimate(project: &Project, profile: &WeightProfile) -> Result<EstimateReport, EstimateError> {
    estimate_with(project, profile, EstimateOptions::default())
}

pub fn estimate_with(
    project: &Project,
    profile: &WeightProfile,
    options: EstimateOptions,
) -> Result<EstimateReport, EstimateError> {
    validate_project(project).map_err(EstimateError::Invalid)?;
    let ufp = compute_ufp(&project.inventory, profile);
    let tdi = compute_tdi(&project.gsc);
    let adi = compute_adi(&project.nfr);
    let tdi_n = compute_tdi_n(tdi, adi)?;
    let vaf_classic = compute_vaf(tdi)?;
    let vaf_extended = compute_vaf(tdi_n)?;
    Ok(EstimateReport {
        project: project.name.clone(),
        ufp,
        tdi,
        adi,
        tdi_n,
        vaf_classic,
        vaf_extended,
        fp_classic: compute_fp(ufp, vaf_classic)?,
        fp_extended: compute_fp(ufp, vaf_extended)?,
        warnings: consistency_warnings(project, options.warning_threshold),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Complexity, FunctionCell, FunctionInventory, FunctionType, GscId, NfrId};
    use rust_decimal_macros::dec;

    fn unit() -> WeightProfile {
        WeightProfile::uniform("unit", dec!(1)).unwrap()
    }

    /// 100 external inputs under unit weights: UFP = 100.
    fn hundred_items(gsc: GscRatingSheet, nfr: NfrRatingSheet) -> Project {
        let mut p = Project::zeroed("p", "unit");
        p.inventory = FunctionInventory::zeroed()
            .with(FunctionCell::new(FunctionType::ExternalInput, Complexity::Low), 100);
        p.gsc = gsc;
        p.nfr = nfr;
        p
    }

    #[test]
    fn tdi_examples() {
        assert_eq!(compute_tdi(&GscRatingSheet::uniform(0)), 0);
        assert_eq!(compute_tdi(&GscRatingSheet::uniform(5)), 70);
        assert_eq!(compute_tdi(&GscRatingSheet::from_values(&[5, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0])), 8);
    }

    #[test]
    fn adi_examples() {
        assert_eq!(compute_adi(&NfrRatingSheet::uniform(0)), 0);
        assert_eq!(compute_adi(&NfrRatingSheet::uniform(5)), 35);
        assert_eq!(compute_adi(&NfrRatingSheet::from_values(&[1, 2, 3, 0, 5, 4, 2])), 17);
    }

    #[test]
    fn tdi_n_examples() {
        assert_eq!(compute_tdi_n(0, 0), Ok(0));
        assert_eq!(compute_tdi_n(70, 35), Ok(105));
        assert_eq!(compute_tdi_n(35, 17), Ok(52));
        assert_eq!(compute_tdi_n(71, 0).unwrap_err().field, "tdi");
        assert_eq!(compute_tdi_n(0, 36).unwrap_err().field, "adi");
    }

    #[test]
    fn vaf_examples() {
        assert_eq!(compute_vaf(0), Ok(dec!(0.65)));
        assert_eq!(compute_vaf(105), Ok(dec!(1.70)));
        assert_eq!(compute_vaf(35), Ok(dec!(1.00)));
        assert_eq!(compute_vaf(0).unwrap().to_string(), "0.65");
        assert_eq!(compute_vaf(105).unwrap().to_string(), "1.70");
        let err = compute_vaf(106).unwrap_err();
        assert_eq!(err.range, "0..=105");
    }

    #[test]
    fn fp_examples() {
        assert_eq!(compute_fp(dec!(100), dec!(1.00)), Ok(dec!(100)));
        assert_eq!(compute_fp(dec!(100), dec!(0.65)), Ok(dec!(65)));
        assert_eq!(compute_fp(dec!(200), dec!(1.70)), Ok(dec!(340)));
        assert!(compute_fp(dec!(-1), dec!(1)).is_err());
        assert!(compute_fp(dec!(1), dec!(0.64)).is_err());
        assert!(compute_fp(dec!(1), dec!(1.71)).is_err());
    }

    #[test]
    fn estimate_reduces_to_classic_without_nfrs() {
        let gsc = GscRatingSheet::from_values(&[5, 5, 5, 5, 5, 5, 5, 0, 0, 0, 0, 0, 0, 0]);
        let r = estimate(&hundred_items(gsc, NfrRatingSheet::uniform(0)), &unit()).unwrap();
        assert_eq!(r.ufp, dec!(100));
        assert_eq!(r.tdi, 35);
        assert_eq!(r.vaf_classic, dec!(1.00));
        assert_eq!(r.vaf_extended, dec!(1.00));
        assert_eq!(r.fp_classic, dec!(100));
        assert_eq!(r.fp_extended, dec!(100));
        assert_eq!(r.delta(), Decimal::ZERO);
    }

    #[test]
    fn estimate_with_all_nfrs_at_five() {
        let gsc = GscRatingSheet::from_values(&[5, 5, 5, 5, 5, 5, 5, 0, 0, 0, 0, 0, 0, 0]);
        let r = estimate(&hundred_items(gsc, NfrRatingSheet::uniform(5)), &unit()).unwrap();
        assert_eq!(r.tdi_n, 70);
        assert_eq!(r.vaf_extended, dec!(1.35));
        assert_eq!(r.fp_extended, dec!(135));
        assert_eq!(r.fp_classic, dec!(100));
    }

    #[test]
    fn estimate_at_maximum() {
        let r = estimate(
            &hundred_items(GscRatingSheet::uniform(5), NfrRatingSheet::uniform(5)),
            &unit(),
        )
        .unwrap();
        assert_eq!(r.tdi_n, 105);
        assert_eq!(r.fp_extended, dec!(170));
    }

    #[test]
    fn estimate_propagates_every_violation() {
        let mut p = Project::zeroed("p", "unit");
        p.nfr.set(NfrId::Security, 6);
        p.gsc.set(GscId::Reusability, 9);
        let EstimateError::Invalid(v) = estimate(&p, &unit()).unwrap_err() else {
            panic!("expected Invalid");
        };
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn estimate_carries_warnings() {
        let mut p = Project::zeroed("p", "unit");
        p.nfr.set(NfrId::Security, 5);
        let r = estimate(&p, &unit()).unwrap();
        assert_eq!(r.warnings.len(), 1);
        let r = estimate_with(&p, &unit(), EstimateOptions { warning_threshold: 6 }).unwrap();
        assert!(r.warnings.is_empty());
    }
}
