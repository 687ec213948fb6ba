use std::fmt;
use std::str::FromStr;

use rust_decimal::Decimal;

use crate::adjustment::{compute_adi, compute_fp, compute_tdi, compute_tdi_n, compute_vaf, EstimateError};
use crate::counting::compute_ufp;
use crate::model::{
    validate_project, DegreeOfInfluence, GscId, GscRatingSheet, NfrId, NfrRatingSheet, Project,
    UnknownIdentifier,
};
use crate::profile::WeightProfile;

/// A single rated factor: one GSC or one NFR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Gsc(GscId),
    Nfr(NfrId),
}

impl Factor {
    /// All 21 factors: GSCs by ordinal, then NFRs.
    pub fn all() -> impl Iterator<Item = Factor> {
        GscId::ALL
            .iter()
            .map(|&g| Factor::Gsc(g))
            .chain(NfrId::ALL.iter().map(|&n| Factor::Nfr(n)))
    }

    pub fn group(self) -> &'static str {
        match self {
            Factor::Gsc(_) => "gsc",
            Factor::Nfr(_) => "nfr",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Factor::Gsc(g) => g.name(),
            Factor::Nfr(n) => n.name(),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.group(), self.name())
    }
}

/// Accepts `gsc.<name>` / `nfr.<name>`, or a bare name. `performance` names
/// both a GSC and an NFR, so the bare form resolves to the GSC.
impl FromStr for Factor {
    type Err = UnknownIdentifier;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || UnknownIdentifier {
            kind: "factor",
            value: s.to_owned(),
        };
        match s.split_once('.') {
            Some(("gsc", name)) => name.parse().map(Factor::Gsc).map_err(|_| unknown()),
            Some(("nfr", name)) => name.parse().map(Factor::Nfr).map_err(|_| unknown()),
            Some(_) => Err(unknown()),
            None => s
                .parse()
                .map(Factor::Gsc)
                .or_else(|_| s.parse().map(Factor::Nfr))
                .map_err(|_| unknown()),
        }
    }
}

/// Which rating group [`fp_bounds`] forces to its extremes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vary {
    GscOnly,
    NfrOnly,
    All,
}

impl FromStr for Vary {
    type Err = UnknownIdentifier;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gsc" => Ok(Vary::GscOnly),
            "nfr" => Ok(Vary::NfrOnly),
            "all" => Ok(Vary::All),
            _ => Err(UnknownIdentifier {
                kind: "vary group",
                value: s.to_owned(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityResult {
    pub factor: Factor,
    pub baseline_fp: Decimal,
    /// Extended FP with the factor at DI 0, 1, .., 5.
    pub fp_at_di: [Decimal; 6],
    pub swing: Decimal,
}

fn extended_fp(ufp: Decimal, gsc: &GscRatingSheet, nfr: &NfrRatingSheet) -> Result<Decimal, EstimateError> {
    let tdi_n = compute_tdi_n(compute_tdi(gsc), compute_adi(nfr))?;
    Ok(compute_fp(ufp, compute_vaf(tdi_n)?)?)
}

fn checked_ufp(project: &Project, profile: &WeightProfile) -> Result<Decimal, EstimateError> {
    validate_project(project).map_err(EstimateError::Invalid)?;
    Ok(compute_ufp(&project.inventory, profile))
}

/// Extended FP with the selected rating group forced to all-0 and all-5,
/// other ratings held at the project's values.
pub fn fp_bounds(project: &Project, profile: &WeightProfile, vary: Vary) -> Result<(Decimal, Decimal), EstimateError> {
    let ufp = checked_ufp(project, profile)?;
    let at = |di: u8| {
        let gsc = match vary {
            Vary::GscOnly | Vary::All => GscRatingSheet::uniform(di),
            Vary::NfrOnly => project.gsc.clone(),
        };
        let nfr = match vary {
            Vary::NfrOnly | Vary::All => NfrRatingSheet::uniform(di),
            Vary::GscOnly => project.nfr.clone(),
        };
        extended_fp(ufp, &gsc, &nfr)
    };
    Ok((at(DegreeOfInfluence::MIN.value())?, at(DegreeOfInfluence::MAX.value())?))
}

/// Sweeps one factor over DI 0..=5 with every other rating held fixed.
pub fn one_way_sensitivity(
    project: &Project,
    profile: &WeightProfile,
    factor: Factor,
) -> Result<SensitivityResult, EstimateError> {
    let ufp = checked_ufp(project, profile)?;
    sweep(project, ufp, factor)
}

fn sweep(project: &Project, ufp: Decimal, factor: Factor) -> Result<SensitivityResult, EstimateError> {
    let baseline_fp = extended_fp(ufp, &project.gsc, &project.nfr)?;
    let mut fp_at_di = [Decimal::ZERO; 6];
    for level in DegreeOfInfluence::levels() {
        let mut gsc = project.gsc.clone();
        let mut nfr = project.nfr.clone();
        match factor {
            Factor::Gsc(g) => {
                gsc.set(g, level.value());
            }
            Factor::Nfr(n) => {
                nfr.set(n, level.value());
            }
        }
        fp_at_di[usize::from(level.value())] = extended_fp(ufp, &gsc, &nfr)?;
    }
    let max = fp_at_di.iter().max().copied().unwrap_or_default();
    let min = fp_at_di.iter().min().copied().unwrap_or_default();
    Ok(SensitivityResult {
        factor,
        baseline_fp,
        fp_at_di,
        swing: max - min,
    })
}

/// One sweep per factor, largest swing first. Ties keep enumeration order
/// (GSCs by ordinal, then NFRs).
pub fn tornado(project: &Project, profile: &WeightProfile) -> Result<Vec<SensitivityResult>, EstimateError> {
    let ufp = checked_ufp(project, profile)?;
    let mut results = Factor::all()
        .map(|f| sweep(project, ufp, f))
        .collect::<Result<Vec<_>, _>>()?;
    results.sort_by_key(|r| std::cmp::Reverse(r.swing));
    Ok(results)
}
