//! Domain types shared by the counting, adjustment, rubric and analysis
//! modules.
//!
//! Ratings and inventories are stored in their raw form so that an invalid
//! project (a missing cell, a DI of 6) is still representable and can be
//! reported in full by [`validate_project`]. Downstream operations assume a
//! validated project.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Returned when an identifier string does not name a known member.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} identifier `{value}`")]
pub struct UnknownIdentifier {
    pub kind: &'static str,
    pub value: String,
}

/// A factor that carries a Degree-of-Influence rating: one of the 14 GSCs or
/// one of the 7 NFRs.
pub trait Characteristic:
    Copy + Ord + fmt::Debug + fmt::Display + FromStr<Err = UnknownIdentifier> + 'static
{
    /// Every member in enumeration order.
    const ALL: &'static [Self];
    /// Short group label used in messages (`gsc` / `nfr`).
    const GROUP: &'static str;

    fn name(self) -> &'static str;
}

macro_rules! identifier_enum {
    (
        $(#[$meta:meta])*
        $name:ident, $kind:literal {
            $($variant:ident => $text:literal),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub const fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = UnknownIdentifier;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(UnknownIdentifier { kind: $kind, value: s.to_owned() }),
                }
            }
        }

    };
}

macro_rules! characteristic {
    ($name:ident, $group:literal) => {
        impl Characteristic for $name {
            const ALL: &'static [Self] = $name::ALL;
            const GROUP: &'static str = $group;

            fn name(self) -> &'static str {
                $name::name(self)
            }
        }
    };
}

identifier_enum! {
    /// The 14 General System Characteristics, in their standard order.
    GscId, "GSC" {
        DataCommunications => "data_communications",
        DistributedDataProcessing => "distributed_data_processing",
        Performance => "performance",
        HeavilyUsedConfiguration => "heavily_used_configuration",
        TransactionRate => "transaction_rate",
        OnlineDataEntry => "online_data_entry",
        EndUserEfficiency => "end_user_efficiency",
        OnlineUpdate => "online_update",
        ComplexProcessing => "complex_processing",
        Reusability => "reusability",
        InstallationEase => "installation_ease",
        OperationalEase => "operational_ease",
        MultipleSites => "multiple_sites",
        FacilitateChange => "facilitate_change",
    }
}

identifier_enum! {
    /// The seven non-functional requirements that contribute to the
    /// additional degree of influence.
    NfrId, "NFR" {
        Reliability => "reliability",
        ResponseTime => "response_time",
        Performance => "performance",
        Security => "security",
        Availability => "availability",
        Scalability => "scalability",
        Capacity => "capacity",
    }
}

characteristic!(GscId, "gsc");
characteristic!(NfrId, "nfr");

impl GscId {
    /// Standard 1-based ordinal (GSC-1 .. GSC-14).
    pub fn ordinal(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_ordinal(ordinal: u8) -> Option<GscId> {
        GscId::ALL.get(usize::from(ordinal).checked_sub(1)?).copied()
    }
}

/// A Degree-of-Influence rating, 0 (no influence) to 5 (strong influence
/// throughout).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DegreeOfInfluence(u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("DI out of range 0..5: {0}")]
pub struct DiOutOfRange(pub u8);

impl DegreeOfInfluence {
    pub const MIN: DegreeOfInfluence = DegreeOfInfluence(0);
    pub const MAX: DegreeOfInfluence = DegreeOfInfluence(5);

    pub fn new(value: u8) -> Result<Self, DiOutOfRange> {
        if value <= Self::MAX.0 {
            Ok(DegreeOfInfluence(value))
        } else {
            Err(DiOutOfRange(value))
        }
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    /// All six levels in ascending order.
    pub fn levels() -> impl Iterator<Item = DegreeOfInfluence> {
        (0..=Self::MAX.0).map(DegreeOfInfluence)
    }
}

impl TryFrom<u8> for DegreeOfInfluence {
    type Error = DiOutOfRange;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        DegreeOfInfluence::new(value)
    }
}

impl From<DegreeOfInfluence> for u8 {
    fn from(di: DegreeOfInfluence) -> u8 {
        di.0
    }
}

impl fmt::Display for DegreeOfInfluence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

identifier_enum! {
    FunctionType, "function type" {
        ExternalInput => "external_input",
        ExternalOutput => "external_output",
        ExternalInquiry => "external_inquiry",
        InternalLogicalFile => "internal_logical_file",
        ExternalInterfaceFile => "external_interface_file",
    }
}

identifier_enum! {
    Complexity, "complexity" {
        Low => "low",
        Average => "average",
        High => "high",
    }
}

/// One (function type, complexity) cell of an inventory or weight table.
/// Its textual key is `<type>.<complexity>`, e.g. `external_input.low`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionCell {
    pub function_type: FunctionType,
    pub complexity: Complexity,
}

impl FunctionCell {
    pub const fn new(function_type: FunctionType, complexity: Complexity) -> Self {
        FunctionCell {
            function_type,
            complexity,
        }
    }

    /// All 15 cells, type-major.
    pub fn all() -> impl Iterator<Item = FunctionCell> {
        FunctionType::ALL.iter().flat_map(|&t| {
            Complexity::ALL
                .iter()
                .map(move |&c| FunctionCell::new(t, c))
        })
    }
}

impl fmt::Display for FunctionCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.function_type, self.complexity)
    }
}

impl FromStr for FunctionCell {
    type Err = UnknownIdentifier;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || UnknownIdentifier {
            kind: "inventory cell",
            value: s.to_owned(),
        };
        let (t, c) = s.split_once('.').ok_or_else(unknown)?;
        Ok(FunctionCell::new(
            t.parse().map_err(|_| unknown())?,
            c.parse().map_err(|_| unknown())?,
        ))
    }
}

/// Counts of the five function types at the three complexity levels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FunctionInventory {
    counts: BTreeMap<FunctionCell, u32>,
}

impl FunctionInventory {
    /// An inventory with no cells at all. Not valid until every cell is set.
    pub fn empty() -> Self {
        Self::default()
    }

    /// All 15 cells present with count 0.
    pub fn zeroed() -> Self {
        FunctionInventory {
            counts: FunctionCell::all().map(|cell| (cell, 0)).collect(),
        }
    }

    pub fn set(&mut self, cell: FunctionCell, count: u32) -> &mut Self {
        self.counts.insert(cell, count);
        self
    }

    pub fn with(mut self, cell: FunctionCell, count: u32) -> Self {
        self.set(cell, count);
        self
    }

    pub fn remove(&mut self, cell: FunctionCell) -> Option<u32> {
        self.counts.remove(&cell)
    }

    /// Count for `cell`, treating a missing cell as zero.
    pub fn count(&self, cell: FunctionCell) -> u32 {
        self.counts.get(&cell).copied().unwrap_or(0)
    }

    pub fn get(&self, cell: FunctionCell) -> Option<u32> {
        self.counts.get(&cell).copied()
    }

    pub fn total_items(&self) -> u64 {
        self.counts.values().map(|&c| u64::from(c)).sum()
    }

    pub fn missing_cells(&self) -> impl Iterator<Item = FunctionCell> + '_ {
        FunctionCell::all().filter(|cell| !self.counts.contains_key(cell))
    }

    pub fn iter(&self) -> impl Iterator<Item = (FunctionCell, u32)> + '_ {
        self.counts.iter().map(|(&cell, &count)| (cell, count))
    }

    /// Multiplies every present cell by `factor`.
    pub fn scaled(&self, factor: u32) -> Self {
        FunctionInventory {
            counts: self
                .counts
                .iter()
                .map(|(&cell, &count)| (cell, count * factor))
                .collect(),
        }
    }
}

impl Add for &FunctionInventory {
    type Output = FunctionInventory;

    fn add(self, rhs: &FunctionInventory) -> FunctionInventory {
        let mut out = self.clone();
        for (cell, count) in rhs.iter() {
            *out.counts.entry(cell).or_insert(0) += count;
        }
        out
    }
}

impl FromIterator<(FunctionCell, u32)> for FunctionInventory {
    fn from_iter<I: IntoIterator<Item = (FunctionCell, u32)>>(iter: I) -> Self {
        FunctionInventory {
            counts: iter.into_iter().collect(),
        }
    }
}

/// Ratings for a group of characteristics, plus optional free-text rationale
/// per characteristic. The rationale never affects computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingSheet<K: Characteristic> {
    ratings: BTreeMap<K, u8>,
    rationale: BTreeMap<K, String>,
}

pub type GscRatingSheet = RatingSheet<GscId>;
pub type NfrRatingSheet = RatingSheet<NfrId>;

impl<K: Characteristic> Default for RatingSheet<K> {
    fn default() -> Self {
        RatingSheet {
            ratings: BTreeMap::new(),
            rationale: BTreeMap::new(),
        }
    }
}

impl<K: Characteristic> RatingSheet<K> {
    /// A sheet with no ratings. Not valid until every member is rated.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Every member rated `di`. Out-of-range values are kept as given and
    /// surface through validation.
    pub fn uniform(di: u8) -> Self {
        K::ALL.iter().map(|&k| (k, di)).collect()
    }

    /// Ratings in enumeration order. Extra values are ignored; missing ones
    /// leave the member unrated.
    pub fn from_values(values: &[u8]) -> Self {
        K::ALL.iter().copied().zip(values.iter().copied()).collect()
    }

    pub fn set(&mut self, key: K, di: u8) -> &mut Self {
        self.ratings.insert(key, di);
        self
    }

    pub fn with(mut self, key: K, di: u8) -> Self {
        self.set(key, di);
        self
    }

    pub fn remove(&mut self, key: K) -> Option<u8> {
        self.ratings.remove(&key)
    }

    /// Raw stored value, which may be out of range on an unvalidated sheet.
    pub fn raw(&self, key: K) -> Option<u8> {
        self.ratings.get(&key).copied()
    }

    /// The validated rating, or `None` when missing or out of range.
    pub fn get(&self, key: K) -> Option<DegreeOfInfluence> {
        self.raw(key).and_then(|v| DegreeOfInfluence::new(v).ok())
    }

    /// Raw value with a missing rating read as zero.
    pub fn value(&self, key: K) -> u8 {
        self.raw(key).unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (K, u8)> + '_ {
        self.ratings.iter().map(|(&k, &v)| (k, v))
    }

    pub fn rationale(&self, key: K) -> Option<&str> {
        self.rationale.get(&key).map(String::as_str)
    }

    pub fn set_rationale(&mut self, key: K, text: impl Into<String>) -> &mut Self {
        self.rationale.insert(key, text.into());
        self
    }

    pub fn rationale_iter(&self) -> impl Iterator<Item = (K, &str)> + '_ {
        self.rationale.iter().map(|(&k, v)| (k, v.as_str()))
    }

    /// Sum of the stored values.
    pub fn total(&self) -> u32 {
        self.ratings.values().map(|&v| u32::from(v)).sum()
    }

    pub fn violations(&self) -> Vec<Violation> {
        K::ALL
            .iter()
            .filter_map(|&k| match self.raw(k) {
                None => Some(Violation::MissingRating {
                    group: K::GROUP,
                    factor: k.name(),
                }),
                Some(v) if DegreeOfInfluence::new(v).is_err() => Some(Violation::DiOutOfRange {
                    group: K::GROUP,
                    factor: k.name(),
                    value: v,
                }),
                Some(_) => None,
            })
            .collect()
    }
}

impl<K: Characteristic> FromIterator<(K, u8)> for RatingSheet<K> {
    fn from_iter<I: IntoIterator<Item = (K, u8)>>(iter: I) -> Self {
        RatingSheet {
            ratings: iter.into_iter().collect(),
            rationale: BTreeMap::new(),
        }
    }
}

/// A project to be sized: its function inventory, GSC and NFR ratings, and
/// the name of the weight profile it is counted against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    pub name: String,
    pub inventory: FunctionInventory,
    pub gsc: GscRatingSheet,
    pub nfr: NfrRatingSheet,
    pub weight_profile: String,
    pub metadata: BTreeMap<String, String>,
}

impl Project {
    /// A project with every cell and rating present and zero.
    pub fn zeroed(name: impl Into<String>, weight_profile: impl Into<String>) -> Self {
        Project {
            name: name.into(),
            inventory: FunctionInventory::zeroed(),
            gsc: GscRatingSheet::uniform(0),
            nfr: NfrRatingSheet::uniform(0),
            weight_profile: weight_profile.into(),
            metadata: BTreeMap::new(),
        }
    }
}

/// A single broken invariant found by [`validate_project`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("project name must not be empty")]
    EmptyName,
    #[error("weight profile name must not be empty")]
    EmptyProfileName,
    #[error("inventory cell {0} missing")]
    MissingInventoryCell(FunctionCell),
    #[error("missing DI for {group} {factor}")]
    MissingRating {
        group: &'static str,
        factor: &'static str,
    },
    #[error("DI out of range 0..5 for {group} {factor}: {value}")]
    DiOutOfRange {
        group: &'static str,
        factor: &'static str,
        value: u8,
    },
}

impl Violation {
    /// Dotted path of the offending field, e.g. `nfr.security`.
    pub fn field(&self) -> String {
        match self {
            Violation::EmptyName => "meta.name".to_owned(),
            Violation::EmptyProfileName => "meta.weight_profile".to_owned(),
            Violation::MissingInventoryCell(cell) => format!("inventory.{cell}"),
            Violation::MissingRating { group, factor }
            | Violation::DiOutOfRange { group, factor, .. } => format!("{group}.{factor}"),
        }
    }
}

/// Checks every structural invariant of `project` and returns all
/// violations, not just the first.
pub fn validate_project(project: &Project) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if project.name.trim().is_empty() {
        violations.push(Violation::EmptyName);
    }
    if project.weight_profile.trim().is_empty() {
        violations.push(Violation::EmptyProfileName);
    }
    violations.extend(
        project
            .inventory
            .missing_cells()
            .map(Violation::MissingInventoryCell),
    );
    violations.extend(project.gsc.violations());
    violations.extend(project.nfr.violations());
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn enumerations_are_closed() {
        assert_eq!(GscId::ALL.len(), 14);
        assert_eq!(NfrId::ALL.len(), 7);
        assert_eq!(FunctionCell::all().count(), 15);
        assert_eq!(GscId::ALL.iter().collect::<BTreeSet<_>>().len(), 14);
        assert_eq!(FunctionCell::all().collect::<BTreeSet<_>>().len(), 15);
    }

    #[test]
    fn gsc_ordinals_are_a_bijection() {
        let ordinals: Vec<u8> = GscId::ALL.iter().map(|g| g.ordinal()).collect();
        assert_eq!(ordinals, (1..=14).collect::<Vec<_>>());
        for g in GscId::ALL {
            assert_eq!(GscId::from_ordinal(g.ordinal()), Some(*g));
        }
        assert_eq!(GscId::from_ordinal(0), None);
        assert_eq!(GscId::from_ordinal(15), None);
        assert_eq!(GscId::OperationalEase.ordinal(), 12);
        assert_eq!(GscId::OnlineDataEntry.ordinal(), 6);
        assert_eq!(GscId::OnlineUpdate.ordinal(), 8);
        assert_eq!(GscId::TransactionRate.ordinal(), 5);
    }

    #[test]
    fn identifiers_parse_by_name() {
        for g in GscId::ALL {
            assert_eq!(g.name().parse::<GscId>().unwrap(), *g);
        }
        for n in NfrId::ALL {
            assert_eq!(n.to_string().parse::<NfrId>().unwrap(), *n);
        }
        assert!("Security".parse::<NfrId>().is_err());
        let cell: FunctionCell = "external_inquiry.high".parse().unwrap();
        assert_eq!(
            cell,
            FunctionCell::new(FunctionType::ExternalInquiry, Complexity::High)
        );
        assert!("external_inquiry".parse::<FunctionCell>().is_err());
        assert!("external_inquiry.huge".parse::<FunctionCell>().is_err());
    }

    #[test]
    fn degree_of_influence_bounds() {
        assert!(DegreeOfInfluence::new(5).is_ok());
        assert_eq!(DegreeOfInfluence::new(6), Err(DiOutOfRange(6)));
        assert_eq!(DegreeOfInfluence::levels().count(), 6);
    }

    #[test]
    fn zeroed_project_is_valid() {
        assert_eq!(validate_project(&Project::zeroed("p", "ifpug-standard")), Ok(()));
    }

    #[test]
    fn out_of_range_nfr_is_reported() {
        let mut p = Project::zeroed("p", "ifpug-standard");
        p.nfr.set(NfrId::Security, 6);
        let violations = validate_project(&p).unwrap_err();
        assert_eq!(violations.len(), 1);
        assert_eq!(
            violations[0].to_string(),
            "DI out of range 0..5 for nfr security: 6"
        );
        assert_eq!(violations[0].field(), "nfr.security");
    }

    #[test]
    fn missing_inventory_cell_is_named() {
        let mut p = Project::zeroed("p", "ifpug-standard");
        p.inventory
            .remove(FunctionCell::new(FunctionType::ExternalInquiry, Complexity::High));
        let violations = validate_project(&p).unwrap_err();
        assert_eq!(violations.len(), 1);
        assert!(violations[0].to_string().contains("external_inquiry.high"));
    }

    #[test]
    fn all_violations_are_collected() {
        let mut p = Project::zeroed("", "ifpug-standard");
        p.gsc.remove(GscId::Reusability);
        p.gsc.set(GscId::Performance, 9);
        p.nfr.set(NfrId::Capacity, 200);
        p.inventory
            .remove(FunctionCell::new(FunctionType::ExternalInput, Complexity::Low));
        let fields: Vec<String> = validate_project(&p)
            .unwrap_err()
            .iter()
            .map(Violation::field)
            .collect();
        assert_eq!(
            fields,
            [
                "meta.name",
                "inventory.external_input.low",
                "gsc.performance",
                "gsc.reusability",
                "nfr.capacity"
            ]
        );
    }

    #[test]
    fn inventory_arithmetic() {
        let a = FunctionInventory::zeroed()
            .with(FunctionCell::new(FunctionType::ExternalInput, Complexity::Low), 2);
        let b = a.scaled(3);
        assert_eq!(
            b.count(FunctionCell::new(FunctionType::ExternalInput, Complexity::Low)),
            6
        );
        assert_eq!((&a + &b).total_items(), 8);
    }
}
