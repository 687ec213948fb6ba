//! Unadjusted function point counting.

use rust_decimal::Decimal;

use crate::model::{FunctionCell, FunctionInventory};
use crate::profile::WeightProfile;

/// Sum over all 15 cells of `count × weight`. No rounding is applied.
///
/// A cell missing from the inventory counts as zero; callers are expected to
/// validate the project first.
pub fn compute_ufp(inventory: &FunctionInventory, profile: &WeightProfile) -> Decimal {
    FunctionCell::all()
        .map(|cell| Decimal::from(inventory.count(cell)) * profile.weight(cell))
        .sum()
}
