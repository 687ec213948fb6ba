//! Weight profiles: the (function type, complexity) → points table used to
//! compute unadjusted function points.

use std::collections::BTreeMap;

use rust_decimal::Decimal;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::json::{decimal_from_value, decimal_to_value, DecimalStyle};
use crate::model::{Complexity, FunctionCell, FunctionType};

/// Name of the profile used when none is requested.
pub const DEFAULT_PROFILE: &str = "ifpug-standard";

const BUILTIN: &[(&str, &str)] = &[(
    "ifpug-standard",
    include_str!("../data/profiles/ifpug-standard.json"),
)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("profile syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("profile field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("invalid weight profile `{name}`: {}", .problems.join("; "))]
    Invalid { name: String, problems: Vec<String> },
}

/// A validated weight table. Every one of the 15 cells carries a positive
/// weight, and weights never decrease from low to high complexity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    name: String,
    description: Option<String>,
    weights: BTreeMap<FunctionCell, Decimal>,
}

impl WeightProfile {
    pub fn new(
        name: impl Into<String>,
        weights: BTreeMap<FunctionCell, Decimal>,
    ) -> Result<Self, ProfileError> {
        let name = name.into();
        let mut problems = Vec::new();
        if name.trim().is_empty() {
            problems.push("name must not be empty".to_owned());
        }
        for cell in FunctionCell::all() {
            match weights.get(&cell) {
                None => problems.push(format!("weight for {cell} missing")),
                Some(w) if *w <= Decimal::ZERO => {
                    problems.push(format!("weight for {cell} must be positive: {w}"))
                }
                Some(_) => {}
            }
        }
        for &ty in FunctionType::ALL {
            let ladder: Vec<(Complexity, Decimal)> = Complexity::ALL
                .iter()
                .filter_map(|&c| weights.get(&FunctionCell::new(ty, c)).map(|&w| (c, w)))
                .collect();
            for pair in ladder.windows(2) {
                if pair[0].1 > pair[1].1 {
                    problems.push(format!(
                        "weights for {ty} decrease from {} ({}) to {} ({})",
                        pair[0].0, pair[0].1, pair[1].0, pair[1].1
                    ));
                }
            }
        }
        if problems.is_empty() {
            Ok(WeightProfile {
                name,
                description: None,
                weights,
            })
        } else {
            Err(ProfileError::Invalid { name, problems })
        }
    }

    /// Every cell weighted `weight`. Handy for tests where UFP should equal
    /// the item count.
    pub fn uniform(name: impl Into<String>, weight: Decimal) -> Result<Self, ProfileError> {
        Self::new(name, FunctionCell::all().map(|c| (c, weight)).collect())
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = Some(description.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    pub fn weight(&self, cell: FunctionCell) -> Decimal {
        self.weights[&cell]
    }

    pub fn iter(&self) -> impl Iterator<Item = (FunctionCell, Decimal)> + '_ {
        self.weights.iter().map(|(&c, &w)| (c, w))
    }

    /// Names of the profiles compiled into the library.
    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTIN.iter().map(|(name, _)| *name)
    }

    pub fn builtin(name: &str) -> Option<WeightProfile> {
        BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| Self::from_json(text).expect("shipped profile is valid"))
    }

    /// Parses a profile document:
    /// `{"format_version": 1, "name": ..., "weights": {"<type>.<complexity>": w, ...}}`.
    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let value: Value = serde_json::from_str(text).map_err(|e| ProfileError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let field = |field: &str, message: &str| ProfileError::Field {
            field: field.to_owned(),
            message: message.to_owned(),
        };
        let obj = value
            .as_object()
            .ok_or_else(|| field("<root>", "expected an object"))?;
        match obj.get("format_version").and_then(Value::as_u64) {
            Some(1) | None => {}
            Some(_) => return Err(field("format_version", "unsupported version")),
        }
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| field("name", "missing or not a string"))?;
        let weights_obj = obj
            .get("weights")
            .and_then(Value::as_object)
            .ok_or_else(|| field("weights", "missing or not an object"))?;
        let mut weights = BTreeMap::new();
        for (key, raw) in weights_obj {
            let cell: FunctionCell = key
                .parse()
                .map_err(|e: crate::model::UnknownIdentifier| field(&format!("weights.{key}"), &e.to_string()))?;
            let w = decimal_from_value(raw)
                .ok_or_else(|| field(&format!("weights.{key}"), "expected a decimal number"))?;
            weights.insert(cell, w);
        }
        let mut profile = WeightProfile::new(name, weights)?;
        profile.description = obj
            .get("description")
            .and_then(Value::as_str)
            .map(str::to_owned);
        Ok(profile)
    }

    pub fn to_json_value(&self, style: DecimalStyle) -> Value {
        let mut obj = Map::new();
        obj.insert("format_version".into(), Value::from(1));
        obj.insert("name".into(), Value::from(self.name.clone()));
        if let Some(d) = &self.description {
            obj.insert("description".into(), Value::from(d.clone()));
        }
        let weights: Map<String, Value> = FunctionCell::all()
            .map(|c| (c.to_string(), decimal_to_value(self.weight(c), style)))
            .collect();
        obj.insert("weights".into(), Value::Object(weights));
        Value::Object(obj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rust_decimal_macros::dec;

    #[test]
    fn builtin_profile_loads() {
        let p = WeightProfile::builtin(DEFAULT_PROFILE).unwrap();
        assert_eq!(p.name(), "ifpug-standard");
        let ilf_avg = FunctionCell::new(FunctionType::InternalLogicalFile, Complexity::Average);
        assert_eq!(p.weight(ilf_avg), dec!(10));
        assert!(WeightProfile::builtin("nope").is_none());
    }

    #[test]
    fn rejects_non_monotone_and_non_positive() {
        let mut weights: BTreeMap<_, _> = FunctionCell::all().map(|c| (c, dec!(1))).collect();
        weights.insert(
            FunctionCell::new(FunctionType::ExternalInput, Complexity::Low),
            dec!(5),
        );
        weights.insert(
            FunctionCell::new(FunctionType::ExternalOutput, Complexity::High),
            dec!(0),
        );
        let ProfileError::Invalid { problems, .. } = WeightProfile::new("bad", weights).unwrap_err()
        else {
            panic!("expected Invalid");
        };
        assert!(problems.iter().any(|p| p.contains("external_input decrease")));
        assert!(problems.iter().any(|p| p.contains("external_output.high must be positive")));
    }

    #[test]
    fn rejects_missing_cell() {
        let mut weights: BTreeMap<_, _> = FunctionCell::all().map(|c| (c, dec!(1))).collect();
        weights.remove(&FunctionCell::new(FunctionType::ExternalInquiry, Complexity::High));
        let err = WeightProfile::new("bad", weights).unwrap_err();
        assert!(err.to_string().contains("external_inquiry.high missing"));
    }

    #[test]
    fn json_round_trip_keeps_fractional_weights() {
        let p = WeightProfile::uniform("half", dec!(0.5)).unwrap();
        let text = p.to_json_value(DecimalStyle::String).to_string();
        assert_eq!(WeightProfile::from_json(&text).unwrap(), p);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = WeightProfile::from_json("{\n  \"name\": ").unwrap_err();
        assert!(matches!(err, ProfileError::Syntax { line: 2, .. }));
    }
}
