//! Traditional point-wise accuracy measures.
//!
//! Conventions, with `e_t = f_t - y_t`:
//!
//! | metric | definition |
//! |--------|------------|
//! | mae / mdae | mean / median of `|e_t|` |
//! | mse / rmse | mean of `e_t^2`, and its square root |
//! | mape / mdape | mean / median of `|e_t| / y_t` |
//! | rmspe | root mean of `(e_t / y_t)^2` |
//! | smape | mean of `|e_t| / (|y_t| + |f_t|)` where the denominator is positive |
//! | mase / rmsse | mae / rmse scaled by the in-sample one-step naive error of the actuals |
//!
//! Percentage terms with `y_t = 0` are skipped when `e_t = 0` and turn the
//! result into `+inf` otherwise. A metric whose terms are all skipped, or
//! whose scale is zero, is undefined.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::series::EvaluationPair;
use crate::spec::{spec_fast, SpecParams};
use crate::stats::{mean, median};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UndefinedReason {
    DivisionByZero,
    ZeroDenominatorScale,
    EmptyInput,
}

/// A metric outcome on the extended reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedValue {
    Finite(f64),
    PositiveInfinity,
    Undefined(UndefinedReason),
}

impl ExtendedValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedValue::Finite(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    fn from_ratio(numerator: f64, denominator: f64) -> Self {
        if denominator > 0.0 {
            ExtendedValue::Finite(numerator / denominator)
        } else {
            ExtendedValue::Undefined(UndefinedReason::ZeroDenominatorScale)
        }
    }
}

/// Renders `inf` and `undef` for the non-finite cases.
impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(v) => write!(f, "{v}"),
            ExtendedValue::PositiveInfinity => f.write_str("inf"),
            ExtendedValue::Undefined(_) => f.write_str("undef"),
        }
    }
}

impl Serialize for ExtendedValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedValue::Finite(v) => s.serialize_f64(*v),
            ExtendedValue::PositiveInfinity => s.serialize_str("inf"),
            ExtendedValue::Undefined(_) => s.serialize_str("undef"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtendedValue::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(ExtendedValue::PositiveInfinity),
            Raw::Str(s) if s == "undef" => Ok(ExtendedValue::Undefined(UndefinedReason::DivisionByZero)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("unexpected metric value `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    Mae,
    Mdae,
    Mse,
    Rmse,
    Mape,
    Mdape,
    Rmspe,
    Smape,
    Mase,
    Rmsse,
    Spec,
}

impl MetricName {
    pub const ALL: [MetricName; 11] = [
        MetricName::Mae,
        MetricName::Mdae,
        MetricName::Mse,
        MetricName::Rmse,
        MetricName::Mape,
        MetricName::Mdape,
        MetricName::Rmspe,
        MetricName::Smape,
        MetricName::Mase,
        MetricName::Rmsse,
        MetricName::Spec,
    ];

    /// The default report layout: MAE, RMSE, MAPE, sMAPE, MASE, SPEC.
    pub const TABLE: [MetricName; 6] = [
        MetricName::Mae,
        MetricName::Rmse,
        MetricName::Mape,
        MetricName::Smape,
        MetricName::Mase,
        MetricName::Spec,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MetricName::Mae => "mae",
            MetricName::Mdae => "mdae",
            MetricName::Mse => "mse",
            MetricName::Rmse => "rmse",
            MetricName::Mape => "mape",
            MetricName::Mdape => "mdape",
            MetricName::Rmspe => "rmspe",
            MetricName::Smape => "smape",
            MetricName::Mase => "mase",
            MetricName::Rmsse => "rmsse",
            MetricName::Spec => "spec",
        }
    }

    /// Display label as printed in tables (`MAE`, `sMAPE`, ...).
    pub fn label(&self) -> &'static str {
        match self {
            MetricName::Mae => "MAE",
            MetricName::Mdae => "MdAE",
            MetricName::Mse => "MSE",
            MetricName::Rmse => "RMSE",
            MetricName::Mape => "MAPE",
            MetricName::Mdape => "MdAPE",
            MetricName::Rmspe => "RMSPE",
            MetricName::Smape => "sMAPE",
            MetricName::Mase => "MASE",
            MetricName::Rmsse => "RMSSE",
            MetricName::Spec => "SPEC",
        }
    }

    pub fn evaluate(&self, pair: &EvaluationPair, params: SpecParams) -> ExtendedValue {
        match self {
            MetricName::Mae => mae(pair),
            MetricName::Mdae => mdae(pair),
            MetricName::Mse => mse(pair),
            MetricName::Rmse => rmse(pair),
            MetricName::Mape => mape(pair),
            MetricName::Mdape => mdape(pair),
            MetricName::Rmspe => rmspe(pair),
            MetricName::Smape => smape(pair),
            MetricName::Mase => mase(pair),
            MetricName::Rmsse => rmsse(pair),
            MetricName::Spec => ExtendedValue::Finite(spec_fast(pair, params)),
        }
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        MetricName::ALL
            .into_iter()
            .find(|m| m.as_str() == lower)
            .ok_or_else(|| Error::config("metrics", format!("unknown metric `{s}`")))
    }
}

fn errors(pair: &EvaluationPair) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    pair.steps().map(|(_, y, f)| (y, f, f - y))
}

pub fn mae(pair: &EvaluationPair) -> ExtendedValue {
    let abs: Vec<f64> = errors(pair).map(|(_, _, e)| e.abs()).collect();
    ExtendedValue::Finite(mean(&abs))
}

pub fn mdae(pair: &EvaluationPair) -> ExtendedValue {
    let mut abs: Vec<f64> = errors(pair).map(|(_, _, e)| e.abs()).collect();
    ExtendedValue::Finite(median(&mut abs))
}

pub fn mse(pair: &EvaluationPair) -> ExtendedValue {
    let sq: Vec<f64> = errors(pair).map(|(_, _, e)| e * e).collect();
    ExtendedValue::Finite(mean(&sq))
}

pub fn rmse(pair: &EvaluationPair) -> ExtendedValue {
    match mse(pair) {
        ExtendedValue::Finite(v) => ExtendedValue::Finite(v.sqrt()),
        other => other,
    }
}

/// `|e_t| / y_t` over the defined terms, or the non-finite outcome.
fn percentage_terms(pair: &EvaluationPair) -> std::result::Result<Vec<f64>, ExtendedValue> {
    let mut terms = Vec::with_capacity(pair.len());
    for (y, _, e) in errors(pair) {
        if y == 0.0 {
            if e != 0.0 {
                return Err(ExtendedValue::PositiveInfinity);
            }
        } else {
            terms.push(e.abs() / y);
        }
    }
    if terms.is_empty() {
        return Err(ExtendedValue::Undefined(UndefinedReason::DivisionByZero));
    }
    Ok(terms)
}

pub fn mape(pair: &EvaluationPair) -> ExtendedValue {
    match percentage_terms(pair) {
        Ok(terms) => ExtendedValue::Finite(mean(&terms)),
        Err(v) => v,
    }
}

pub fn mdape(pair: &EvaluationPair) -> ExtendedValue {
    match percentage_terms(pair) {
        Ok(mut terms) => ExtendedValue::Finite(median(&mut terms)),
        Err(v) => v,
    }
}

pub fn rmspe(pair: &EvaluationPair) -> ExtendedValue {
    match percentage_terms(pair) {
        Ok(terms) => {
            let sq: Vec<f64> = terms.iter().map(|p| p * p).collect();
            ExtendedValue::Finite(mean(&sq).sqrt())
        }
        Err(v) => v,
    }
}

pub fn smape(pair: &EvaluationPair) -> ExtendedValue {
    let terms: Vec<f64> = errors(pair)
        .filter_map(|(y, f, e)| {
            let denom = y.abs() + f.abs();
            (denom > 0.0).then(|| e.abs() / denom)
        })
        .collect();
    if terms.is_empty() {
        ExtendedValue::Undefined(UndefinedReason::DivisionByZero)
    } else {
        ExtendedValue::Finite(mean(&terms))
    }
}

fn naive_steps(pair: &EvaluationPair) -> Vec<f64> {
    pair.actual().values().windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn mase(pair: &EvaluationPair) -> ExtendedValue {
    let steps = naive_steps(pair);
    if steps.is_empty() {
        return ExtendedValue::Undefined(UndefinedReason::EmptyInput);
    }
    let abs: Vec<f64> = steps.iter().map(|d| d.abs()).collect();
    let scale = mean(&abs);
    match mae(pair) {
        ExtendedValue::Finite(m) => ExtendedValue::from_ratio(m, scale),
        other => other,
    }
}

pub fn rmsse(pair: &EvaluationPair) -> ExtendedValue {
    let steps = naive_steps(pair);
    if steps.is_empty() {
        return ExtendedValue::Undefined(UndefinedReason::EmptyInput);
    }
    let sq: Vec<f64> = steps.iter().map(|d| d * d).collect();
    let scale = mean(&sq).sqrt();
    match rmse(pair) {
        ExtendedValue::Finite(m) => ExtendedValue::from_ratio(m, scale),
        other => other,
    }
}

/// Named metric outcomes plus the SPEC weights they were computed with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub entries: BTreeMap<MetricName, ExtendedValue>,
    pub params: SpecParams,
}

impl MetricReport {
    pub fn get(&self, name: MetricName) -> Option<ExtendedValue> {
        self.entries.get(&name).copied()
    }
}

/// Computes the requested metrics; SPEC uses the linear-time evaluator.
pub fn compute(pair: &EvaluationPair, params: SpecParams, metrics: &[MetricName]) -> MetricReport {
    let entries = metrics.iter().map(|&m| (m, m.evaluate(pair, params))).collect();
    MetricReport { entries, params }
}

pub fn compute_all(pair: &EvaluationPair, params: SpecParams) -> MetricReport {
    compute(pair, params, &MetricName::ALL)
}
