//! Stock-keeping-oriented prediction error costs (SPEC).
//!
//! Forecasts are read as deliveries into a fictive warehouse and actual
//! demand as departures from it. Every unit of demand that cannot be
//! served at step `t` costs `alpha1` per period it has been waiting, and
//! every forecast unit still sitting in stock costs `alpha2` per period it
//! has been stored:
//!
//! ```text
//! SPEC = 1/n * sum_{t=1..n} sum_{i=1..t} max(0,
//!            min(y_i, Y_i - F_t) * alpha1,
//!            min(f_i, F_i - Y_t) * alpha2) * (t - i + 1)
//! ```
//!
//! with `Y`, `F` the running totals of demand and forecast. Two evaluators
//! are provided: [`spec_literal`] transcribes the double sum directly and
//! stays as the reference, [`spec_fast`] runs a FIFO netting simulation in
//! linear time.

mod fifo;
mod literal;
mod sweep;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fifo::{spec_decompose, spec_fast, unit_periods, CostBreakdown, UnitPeriods};
pub use literal::{literal_per_step, spec_literal};
pub use sweep::{spec_alpha_sweep, AlphaSweepPoint};

/// Cost weights per SKU per time unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct SpecParams {
    alpha1: f64,
    alpha2: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    alpha1: f64,
    alpha2: f64,
}

impl TryFrom<RawParams> for SpecParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        SpecParams::new(raw.alpha1, raw.alpha2)
    }
}

impl SpecParams {
    /// `alpha1` weights opportunity cost, `alpha2` stock-keeping cost.
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !a.is_finite() || a < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and non-negative, got {a}"
                )));
            }
        }
        if alpha1 == 0.0 && alpha2 == 0.0 {
            return Err(Error::InvalidParams("alpha1 and alpha2 cannot both be zero".into()));
        }
        Ok(Self { alpha1, alpha2 })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// Swaps the opportunity and stock-keeping weights.
    pub fn mirrored(&self) -> Self {
        Self {
            alpha1: self.alpha2,
            alpha2: self.alpha1,
        }
    }
}

impl Default for SpecParams {
    /// Opportunity cost three times the stock-keeping cost.
    fn default() -> Self {
        Self {
            alpha1: 0.75,
            alpha2: 0.25,
        }
    }
}
