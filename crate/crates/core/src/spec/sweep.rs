use serde::{Deserialize, Serialize};

use super::unit_periods;
use crate::error::{Error, Result};
use crate::series::EvaluationPair;

/// SPEC at one point of the `alpha1 + alpha2 = 1` line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSweepPoint {
    pub alpha1: f64,
    pub alpha2: f64,
    pub spec_value: f64,
}

/// Evaluates SPEC on an evenly spaced `alpha1` grid over [0, 1].
///
/// SPEC is linear in the weights, so one netting pass supplies every point.
pub fn spec_alpha_sweep(pair: &EvaluationPair, grid_size: usize) -> Result<Vec<AlphaSweepPoint>> {
    if grid_size < 2 {
        return Err(Error::config("grid_size", "must be at least 2"));
    }
    let totals = unit_periods(pair);
    let n = totals.n as f64;
    let last = (grid_size - 1) as f64;
    Ok((0..grid_size)
        .map(|k| {
            let alpha1 = k as f64 / last;
            let alpha2 = 1.0 - alpha1;
            AlphaSweepPoint {
                alpha1,
                alpha2,
                spec_value: (alpha1 * totals.opportunity + alpha2 * totals.stock) / n,
            }
        })
        .collect())
}
