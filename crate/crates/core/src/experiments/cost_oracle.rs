//! Ground-truth fictive-stock cost by explicit unit matching.
//!
//! Each demand unit is served by the forecast unit of the same cumulative
//! rank (first in, first out). A unit of demand placed at step `i` and served
//! at step `s > i` waits `d = s - i` steps; a forecast unit delivered at `j`
//! and consumed at `s > j` is stored `d = s - j` steps. Units left over at
//! the horizon wait `d = n - i + 1`. A unit that waits `d` steps is charged
//! `1 + 2 + ... + d = d(d + 1)/2` unit-periods, since it is counted once
//! per step with its age at that step.

use serde::{Deserialize, Serialize};

use crate::series::EvaluationPair;
use crate::spec::SpecParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthCost {
    pub opportunity_unit_periods: f64,
    pub stock_unit_periods: f64,
    pub n: usize,
}

impl GroundTruthCost {
    /// Mean cost per step under the given weights.
    pub fn per_step(&self, params: SpecParams) -> f64 {
        (params.alpha1() * self.opportunity_unit_periods + params.alpha2() * self.stock_unit_periods) / self.n as f64
    }
}

fn triangular(d: usize) -> f64 {
    (d * (d + 1)) as f64 / 2.0
}

fn events(values: &[f64]) -> Vec<(usize, f64)> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &q)| q > 0.0)
        .map(|(i, &q)| (i + 1, q))
        .collect()
}

pub fn ground_truth_cost(pair: &EvaluationPair) -> GroundTruthCost {
    let n = pair.len();
    let demand = events(pair.actual().values());
    let supply = events(pair.forecast().values());
    let mut opportunity = 0.0;
    let mut stock = 0.0;

    let (mut di, mut si) = (0, 0);
    let mut demand_left = demand.first().map_or(0.0, |e| e.1);
    let mut supply_left = supply.first().map_or(0.0, |e| e.1);
    while di < demand.len() && si < supply.len() {
        let q = demand_left.min(supply_left);
        let (td, ts) = (demand[di].0, supply[si].0);
        if ts > td {
            opportunity += q * triangular(ts - td);
        } else if td > ts {
            stock += q * triangular(td - ts);
        }
        demand_left -= q;
        supply_left -= q;
        if demand_left <= 0.0 {
            di += 1;
            demand_left = demand.get(di).map_or(0.0, |e| e.1);
        }
        if supply_left <= 0.0 {
            si += 1;
            supply_left = supply.get(si).map_or(0.0, |e| e.1);
        }
    }
    // Unmatched remainders wait until the end of the horizon.
    if di < demand.len() {
        opportunity += demand_left * triangular(n - demand[di].0 + 1);
        for &(t, q) in &demand[di + 1..] {
            opportunity += q * triangular(n - t + 1);
        }
    }
    if si < supply.len() {
        stock += supply_left * triangular(n - supply[si].0 + 1);
        for &(t, q) in &supply[si + 1..] {
            stock += q * triangular(n - t + 1);
        }
    }

    GroundTruthCost {
        opportunity_unit_periods: opportunity,
        stock_unit_periods: stock,
        n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn worked_example_costs() {
        let p = SpecParams::default();
        let a = ground_truth_cost(&fixtures::model_a());
        assert_eq!((a.opportunity_unit_periods, a.stock_unit_periods), (0.0, 8.0));
        assert!((a.per_step(p) - 2.0 / 14.0).abs() < 1e-15);
        let b = ground_truth_cost(&fixtures::model_b());
        assert_eq!((b.opportunity_unit_periods, b.stock_unit_periods), (48.0, 4.0));
        assert!((b.per_step(p) - 37.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn leftovers_wait_to_horizon() {
        // demand at t=2 never served in a horizon of 4: ages 1,2,3
        let pair = EvaluationPair::from_raw(&[0.0, 1.0, 0.0, 0.0], &[0.0; 4]).unwrap();
        let c = ground_truth_cost(&pair);
        assert_eq!(c.opportunity_unit_periods, 6.0);
        let stored = EvaluationPair::from_raw(&[0.0; 3], &[2.0, 0.0, 0.0]).unwrap();
        assert_eq!(ground_truth_cost(&stored).stock_unit_periods, 12.0);
    }
}
