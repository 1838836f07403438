use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::SpecParams;
use crate::series::EvaluationPair;

/// Batches waiting on one side of the fictive warehouse, oldest first.
///
/// Tracks `sum q_i` and `sum q_i * i` so the duration-weighted total
/// `sum q_i * (t - i + 1)` is available in O(1) at any step `t`.
#[derive(Default)]
struct BatchQueue {
    batches: VecDeque<(usize, f64)>,
    quantity: f64,
    weighted_index: f64,
}

impl BatchQueue {
    fn push(&mut self, t: usize, q: f64) {
        if q > 0.0 {
            self.batches.push_back((t, q));
            self.quantity += q;
            self.weighted_index += q * t as f64;
        }
    }

    fn is_empty(&self) -> bool {
        self.batches.is_empty()
    }

    /// Removes up to `amount` from the front, returning the amount removed.
    fn consume(&mut self, amount: f64) -> f64 {
        let Some(front) = self.batches.front_mut() else {
            return 0.0;
        };
        let taken = amount.min(front.1);
        let (index, remaining) = *front;
        if taken >= remaining {
            self.batches.pop_front();
        } else {
            front.1 = remaining - taken;
        }
        if self.batches.is_empty() {
            // Reset to kill accumulated rounding.
            self.quantity = 0.0;
            self.weighted_index = 0.0;
        } else {
            self.quantity -= taken;
            self.weighted_index -= taken * index as f64;
        }
        taken
    }

    fn unit_periods_at(&self, t: usize) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            ((t + 1) as f64 * self.quantity - self.weighted_index).max(0.0)
        }
    }
}

/// Unweighted per-step unit-periods produced by the netting simulation.
fn simulate(pair: &EvaluationPair) -> (Vec<f64>, Vec<f64>) {
    let n = pair.len();
    let mut backlog = BatchQueue::default();
    let mut stock = BatchQueue::default();
    let mut opp_steps = Vec::with_capacity(n);
    let mut stock_steps = Vec::with_capacity(n);

    for (t, y, f) in pair.steps() {
        backlog.push(t, y);
        stock.push(t, f);
        // Serve the oldest open demand from the oldest stocked units.
        while !backlog.is_empty() && !stock.is_empty() {
            let (_, need) = backlog.batches[0];
            let (_, have) = stock.batches[0];
            let q = need.min(have);
            backlog.consume(q);
            stock.consume(q);
        }
        opp_steps.push(backlog.unit_periods_at(t));
        stock_steps.push(stock.unit_periods_at(t));
    }
    (opp_steps, stock_steps)
}

/// Alpha-independent totals: SKU-periods of unmet demand and of stored stock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitPeriods {
    pub opportunity: f64,
    pub stock: f64,
    pub n: usize,
}

impl UnitPeriods {
    pub fn spec(&self, params: SpecParams) -> f64 {
        (params.alpha1() * self.opportunity + params.alpha2() * self.stock) / self.n as f64
    }
}

pub fn unit_periods(pair: &EvaluationPair) -> UnitPeriods {
    let (opp, stock) = simulate(pair);
    UnitPeriods {
        opportunity: opp.iter().sum(),
        stock: stock.iter().sum(),
        n: pair.len(),
    }
}

/// Linear-time SPEC via FIFO netting of deliveries against departures.
pub fn spec_fast(pair: &EvaluationPair, params: SpecParams) -> f64 {
    unit_periods(pair).spec(params)
}

/// Per-step composition of a SPEC value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Weighted opportunity cost at each step, index 0 is t = 1.
    pub per_t_opportunity: Vec<f64>,
    /// Weighted stock-keeping cost at each step, index 0 is t = 1.
    pub per_t_stock: Vec<f64>,
    pub opp_unit_periods: f64,
    pub stock_unit_periods: f64,
    pub spec_value: f64,
    pub params: SpecParams,
}

impl CostBreakdown {
    pub fn n(&self) -> usize {
        self.per_t_opportunity.len()
    }

    /// `(opportunity, stock)` at time `t`, counted from 1.
    pub fn at(&self, t: usize) -> (f64, f64) {
        (self.per_t_opportunity[t - 1], self.per_t_stock[t - 1])
    }

    pub fn unit_periods(&self) -> UnitPeriods {
        UnitPeriods {
            opportunity: self.opp_unit_periods,
            stock: self.stock_unit_periods,
            n: self.n(),
        }
    }
}

pub fn spec_decompose(pair: &EvaluationPair, params: SpecParams) -> CostBreakdown {
    let (opp, stock) = simulate(pair);
    let opp_unit_periods: f64 = opp.iter().sum();
    let stock_unit_periods: f64 = stock.iter().sum();
    let totals = UnitPeriods {
        opportunity: opp_unit_periods,
        stock: stock_unit_periods,
        n: pair.len(),
    };
    CostBreakdown {
        per_t_opportunity: opp.iter().map(|u| u * params.alpha1()).collect(),
        per_t_stock: stock.iter().map(|u| u * params.alpha2()).collect(),
        opp_unit_periods,
        stock_unit_periods,
        spec_value: totals.spec(params),
        params,
    }
}
