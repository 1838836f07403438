//! The two-model worked example: 14 steps of demand with 8 units at t=9 and
//! 6 units at t=12. Model A delivers the 8 units one step early, model B
//! delivers only 4 of them one step early. Both forecast t=12 exactly.

use crate::series::EvaluationPair;

pub const MODEL_ACTUAL: [f64; 14] = [0., 0., 0., 0., 0., 0., 0., 0., 8., 0., 0., 6., 0., 0.];
pub const MODEL_A_FORECAST: [f64; 14] = [0., 0., 0., 0., 0., 0., 0., 8., 0., 0., 0., 6., 0., 0.];
pub const MODEL_B_FORECAST: [f64; 14] = [0., 0., 0., 0., 0., 0., 0., 4., 0., 0., 0., 6., 0., 0.];
/// Model A's misprediction replaced by an overestimate of 11 units at t=9.
pub const ALTERNATIVE_FORECAST: [f64; 14] = [0., 0., 0., 0., 0., 0., 0., 0., 19., 0., 0., 6., 0., 0.];

pub fn model_a() -> EvaluationPair {
    EvaluationPair::from_raw(&MODEL_ACTUAL, &MODEL_A_FORECAST).expect("valid fixture")
}

pub fn model_b() -> EvaluationPair {
    EvaluationPair::from_raw(&MODEL_ACTUAL, &MODEL_B_FORECAST).expect("valid fixture")
}

pub fn alternative_scenario() -> EvaluationPair {
    EvaluationPair::from_raw(&MODEL_ACTUAL, &ALTERNATIVE_FORECAST).expect("valid fixture")
}
