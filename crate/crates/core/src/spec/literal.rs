use super::SpecParams;
use crate::series::EvaluationPair;

/// Direct O(n^2) evaluation of the double sum over prefix totals.
pub fn spec_literal(pair: &EvaluationPair, params: SpecParams) -> f64 {
    let (opp, stock) = literal_per_step(pair, params);
    let total: f64 = opp.iter().zip(&stock).map(|(o, s)| o + s).sum();
    total / pair.len() as f64
}

/// Per-step weighted contributions `(opportunity, stock)` from the literal
/// double sum, indexed from 0 for t = 1.
pub fn literal_per_step(pair: &EvaluationPair, params: SpecParams) -> (Vec<f64>, Vec<f64>) {
    let y = pair.actual().values();
    let f = pair.forecast().values();
    let cum_y = pair.actual().prefix_sums();
    let cum_f = pair.forecast().prefix_sums();
    let n = pair.len();
    let mut opp = vec![0.0; n];
    let mut stock = vec![0.0; n];

    for t in 1..=n {
        let y_t = cum_y.through(t);
        let f_t = cum_f.through(t);
        for i in 1..=t {
            let short = y[i - 1].min(cum_y.through(i) - f_t) * params.alpha1();
            let excess = f[i - 1].min(cum_f.through(i) - y_t) * params.alpha2();
            let term = 0.0_f64.max(short).max(excess);
            if term > 0.0 {
                let weighted = term * (t - i + 1) as f64;
                if short >= excess {
                    opp[t - 1] += weighted;
                } else {
                    stock[t - 1] += weighted;
                }
            }
        }
    }
    (opp, stock)
}
