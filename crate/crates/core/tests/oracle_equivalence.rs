mod common;

use specmetric::experiments::ground_truth_cost;
use specmetric::{spec_fast, spec_literal, EvaluationPair, SpecParams};

use common::{close, seeded_pairs, spec_double_sum};

#[test]
fn fast_literal_and_oracles_agree() {
    let params = SpecParams::default();
    for (k, (y, f)) in seeded_pairs(2024, 1000, 50).into_iter().enumerate() {
        let pair = EvaluationPair::from_raw(&y, &f).unwrap();
        let fast = spec_fast(&pair, params);
        let literal = spec_literal(&pair, params);
        let direct = spec_double_sum(&y, &f, 0.75, 0.25);
        let rank = ground_truth_cost(&pair).per_step(params);
        assert!(close(fast, literal, 1e-9), "pair {k}: fast {fast} literal {literal}");
        assert!(
            close(literal, direct, 1e-9),
            "pair {k}: literal {literal} direct {direct}"
        );
        assert!(close(fast, rank, 1e-9), "pair {k}: fast {fast} rank oracle {rank}");
    }
}

#[test]
fn mirrored_weights_on_mirrored_pairs() {
    for (y, f) in seeded_pairs(11, 200, 40) {
        let pair = EvaluationPair::from_raw(&y, &f).unwrap();
        let p = SpecParams::new(0.6, 0.15).unwrap();
        let a = spec_literal(&pair, p);
        let b = spec_literal(&pair.mirrored(), p.mirrored());
        assert!(close(a, b, 1e-9), "{a} vs {b}");
    }
}
