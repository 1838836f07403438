#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct evaluation of the SPEC double sum, written independently of the
/// library so the two can be compared.
pub fn spec_double_sum(y: &[f64], f: &[f64], a1: f64, a2: f64) -> f64 {
    let n = y.len();
    let cum = |v: &[f64], t: usize| v[..t].iter().sum::<f64>();
    let mut total = 0.0;
    for t in 1..=n {
        let ft = cum(f, t);
        let yt = cum(y, t);
        for i in 1..=t {
            let opp = y[i - 1].min(cum(y, i) - ft) * a1;
            let stock = f[i - 1].min(cum(f, i) - yt) * a2;
            total += 0.0_f64.max(opp).max(stock) * (t - i + 1) as f64;
        }
    }
    total / n as f64
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Intermittent,
    AllZero,
    SingleSpike,
    Saturated,
}

pub const SHAPES: [Shape; 4] = [
    Shape::Intermittent,
    Shape::AllZero,
    Shape::SingleSpike,
    Shape::Saturated,
];

/// A series of length `n` of the requested shape.
pub fn draw_series(rng: &mut ChaCha8Rng, n: usize, shape: Shape) -> Vec<f64> {
    match shape {
        Shape::Intermittent => (0..n)
            .map(|_| {
                if rng.random_bool(0.3) {
                    rng.random_range(0.5..25.0)
                } else {
                    0.0
                }
            })
            .collect(),
        Shape::AllZero => vec![0.0; n],
        Shape::SingleSpike => {
            let mut v = vec![0.0; n];
            v[rng.random_range(0..n)] = rng.random_range(1.0..50.0);
            v
        }
        Shape::Saturated => (0..n).map(|_| rng.random_range(1.0..30.0)).collect(),
    }
}

/// `count` seeded `(actual, forecast)` pairs cycling through every
/// combination of shapes, lengths 1..=max_n.
pub fn seeded_pairs(seed: u64, count: usize, max_n: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.random_range(1..=max_n);
            let ys = SHAPES[k % 4];
            let fs = SHAPES[(k / 4) % 4];
            (draw_series(&mut rng, n, ys), draw_series(&mut rng, n, fs))
        })
        .collect()
}

fn spec_of(y: &[f64], f: &[f64], a1: f64, a2: f64) -> f64 {
    use specmetric::{spec_fast, EvaluationPair, SpecParams};
    spec_fast(
        &EvaluationPair::from_raw(y, f).unwrap(),
        SpecParams::new(a1, a2).unwrap(),
    )
}

/// Checks the algebraic properties of SPEC on one case; returns the first
/// violated property.
pub fn spec_property_violation(y: &[f64], f: &[f64], a1: f64, a2: f64, c: f64, tol: f64) -> Option<String> {
    use specmetric::classic::mape;
    use specmetric::{spec_decompose, EvaluationPair, SpecParams};

    let s = spec_of(y, f, a1, a2);
    let checks: [(&str, bool); 7] = [
        ("non-negative", s >= 0.0),
        ("double sum", close(s, spec_double_sum(y, f, a1, a2), tol)),
        ("zero on perfect forecast", spec_of(y, y, a1, a2) == 0.0),
        (
            "linear in weights",
            close(s, a1 * spec_of(y, f, 1.0, 0.0) + a2 * spec_of(y, f, 0.0, 1.0), tol)
                && close(spec_of(y, f, c * a1, c * a2), c * s, tol),
        ),
        ("mirror symmetry", close(s, spec_of(f, y, a2, a1), tol)),
        ("positive homogeneity", {
            let yc: Vec<f64> = y.iter().map(|v| v * c).collect();
            let fc: Vec<f64> = f.iter().map(|v| v * c).collect();
            close(spec_of(&yc, &fc, a1, a2), c * s, tol)
        }),
        ("branch exclusivity", {
            let b = spec_decompose(
                &EvaluationPair::from_raw(y, f).unwrap(),
                SpecParams::new(a1, a2).unwrap(),
            );
            b.per_t_opportunity
                .iter()
                .zip(&b.per_t_stock)
                .all(|(o, st)| *o == 0.0 || *st == 0.0)
        }),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Some(format!("{name} violated for y={y:?} f={f:?} alpha=({a1},{a2}) c={c}"));
    }
    let zeros = vec![0.0; f.len()];
    let pair = EvaluationPair::from_raw(&zeros, f).unwrap();
    if !spec_of(&zeros, f, a1, a2).is_finite() || mape(&pair).is_finite() {
        return Some(format!("zero-actual case failed for f={f:?}"));
    }
    None
}

pub mod strategies {
    use proptest::prelude::*;

    fn value() -> impl Strategy<Value = f64> {
        prop_oneof![3 => Just(0.0), 2 => 0.0..40.0_f64, 1 => (1u32..20).prop_map(f64::from)]
    }

    /// `(actual, forecast, (alpha1, alpha2), c)` with `n <= 30`.
    pub fn spec_case() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, (f64, f64), f64)> {
        let pair =
            (1usize..=30).prop_flat_map(|n| (prop::collection::vec(value(), n), prop::collection::vec(value(), n)));
        let weights = (0.0..5.0_f64, 0.0..5.0_f64).prop_filter("not both zero", |(a, b)| *a > 0.0 || *b > 0.0);
        (pair, weights, prop::sample::select(vec![0.5, 2.0, 10.0])).prop_map(|((y, f), w, c)| (y, f, w, c))
    }
}
