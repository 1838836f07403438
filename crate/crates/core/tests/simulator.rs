use specmetric::classic::mae;
use specmetric::simulate::{generate_demand, perturb_forecast, DemandProfile, ErrorModel};
use specmetric::stats::{mean, variance};
use specmetric::{spec_fast, EvaluationPair, SpecParams};

fn profile(n: usize, count_mu: f64, count_sigma: f64) -> DemandProfile {
    DemandProfile {
        n,
        count_mu,
        count_sigma,
        magnitude_mu: 12.0,
        magnitude_sigma: 2.0,
        integer_magnitudes: false,
    }
}

#[test]
fn nonzero_count_follows_its_law() {
    let p = profile(100, 10.0, 2.0);
    let counts: Vec<f64> = (0..10_000u64)
        .map(|seed| {
            let s = generate_demand(&p.with_seed(seed)).unwrap();
            s.values().iter().filter(|&&v| v > 0.0).count() as f64
        })
        .collect();
    let m = mean(&counts);
    // Standard error is 0.02; rounding adds 1/12 to the variance.
    assert!((m - 10.0).abs() < 0.1, "mean count {m}");
    let sd = variance(&counts).sqrt();
    assert!((sd - (4.0_f64 + 1.0 / 12.0).sqrt()).abs() < 0.1, "sd {sd}");
}

#[test]
fn magnitudes_follow_their_law() {
    let p = profile(100, 40.0, 0.0);
    let values: Vec<f64> = (0..500u64)
        .flat_map(|seed| generate_demand(&p.with_seed(seed)).unwrap().into_inner())
        .filter(|&v| v > 0.0)
        .collect();
    assert_eq!(values.len(), 500 * 40);
    assert!((mean(&values) - 12.0).abs() < 0.05);
    assert!((variance(&values).sqrt() - 2.0).abs() < 0.05);
}

fn mean_over_forecasts(model: ErrorModel, f: impl Fn(&EvaluationPair) -> f64) -> f64 {
    let p = profile(52, 10.0, 2.0);
    let values: Vec<f64> = (0..400u64)
        .map(|seed| {
            let actual = generate_demand(&p.with_seed(seed)).unwrap();
            let forecast = perturb_forecast(&actual, &model.with_seed(seed + 1_000_000)).unwrap();
            f(&EvaluationPair::new(actual, forecast).unwrap())
        })
        .collect();
    mean(&values)
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

#[test]
fn error_grows_with_injected_noise() {
    let maes: Vec<f64> = [0.0, 1.0, 2.0, 4.0]
        .iter()
        .map(|&s| {
            mean_over_forecasts(
                ErrorModel {
                    vertical_sigma: s,
                    ..Default::default()
                },
                |p| mae(p).finite().unwrap(),
            )
        })
        .collect();
    assert_eq!(maes[0], 0.0);
    assert!(strictly_increasing(&maes), "{maes:?}");
}

#[test]
fn spec_grows_with_bias_in_either_direction() {
    let params = SpecParams::default();
    let vertical: Vec<f64> = [0.0, 2.0, 4.0, 6.0]
        .iter()
        .map(|&mu| {
            mean_over_forecasts(
                ErrorModel {
                    vertical_mu: mu,
                    vertical_sigma: 1.0,
                    ..Default::default()
                },
                |p| spec_fast(p, params),
            )
        })
        .collect();
    assert!(strictly_increasing(&vertical), "{vertical:?}");

    let late: Vec<f64> = [0.0, 1.0, 2.0, 3.0]
        .iter()
        .map(|&mu| {
            mean_over_forecasts(
                ErrorModel {
                    horizontal_mu: mu,
                    ..Default::default()
                },
                |p| spec_fast(p, params),
            )
        })
        .collect();
    assert_eq!(late[0], 0.0);
    assert!(strictly_increasing(&late), "{late:?}");

    let early: Vec<f64> = [0.0, -1.0, -2.0, -3.0]
        .iter()
        .map(|&mu| {
            mean_over_forecasts(
                ErrorModel {
                    horizontal_mu: mu,
                    ..Default::default()
                },
                |p| spec_fast(p, params),
            )
        })
        .collect();
    assert!(strictly_increasing(&early), "{early:?}");
}
