mod common;

use std::path::PathBuf;

use specmetric::io::{parse_csv, read_pair, write_csv};
use specmetric::{fixtures, EvaluationPair};

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

#[test]
fn shipped_fixtures_parse_to_models() {
    assert_eq!(read_pair(shipped("model_a.csv")).unwrap(), fixtures::model_a());
    assert_eq!(read_pair(shipped("model_b.csv")).unwrap(), fixtures::model_b());
    assert_eq!(
        read_pair(shipped("alternative.csv")).unwrap(),
        fixtures::alternative_scenario()
    );
}

#[test]
fn csv_round_trip_is_exact() {
    for (y, f) in common::seeded_pairs(77, 300, 60) {
        let pair = EvaluationPair::from_raw(&y, &f).unwrap();
        let mut buf = Vec::new();
        write_csv(&pair, &mut buf).unwrap();
        assert_eq!(parse_csv(buf.as_slice()).unwrap(), pair);
    }
}
