//! Demand and forecast containers.
//!
//! Both series types hold finite, non-negative quantities of length at least
//! one. Storage is zero-based; every user-facing report indexes time from 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check(raw: &[f64]) -> Result<()> {
    if raw.is_empty() {
        return Err(Error::EmptySeries);
    }
    for (i, &v) in raw.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { t: i + 1 });
        }
        if v < 0.0 {
            return Err(Error::NegativeValue { t: i + 1, value: v });
        }
    }
    Ok(())
}

macro_rules! quantity_series {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
        pub struct $name(Vec<f64>);

        impl $name {
            pub fn new(raw: Vec<f64>) -> Result<Self> {
                check(&raw)?;
                Ok(Self(raw))
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            /// Always false; kept for clippy's `len_without_is_empty`.
            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn values(&self) -> &[f64] {
                &self.0
            }

            /// Value at time `t`, counted from 1.
            pub fn at(&self, t: usize) -> f64 {
                self.0[t - 1]
            }

            pub fn prefix_sums(&self) -> PrefixSums {
                PrefixSums::of(&self.0)
            }

            /// Multiplies every entry by a positive finite factor.
            pub fn scaled(&self, factor: f64) -> Result<Self> {
                Self::new(self.0.iter().map(|v| v * factor).collect())
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }
        }

        impl AsRef<[f64]> for $name {
            fn as_ref(&self) -> &[f64] {
                &self.0
            }
        }

        impl TryFrom<Vec<f64>> for $name {
            type Error = Error;
            fn try_from(raw: Vec<f64>) -> Result<Self> {
                Self::new(raw)
            }
        }

        impl From<$name> for Vec<f64> {
            fn from(s: $name) -> Vec<f64> {
                s.0
            }
        }
    };
}

quantity_series!(
    /// Actual demand y_1..y_n in SKU units.
    DemandSeries
);
quantity_series!(
    /// Forecast quantities f_1..f_n in SKU units.
    ForecastSeries
);

impl From<ForecastSeries> for DemandSeries {
    fn from(s: ForecastSeries) -> Self {
        DemandSeries(s.0)
    }
}

impl From<DemandSeries> for ForecastSeries {
    fn from(s: DemandSeries) -> Self {
        ForecastSeries(s.0)
    }
}

/// Validates raw values as a demand series.
pub fn validate_series(raw: &[f64]) -> Result<DemandSeries> {
    DemandSeries::new(raw.to_vec())
}

/// Running totals `cumulative[t] = v_1 + ... + v_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixSums {
    cumulative: Vec<f64>,
}

impl PrefixSums {
    pub fn of(values: &[f64]) -> Self {
        let cumulative = values
            .iter()
            .scan(0.0, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        Self { cumulative }
    }

    /// Cumulative total through time `t` (1-based); `t = 0` yields 0.
    pub fn through(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.cumulative[t - 1]
        }
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn differences(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.cumulative
            .iter()
            .map(|&c| {
                let d = c - prev;
                prev = c;
                d
            })
            .collect()
    }
}

/// An actual demand series together with a forecast of the same length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPair {
    actual: DemandSeries,
    forecast: ForecastSeries,
}

impl EvaluationPair {
    pub fn new(actual: DemandSeries, forecast: ForecastSeries) -> Result<Self> {
        if actual.len() != forecast.len() {
            return Err(Error::LengthMismatch {
                actual: actual.len(),
                forecast: forecast.len(),
            });
        }
        Ok(Self { actual, forecast })
    }

    /// Validates both raw sequences and pairs them.
    pub fn from_raw(actual: &[f64], forecast: &[f64]) -> Result<Self> {
        Self::new(
            DemandSeries::new(actual.to_vec())?,
            ForecastSeries::new(forecast.to_vec())?,
        )
    }

    pub fn actual(&self) -> &DemandSeries {
        &self.actual
    }

    pub fn forecast(&self) -> &ForecastSeries {
        &self.forecast
    }

    pub fn len(&self) -> usize {
        self.actual.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Swaps the roles of actual and forecast.
    pub fn mirrored(&self) -> Self {
        Self {
            actual: self.forecast.clone().into(),
            forecast: self.actual.clone().into(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.actual.scaled(factor)?, self.forecast.scaled(factor)?)
    }

    /// Yields `(t, y_t, f_t)` with `t` starting at 1.
    pub fn steps(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.actual
            .values()
            .iter()
            .zip(self.forecast.values())
            .enumerate()
            .map(|(i, (&y, &f))| (i + 1, y, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_well_formed() {
        let s = validate_series(&[0.0, 8.0, 0.0]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.at(2), 8.0);
    }

    #[test]
    fn validate_rejects_bad_input() {
        assert!(matches!(validate_series(&[]), Err(Error::EmptySeries)));
        assert!(matches!(
            validate_series(&[1.0, -2.0]),
            Err(Error::NegativeValue { t: 2, .. })
        ));
        assert!(matches!(
            validate_series(&[f64::NAN]),
            Err(Error::NonFiniteValue { t: 1 })
        ));
        assert!(matches!(
            validate_series(&[0.0, f64::INFINITY]),
            Err(Error::NonFiniteValue { t: 2 })
        ));
        assert!(matches!(
            validate_series(&[f64::NEG_INFINITY]),
            Err(Error::NonFiniteValue { .. })
        ));
    }

    #[test]
    fn prefix_sums_examples() {
        let p = PrefixSums::of(&[0.0, 0.0, 8.0, 0.0, 6.0]);
        assert_eq!(p.as_slice(), &[0.0, 0.0, 8.0, 8.0, 14.0]);
        assert_eq!(p.through(0), 0.0);
        assert_eq!(p.through(3), 8.0);
        assert_eq!(PrefixSums::of(&[4.0]).as_slice(), &[4.0]);
        let zeros = PrefixSums::of(&[0.0; 14]);
        assert_eq!(zeros.as_slice(), &[0.0; 14]);
    }

    #[test]
    fn pair_length_mismatch() {
        let err = EvaluationPair::from_raw(&[1.0, 2.0], &[1.0]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { actual: 2, forecast: 1 }));
    }

    #[test]
    fn serde_validates() {
        let ok: DemandSeries = serde_json::from_str("[1.0, 0.0]").unwrap();
        assert_eq!(ok.len(), 2);
        assert!(serde_json::from_str::<DemandSeries>("[-1.0]").is_err());
        assert!(serde_json::from_str::<ForecastSeries>("[]").is_err());
    }
}
