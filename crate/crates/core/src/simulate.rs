//! Synthetic intermittent demand and perturbed forecasts.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with a
//! 64-bit value; normal deviates use `rand_distr::Normal` (ziggurat). A
//! given `(config, seed)` therefore always yields the same series within
//! this implementation. Independent substreams for parallel tasks are
//! derived with [`derive_seed`].

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{DemandSeries, ForecastSeries};

/// Smallest magnitude a generated nonzero demand may take (one SKU).
pub const QUANTIZATION_FLOOR: f64 = 1.0;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a task seed from a base seed and a path of task indices:
/// `h = mix64(base)`, then `h = mix64(h ^ mix64(i))` for each index `i`,
/// where `mix64` is the SplitMix64 finalizer.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(base), |h, &i| mix64(h ^ mix64(i)))
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(field: &str, mu: f64, sigma: f64) -> Result<Normal<f64>> {
    if !mu.is_finite() {
        return Err(Error::config(format!("{field}_mu"), "must be finite"));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::config(format!("{field}_sigma"), "must be finite and >= 0"));
    }
    Normal::new(mu, sigma).map_err(|e| Error::config(format!("{field}_sigma"), e.to_string()))
}

/// Shape of a simulated demand series, without the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandProfile {
    pub n: usize,
    pub count_mu: f64,
    pub count_sigma: f64,
    pub magnitude_mu: f64,
    pub magnitude_sigma: f64,
    /// Round magnitudes to whole SKUs.
    #[serde(default)]
    pub integer_magnitudes: bool,
}

impl DemandProfile {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("n", "must be at least 1"));
        }
        normal("count", self.count_mu, self.count_sigma)?;
        normal("magnitude", self.magnitude_mu, self.magnitude_sigma)?;
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> DemandGenConfig {
        DemandGenConfig {
            profile: self.clone(),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandGenConfig {
    #[serde(flatten)]
    pub profile: DemandProfile,
    pub seed: u64,
}

/// Draws a demand series: the number of nonzero steps and their magnitudes
/// are normal, their positions uniform without replacement.
pub fn generate_demand(config: &DemandGenConfig) -> Result<DemandSeries> {
    let p = &config.profile;
    p.validate()?;
    let count_dist = normal("count", p.count_mu, p.count_sigma)?;
    let magnitude_dist = normal("magnitude", p.magnitude_mu, p.magnitude_sigma)?;
    let mut rng = rng(config.seed);

    let count = count_dist.sample(&mut rng).round().clamp(0.0, p.n as f64) as usize;
    let mut positions = index::sample(&mut rng, p.n, count).into_vec();
    positions.sort_unstable();

    let mut values = vec![0.0; p.n];
    for pos in positions {
        let mut v = magnitude_dist.sample(&mut rng);
        if p.integer_magnitudes {
            v = v.round();
        }
        values[pos] = v.max(QUANTIZATION_FLOOR);
    }
    DemandSeries::new(values)
}

/// Normal error laws for spike magnitude (SKUs) and position (time units).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorModel {
    #[serde(default)]
    pub vertical_mu: f64,
    #[serde(default)]
    pub vertical_sigma: f64,
    #[serde(default)]
    pub horizontal_mu: f64,
    #[serde(default)]
    pub horizontal_sigma: f64,
}

impl ErrorModel {
    pub fn validate(&self) -> Result<()> {
        normal("vertical", self.vertical_mu, self.vertical_sigma)?;
        normal("horizontal", self.horizontal_mu, self.horizontal_sigma)?;
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> ErrorInjectionConfig {
        ErrorInjectionConfig { model: *self, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorInjectionConfig {
    #[serde(flatten)]
    pub model: ErrorModel,
    pub seed: u64,
}

/// Moves and resizes every demand spike to build a forecast.
///
/// Spikes are visited in time order. Each one is displaced by a rounded
/// horizontal deviate (clamped to the series) and resized by an additive
/// vertical deviate (clamped at 0). Spikes landing on the same step add up.
pub fn perturb_forecast(actual: &DemandSeries, config: &ErrorInjectionConfig) -> Result<ForecastSeries> {
    let m = &config.model;
    m.validate()?;
    let horizontal = normal("horizontal", m.horizontal_mu, m.horizontal_sigma)?;
    let vertical = normal("vertical", m.vertical_mu, m.vertical_sigma)?;
    let mut rng = rng(config.seed);
    let n = actual.len() as i64;

    let mut values = vec![0.0; actual.len()];
    for (i, &v) in actual.values().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let shift = horizontal.sample(&mut rng).round();
        let magnitude = (v + vertical.sample(&mut rng)).max(0.0);
        let target = (i as i64 + shift as i64).clamp(0, n - 1) as usize;
        values[target] += magnitude;
    }
    ForecastSeries::new(values)
}

/// One-step naive forecast: `f_1 = 0`, `f_t = y_{t-1}`.
pub fn naive_forecast(actual: &DemandSeries) -> ForecastSeries {
    let v = actual.values();
    let mut out = Vec::with_capacity(v.len());
    out.push(0.0);
    out.extend_from_slice(&v[..v.len() - 1]);
    ForecastSeries::new(out).expect("shifted valid series is valid")
}

/// `count` contiguous windows with uniformly drawn start offsets.
pub fn segment_extracts(series: &DemandSeries, window: usize, count: usize, seed: u64) -> Result<Vec<DemandSeries>> {
    if window == 0 {
        return Err(Error::config("window", "must be at least 1"));
    }
    if count == 0 {
        return Err(Error::config("count", "must be at least 1"));
    }
    let n = series.len();
    if window > n {
        return Err(Error::WindowTooLarge { window, n });
    }
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let start = rng.random_range(0..=n - window);
            DemandSeries::new(series.values()[start..start + window].to_vec())
        })
        .collect()
}

/// Start offsets (1-based) that [`segment_extracts`] would use.
pub fn segment_starts(n: usize, window: usize, count: usize, seed: u64) -> Result<Vec<usize>> {
    if window == 0 || window > n {
        return Err(Error::WindowTooLarge { window, n });
    }
    let mut rng = rng(seed);
    Ok((0..count).map(|_| rng.random_range(0..=n - window) + 1).collect())
}
