//! Reliability and validity studies on simulated demand.
//!
//! Every runner is deterministic in its config. Per-task seeds come from
//! [`derive_seed`] over `(base seed, stream, series, level, forecast)`
//! paths, tasks run in parallel with rayon, and results are reduced in a
//! fixed order, so reports do not depend on thread scheduling.
//!
//! A metric is reported as not calculable when any scored pair yields a
//! non-finite value. Percentage metrics are held to a stricter rule here:
//! a single zero denominator term (`y_t = 0` for mape, mdape and rmspe,
//! `|y_t| + |f_t| = 0` for smape) makes the pair unscorable.

mod cost_oracle;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classic::{ExtendedValue, MetricName, UndefinedReason};
use crate::error::{Error, Result};
use crate::series::{DemandSeries, EvaluationPair, ForecastSeries};
use crate::simulate::{
    derive_seed, generate_demand, naive_forecast, perturb_forecast, segment_extracts, DemandProfile, ErrorModel,
};
use crate::spec::{spec_fast, SpecParams};
use crate::stats::{self, levene, mean, pearson, variance, CorrelationResult, LeveneResult};

pub use cost_oracle::{ground_truth_cost, GroundTruthCost};

const STREAM_DEMAND: u64 = 0;
const STREAM_FORECAST: u64 = 1;
const STREAM_SEGMENTS: u64 = 2;

fn default_metrics() -> Vec<MetricName> {
    MetricName::TABLE.to_vec()
}

fn check_metrics(metrics: &[MetricName]) -> Result<()> {
    if metrics.is_empty() {
        return Err(Error::config("metrics", "at least one metric is required"));
    }
    Ok(())
}

fn check_count(field: &str, v: usize) -> Result<()> {
    if v < 2 {
        return Err(Error::config(field, "must be at least 2"));
    }
    Ok(())
}

fn distinct(levels: &[f64]) -> usize {
    let mut v = levels.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

fn check_levels(field: &str, levels: &[f64], min: usize) -> Result<()> {
    if levels.iter().any(|l| !l.is_finite()) {
        return Err(Error::config(field, "levels must be finite"));
    }
    if distinct(levels) < min {
        return Err(Error::config(field, format!("needs at least {min} distinct levels")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReliabilityConfig {
    pub series_count: usize,
    pub forecasts_per_series: usize,
    /// Error standard deviations; each level sets
    /// `vertical_sigma = level * vertical_scale` and
    /// `horizontal_sigma = level * horizontal_scale`.
    pub variance_levels: Vec<f64>,
    #[serde(default = "one")]
    pub vertical_scale: f64,
    #[serde(default = "one")]
    pub horizontal_scale: f64,
    pub demand: DemandProfile,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<MetricName>,
    #[serde(default)]
    pub params: SpecParams,
    pub seed: u64,
}

fn one() -> f64 {
    1.0
}

impl ReliabilityConfig {
    pub fn validate(&self) -> Result<()> {
        check_count("series_count", self.series_count)?;
        check_count("forecasts_per_series", self.forecasts_per_series)?;
        check_levels("variance_levels", &self.variance_levels, 2)?;
        if self.variance_levels.iter().any(|&l| l < 0.0) {
            return Err(Error::config("variance_levels", "sigma levels must be >= 0"));
        }
        for (field, s) in [
            ("vertical_scale", self.vertical_scale),
            ("horizontal_scale", self.horizontal_scale),
        ] {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::config(field, "must be finite and >= 0"));
            }
        }
        self.demand.validate()?;
        check_metrics(&self.metrics)
    }

    fn error_model(&self, level: f64) -> ErrorModel {
        ErrorModel {
            vertical_sigma: level * self.vertical_scale,
            horizontal_sigma: level * self.horizontal_scale,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Vertical,
    Horizontal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidityConfig {
    pub direction: Direction,
    /// Mean of the injected error along `direction`.
    pub mu_levels: Vec<f64>,
    /// Fixed standard deviation of the injected error along `direction`.
    pub sigma: f64,
    pub series_count: usize,
    pub forecasts_per_series: usize,
    pub demand: DemandProfile,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<MetricName>,
    #[serde(default)]
    pub params: SpecParams,
    pub seed: u64,
}

impl ValidityConfig {
    pub fn validate(&self) -> Result<()> {
        check_count("series_count", self.series_count)?;
        check_count("forecasts_per_series", self.forecasts_per_series)?;
        check_levels("mu_levels", &self.mu_levels, 3)?;
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::config("sigma", "must be finite and >= 0"));
        }
        self.demand.validate()?;
        check_metrics(&self.metrics)
    }

    fn error_model(&self, mu: f64) -> ErrorModel {
        match self.direction {
            Direction::Vertical => ErrorModel {
                vertical_mu: mu,
                vertical_sigma: self.sigma,
                ..Default::default()
            },
            Direction::Horizontal => ErrorModel {
                horizontal_mu: mu,
                horizontal_sigma: self.sigma,
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostValidityConfig {
    #[serde(flatten)]
    pub base: ReliabilityConfig,
    /// Weights of the ground-truth cost; defaults to 3:1 opportunity to stock.
    #[serde(default)]
    pub cost_params: SpecParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentReliabilityConfig {
    /// One profile per structurally distinct series.
    pub series: Vec<DemandProfile>,
    pub window: usize,
    pub segments_per_series: usize,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<MetricName>,
    #[serde(default)]
    pub params: SpecParams,
    pub seed: u64,
}

impl SegmentReliabilityConfig {
    pub fn validate(&self) -> Result<()> {
        check_count("series", self.series.len())?;
        check_count("segments_per_series", self.segments_per_series)?;
        for (i, p) in self.series.iter().enumerate() {
            p.validate()
                .map_err(|e| Error::config(format!("series[{i}]"), e.to_string()))?;
            if self.window > p.n {
                return Err(Error::WindowTooLarge {
                    window: self.window,
                    n: p.n,
                });
            }
        }
        if self.window == 0 {
            return Err(Error::config("window", "must be at least 1"));
        }
        check_metrics(&self.metrics)
    }

    pub fn generate_series(&self) -> Result<Vec<DemandSeries>> {
        self.series
            .iter()
            .enumerate()
            .map(|(i, p)| generate_demand(&p.with_seed(derive_seed(self.seed, &[STREAM_DEMAND, i as u64]))))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Reliability,
    SegmentReliability,
    Validity,
    CostValidity,
}

/// Aggregates of one metric at one experimental level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    /// The configured level (sigma or mu).
    pub level: f64,
    /// The quantity correlated against: sigma^2 for reliability, mu otherwise.
    pub x: f64,
    /// Mean metric value over all pairs at this level.
    pub mean: f64,
    /// Reliability: mean over series of the across-forecast variance.
    /// Other experiments: variance over all pairs at this level.
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum Calculability {
    Calculable,
    NotCalculable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentStatistics {
    pub levene: LeveneResult,
    /// Pooled variance of segment scores around their own series mean.
    pub within_variance: f64,
    /// Variance of all segment scores around the grand mean.
    pub between_variance: f64,
    pub variance_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    #[serde(flatten)]
    pub status: Calculability,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation: Option<CorrelationResult>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub levels: Vec<LevelSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segments: Option<SegmentStatistics>,
}

impl MetricSummary {
    fn not_calculable(reason: impl Into<String>) -> Self {
        Self {
            status: Calculability::NotCalculable(reason.into()),
            correlation: None,
            levels: Vec::new(),
            segments: None,
        }
    }

    pub fn is_calculable(&self) -> bool {
        self.status == Calculability::Calculable
    }

    pub fn r(&self) -> Option<f64> {
        self.correlation.map(|c| c.r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: serde_json::Value,
    pub seed: u64,
    pub version: String,
}

impl Provenance {
    fn of<C: Serialize>(config: &C, seed: u64) -> Result<Self> {
        Ok(Self {
            config: serde_json::to_value(config)?,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub metrics: BTreeMap<MetricName, MetricSummary>,
    /// Largest |oracle - SPEC| over all scored pairs (cost validity only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_max_abs_diff: Option<f64>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn metric(&self, name: MetricName) -> Option<&MetricSummary> {
        self.metrics.get(&name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Percentage metrics are treated as not calculable on any pair with a
/// zero denominator term, even where the scoring convention would skip it.
fn strict_zero_denominator(metric: MetricName, pair: &EvaluationPair) -> bool {
    match metric {
        MetricName::Mape | MetricName::Mdape | MetricName::Rmspe => pair.steps().any(|(_, y, _)| y == 0.0),
        MetricName::Smape => pair.steps().any(|(_, y, f)| y.abs() + f.abs() == 0.0),
        _ => false,
    }
}

fn score(metrics: &[MetricName], pair: &EvaluationPair, params: SpecParams) -> Vec<ExtendedValue> {
    metrics
        .iter()
        .map(|&m| {
            if strict_zero_denominator(m, pair) {
                ExtendedValue::Undefined(UndefinedReason::DivisionByZero)
            } else {
                m.evaluate(pair, params)
            }
        })
        .collect()
}

/// Scores indexed `[series][level][forecast][metric]`.
type ScoreGrid = Vec<Vec<Vec<Vec<ExtendedValue>>>>;

fn simulate_grid(
    seed: u64,
    series_count: usize,
    forecasts: usize,
    demand: &DemandProfile,
    models: &[ErrorModel],
    level_seeded: bool,
    each: impl Fn(&EvaluationPair) -> Vec<ExtendedValue> + Sync + Send,
) -> Result<ScoreGrid> {
    (0..series_count)
        .into_par_iter()
        .map(|s| {
            let actual = generate_demand(&demand.with_seed(derive_seed(seed, &[STREAM_DEMAND, s as u64])))?;
            models
                .iter()
                .enumerate()
                .map(|(l, model)| {
                    (0..forecasts)
                        .map(|k| {
                            let path = if level_seeded {
                                vec![STREAM_FORECAST, s as u64, l as u64, k as u64]
                            } else {
                                vec![STREAM_FORECAST, s as u64, k as u64]
                            };
                            let forecast = perturb_forecast(&actual, &model.with_seed(derive_seed(seed, &path)))?;
                            let pair = EvaluationPair::new(actual.clone(), forecast)?;
                            Ok(each(&pair))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Finite values of metric `m` at level `l`, per series; `Err` names the
/// first non-finite outcome.
fn level_values(grid: &ScoreGrid, l: usize, m: usize) -> std::result::Result<Vec<Vec<f64>>, String> {
    grid.iter()
        .map(|series| {
            series[l]
                .iter()
                .map(|scores| match scores[m] {
                    ExtendedValue::Finite(v) => Ok(v),
                    other => Err(format!("metric returned {other}")),
                })
                .collect()
        })
        .collect()
}

fn correlate(xs: &[f64], ys: &[f64]) -> std::result::Result<CorrelationResult, String> {
    pearson(xs, ys).map_err(|e| e.to_string())
}

/// Correlates injected error variance with the variance of each metric.
///
/// For every series and level, the metric's variance across forecasts is
/// computed; the per-level mean of these variances is then correlated with
/// `sigma^2`.
pub fn run_reliability(config: &ReliabilityConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let models: Vec<ErrorModel> = config.variance_levels.iter().map(|&l| config.error_model(l)).collect();
    let metrics = config.metrics.clone();
    let params = config.params;
    let grid = simulate_grid(
        config.seed,
        config.series_count,
        config.forecasts_per_series,
        &config.demand,
        &models,
        true,
        move |pair| score(&metrics, pair, params),
    )?;

    let mut out = BTreeMap::new();
    for (m, &name) in config.metrics.iter().enumerate() {
        let summary = (|| {
            let mut levels = Vec::new();
            for (l, &level) in config.variance_levels.iter().enumerate() {
                let per_series = level_values(&grid, l, m)?;
                let variances: Vec<f64> = per_series.iter().map(|v| variance(v)).collect();
                let all: Vec<f64> = per_series.concat();
                levels.push(LevelSummary {
                    level,
                    x: level * level,
                    mean: mean(&all),
                    variance: mean(&variances),
                });
            }
            let xs: Vec<f64> = levels.iter().map(|s| s.x).collect();
            let ys: Vec<f64> = levels.iter().map(|s| s.variance).collect();
            let correlation = correlate(&xs, &ys)?;
            Ok::<_, String>(MetricSummary {
                status: Calculability::Calculable,
                correlation: Some(correlation),
                levels,
                segments: None,
            })
        })()
        .unwrap_or_else(MetricSummary::not_calculable);
        out.insert(name, summary);
    }

    Ok(ExperimentReport {
        experiment: ExperimentKind::Reliability,
        metrics: out,
        oracle_max_abs_diff: None,
        provenance: Provenance::of(config, config.seed)?,
    })
}

/// Correlates the injected error mean with the per-level mean of each metric.
///
/// Forecast seeds do not depend on the level, so every level perturbs the
/// same spikes with the same standardized deviates (common random numbers).
pub fn run_validity(config: &ValidityConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let models: Vec<ErrorModel> = config.mu_levels.iter().map(|&mu| config.error_model(mu)).collect();
    let metrics = config.metrics.clone();
    let params = config.params;
    let grid = simulate_grid(
        config.seed,
        config.series_count,
        config.forecasts_per_series,
        &config.demand,
        &models,
        false,
        move |pair| score(&metrics, pair, params),
    )?;

    let mut out = BTreeMap::new();
    for (m, &name) in config.metrics.iter().enumerate() {
        let summary = (|| {
            let mut levels = Vec::new();
            for (l, &mu) in config.mu_levels.iter().enumerate() {
                let all = level_values(&grid, l, m)?.concat();
                levels.push(LevelSummary {
                    level: mu,
                    x: mu,
                    mean: mean(&all),
                    variance: variance(&all),
                });
            }
            let xs: Vec<f64> = levels.iter().map(|s| s.x).collect();
            let ys: Vec<f64> = levels.iter().map(|s| s.mean).collect();
            let correlation = correlate(&xs, &ys)?;
            Ok::<_, String>(MetricSummary {
                status: Calculability::Calculable,
                correlation: Some(correlation),
                levels,
                segments: None,
            })
        })()
        .unwrap_or_else(MetricSummary::not_calculable);
        out.insert(name, summary);
    }

    Ok(ExperimentReport {
        experiment: ExperimentKind::Validity,
        metrics: out,
        oracle_max_abs_diff: None,
        provenance: Provenance::of(config, config.seed)?,
    })
}

/// Correlates each metric with the ground-truth fictive-stock cost over all
/// simulated `(series, forecast)` pairs.
pub fn run_cost_validity(config: &CostValidityConfig) -> Result<ExperimentReport> {
    let base = &config.base;
    base.validate()?;
    let models: Vec<ErrorModel> = base.variance_levels.iter().map(|&l| base.error_model(l)).collect();
    let metrics = base.metrics.clone();
    let params = base.params;
    let cost_params = config.cost_params;
    // The last two slots hold the oracle cost and SPEC under the cost weights.
    let grid = simulate_grid(
        base.seed,
        base.series_count,
        base.forecasts_per_series,
        &base.demand,
        &models,
        true,
        move |pair| {
            let mut row = score(&metrics, pair, params);
            row.push(ExtendedValue::Finite(ground_truth_cost(pair).per_step(cost_params)));
            row.push(ExtendedValue::Finite(spec_fast(pair, cost_params)));
            row
        },
    )?;

    let rows: Vec<&Vec<ExtendedValue>> = grid.iter().flatten().flatten().collect();
    let m_count = base.metrics.len();
    let cost: Vec<f64> = rows.iter().map(|r| r[m_count].finite().unwrap_or(f64::NAN)).collect();
    let oracle_max_abs_diff = rows
        .iter()
        .map(|r| (r[m_count].finite().unwrap_or(f64::NAN) - r[m_count + 1].finite().unwrap_or(f64::NAN)).abs())
        .fold(0.0_f64, f64::max);

    let mut out = BTreeMap::new();
    for (m, &name) in base.metrics.iter().enumerate() {
        let summary = (|| {
            let values: Vec<f64> = rows
                .iter()
                .map(|r| match r[m] {
                    ExtendedValue::Finite(v) => Ok(v),
                    other => Err(format!("metric returned {other}")),
                })
                .collect::<std::result::Result<_, String>>()?;
            let mut levels = Vec::new();
            for (l, &level) in base.variance_levels.iter().enumerate() {
                let all = level_values(&grid, l, m)?.concat();
                levels.push(LevelSummary {
                    level,
                    x: level * level,
                    mean: mean(&all),
                    variance: variance(&all),
                });
            }
            Ok::<_, String>(MetricSummary {
                status: Calculability::Calculable,
                correlation: Some(correlate(&values, &cost)?),
                levels,
                segments: None,
            })
        })()
        .unwrap_or_else(MetricSummary::not_calculable);
        out.insert(name, summary);
    }

    Ok(ExperimentReport {
        experiment: ExperimentKind::CostValidity,
        metrics: out,
        oracle_max_abs_diff: Some(oracle_max_abs_diff),
        provenance: Provenance::of(config, base.seed)?,
    })
}

#[derive(Serialize)]
struct SegmentProvenance<'a> {
    series: &'a [DemandSeries],
    window: usize,
    segments_per_series: usize,
    metrics: &'a [MetricName],
    params: SpecParams,
    seed: u64,
}

/// Scores naive forecasts on random windows of each series and tests whether
/// the spread within series is smaller than the spread across series.
///
/// Levene's test compares two groups: the segment scores centered on their
/// own series mean (within), and all segment scores pooled (between).
pub fn run_segment_reliability(
    series_set: &[DemandSeries],
    window: usize,
    segments_per_series: usize,
    metrics: &[MetricName],
    params: SpecParams,
    seed: u64,
) -> Result<ExperimentReport> {
    check_count("series", series_set.len())?;
    check_count("segments_per_series", segments_per_series)?;
    check_metrics(metrics)?;

    let scores: Vec<Vec<Vec<ExtendedValue>>> = series_set
        .par_iter()
        .enumerate()
        .map(|(s, series)| {
            let segs = segment_extracts(
                series,
                window,
                segments_per_series,
                derive_seed(seed, &[STREAM_SEGMENTS, s as u64]),
            )?;
            segs.into_iter()
                .map(|seg| {
                    let forecast: ForecastSeries = naive_forecast(&seg);
                    let pair = EvaluationPair::new(seg, forecast)?;
                    Ok(score(metrics, &pair, params))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut out = BTreeMap::new();
    for (m, &name) in metrics.iter().enumerate() {
        let summary = (|| {
            let groups: Vec<Vec<f64>> = scores
                .iter()
                .map(|series| {
                    series
                        .iter()
                        .map(|row| match row[m] {
                            ExtendedValue::Finite(v) => Ok(v),
                            other => Err(format!("metric returned {other}")),
                        })
                        .collect()
                })
                .collect::<std::result::Result<_, String>>()?;
            let segments = segment_statistics(&groups).map_err(|e| e.to_string())?;
            let levels = groups
                .iter()
                .enumerate()
                .map(|(i, g)| LevelSummary {
                    level: (i + 1) as f64,
                    x: (i + 1) as f64,
                    mean: mean(g),
                    variance: variance(g),
                })
                .collect();
            Ok::<_, String>(MetricSummary {
                status: Calculability::Calculable,
                correlation: None,
                levels,
                segments: Some(segments),
            })
        })()
        .unwrap_or_else(MetricSummary::not_calculable);
        out.insert(name, summary);
    }

    let provenance = SegmentProvenance {
        series: series_set,
        window,
        segments_per_series,
        metrics,
        params,
        seed,
    };
    Ok(ExperimentReport {
        experiment: ExperimentKind::SegmentReliability,
        metrics: out,
        oracle_max_abs_diff: None,
        provenance: Provenance::of(&provenance, seed)?,
    })
}

/// Within-versus-between comparison of grouped scores.
pub fn segment_statistics(groups: &[Vec<f64>]) -> Result<SegmentStatistics> {
    let residuals: Vec<f64> = groups
        .iter()
        .flat_map(|g| {
            let m = mean(g);
            g.iter().map(move |v| v - m)
        })
        .collect();
    let pooled: Vec<f64> = groups.concat();
    let total = pooled.len();
    let within_variance =
        stats::sum(&residuals.iter().map(|r| r * r).collect::<Vec<_>>()) / (total - groups.len()) as f64;
    let between_variance = variance(&pooled);
    let levene = levene(&[residuals, pooled])?;
    let variance_ratio = if between_variance > 0.0 {
        within_variance / between_variance
    } else {
        1.0
    };
    Ok(SegmentStatistics {
        levene,
        within_variance,
        between_variance,
        variance_ratio,
    })
}

/// Generates the configured series and runs [`run_segment_reliability`].
pub fn run_segment_reliability_config(config: &SegmentReliabilityConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let series = config.generate_series()?;
    let mut report = run_segment_reliability(
        &series,
        config.window,
        config.segments_per_series,
        &config.metrics,
        config.params,
        config.seed,
    )?;
    report.provenance = Provenance::of(config, config.seed)?;
    Ok(report)
}
