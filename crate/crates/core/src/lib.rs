//! Forecast error evaluation for intermittent and lumpy demand.
//!
//! The centerpiece is SPEC ([`spec`]), a cost-oriented error measure that
//! charges opportunity cost for demand a forecast fails to cover in time and
//! stock-keeping cost for forecast units that arrive before they are needed.
//! Classic point-wise metrics ([`classic`]), a demand simulator
//! ([`simulate`]), statistics ([`stats`]), experiment runners
//! ([`experiments`]), and file formats ([`io`]) round it out.

pub mod classic;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod io;
pub mod series;
pub mod simulate;
pub mod spec;
pub mod stats;

pub use classic::{compute, compute_all, ExtendedValue, MetricName, MetricReport};
pub use error::{Error, Result};
pub use series::{validate_series, DemandSeries, EvaluationPair, ForecastSeries, PrefixSums};
pub use spec::{spec_alpha_sweep, spec_decompose, spec_fast, spec_literal, CostBreakdown, SpecParams};
