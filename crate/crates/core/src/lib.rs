//! Workload forecasting with multi-seasonal Holt-Winters exponential smoothing.
//!
//! The model keeps a smoothed level, a trend factor, and one multiplicative
//! index ring per detected seasonal cycle, so a single state can capture
//! intraday and intraweek patterns at the same time. Cycles are picked up
//! while data streams in: candidate lengths are tested with an
//! autocorrelation check once three full cycles of history exist, and each
//! accepted cycle extends the model with a fresh index ring. Smoothing
//! constants are tuned by a bees-algorithm search that minimizes replay
//! mean squared error.
//!
//! The crate ships:
//!
//! - [`model`] — the forecaster itself (state, update, forecast, replay MSE)
//! - [`seasonality`] — autocorrelation test and the detection schedule
//! - [`abc`] — the bee-colony optimizer for smoothing constants
//! - [`baselines`] — double and triple exponential smoothing comparators
//! - [`metrics`] — MAPE, PRED(25), RMSE, MSE over forecast/outcome pairs
//! - [`ingest`] — Common Log Format parsing into per-minute demand series
//! - [`pipeline`] — the end-to-end streaming replay driver behind the
//!   `forecast` binary

pub mod abc;
pub mod baselines;
pub mod chart;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod seasonality;

pub use error::{Error, Result};
pub use model::{ForecastRecord, ModelId, ModelState, SeasonalPattern, SmoothingParams};

/// Smallest value the level, the seasonal indices, observations, and metric
/// denominators are allowed to take. The model is multiplicative, so zeros
/// anywhere in a divisor would poison the state; HTTP traces do contain
/// zero-request minutes, hence flooring instead of rejection.
pub const EPS_FLOOR: f64 = 1e-6;
