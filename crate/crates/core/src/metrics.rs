//! Forecast accuracy metrics over aligned forecast/outcome pairs.
//!
//! A pair `(forecast, observed)` compares the k-step-ahead prediction issued
//! at time i with the value actually observed at time i + k. Relative-error
//! metrics floor the denominator at [`EPS_FLOOR`](crate::EPS_FLOOR) so that
//! zero-demand periods stay finite; the `*_skip_zero` variants drop those
//! pairs instead.

use crate::error::{Error, Result};
use crate::EPS_FLOOR;

/// Aligned (forecast, observed) pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalPairs {
    pairs: Vec<(f64, f64)>,
}

impl EvalPairs {
    pub fn new() -> Self {
        Self::default()
    }

    /// `pair.0` is the forecast, `pair.1` the realized observation.
    pub fn push(&mut self, forecast: f64, observed: f64) {
        self.pairs.push((forecast, observed));
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(f64, f64)> {
        self.pairs.iter()
    }
}

impl From<Vec<(f64, f64)>> for EvalPairs {
    fn from(pairs: Vec<(f64, f64)>) -> Self {
        Self { pairs }
    }
}

fn relative_error(forecast: f64, observed: f64) -> f64 {
    (forecast - observed).abs() / observed.max(EPS_FLOOR)
}

/// Mean absolute percentage error, expressed as a fraction (0.1 = 10%).
pub fn mape(pairs: &EvalPairs) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum: f64 = pairs.iter().map(|&(f, o)| relative_error(f, o)).sum();
    Ok(sum / pairs.len() as f64)
}

/// MAPE with zero-observed pairs dropped instead of floored.
pub fn mape_skip_zero(pairs: &EvalPairs) -> Result<f64> {
    let kept: Vec<f64> = pairs
        .iter()
        .filter(|&&(_, o)| o >= EPS_FLOOR)
        .map(|&(f, o)| relative_error(f, o))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(kept.iter().sum::<f64>() / kept.len() as f64)
}

/// Fraction of pairs whose relative error is strictly below `threshold`.
///
/// The canonical threshold is 0.25, giving PRED(25). The inequality is
/// strict: an error of exactly 25% does not count.
pub fn pred25(pairs: &EvalPairs, threshold: f64) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let hits = pairs
        .iter()
        .filter(|&&(f, o)| relative_error(f, o) < threshold)
        .count();
    Ok(hits as f64 / pairs.len() as f64)
}

/// PRED with zero-observed pairs dropped instead of floored.
pub fn pred25_skip_zero(pairs: &EvalPairs, threshold: f64) -> Result<f64> {
    let kept: Vec<f64> = pairs
        .iter()
        .filter(|&&(_, o)| o >= EPS_FLOOR)
        .map(|&(f, o)| relative_error(f, o))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyInput);
    }
    let hits = kept.iter().filter(|&&e| e < threshold).count();
    Ok(hits as f64 / kept.len() as f64)
}

/// Mean squared error.
pub fn mse(pairs: &EvalPairs) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum: f64 = pairs.iter().map(|&(f, o)| (f - o) * (f - o)).sum();
    Ok(sum / pairs.len() as f64)
}

/// Root mean squared error; `rmse(p) == mse(p).sqrt()` exactly.
pub fn rmse(pairs: &EvalPairs) -> Result<f64> {
    mse(pairs).map(f64::sqrt)
}
