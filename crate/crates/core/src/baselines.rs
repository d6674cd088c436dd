//! Double and triple exponential smoothing comparators.
//!
//! Both are thin shells over the multi-seasonal model: double is the
//! pattern-free degenerate form, triple is the single-pattern form with a
//! batch initialization over the first three cycles. The math is never
//! forked, so the baselines track the main model to machine precision.

use crate::error::{Error, Result};
use crate::model::{
    align_initial_indices, init_batch, init_seasonal_indices, ForecastRecord, ModelId, ModelState,
    SmoothingParams,
};

/// Baseline selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Double,
    /// Triple exponential smoothing needs its single season length.
    Triple { cycle_len: usize },
}

/// Double exponential smoothing over the whole series: online init from
/// the first two observations, then one smoothing step and one k-step
/// forecast per period. Forecast records start at time 2.
pub fn run_double(
    x: &[f64],
    alpha: f64,
    beta: f64,
    horizon: usize,
) -> Result<Vec<ForecastRecord>> {
    if x.len() < 2 {
        return Err(Error::InsufficientHistory {
            needed: 2,
            got: x.len(),
        });
    }
    let mut state = ModelState::init_online(x[0], x[1]);
    state.set_params(SmoothingParams::new(alpha, beta)?)?;

    let mut records = Vec::with_capacity(x.len() - 1);
    for &value in &x[1..] {
        state.step(value);
        records.push(ForecastRecord {
            t: state.time(),
            observed: value,
            horizon,
            forecast: state.forecast(horizon),
            model_id: ModelId::Double,
        });
    }
    Ok(records)
}

/// Triple exponential smoothing (single seasonal cycle) over the whole
/// series: level, trend, and the index ring are initialized from the first
/// three full cycles, then the model steps through the remainder. Forecast
/// records start at time `3 * cycle_len + 1`.
pub fn run_triple(
    x: &[f64],
    cycle_len: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
    horizon: usize,
) -> Result<Vec<ForecastRecord>> {
    let warm = 3 * cycle_len;
    if x.len() < warm {
        return Err(Error::InsufficientHistory {
            needed: warm,
            got: x.len(),
        });
    }
    let (level, trend) = init_batch(&x[..warm], cycle_len)?;
    let ratios = init_seasonal_indices(&x[..warm], cycle_len)?;

    let mut state = ModelState::from_parts(level, trend, warm);
    state.add_pattern(cycle_len, align_initial_indices(&ratios), gamma)?;
    state.set_params(SmoothingParams::with_gammas(alpha, beta, vec![gamma])?)?;

    let mut records = Vec::with_capacity(x.len() - warm);
    for &value in &x[warm..] {
        state.step(value);
        records.push(ForecastRecord {
            t: state.time(),
            observed: value,
            horizon,
            forecast: state.forecast(horizon),
            model_id: ModelId::Triple,
        });
    }
    Ok(records)
}

/// Mean squared k-step forecast error of the triple baseline over `x`,
/// scored on every record with an observed outcome. This is the fitness
/// used when tuning the triple baseline's constants.
pub fn triple_replay_mse(
    x: &[f64],
    cycle_len: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
    horizon: usize,
) -> Result<f64> {
    let records = run_triple(x, cycle_len, alpha, beta, gamma, horizon)?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for r in &records {
        if r.t + horizon <= x.len() {
            let err = r.forecast - x[r.t + horizon - 1];
            sum += err * err;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientHistory {
            needed: 3 * cycle_len + horizon + 1,
            got: x.len(),
        });
    }
    Ok(sum / count as f64)
}
