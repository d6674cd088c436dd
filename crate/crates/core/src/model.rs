//! Multi-seasonal Holt-Winters state: update, forecast, initialization.
//!
//! The state tracks a smoothed level `S_t`, a trend factor `B_t`, and one
//! multiplicative index ring per seasonal pattern. With `n` active patterns
//! of cycle lengths `L_1..L_n`, one update step computes, in order:
//!
//! ```text
//! S_t = a * x_t / M(0) + (1 - a) * (S_{t-1} + B_{t-1})
//! B_t = b * (S_t - S_{t-1}) + (1 - b) * B_{t-1}
//! I_{i,t} = g_i * x_t * I_{i,t-L_i} / (S_t * M(0)) + (1 - g_i) * I_{i,t-L_i}
//! ```
//!
//! where `M(k)` is the product of every pattern's index at forecast offset
//! `k`, and the k-step-ahead forecast is `(S_t + k * B_t) * M(k)`, clamped
//! at zero. With no patterns the recursion degenerates to plain double
//! exponential smoothing.
//!
//! Time is counted from 1: the state's `t` is the number of observations
//! incorporated so far, and index rings are keyed by `t mod L`. Level,
//! indices, and incoming observations are floored at
//! [`EPS_FLOOR`](crate::EPS_FLOOR) so zero-demand periods cannot break the
//! multiplicative form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::EPS_FLOOR;

/// The optimizable smoothing-constant vector: level, trend, and one
/// seasonal constant per active pattern. Every component lies in (0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingParams {
    pub alpha: f64,
    pub beta: f64,
    pub gammas: Vec<f64>,
}

impl SmoothingParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_gammas(alpha, beta, Vec::new())
    }

    pub fn with_gammas(alpha: f64, beta: f64, gammas: Vec<f64>) -> Result<Self> {
        let params = Self { alpha, beta, gammas };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v <= 1.0 && v.is_finite();
        if !ok(self.alpha) || !ok(self.beta) || !self.gammas.iter().all(|&g| ok(g)) {
            return Err(Error::InvalidConfig(
                "smoothing constants must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }

    /// Builds the parameter vector from a flat optimizer position
    /// `[alpha, beta, gamma_1, .., gamma_n]`.
    pub fn from_position(position: &[f64]) -> Result<Self> {
        if position.len() < 2 {
            return Err(Error::InvalidConfig(
                "parameter vector needs at least alpha and beta".into(),
            ));
        }
        Self::with_gammas(position[0], position[1], position[2..].to_vec())
    }

    /// Dimension of the flat parameter vector (2 + number of patterns).
    pub fn dim(&self) -> usize {
        2 + self.gammas.len()
    }
}

impl Default for SmoothingParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.5,
            gammas: Vec::new(),
        }
    }
}

/// One detected seasonal cycle: its length and the ring of multiplicative
/// indices, keyed by `time mod cycle_len`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalPattern {
    cycle_len: usize,
    indices: Vec<f64>,
    gamma_slot: usize,
}

impl SeasonalPattern {
    pub fn cycle_len(&self) -> usize {
        self.cycle_len
    }

    pub fn indices(&self) -> &[f64] {
        &self.indices
    }

    pub fn gamma_slot(&self) -> usize {
        self.gamma_slot
    }
}

/// Which forecaster produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelId {
    Proposed,
    Double,
    Triple,
}

impl ModelId {
    pub fn label(self) -> &'static str {
        match self {
            ModelId::Proposed => "proposed",
            ModelId::Double => "double",
            ModelId::Triple => "triple",
        }
    }
}

impl std::fmt::Display for ModelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One replay row: the observation at time `t` together with the k-step
/// forecast issued at `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRecord {
    pub t: usize,
    pub observed: f64,
    pub horizon: usize,
    pub forecast: f64,
    pub model_id: ModelId,
}

/// Live multi-seasonal Holt-Winters state.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelState {
    level: f64,
    trend: f64,
    patterns: Vec<SeasonalPattern>,
    t: usize,
    params: SmoothingParams,
    eps_floor: f64,
}

impl ModelState {
    /// Online initialization from the first two observations: the level is
    /// the first value (floored), the trend their difference. Degenerate
    /// inputs are floored, never rejected.
    pub fn init_online(x1: f64, x2: f64) -> Self {
        Self {
            level: x1.max(EPS_FLOOR),
            trend: x2 - x1,
            patterns: Vec::new(),
            t: 1,
            params: SmoothingParams::default(),
            eps_floor: EPS_FLOOR,
        }
    }

    /// Resumes from batch-computed components, e.g. after initializing the
    /// level and trend over full cycles of history.
    pub fn from_parts(level: f64, trend: f64, t: usize) -> Self {
        Self {
            level: level.max(EPS_FLOOR),
            trend,
            patterns: Vec::new(),
            t,
            params: SmoothingParams::default(),
            eps_floor: EPS_FLOOR,
        }
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn trend(&self) -> f64 {
        self.trend
    }

    /// Number of observations incorporated so far (1-based time index).
    pub fn time(&self) -> usize {
        self.t
    }

    pub fn params(&self) -> &SmoothingParams {
        &self.params
    }

    pub fn patterns(&self) -> &[SeasonalPattern] {
        &self.patterns
    }

    pub fn num_patterns(&self) -> usize {
        self.patterns.len()
    }

    pub fn cycle_lens(&self) -> Vec<usize> {
        self.patterns.iter().map(|p| p.cycle_len).collect()
    }

    /// Swaps in freshly tuned smoothing constants. The gamma count must
    /// match the number of active patterns.
    pub fn set_params(&mut self, params: SmoothingParams) -> Result<()> {
        params.validate()?;
        if params.gammas.len() != self.patterns.len() {
            return Err(Error::InvalidConfig(format!(
                "{} gammas supplied for {} active patterns",
                params.gammas.len(),
                self.patterns.len()
            )));
        }
        self.params = params;
        Ok(())
    }

    /// The combined seasonal multiplier `M(k)`: the product of every
    /// pattern's ring read at offset `(t + k) mod cycle_len`. Returns 1
    /// when no patterns are active.
    pub fn seasonal_product(&self, k: usize) -> f64 {
        self.seasonal_factor_at(self.t + k)
    }

    /// Product of the current ring values at the phase of an absolute
    /// period counter. Useful for deseasonalizing stored history.
    pub fn seasonal_factor_at(&self, time: usize) -> f64 {
        self.patterns
            .iter()
            .map(|p| p.indices[time % p.cycle_len])
            .product()
    }

    /// Incorporates the next observation: level, then trend, then each
    /// pattern's index, all floored. With no patterns this is exactly
    /// double exponential smoothing.
    pub fn step(&mut self, x_t: f64) {
        let x = x_t.max(self.eps_floor);
        // the incoming observation belongs to period t+1
        self.t += 1;
        let m0 = self.seasonal_product(0);
        let prev_level = self.level;

        let alpha = self.params.alpha;
        let beta = self.params.beta;
        let level = alpha * x / m0 + (1.0 - alpha) * (prev_level + self.trend);
        self.level = level.max(self.eps_floor);
        self.trend = beta * (self.level - prev_level) + (1.0 - beta) * self.trend;

        // index updates use the new level and the pre-update product
        let slot_base = self.t;
        let new_level = self.level;
        let gammas = &self.params.gammas;
        for pattern in &mut self.patterns {
            let slot = slot_base % pattern.cycle_len;
            let old = pattern.indices[slot];
            let gamma = gammas[pattern.gamma_slot];
            let updated = gamma * x * old / (new_level * m0) + (1.0 - gamma) * old;
            pattern.indices[slot] = updated.max(self.eps_floor);
        }
    }

    /// k-step-ahead forecast `(S_t + k B_t) * M(k)`, clamped at zero.
    ///
    /// Panics if `k == 0`; the model always forecasts a positive lead time.
    pub fn forecast(&self, k: usize) -> f64 {
        self.forecast_raw(k).max(0.0)
    }

    /// The unclamped forecast, which may be negative when the trend is
    /// strongly negative. Exposed for diagnostics.
    pub fn forecast_raw(&self, k: usize) -> f64 {
        assert!(k >= 1, "forecast horizon must be at least 1");
        (self.level + k as f64 * self.trend) * self.seasonal_product(k)
    }

    /// Registers a new seasonal cycle. `indices` becomes the pattern's ring
    /// (keyed by `time mod cycle_len`); level and trend are left untouched
    /// and the model adapts forward from here.
    pub fn add_pattern(&mut self, cycle_len: usize, indices: Vec<f64>, gamma: f64) -> Result<()> {
        assert_eq!(
            indices.len(),
            cycle_len,
            "index ring must have exactly cycle_len entries"
        );
        if self.patterns.iter().any(|p| p.cycle_len == cycle_len) {
            return Err(Error::DuplicateCycle(cycle_len));
        }
        if !(gamma > 0.0 && gamma <= 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidConfig(
                "seasonal smoothing constant must lie in (0, 1]".into(),
            ));
        }
        self.params.gammas.push(gamma);
        self.patterns.push(SeasonalPattern {
            cycle_len,
            indices: indices
                .into_iter()
                .map(|v| v.max(self.eps_floor))
                .collect(),
            gamma_slot: self.params.gammas.len() - 1,
        });
        Ok(())
    }
}

/// Batch initialization of level and trend from the first two full cycles:
/// the level is the mean of the first `2 * cycle_len` observations, the
/// trend is `1/cycle_len` of the mean difference between corresponding
/// periods of the first and second cycle.
pub fn init_batch(x: &[f64], cycle_len: usize) -> Result<(f64, f64)> {
    let needed = 2 * cycle_len;
    if x.len() < needed {
        return Err(Error::InsufficientHistory {
            needed,
            got: x.len(),
        });
    }
    let level = x[..needed].iter().sum::<f64>() / needed as f64;
    let diff_mean = (0..cycle_len)
        .map(|j| x[cycle_len + j] - x[j])
        .sum::<f64>()
        / cycle_len as f64;
    Ok((level, diff_mean / cycle_len as f64))
}

/// Initial seasonal indices for a cycle of length `L`, from at least three
/// completed cycles of history.
///
/// Each index is the mean of the two ratios of observation to centered
/// moving average taken at corresponding periods of the first two full
/// cycles; the window for position `j` spans `[j - L/2, j + L/2 - 1]`.
/// Exactly `L` indices come back, keyed by series position modulo `L`, and
/// renormalized to mean 1.
pub fn init_seasonal_indices(x: &[f64], cycle_len: usize) -> Result<Vec<f64>> {
    if cycle_len < 2 {
        return Err(Error::InvalidConfig(
            "seasonal cycle length must be at least 2".into(),
        ));
    }
    let needed = 3 * cycle_len;
    if x.len() < needed {
        return Err(Error::InsufficientHistory {
            needed,
            got: x.len(),
        });
    }

    let half = cycle_len / 2;
    let moving_average = |j: usize| -> Result<f64> {
        let window = &x[j - half..j - half + cycle_len];
        let avg = window.iter().sum::<f64>() / cycle_len as f64;
        if avg <= 0.0 {
            return Err(Error::DegenerateWindow { cycle_len });
        }
        Ok(avg)
    };

    let mut indices = vec![0.0; cycle_len];
    for offset in 0..cycle_len {
        let first = half + offset;
        let second = first + cycle_len;
        let ratio = |j: usize| -> Result<f64> { Ok(x[j] / moving_average(j)?) };
        indices[first % cycle_len] = (ratio(first)? + ratio(second)?) / 2.0;
    }

    let mean = indices.iter().sum::<f64>() / cycle_len as f64;
    if mean <= 0.0 {
        return Err(Error::DegenerateWindow { cycle_len });
    }
    for v in &mut indices {
        *v = (*v / mean).max(EPS_FLOOR);
    }
    Ok(indices)
}

/// Converts the output of [`init_seasonal_indices`] (keyed by series
/// position mod L) into a ring for [`ModelState::add_pattern`] (keyed by
/// the 1-based period counter mod L). Position p holds period p + 1, so
/// the ring is the ratio list rotated one slot forward.
pub fn align_initial_indices(indices: &[f64]) -> Vec<f64> {
    let len = indices.len();
    let mut ring = vec![0.0; len];
    for (pos, &v) in indices.iter().enumerate() {
        ring[(pos + 1) % len] = v;
    }
    ring
}

/// Replays the model over `x` with fixed parameters and pattern rings, and
/// returns the mean squared k-step forecast error. Scoring starts at the
/// largest active cycle length (or at time 2 with no patterns) and runs
/// through the last forecast with an observed outcome.
///
/// This is the fitness function the bee-colony optimizer minimizes; it is a
/// pure function of its inputs.
pub fn replay_mse(
    x: &[f64],
    patterns: &[(usize, Vec<f64>)],
    params: &SmoothingParams,
    horizon: usize,
) -> Result<f64> {
    assert!(horizon >= 1, "forecast horizon must be at least 1");
    if x.len() < 2 {
        return Err(Error::InsufficientHistory {
            needed: 2,
            got: x.len(),
        });
    }

    let mut state = ModelState::init_online(x[0], x[1]);
    for &(cycle_len, ref indices) in patterns {
        state.add_pattern(cycle_len, indices.clone(), 0.5)?;
    }
    state.set_params(params.clone())?;

    let score_from = patterns.iter().map(|&(l, _)| l).max().unwrap_or(2).max(2);

    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 1..x.len() {
        state.step(x[i]);
        let t = state.time();
        if t >= score_from && t + horizon <= x.len() {
            let err = state.forecast(horizon) - x[t + horizon - 1];
            sum += err * err;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientHistory {
            needed: score_from + horizon,
            got: x.len(),
        });
    }
    Ok(sum / count as f64)
}
