//! Prerequisites under which the MBCV curve is expected to be monotone.
//!
//! Both cases require balanced classes at the Otsu threshold
//! (`|w1 - w2| <= balance_tol`). Case I (bright text on dark background)
//! additionally needs the threshold near the dark end and a small gap
//! between class means; Case II (dark text on bright background) needs the
//! threshold near the bright end and a large gap. Threshold and gap are
//! normalized by 255.
//!
//! None of the bounds have canonical values. The defaults below are
//! calibrated so that balanced two-mode histograms pass and near-unimodal
//! ones fail; every one of them is configurable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::otsu::OtsuResult;
use crate::MAX_LEVEL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionConfig {
    /// Largest accepted `|w1 - w2|`.
    pub balance_tol: f64,
    /// Case I upper bound on the normalized mean gap.
    pub epsilon: f64,
    /// Case II lower bound on the normalized mean gap.
    pub delta: f64,
    /// Case I: normalized threshold must be at most this.
    pub t_low: f64,
    /// Case II: normalized threshold must be at least this.
    pub t_high: f64,
}

impl ConditionConfig {
    pub const DEFAULT: ConditionConfig = ConditionConfig {
        balance_tol: 0.3,
        epsilon: 0.2,
        delta: 0.5,
        t_low: 0.35,
        t_high: 0.65,
    };

    /// Checks `0 < epsilon < delta < 1`, `0 < t_low < t_high < 1` and
    /// `0 < balance_tol < 1`.
    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.balance_tol) {
            return Err(Error::domain(format!("balance_tol {} not in (0, 1)", self.balance_tol)));
        }
        if !(open_unit(self.epsilon) && open_unit(self.delta) && self.epsilon < self.delta) {
            return Err(Error::domain(format!(
                "need 0 < epsilon < delta < 1, got epsilon={} delta={}",
                self.epsilon, self.delta
            )));
        }
        if !(open_unit(self.t_low) && open_unit(self.t_high) && self.t_low < self.t_high) {
            return Err(Error::domain(format!(
                "need 0 < t_low < t_high < 1, got t_low={} t_high={}",
                self.t_low, self.t_high
            )));
        }
        Ok(())
    }

    /// Names of the fields still at their default value.
    pub fn defaulted_fields(&self) -> Vec<&'static str> {
        let d = ConditionConfig::DEFAULT;
        [
            ("balance_tol", self.balance_tol == d.balance_tol),
            ("epsilon", self.epsilon == d.epsilon),
            ("delta", self.delta == d.delta),
            ("t_low", self.t_low == d.t_low),
            ("t_high", self.t_high == d.t_high),
        ]
        .into_iter()
        .filter_map(|(name, same)| same.then_some(name))
        .collect()
    }
}

impl Default for ConditionConfig {
    fn default() -> Self {
        ConditionConfig::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub w1: f64,
    pub w2: f64,
    pub t_star_norm: f64,
    pub mean_gap_norm: f64,
    pub balanced: bool,
    pub case_i: bool,
    pub case_ii: bool,
}

pub fn check_conditions(result: &OtsuResult, config: &ConditionConfig) -> ConditionReport {
    let scale = f64::from(MAX_LEVEL);
    let w1 = result.stats.w1;
    let w2 = result.stats.w2;
    let t_star_norm = f64::from(result.t_star) / scale;
    let mean_gap_norm = (result.stats.mu1 - result.stats.mu2).abs() / scale;
    evaluate(w1, w2, t_star_norm, mean_gap_norm, config)
}

/// Applies the case rules to already-normalized statistics.
pub fn evaluate(w1: f64, w2: f64, t_star_norm: f64, mean_gap_norm: f64, config: &ConditionConfig) -> ConditionReport {
    let balanced = (w1 - w2).abs() <= config.balance_tol;
    let case_i = balanced && t_star_norm <= config.t_low && mean_gap_norm < config.epsilon;
    let case_ii = balanced && t_star_norm >= config.t_high && mean_gap_norm > config.delta;
    ConditionReport {
        w1,
        w2,
        t_star_norm,
        mean_gap_norm,
        balanced,
        case_i,
        case_ii,
    }
}
