use serde::{Deserialize, Serialize};

use super::slide::SlideRecord;
use super::SimError;

/// Which way the arm should move next, judged from recent flex readings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackDirection {
    Descend,
    Hold,
    Ascend,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlexFeedbackConfig {
    /// Reading with the finger straight.
    pub offset: f64,
    /// Changes per sample below this count as steady; readings within this
    /// of the offset count as no contact.
    pub dead_band: f64,
    /// Rise per sample above which the finger is being pressed too hard.
    pub ascend_rate: f64,
}

impl Default for FlexFeedbackConfig {
    fn default() -> Self {
        Self { offset: 0.0, dead_band: 1e-3, ascend_rate: 0.5 }
    }
}

/// Decide from the tail of a trace. Flat at the offset: no contact yet, go
/// down. Rising fast: pressing too hard, go up. Steady or slowly rising under
/// contact: hold. Falling: contact is being lost, go down.
pub fn flex_feedback_direction(
    suffix: &[SlideRecord],
    cfg: &FlexFeedbackConfig,
) -> Result<FeedbackDirection, SimError> {
    let (Some(first), Some(last)) = (suffix.first(), suffix.last()) else {
        return Err(SimError::InsufficientData);
    };
    if suffix.len() < 2 {
        return Err(SimError::InsufficientData);
    }
    let rate = (last.flex - first.flex) / (suffix.len() - 1) as f64;
    let at_rest = (last.flex - cfg.offset).abs() <= cfg.dead_band;

    Ok(if at_rest && rate.abs() <= cfg.dead_band {
        FeedbackDirection::Descend
    } else if rate > cfg.ascend_rate {
        FeedbackDirection::Ascend
    } else if rate < -cfg.dead_band {
        FeedbackDirection::Descend
    } else {
        FeedbackDirection::Hold
    })
}
