//! Sliding-mode closing against a flat surface.
//!
//! While the modelled fingertip would pass below the surface the compliant
//! finger bends instead: the tip stays on the surface and the overshoot is
//! absorbed as bend. Once the model tip no longer reaches the surface the
//! finger is straight again and the grasp is closed. A flex sensor between
//! finger and hinge chain reads an affine function of the largest bend seen
//! so far.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::geometry::{forward_kinematics, sample_trajectory, GripperGeometry, DEFAULT_STEP, SLIDE_THETA_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SlideConfig {
    /// Surface coordinate along the gripper's y axis, mm.
    pub surface_y: f64,
    pub theta_from: f64,
    pub theta_to: f64,
    pub step: f64,
    pub flex_gain: f64,
    pub flex_offset: f64,
}

impl Default for SlideConfig {
    fn default() -> Self {
        Self {
            surface_y: 0.0,
            theta_from: -0.8,
            theta_to: SLIDE_THETA_LIMIT,
            step: DEFAULT_STEP,
            flex_gain: 1.0,
            flex_offset: 0.0,
        }
    }
}

impl SlideConfig {
    /// Surface placed where the model fingertip ends up at `theta_to`, so the
    /// fingers slide the whole way and straighten exactly at the end.
    pub fn closing_on_surface(geom: &GripperGeometry) -> Result<Self, SimError> {
        let theta_to = SLIDE_THETA_LIMIT;
        Ok(Self {
            surface_y: forward_kinematics(geom, theta_to)?.y_tip,
            theta_from: geom.theta_open,
            theta_to,
            ..Self::default()
        })
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let finite = [self.surface_y, self.theta_from, self.theta_to, self.step, self.flex_gain, self.flex_offset];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(SimError::InvalidConfig("slide config values must be finite".into()));
        }
        if self.theta_to > self.theta_from {
            return Err(SimError::InvalidConfig(format!(
                "theta_to ({}) must not exceed theta_from ({})",
                self.theta_to, self.theta_from
            )));
        }
        if !(self.step > 0.0) {
            return Err(SimError::InvalidConfig("step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Approach,
    Sliding,
    Closed,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Approach => "approach",
            Phase::Sliding => "sliding",
            Phase::Closed => "closed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlideRecord {
    pub theta: f64,
    pub y_free: f64,
    pub y_sim: f64,
    pub bend: f64,
    pub flex: f64,
    pub phase: Phase,
}

pub const SLIDE_CSV_HEADER: &str = "theta,y_free,y_sim,bend,flex,phase";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlideSummary {
    pub contact_onset_theta: Option<f64>,
    pub closure_theta: f64,
    pub peak_bend: f64,
    pub no_contact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlideTrace {
    pub records: Vec<SlideRecord>,
    pub warnings: Vec<String>,
}

impl SlideTrace {
    pub fn in_phase(&self, phase: Phase) -> impl Iterator<Item = &SlideRecord> {
        self.records.iter().filter(move |r| r.phase == phase)
    }

    pub fn had_contact(&self) -> bool {
        self.records.iter().any(|r| r.bend > 0.0)
    }

    /// `NoContact` when the fingers never touched the surface.
    pub fn require_contact(&self) -> Result<(), SimError> {
        if self.had_contact() {
            Ok(())
        } else {
            Err(SimError::NoContact)
        }
    }

    pub fn summary(&self) -> SlideSummary {
        SlideSummary {
            contact_onset_theta: self.records.iter().find(|r| r.bend > 0.0).map(|r| r.theta),
            closure_theta: self
                .records
                .iter()
                .find(|r| r.phase == Phase::Closed)
                .or(self.records.last())
                .map_or(f64::NAN, |r| r.theta),
            peak_bend: self.records.iter().map(|r| r.bend).fold(0.0, f64::max),
            no_contact: !self.had_contact(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SLIDE_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{},{},{}", r.theta, r.y_free, r.y_sim, r.bend, r.flex, r.phase.as_str());
        }
        out
    }
}

pub fn simulate_slide(geom: &GripperGeometry, cfg: &SlideConfig) -> Result<SlideTrace, SimError> {
    cfg.validate()?;
    let thetas = if cfg.theta_from == cfg.theta_to {
        vec![cfg.theta_from]
    } else {
        sample_trajectory(cfg.theta_from, cfg.theta_to, cfg.step)?.samples
    };

    let last = thetas.len() - 1;
    let mut records = Vec::with_capacity(thetas.len());
    let mut touched = false;
    let mut closed = false;
    let mut peak = 0.0f64;
    let mut held_flex = None;
    for (i, &theta) in thetas.iter().enumerate() {
        let y_free = forward_kinematics(geom, theta)?.y_tip;
        let bend = (y_free - cfg.surface_y).max(0.0);
        let y_sim = y_free.min(cfg.surface_y);

        let phase = if closed || i == last {
            Phase::Closed
        } else if bend > 0.0 {
            touched = true;
            Phase::Sliding
        } else if touched {
            Phase::Closed
        } else {
            Phase::Approach
        };

        let flex = match held_flex {
            Some(f) => f,
            None => {
                peak = peak.max(bend);
                cfg.flex_offset + cfg.flex_gain * peak
            }
        };
        if phase == Phase::Closed {
            closed = true;
            held_flex.get_or_insert(flex);
        }
        records.push(SlideRecord { theta, y_free, y_sim, bend, flex, phase });
    }

    let mut warnings = Vec::new();
    if !records.iter().any(|r| r.bend > 0.0) {
        warnings.push(SimError::NoContact.to_string());
    }
    Ok(SlideTrace { records, warnings })
}
