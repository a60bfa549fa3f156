//! Free-air opening/closing with the deviations a real gripper shows: a
//! constant X bias on the fingertips, backlash in the drive, and optional
//! seeded measurement noise.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::geometry::{forward_kinematics, sample_trajectory, GripperGeometry};

pub const X_BIAS_CAP_MM: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerturbationModel {
    /// Offset added to the left fingertip x (mirrored on the right), mm.
    /// Negative for the hinged build, positive for the plain one.
    pub x_bias: f64,
    /// Dead band between motor and linkage, rad.
    pub backlash_width: f64,
    pub noise_sd: f64,
    pub seed: u64,
}

impl Default for PerturbationModel {
    fn default() -> Self {
        Self { x_bias: 0.0, backlash_width: 0.0, noise_sd: 0.0, seed: 0 }
    }
}

impl PerturbationModel {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.x_bias.abs() <= X_BIAS_CAP_MM) {
            return Err(SimError::InvalidConfig(format!("|x_bias| must be at most {X_BIAS_CAP_MM} mm")));
        }
        if !(self.backlash_width >= 0.0) {
            return Err(SimError::InvalidConfig("backlash_width must be non-negative".into()));
        }
        if !(self.noise_sd >= 0.0) || !self.noise_sd.is_finite() {
            return Err(SimError::InvalidConfig("noise_sd must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Closing,
    Opening,
    Hold,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Closing => "closing",
            Direction::Opening => "opening",
            Direction::Hold => "hold",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeRecord {
    pub theta: f64,
    pub theta_effective: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub y_tip: f64,
    pub direction: Direction,
}

pub const FREE_CSV_HEADER: &str = "theta,theta_effective,x_left,x_right,y_tip,direction";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeTrace {
    pub records: Vec<FreeRecord>,
}

impl FreeTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(FREE_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.theta,
                r.theta_effective,
                r.x_left,
                r.x_right,
                r.y_tip,
                r.direction.as_str()
            );
        }
        out
    }

    pub fn with_direction(&self, direction: Direction) -> impl Iterator<Item = &FreeRecord> {
        self.records.iter().filter(move |r| r.direction == direction)
    }
}

/// Commanded angles for one full cycle: open → closed → open.
pub fn open_close_cycle(geom: &GripperGeometry, step: f64) -> Result<Vec<f64>, SimError> {
    let close = sample_trajectory(geom.theta_open, geom.theta_closed, step)?;
    let open = sample_trajectory(geom.theta_closed, geom.theta_open, step)?;
    Ok(close.samples.into_iter().chain(open.samples.into_iter().skip(1)).collect())
}

/// Run the commanded angles through the backlash and the kinematic model.
///
/// The linkage angle only follows the motor once the motor has taken up the
/// dead band, so it trails by half the backlash width on either side of the
/// command. With every perturbation at zero the output is the model itself.
pub fn simulate_free(
    geom: &GripperGeometry,
    commands: &[f64],
    perturbation: &PerturbationModel,
) -> Result<FreeTrace, SimError> {
    perturbation.validate()?;
    let half = 0.5 * perturbation.backlash_width;
    let mut rng = ChaCha8Rng::seed_from_u64(perturbation.seed);
    let noise = (perturbation.noise_sd > 0.0).then(|| Normal::new(0.0, perturbation.noise_sd).expect("validated sd"));
    let clip = 4.0 * perturbation.noise_sd;

    let mut effective = match commands.first() {
        Some(&t) => t,
        None => return Ok(FreeTrace { records: Vec::new() }),
    };
    let mut previous = effective;
    let mut records = Vec::with_capacity(commands.len());
    for &theta in commands {
        effective = effective.clamp(theta - half, theta + half);
        let direction = if theta < previous {
            Direction::Closing
        } else if theta > previous {
            Direction::Opening
        } else {
            Direction::Hold
        };
        previous = theta;

        let state = forward_kinematics(geom, effective)?;
        let mut x_left = state.x_left;
        let mut y_tip = state.y_tip;
        if perturbation.x_bias != 0.0 {
            x_left += perturbation.x_bias;
        }
        if let Some(dist) = &noise {
            x_left += dist.sample(&mut rng).clamp(-clip, clip);
            y_tip += dist.sample(&mut rng).clamp(-clip, clip);
        }
        records.push(FreeRecord { theta, theta_effective: effective, x_left, x_right: -x_left, y_tip, direction });
    }
    Ok(FreeTrace { records })
}
