//! Grasp planning for the two size regimes the gripper handles well.
//!
//! *Envelope* grasps (large objects) close on the object while the arm backs
//! off along the grasp axis by exactly the slider's travel, so the root of
//! the grasp stays put and the object ends up against the palm.
//! *Pinch* grasps (flat objects) close the cushions on the object while the
//! arm follows the fingertips' loss of height, so the tips stay level.

mod capacity;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use capacity::{load_capacity_model, CapacityEntry, CapacityModel, DeflectionCurve, DEFAULT_CAPACITY_JSON};

use crate::geometry::{
    forward_kinematics, inverse_kinematics, sample_trajectory, slider_displacement, GeometryError, GripperGeometry,
    MotorTrajectory, DEFAULT_STEP,
};
use crate::perception::{Approach, ObjectEstimate, SMALL_HEIGHT_MM};

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("object is {width_mm:.1} mm wide but the aperture opens to {max_aperture_mm:.1} mm")]
    ObjectTooLarge { width_mm: f64, max_aperture_mm: f64 },
    #[error("object is {size_mm:.1} mm across, below the {threshold_mm:.1} mm envelope-grasp class")]
    ObjectTooSmall { size_mm: f64, threshold_mm: f64 },
    #[error("object is {height_mm:.1} mm tall, above the {threshold_mm:.1} mm pinch-grasp limit")]
    NotPinchable { height_mm: f64, threshold_mm: f64 },
    #[error("fingertips would need to be at {required_mm:.3} mm, below the surface at {surface_mm:.3} mm")]
    SurfaceConflict { required_mm: f64, surface_mm: f64 },
    #[error("no capacity data for {diameter_mm} mm, {approach:?} approach, hinged = {hinged}")]
    MissingCapacityData { diameter_mm: f64, approach: Approach, hinged: bool },
    #[error("capacity table rejected: {0}")]
    InvariantViolation(String),
    #[error("capacity table parse error: {0}")]
    Parse(String),
    #[error("invalid planner config: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerConfig {
    /// How far below the object width the envelope grasp closes, mm.
    pub squeeze_margin_mm: f64,
    /// Share of the slider travel deliberately left to the fingers, in [0, 1].
    pub residual_fraction: f64,
    pub large_object_min_mm: f64,
    /// Relative slack on the large-object class threshold, absorbing
    /// perception error on objects sized right at the threshold.
    pub size_tolerance: f64,
    pub small_height_mm: f64,
    pub step: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            squeeze_margin_mm: 5.0,
            residual_fraction: 0.0,
            large_object_min_mm: 80.0,
            size_tolerance: 0.02,
            small_height_mm: SMALL_HEIGHT_MM,
            step: DEFAULT_STEP,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), PlanError> {
        if !(0.0..=1.0).contains(&self.residual_fraction) {
            return Err(PlanError::Config(format!("residual_fraction {} outside [0, 1]", self.residual_fraction)));
        }
        if !(0.0..1.0).contains(&self.size_tolerance) {
            return Err(PlanError::Config(format!("size_tolerance {} outside [0, 1)", self.size_tolerance)));
        }
        if !(self.squeeze_margin_mm >= 0.0) {
            return Err(PlanError::Config("squeeze_margin_mm must be non-negative".into()));
        }
        if !(self.step > 0.0) {
            return Err(PlanError::Config("step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraspKind {
    Envelope,
    Pinch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraspPlan {
    pub kind: GraspKind,
    pub approach: Approach,
    pub motor_trajectory: MotorTrajectory,
    /// (motor angle, arm displacement along the grasp axis in mm).
    pub arm_compensation: Vec<(f64, f64)>,
    pub residual_uncompensated: f64,
    pub target_theta: f64,
    pub grasp_width_mm: f64,
    /// Object centroid the grasp axis is aligned with, global frame, m.
    pub grasp_point: [f64; 3],
    pub warnings: Vec<String>,
}

pub const PLAN_CSV_HEADER: &str = "theta,arm_compensation_mm";

impl GraspPlan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(PLAN_CSV_HEADER);
        out.push('\n');
        for (theta, mm) in &self.arm_compensation {
            let _ = writeln!(out, "{theta},{mm}");
        }
        out
    }
}

fn trajectory(from: f64, to: f64, step: f64) -> Result<MotorTrajectory, PlanError> {
    if from == to {
        Ok(MotorTrajectory::hold(from, step))
    } else {
        Ok(sample_trajectory(from, to, step)?)
    }
}

pub fn plan_envelope_grasp(
    geom: &GripperGeometry,
    est: &ObjectEstimate,
    approach: Approach,
    cfg: &PlannerConfig,
) -> Result<GraspPlan, PlanError> {
    cfg.validate()?;
    let size_mm = est.lateral_max() * 1e3;
    let width_mm = est.lateral_min() * 1e3;
    let (ap_closed, ap_open) = geom.aperture_range()?;
    if width_mm > ap_open {
        return Err(PlanError::ObjectTooLarge { width_mm, max_aperture_mm: ap_open });
    }
    if size_mm < cfg.large_object_min_mm * (1.0 - cfg.size_tolerance) {
        return Err(PlanError::ObjectTooSmall { size_mm, threshold_mm: cfg.large_object_min_mm });
    }

    let mut warnings = Vec::new();
    let target_aperture = width_mm - cfg.squeeze_margin_mm;
    let target_theta = if target_aperture <= ap_closed {
        warnings.push(format!(
            "target aperture {target_aperture:.3} mm below closed aperture {ap_closed:.3} mm, closing fully"
        ));
        geom.theta_closed
    } else {
        inverse_kinematics(geom, target_aperture.min(ap_open))?
    };

    let start = geom.theta_open;
    let motor_trajectory = trajectory(start, target_theta, cfg.step)?;
    let keep = 1.0 - cfg.residual_fraction;
    let delta_start = slider_displacement(geom, start);
    let arm_compensation = motor_trajectory
        .iter()
        .map(|theta| (theta, -keep * (slider_displacement(geom, theta) - delta_start) + 0.0))
        .collect();
    let residual_uncompensated = cfg.residual_fraction * (slider_displacement(geom, target_theta) - delta_start).abs();

    Ok(GraspPlan {
        kind: GraspKind::Envelope,
        approach,
        motor_trajectory,
        arm_compensation,
        residual_uncompensated,
        target_theta,
        grasp_width_mm: width_mm,
        grasp_point: est.centroid,
        warnings,
    })
}

/// `surface_height_mm` is the height of the supporting surface in the global
/// frame (z up), in mm.
pub fn plan_pinch_grasp(
    geom: &GripperGeometry,
    est: &ObjectEstimate,
    surface_height_mm: f64,
    cfg: &PlannerConfig,
) -> Result<GraspPlan, PlanError> {
    cfg.validate()?;
    let height_mm = est.height() * 1e3;
    if height_mm > cfg.small_height_mm {
        return Err(PlanError::NotPinchable { height_mm, threshold_mm: cfg.small_height_mm });
    }
    let width_mm = est.lateral_min() * 1e3;
    let (_, ap_open) = geom.aperture_range()?;
    if width_mm > ap_open {
        return Err(PlanError::ObjectTooLarge { width_mm, max_aperture_mm: ap_open });
    }
    // cushions close on the object's mid-height
    let required_mm = est.centroid[2] * 1e3;
    if required_mm < surface_height_mm {
        return Err(PlanError::SurfaceConflict { required_mm, surface_mm: surface_height_mm });
    }

    let start = geom.theta_open;
    let motor_trajectory = trajectory(start, geom.theta_closed, cfg.step)?;
    let y_start = forward_kinematics(geom, start)?.y_tip;
    let arm_compensation = motor_trajectory
        .iter()
        .map(|theta| Ok((theta, y_start - forward_kinematics(geom, theta)?.y_tip)))
        .collect::<Result<Vec<_>, GeometryError>>()?;

    Ok(GraspPlan {
        kind: GraspKind::Pinch,
        approach: Approach::Vertical,
        motor_trajectory,
        arm_compensation,
        residual_uncompensated: 0.0,
        target_theta: geom.theta_closed,
        grasp_width_mm: width_mm,
        grasp_point: est.centroid,
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hinged: bool,
    pub mass_kg: f64,
    pub payload_capacity_kg: f64,
    /// Capacity minus mass; negative when overloaded.
    pub payload_margin_kg: f64,
    pub payload_ok: bool,
    /// Only predicted for horizontal approaches.
    pub predicted_deflection_mm: Option<f64>,
    pub aperture_ok: bool,
    pub passed: bool,
    pub notes: Vec<String>,
}

pub fn validate_plan(
    plan: &GraspPlan,
    geom: &GripperGeometry,
    mass_kg: f64,
    capacity: &CapacityModel,
    hinged: bool,
) -> Result<ValidationReport, PlanError> {
    let mut notes = Vec::new();
    let capacity_kg = capacity.payload(plan.grasp_width_mm, plan.approach, hinged)?;
    let payload_ok = mass_kg <= 0.0 || mass_kg <= capacity_kg;
    if !payload_ok {
        notes.push(format!("payload {mass_kg} kg exceeds capacity {capacity_kg:.4} kg"));
    }

    let predicted_deflection_mm = match plan.approach {
        Approach::Horizontal => {
            let d = capacity.predict_deflection(hinged, mass_kg.max(0.0))?;
            if let Some(curve) = capacity.deflection_curve_kg(hinged) {
                if mass_kg > curve.last().map_or(0.0, |p| p.0) {
                    notes.push("payload beyond the measured deflection curve, deflection clamped".into());
                }
            }
            Some(d)
        }
        Approach::Vertical => None,
    };

    let (ap_closed, ap_open) = geom.aperture_range()?;
    let mut aperture_ok = plan.grasp_width_mm <= ap_open;
    if plan.kind == GraspKind::Envelope && plan.grasp_width_mm < ap_closed {
        aperture_ok = false;
        notes.push("object narrower than the closed aperture, envelope grasp cannot squeeze it".into());
    }

    Ok(ValidationReport {
        hinged,
        mass_kg,
        payload_capacity_kg: capacity_kg,
        payload_margin_kg: capacity_kg - mass_kg,
        payload_ok,
        predicted_deflection_mm,
        aperture_ok,
        passed: payload_ok && aperture_ok,
        notes,
    })
}
