//! Slider-crank driven finger kinematics.
//!
//! The motor turns a crank of length `r1`; a rod of length `r2` pushes the
//! slider along the gripper's y axis. The slider sets the base of each finger,
//! which is treated as a rigid isosceles triangle with leg `l`. Everything is
//! in millimetres and radians.
//!
//! Every quantity depends on the motor angle only through `cos θ` and
//! `sin² θ`, so the model is even in θ. Negative angles (fully open at
//! -0.8 rad, closed at -1.4 rad) are used verbatim and never normalised.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("invalid geometry: {0}")]
    Invalid(String),
    #[error("finger base {base:.6} mm exceeds twice the leg length {two_l:.6} mm")]
    Domain { base: f64, two_l: f64 },
    #[error("angle {theta} rad outside window [{min}, {max}]")]
    OutsideWindow { theta: f64, min: f64, max: f64 },
    #[error("aperture {target} mm outside achievable range [{min}, {max}] mm")]
    OutOfRange { target: f64, min: f64, max: f64 },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("failed to read geometry: {0}")]
    Io(String),
    #[error("failed to parse geometry: {0}")]
    Parse(String),
}

/// Mechanism constants of the gripper. Field names double as the JSON keys
/// of the geometry config file.
///
/// `e` and `c` only ever enter the model as `e - c`; both are kept because
/// they are separate physical offsets on the drawing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GripperGeometry {
    pub r1: f64,
    pub r2: f64,
    pub e: f64,
    pub c: f64,
    pub d: f64,
    pub l: f64,
    pub delta_x: f64,
    pub delta_y: f64,
    pub theta_open: f64,
    pub theta_closed: f64,
}

/// Default geometry shipped with the toolkit. The values are illustrative,
/// not measurements of a physical gripper: they were picked so the aperture
/// runs from about 110 mm (open) to about 65 mm (closed), the chain stays
/// well-defined down to -1.9 rad and the fingertip height moves on the
/// centimetre scale.
pub const DEFAULT_GEOMETRY_JSON: &str = include_str!("../data/geometry.json");

/// Lower end of the extended window used by the sliding grasp.
pub const SLIDE_THETA_LIMIT: f64 = -1.9;

impl Default for GripperGeometry {
    fn default() -> Self {
        serde_json::from_str(DEFAULT_GEOMETRY_JSON).expect("bundled geometry is valid")
    }
}

/// Kinematic snapshot at one motor angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingerState {
    pub theta: f64,
    pub y_b: f64,
    pub delta: f64,
    pub b: f64,
    pub alpha: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub y_tip: f64,
}

impl FingerState {
    /// Lateral distance between the fingertips.
    pub fn aperture(&self) -> f64 {
        self.x_right - self.x_left
    }
}

/// Column header of FK trace CSV files.
pub const FK_CSV_HEADER: &str = "theta,y_b,delta,b,alpha,x_left,x_right,y_tip";

impl fmt::Display for FingerState {
    /// One CSV row in [`FK_CSV_HEADER`] order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{},{},{}",
            self.theta, self.y_b, self.delta, self.b, self.alpha, self.x_left, self.x_right, self.y_tip
        )
    }
}

/// Partial derivatives of the left fingertip with respect to the motor angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FingertipJacobian {
    pub dx_left: f64,
    pub dy_tip: f64,
}

impl FingertipJacobian {
    pub fn d_aperture(&self) -> f64 {
        -2.0 * self.dx_left
    }
}

impl GripperGeometry {
    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let geom: Self = serde_json::from_str(text).map_err(|e| GeometryError::Parse(e.to_string()))?;
        geom.validate()?;
        Ok(geom)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GeometryError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| GeometryError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks the mechanism constraints over `[theta_closed, theta_open]`.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let all = [
            self.r1,
            self.r2,
            self.e,
            self.c,
            self.d,
            self.l,
            self.delta_x,
            self.delta_y,
            self.theta_open,
            self.theta_closed,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::Invalid("all constants must be finite".into()));
        }
        if !(self.r1 > 0.0 && self.r2 > self.r1) {
            return Err(GeometryError::Invalid(format!("need r2 > r1 > 0, got r1 = {}, r2 = {}", self.r1, self.r2)));
        }
        if !(self.d > 0.0 && self.l > 0.0) {
            return Err(GeometryError::Invalid("d and l must be positive".into()));
        }
        if !(self.theta_closed < self.theta_open) {
            return Err(GeometryError::Invalid(format!(
                "theta_closed ({}) must be below theta_open ({})",
                self.theta_closed, self.theta_open
            )));
        }
        let base = self.max_base_length(self.theta_closed, self.theta_open);
        if base > 2.0 * self.l {
            return Err(GeometryError::Domain { base, two_l: 2.0 * self.l });
        }
        Ok(())
    }

    /// Largest finger base length over `[lo, hi]`.
    ///
    /// y_B is monotone between consecutive multiples of π, so |Δ| peaks at the
    /// window ends or at a multiple of π inside it.
    pub fn max_base_length(&self, lo: f64, hi: f64) -> f64 {
        let mut candidates = vec![lo, hi];
        let mut k = (lo / PI).ceil();
        while k * PI <= hi {
            candidates.push(k * PI);
            k += 1.0;
        }
        candidates.into_iter().map(|t| base_length(self, slider_displacement(self, t))).fold(0.0, f64::max)
    }

    pub fn state(&self, theta: f64) -> Result<FingerState, GeometryError> {
        forward_kinematics(self, theta)
    }

    pub fn aperture(&self, theta: f64) -> Result<f64, GeometryError> {
        forward_kinematics(self, theta).map(|s| s.aperture())
    }

    /// Aperture at `theta_closed` and `theta_open`.
    pub fn aperture_range(&self) -> Result<(f64, f64), GeometryError> {
        Ok((self.aperture(self.theta_closed)?, self.aperture(self.theta_open)?))
    }

    /// Window check for a commanded angle. Outside `[theta_closed, theta_open]`
    /// this is an error when `strict`, otherwise a warning string.
    pub fn check_window(&self, theta: f64, strict: bool) -> Result<Option<String>, GeometryError> {
        if theta >= self.theta_closed && theta <= self.theta_open {
            return Ok(None);
        }
        let err = GeometryError::OutsideWindow { theta, min: self.theta_closed, max: self.theta_open };
        if strict {
            Err(err)
        } else {
            Ok(Some(err.to_string()))
        }
    }
}

/// Slider coordinate y_B produced by the crank at motor angle `theta`.
pub fn slider_coordinate(geom: &GripperGeometry, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    geom.r1 * c + (geom.r2 * geom.r2 - geom.r1 * geom.r1 * s * s).sqrt()
}

/// Slider displacement Δ = e - c - y_B.
pub fn slider_displacement(geom: &GripperGeometry, theta: f64) -> f64 {
    geom.e - geom.c - slider_coordinate(geom, theta)
}

pub fn base_length(geom: &GripperGeometry, delta: f64) -> f64 {
    geom.d.hypot(delta)
}

/// Fingertip rotation angle around the finger pivot.
///
/// The base angle of the isosceles finger only exists while `b <= 2l`.
pub fn fingertip_angle(geom: &GripperGeometry, delta: f64, b: f64) -> Result<f64, GeometryError> {
    let two_l = 2.0 * geom.l;
    if !(b > 0.0) || b > two_l {
        return Err(GeometryError::Domain { base: b, two_l });
    }
    Ok((delta / b).asin() + (b / two_l).acos())
}

/// Left/right fingertip x and the shared fingertip y, in the gripper frame.
pub fn fingertip_positions(geom: &GripperGeometry, alpha: f64) -> (f64, f64, f64) {
    let reach = geom.l * alpha.cos();
    let x_left = reach - geom.delta_x;
    let x_right = geom.delta_x - reach;
    let y_tip = geom.l * alpha.sin() + geom.delta_y;
    (x_left, x_right, y_tip)
}

pub fn forward_kinematics(geom: &GripperGeometry, theta: f64) -> Result<FingerState, GeometryError> {
    let y_b = slider_coordinate(geom, theta);
    let delta = geom.e - geom.c - y_b;
    let b = base_length(geom, delta);
    let alpha = fingertip_angle(geom, delta, b)?;
    let (x_left, x_right, y_tip) = fingertip_positions(geom, alpha);
    Ok(FingerState { theta, y_b, delta, b, alpha, x_left, x_right, y_tip })
}

/// Analytic derivative of the fingertip position with respect to θ.
pub fn fingertip_jacobian(geom: &GripperGeometry, theta: f64) -> Result<FingertipJacobian, GeometryError> {
    let state = forward_kinematics(geom, theta)?;
    let two_l = 2.0 * geom.l;
    let slack = two_l * two_l - state.b * state.b;
    if slack <= 0.0 {
        return Err(GeometryError::Domain { base: state.b, two_l });
    }

    let (s, c) = theta.sin_cos();
    let root = (geom.r2 * geom.r2 - geom.r1 * geom.r1 * s * s).sqrt();
    let dy_b = -geom.r1 * s - geom.r1 * geom.r1 * s * c / root;
    let d_delta = -dy_b;
    let d_b = state.delta * d_delta / state.b;
    // d/dθ asin(Δ/b) simplifies to Δ'·d/b² because b² = d² + Δ²
    let d_alpha = d_delta * geom.d / (state.b * state.b) - d_b / slack.sqrt();

    let (sa, ca) = state.alpha.sin_cos();
    Ok(FingertipJacobian { dx_left: -geom.l * sa * d_alpha, dy_tip: geom.l * ca * d_alpha })
}

/// Invert the aperture on the operating window by bisection.
///
/// Aperture grows strictly with θ on `[theta_closed, theta_open]` for a valid
/// geometry whose window lies inside (-π, 0), so the bracket always holds.
pub fn inverse_kinematics(geom: &GripperGeometry, target_aperture: f64) -> Result<f64, GeometryError> {
    const TOL_MM: f64 = 1e-6;
    const MAX_ITER: usize = 200;

    let mut lo = geom.theta_closed;
    let mut hi = geom.theta_open;
    let ap_lo = geom.aperture(lo)?;
    let ap_hi = geom.aperture(hi)?;
    if !(target_aperture >= ap_lo && target_aperture <= ap_hi) {
        return Err(GeometryError::OutOfRange { target: target_aperture, min: ap_lo, max: ap_hi });
    }
    if (ap_lo - target_aperture).abs() <= TOL_MM {
        return Ok(lo);
    }
    if (ap_hi - target_aperture).abs() <= TOL_MM {
        return Ok(hi);
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        mid = 0.5 * (lo + hi);
        let residual = geom.aperture(mid)? - target_aperture;
        if residual.abs() <= TOL_MM || mid == lo || mid == hi {
            break;
        }
        if residual < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Ordered motor angles for one opening or closing move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotorTrajectory {
    pub samples: Vec<f64>,
    pub step: f64,
}

pub const DEFAULT_STEP: f64 = 0.015;

impl MotorTrajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> Option<f64> {
        self.samples.first().copied()
    }

    pub fn last(&self) -> Option<f64> {
        self.samples.last().copied()
    }

    /// A single-sample trajectory, for moves that do not go anywhere.
    pub fn hold(theta: f64, step: f64) -> Self {
        Self { samples: vec![theta], step }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().copied()
    }
}

/// Inclusive sampling from `from` toward `to` in increments of `step`; the
/// final sample is always exactly `to`.
pub fn sample_trajectory(from: f64, to: f64, step: f64) -> Result<MotorTrajectory, GeometryError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(GeometryError::InvalidRange(format!("step must be positive, got {step}")));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(GeometryError::InvalidRange("endpoints must be finite".into()));
    }
    if from == to {
        return Err(GeometryError::InvalidRange(format!("empty range at {from}")));
    }
    let span = (to - from).abs();
    let sign = (to - from).signum();
    // tolerate representation error so that 0.6 / 0.015 counts as 40 steps
    let intervals = (span / step - 1e-9).ceil().max(1.0) as usize;
    let mut samples: Vec<f64> = (0..intervals).map(|i| from + sign * step * i as f64).collect();
    samples.push(to);
    Ok(MotorTrajectory { samples, step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn toy() -> GripperGeometry {
        GripperGeometry {
            r1: 20.0,
            r2: 60.0,
            e: 100.0,
            c: 20.0,
            d: 30.0,
            l: 150.0,
            delta_x: 40.0,
            delta_y: 10.0,
            theta_open: -0.8,
            theta_closed: -1.4,
        }
    }

    #[test]
    fn slider_known_angles() {
        let g = toy();
        assert_eq!(slider_coordinate(&g, 0.0), 80.0);
        let expected = (60.0f64 * 60.0 - 20.0 * 20.0).sqrt();
        assert!((slider_coordinate(&g, FRAC_PI_2) - expected).abs() < 1e-12);
    }

    #[test]
    fn displacement_cancels_when_offset_matches_slider() {
        let mut g = toy();
        let theta = -1.1;
        g.e = g.c + slider_coordinate(&g, theta);
        assert!(slider_displacement(&g, theta).abs() < 1e-12);
        assert_eq!(slider_displacement(&g, 0.3), slider_displacement(&g, -0.3));
    }

    #[test]
    fn base_length_triangles() {
        let g = toy();
        assert_eq!(base_length(&g, 0.0), 30.0);
        assert_eq!(base_length(&g, 40.0), 50.0);
    }

    #[test]
    fn fingertip_angle_reduces_to_base_angle_at_zero_displacement() {
        let g = toy();
        let a = fingertip_angle(&g, 0.0, 30.0).unwrap();
        assert!((a - (30.0f64 / 300.0).acos()).abs() < 1e-15);
        assert!((a - 1.4706289056333368).abs() < 1e-12);
    }

    #[test]
    fn fingertip_angle_half_base_gives_sixth_pi() {
        let g = toy();
        let b = 60.0;
        let a = fingertip_angle(&g, b / 2.0, b).unwrap();
        let expected = std::f64::consts::FRAC_PI_6 + (b / 300.0).acos();
        assert!((a - expected).abs() < 1e-14);
    }

    #[test]
    fn fingertip_angle_rejects_long_base() {
        let g = toy();
        assert!(matches!(fingertip_angle(&g, 10.0, 301.0), Err(GeometryError::Domain { .. })));
    }

    #[test]
    fn fingertip_positions_at_right_angle() {
        let g = toy();
        let (xl, xr, y) = fingertip_positions(&g, FRAC_PI_2);
        assert!((xl + g.delta_x).abs() < 1e-12);
        assert!((xr - g.delta_x).abs() < 1e-12);
        assert!((y - (g.l + g.delta_y)).abs() < 1e-12);
        for a in [0.1, 0.7, 1.3] {
            let (xl, xr, _) = fingertip_positions(&g, a);
            assert_eq!(xl + xr, 0.0);
        }
    }

    #[test]
    fn default_geometry_validates() {
        GripperGeometry::default().validate().unwrap();
    }

    #[test]
    fn validation_catches_bad_constants() {
        let mut g = toy();
        g.r2 = g.r1;
        assert!(g.validate().is_err());
        let mut g = toy();
        g.theta_closed = g.theta_open;
        assert!(g.validate().is_err());
        let mut g = toy();
        g.l = 10.0;
        assert!(matches!(g.validate(), Err(GeometryError::Domain { .. })));
    }

    #[test]
    fn unknown_json_field_is_rejected() {
        let text = DEFAULT_GEOMETRY_JSON.replace("\"r1\"", "\"crank\"");
        assert!(GripperGeometry::from_json(&text).is_err());
    }

    #[test]
    fn closing_narrows_aperture_and_lowers_tip() {
        let g = GripperGeometry::default();
        let open = forward_kinematics(&g, g.theta_open).unwrap();
        let closed = forward_kinematics(&g, g.theta_closed).unwrap();
        assert!(open.aperture() > closed.aperture());
        assert!(open.y_tip > closed.y_tip);
    }

    #[test]
    fn ik_rejects_out_of_range() {
        let g = GripperGeometry::default();
        let (lo, hi) = g.aperture_range().unwrap();
        assert!(matches!(inverse_kinematics(&g, hi + 1.0), Err(GeometryError::OutOfRange { .. })));
        assert!(matches!(inverse_kinematics(&g, lo - 1.0), Err(GeometryError::OutOfRange { .. })));
        assert_eq!(inverse_kinematics(&g, hi).unwrap(), g.theta_open);
    }

    #[test]
    fn jacobian_mirrors_under_negation() {
        let g = GripperGeometry::default();
        let a = fingertip_jacobian(&g, -1.1).unwrap();
        let b = fingertip_jacobian(&g, 1.1).unwrap();
        assert!((a.dx_left + b.dx_left).abs() < 1e-12);
        assert!((a.dy_tip + b.dy_tip).abs() < 1e-12);
    }

    #[test]
    fn jacobian_at_zero_displacement() {
        // put the Δ = 0 point at θ = -1.1 and compare the asin term by hand
        let mut g = toy();
        g.e = g.c + slider_coordinate(&g, -1.1);
        let j = fingertip_jacobian(&g, -1.1).unwrap();
        let s = forward_kinematics(&g, -1.1).unwrap();
        assert!(s.delta.abs() < 1e-12);
        let (sn, cs) = (-1.1f64).sin_cos();
        let root = (g.r2 * g.r2 - g.r1 * g.r1 * sn * sn).sqrt();
        let d_delta = g.r1 * sn + g.r1 * g.r1 * sn * cs / root;
        // db/dθ vanishes at Δ = 0, leaving only Δ'/b
        let d_alpha = d_delta / s.b;
        assert!((j.dy_tip - g.l * s.alpha.cos() * d_alpha).abs() < 1e-9);
    }

    #[test]
    fn trajectory_counts() {
        let t = sample_trajectory(-0.8, -1.4, DEFAULT_STEP).unwrap();
        assert_eq!(t.len(), 41);
        assert_eq!(t.last(), Some(-1.4));
        let t = sample_trajectory(-1.4 + 0.015, -1.4, 0.015).unwrap();
        assert_eq!(t.len(), 2);
        let t = sample_trajectory(-0.8, -1.9, DEFAULT_STEP).unwrap();
        assert_eq!(t.last(), Some(-1.9));
        assert!(t.samples.windows(2).all(|w| w[1] < w[0]));
        assert!(matches!(sample_trajectory(-1.0, -1.0, 0.015), Err(GeometryError::InvalidRange(_))));
        assert!(sample_trajectory(-1.0, -0.5, 0.0).is_err());
    }

    #[test]
    fn window_check_is_soft_unless_strict() {
        let g = GripperGeometry::default();
        assert_eq!(g.check_window(-1.0, true).unwrap(), None);
        assert!(g.check_window(-1.9, false).unwrap().is_some());
        assert!(g.check_window(-1.9, true).is_err());
    }
}
