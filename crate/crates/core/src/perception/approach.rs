//! Horizontal/vertical approach selection from an object estimate.
//!
//! The fingers always close across the narrower lateral extent. If that
//! exceeds the fully open aperture the object is ungraspable. Otherwise,
//! in order:
//!
//! 1. height at or below the small-object threshold → vertical;
//! 2. height is the dominant dimension and the centroid lies in the
//!    horizontal-reach box → horizontal;
//! 3. anything else → vertical.

use serde::{Deserialize, Serialize};

use super::estimate::{Axis, ObjectEstimate};
use super::PerceptionError;
use crate::geometry::GripperGeometry;

/// Reachability box (global frame, metres) for horizontal approaches,
/// standing in for the arm's kinematic limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceLimits {
    pub min_corner: [f64; 3],
    pub max_corner: [f64; 3],
}

impl Default for WorkspaceLimits {
    fn default() -> Self {
        Self { min_corner: [-2.0; 3], max_corner: [2.0; 3] }
    }
}

impl WorkspaceLimits {
    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|i| p[i] >= self.min_corner[i] && p[i] <= self.max_corner[i])
    }
}

pub const SMALL_HEIGHT_MM: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproachRules {
    pub small_height_mm: f64,
    pub workspace: WorkspaceLimits,
}

impl Default for ApproachRules {
    fn default() -> Self {
        Self { small_height_mm: SMALL_HEIGHT_MM, workspace: WorkspaceLimits::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproachReason {
    SmallHeight,
    DominantVerticalExtent,
    DominantLateralExtent,
    OutsideHorizontalWorkspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproachDecision {
    pub approach: Approach,
    pub reason: ApproachReason,
    /// Width the fingers close across, mm.
    pub grasp_width_mm: f64,
    pub max_aperture_mm: f64,
}

pub fn decide_approach(
    est: &ObjectEstimate,
    geom: &GripperGeometry,
    rules: &ApproachRules,
) -> Result<ApproachDecision, PerceptionError> {
    let max_aperture_mm = geom.aperture(geom.theta_open).map_err(|e| PerceptionError::Geometry(e.to_string()))?;
    let height_mm = est.height() * 1e3;
    let width_mm = est.lateral_min() * 1e3;
    let fits = width_mm <= max_aperture_mm;
    let decision = |approach, reason| ApproachDecision { approach, reason, grasp_width_mm: width_mm, max_aperture_mm };

    if !fits {
        return Err(PerceptionError::Ungraspable { width_mm, max_aperture_mm });
    }
    if height_mm <= rules.small_height_mm {
        return Ok(decision(Approach::Vertical, ApproachReason::SmallHeight));
    }
    if est.dominant_axis == Axis::Z {
        if rules.workspace.contains(est.centroid) {
            return Ok(decision(Approach::Horizontal, ApproachReason::DominantVerticalExtent));
        }
        return Ok(decision(Approach::Vertical, ApproachReason::OutsideHorizontalWorkspace));
    }
    Ok(decision(Approach::Vertical, ApproachReason::DominantLateralExtent))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decide(extents: [f64; 3]) -> Result<ApproachDecision, PerceptionError> {
        let est = ObjectEstimate::from_extents([0.5, 0.0, 0.1], extents);
        decide_approach(&est, &GripperGeometry::default(), &ApproachRules::default())
    }

    #[test]
    fn coin_goes_vertical() {
        let d = decide([0.03, 0.03, 0.008]).unwrap();
        assert_eq!((d.approach, d.reason), (Approach::Vertical, ApproachReason::SmallHeight));
    }

    #[test]
    fn bottle_goes_horizontal() {
        let d = decide([0.06, 0.06, 0.20]).unwrap();
        assert_eq!((d.approach, d.reason), (Approach::Horizontal, ApproachReason::DominantVerticalExtent));
        assert!((d.grasp_width_mm - 60.0).abs() < 1e-9);
    }

    #[test]
    fn lying_object_goes_vertical() {
        let d = decide([0.20, 0.02, 0.03]).unwrap();
        assert_eq!((d.approach, d.reason), (Approach::Vertical, ApproachReason::DominantLateralExtent));
    }

    #[test]
    fn unreachable_tall_object_goes_vertical() {
        let est = ObjectEstimate::from_extents([5.0, 0.0, 0.1], [0.06, 0.06, 0.2]);
        let d = decide_approach(&est, &GripperGeometry::default(), &ApproachRules::default()).unwrap();
        assert_eq!(d.reason, ApproachReason::OutsideHorizontalWorkspace);
    }

    #[test]
    fn huge_cube_is_ungraspable() {
        assert!(matches!(decide([0.3, 0.3, 0.3]), Err(PerceptionError::Ungraspable { .. })));
    }
}
