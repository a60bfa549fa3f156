use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use super::cloud::{PointCloud, GLOBAL_FRAME};
use super::PerceptionError;

/// Axis-aligned box in the global frame, metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RoiRepr", into = "RoiRepr")]
pub struct RegionOfInterest {
    min: Point3<f64>,
    max: Point3<f64>,
}

#[derive(Serialize, Deserialize)]
struct RoiRepr {
    min_corner: [f64; 3],
    max_corner: [f64; 3],
}

impl TryFrom<RoiRepr> for RegionOfInterest {
    type Error = PerceptionError;

    fn try_from(r: RoiRepr) -> Result<Self, Self::Error> {
        Self::new(r.min_corner.into(), r.max_corner.into())
    }
}

impl From<RegionOfInterest> for RoiRepr {
    fn from(r: RegionOfInterest) -> Self {
        Self { min_corner: r.min.into(), max_corner: r.max.into() }
    }
}

impl RegionOfInterest {
    pub fn new(min: Point3<f64>, max: Point3<f64>) -> Result<Self, PerceptionError> {
        if (0..3).any(|i| !(min[i] < max[i]) || !min[i].is_finite() || !max[i].is_finite()) {
            return Err(PerceptionError::InvalidRoi(format!("min {min:?} must be below max {max:?} on every axis")));
        }
        Ok(Self { min, max })
    }

    pub fn min_corner(&self) -> Point3<f64> {
        self.min
    }

    pub fn max_corner(&self) -> Point3<f64> {
        self.max
    }

    pub fn contains(&self, p: &Point3<f64>) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Size and location of the object left after filtering. Extents are the
/// full widths along the global axes, in metres; Z is up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectEstimate {
    pub centroid: [f64; 3],
    pub extents: [f64; 3],
    pub point_count: usize,
    pub dominant_axis: Axis,
}

impl ObjectEstimate {
    /// Estimate for a known box, used by the planners' callers and tests.
    pub fn from_extents(centroid: [f64; 3], extents: [f64; 3]) -> Self {
        Self { centroid, extents, point_count: 0, dominant_axis: dominant_axis(extents) }
    }

    pub fn height(&self) -> f64 {
        self.extents[2]
    }

    pub fn lateral_min(&self) -> f64 {
        self.extents[0].min(self.extents[1])
    }

    pub fn lateral_max(&self) -> f64 {
        self.extents[0].max(self.extents[1])
    }
}

/// Largest extent; ties resolve toward X, then Y.
pub fn dominant_axis(extents: [f64; 3]) -> Axis {
    let mut best = Axis::X;
    let mut best_v = extents[0];
    for (axis, v) in [(Axis::Y, extents[1]), (Axis::Z, extents[2])] {
        if v > best_v {
            best = axis;
            best_v = v;
        }
    }
    best
}

/// Concatenate clouds that share a frame.
pub fn merge_clouds(clouds: &[PointCloud]) -> Result<PointCloud, PerceptionError> {
    let Some(first) = clouds.first() else {
        return Ok(PointCloud::empty(GLOBAL_FRAME));
    };
    if let Some(bad) = clouds.iter().find(|c| c.frame_id != first.frame_id) {
        return Err(PerceptionError::FrameMismatch { expected: first.frame_id.clone(), found: bad.frame_id.clone() });
    }
    let points = clouds.iter().flat_map(|c| c.points.iter().copied()).collect();
    Ok(PointCloud { points, frame_id: first.frame_id.clone() })
}

/// Keep the points inside `roi`, bounds inclusive.
pub fn crop_cloud(cloud: &PointCloud, roi: &RegionOfInterest) -> PointCloud {
    PointCloud {
        points: cloud.points.iter().copied().filter(|p| roi.contains(p)).collect(),
        frame_id: cloud.frame_id.clone(),
    }
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub const DEFAULT_TRIM: f64 = 0.01;

/// Per-axis extents from the `[trim, 1 - trim]` quantile range; the centroid
/// is the mean of the points inside that trimmed box (its centre if none is). With `trim = 0` the
/// extents are the exact axis-aligned bounding box.
pub fn estimate_object(cloud: &PointCloud, trim: f64) -> Result<ObjectEstimate, PerceptionError> {
    if !(0.0..0.5).contains(&trim) {
        return Err(PerceptionError::InvalidTrim(trim));
    }
    if cloud.is_empty() {
        return Err(PerceptionError::EmptyCloud);
    }
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    let mut column = Vec::with_capacity(cloud.len());
    for axis in 0..3 {
        column.clear();
        column.extend(cloud.points.iter().map(|p| p[axis]));
        column.sort_by(f64::total_cmp);
        lo[axis] = quantile(&column, trim);
        hi[axis] = quantile(&column, 1.0 - trim);
    }

    // Sum sorted columns so the centroid does not depend on point order.
    let kept: Vec<&Point3<f64>> =
        cloud.points.iter().filter(|p| (0..3).all(|i| p[i] >= lo[i] && p[i] <= hi[i])).collect();
    let mut centroid = [0.0; 3];
    for axis in 0..3 {
        if kept.is_empty() {
            // sparse clouds can trim to an empty box; fall back to its centre
            centroid[axis] = 0.5 * (lo[axis] + hi[axis]);
            continue;
        }
        column.clear();
        column.extend(kept.iter().map(|p| p[axis]));
        column.sort_by(f64::total_cmp);
        centroid[axis] = column.iter().sum::<f64>() / kept.len() as f64;
    }
    let extents = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
    Ok(ObjectEstimate { centroid, extents, point_count: kept.len(), dominant_axis: dominant_axis(extents) })
}
