//! Multi-view point cloud pipeline: parse each view, move it into the global
//! frame with its calibrated pose, concatenate, crop to the region where
//! objects can be, then size the remaining points.

mod approach;
mod cloud;
mod estimate;
mod manifest;
mod pose;

use thiserror::Error;

pub use approach::{
    decide_approach, Approach, ApproachDecision, ApproachReason, ApproachRules, WorkspaceLimits, SMALL_HEIGHT_MM,
};
pub use cloud::{parse_cloud, write_pcd, write_xyz, CloudFormat, PointCloud, GLOBAL_FRAME};
pub use estimate::{
    crop_cloud, dominant_axis, estimate_object, merge_clouds, Axis, ObjectEstimate, RegionOfInterest, DEFAULT_TRIM,
};
pub use manifest::{run_pipeline, PipelineReport, SceneManifest, ViewEntry};
pub use pose::{transform_cloud, ScenePose};

#[derive(Debug, Error, PartialEq)]
pub enum PerceptionError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("invalid pose: {0}")]
    InvalidPose(String),
    #[error("invalid region of interest: {0}")]
    InvalidRoi(String),
    #[error("frame mismatch: expected `{expected}`, found `{found}`")]
    FrameMismatch { expected: String, found: String },
    #[error("no points left to estimate from")]
    EmptyCloud,
    #[error("trim fraction {0} outside [0, 0.5)")]
    InvalidTrim(f64),
    #[error("object needs {width_mm:.1} mm but the aperture opens to {max_aperture_mm:.1} mm")]
    Ungraspable { width_mm: f64, max_aperture_mm: f64 },
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("io: {0}")]
    Io(String),
}
