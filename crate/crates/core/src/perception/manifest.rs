use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::cloud::PointCloud;
use super::estimate::{crop_cloud, estimate_object, merge_clouds, ObjectEstimate, RegionOfInterest, DEFAULT_TRIM};
use super::pose::{transform_cloud, ScenePose};
use super::PerceptionError;

/// One recorded view: a cloud file and its camera→global transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewEntry {
    pub cloud: PathBuf,
    pub transform: ScenePose,
}

/// Scene description consumed by the estimate pipeline. Cloud paths are
/// resolved relative to the manifest file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneManifest {
    pub views: Vec<ViewEntry>,
    #[serde(default)]
    pub roi: Option<RegionOfInterest>,
    #[serde(default = "default_trim")]
    pub trim: f64,
}

fn default_trim() -> f64 {
    DEFAULT_TRIM
}

impl SceneManifest {
    pub fn from_json(text: &str) -> Result<Self, PerceptionError> {
        let m: Self = serde_json::from_str(text).map_err(|e| PerceptionError::Manifest(e.to_string()))?;
        if m.views.is_empty() {
            return Err(PerceptionError::Manifest("manifest lists no views".into()));
        }
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PerceptionError> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| PerceptionError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Point counts after each stage plus the final estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub view_points: Vec<usize>,
    pub merged_points: usize,
    pub cropped_points: usize,
    pub estimate: ObjectEstimate,
}

pub fn run_pipeline(manifest: &SceneManifest, base_dir: &Path) -> Result<PipelineReport, PerceptionError> {
    let mut global_views = Vec::with_capacity(manifest.views.len());
    let mut view_points = Vec::with_capacity(manifest.views.len());
    for (i, view) in manifest.views.iter().enumerate() {
        let cloud = PointCloud::load(base_dir.join(&view.cloud), &format!("camera_{i}"))?;
        log::info!("view {i}: {} points from {}", cloud.len(), view.cloud.display());
        view_points.push(cloud.len());
        global_views.push(transform_cloud(&cloud, &view.transform));
    }
    let merged = merge_clouds(&global_views)?;
    log::info!("merged: {} points", merged.len());
    let cropped = match &manifest.roi {
        Some(roi) => crop_cloud(&merged, roi),
        None => merged.clone(),
    };
    log::info!("cropped: {} points", cropped.len());
    let estimate = estimate_object(&cropped, manifest.trim)?;
    log::info!("estimate: {} points retained after trimming", estimate.point_count);
    Ok(PipelineReport { view_points, merged_points: merged.len(), cropped_points: cropped.len(), estimate })
}
