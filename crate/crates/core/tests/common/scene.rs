//! Writes synthetic scenes (clouds + manifest) to disk for command tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use gripkit::perception::{write_pcd, write_xyz, RegionOfInterest, SceneManifest, ViewEntry};
use gripkit::synth::{split_views, Cylinder};

/// Two camera views of `object`, split at its axis. Returns the manifest path.
pub fn write_scene(dir: &Path, name: &str, object: Cylinder, roi: Option<RegionOfInterest>) -> PathBuf {
    let cloud = object.surface_points(5000, 11);
    let views = split_views(&cloud, object.center_xy[0]);
    let a = format!("{name}_a.xyz");
    let b = format!("{name}_b.pcd");
    std::fs::write(dir.join(&a), write_xyz(&views[0].0)).unwrap();
    std::fs::write(dir.join(&b), write_pcd(&views[1].0)).unwrap();
    let manifest = SceneManifest {
        views: vec![
            ViewEntry { cloud: a.into(), transform: views[0].1 },
            ViewEntry { cloud: b.into(), transform: views[1].1 },
        ],
        roi,
        trim: 0.01,
    };
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    path
}

pub fn bottle() -> Cylinder {
    Cylinder::new(0.08, 0.12).at(0.45, 0.0, 0.0)
}

pub fn coin() -> Cylinder {
    Cylinder::new(0.03, 0.008).at(0.45, 0.1, 0.0)
}

pub fn bucket() -> Cylinder {
    Cylinder::new(0.3, 0.25).at(0.45, -0.2, 0.0)
}
