//! Build a cluttered two-camera scene, then run it through the perception
//! pipeline: transform each view, merge, crop to a box, size the object and
//! pick an approach direction.

use gripkit::geometry::GripperGeometry;
use gripkit::perception::{
    crop_cloud, decide_approach, estimate_object, merge_clouds, transform_cloud, ApproachRules, PointCloud,
    RegionOfInterest, DEFAULT_TRIM,
};
use gripkit::synth::{split_views, tabletop, uniform_box, Cylinder};
use nalgebra::Point3;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bottle = Cylinder::new(0.07, 0.2).at(0.45, 0.05, 0.0);
    let mut scene = bottle.surface_points(6000, 1);
    scene.points.extend(tabletop([0.2, -0.3], [0.8, 0.4], 0.0, 5000, 2).points);
    scene.points.extend(uniform_box([0.65, -0.25, 0.0], [0.7, -0.2, 0.05], 300, 3).points);

    // what the cameras would have recorded
    let views = split_views(&scene, 0.45);
    let global: Vec<PointCloud> = views.iter().map(|(cloud, pose)| transform_cloud(cloud, pose)).collect();
    for (i, (cloud, _)) in views.iter().enumerate() {
        println!("view {i}: {} points in frame {}", cloud.len(), cloud.frame_id);
    }

    let merged = merge_clouds(&global)?;
    let roi = RegionOfInterest::new(Point3::new(0.35, -0.05, 0.002), Point3::new(0.55, 0.15, 0.4))?;
    let cropped = crop_cloud(&merged, &roi);
    println!("merged {} points, {} inside the region", merged.len(), cropped.len());

    let est = estimate_object(&cropped, DEFAULT_TRIM)?;
    println!(
        "extents {:.1} x {:.1} x {:.1} mm, centroid ({:.3}, {:.3}, {:.3}) m, dominant {:?}",
        est.extents[0] * 1e3,
        est.extents[1] * 1e3,
        est.extents[2] * 1e3,
        est.centroid[0],
        est.centroid[1],
        est.centroid[2],
        est.dominant_axis
    );

    let decision = decide_approach(&est, &GripperGeometry::default(), &ApproachRules::default())?;
    println!("{:?} approach ({:?}), grasp width {:.1} mm", decision.approach, decision.reason, decision.grasp_width_mm);
    Ok(())
}
