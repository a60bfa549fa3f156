//! Seeded synthetic scenes for exercising the perception pipeline.

use std::f64::consts::TAU;

use nalgebra::{Point3, Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perception::{PointCloud, ScenePose, GLOBAL_FRAME};

/// Upright cylinder resting on the z = `base_z` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cylinder {
    pub center_xy: [f64; 2],
    pub base_z: f64,
    pub diameter: f64,
    pub height: f64,
}

impl Cylinder {
    pub fn new(diameter: f64, height: f64) -> Self {
        Self { center_xy: [0.0, 0.0], base_z: 0.0, diameter, height }
    }

    pub fn at(mut self, x: f64, y: f64, base_z: f64) -> Self {
        self.center_xy = [x, y];
        self.base_z = base_z;
        self
    }

    /// `n` points spread over the side and both caps, proportional to area.
    pub fn surface_points(&self, n: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = 0.5 * self.diameter;
        let side = TAU * r * self.height;
        let cap = std::f64::consts::PI * r * r;
        let total = side + 2.0 * cap;
        let [cx, cy] = self.center_xy;
        let points = (0..n)
            .map(|_| {
                let pick: f64 = rng.random::<f64>() * total;
                let phi = rng.random::<f64>() * TAU;
                if pick < side {
                    let z = self.base_z + rng.random::<f64>() * self.height;
                    Point3::new(cx + r * phi.cos(), cy + r * phi.sin(), z)
                } else {
                    let rho = r * rng.random::<f64>().sqrt();
                    let z = if pick < side + cap { self.base_z } else { self.base_z + self.height };
                    Point3::new(cx + rho * phi.cos(), cy + rho * phi.sin(), z)
                }
            })
            .collect();
        PointCloud { points, frame_id: GLOBAL_FRAME.into() }
    }
}

/// Uniform points inside an axis-aligned box.
pub fn uniform_box(min: [f64; 3], max: [f64; 3], n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            Point3::new(
                rng.random_range(min[0]..=max[0]),
                rng.random_range(min[1]..=max[1]),
                rng.random_range(min[2]..=max[2]),
            )
        })
        .collect();
    PointCloud { points, frame_id: GLOBAL_FRAME.into() }
}

/// Flat table patch at height `z` with thin clutter, used as background.
pub fn tabletop(min_xy: [f64; 2], max_xy: [f64; 2], z: f64, n: usize, seed: u64) -> PointCloud {
    uniform_box([min_xy[0], min_xy[1], z - 0.002], [max_xy[0], max_xy[1], z], n, seed)
}

/// Split a global cloud into two half views by the sign of x around
/// `split_x`, and express each half in its own camera frame. Returns the
/// camera-frame clouds with the camera→global poses that undo the split.
pub fn split_views(cloud: &PointCloud, split_x: f64) -> [(PointCloud, ScenePose); 2] {
    let poses = [
        ScenePose::from_rotation_translation(
            Rotation3::from_euler_angles(0.1, -0.4, 0.9).into_inner(),
            Vector3::new(0.6, -0.2, 0.5),
        )
        .expect("rigid"),
        ScenePose::from_rotation_translation(
            Rotation3::from_euler_angles(-0.3, 0.2, -2.1).into_inner(),
            Vector3::new(-0.5, 0.3, 0.45),
        )
        .expect("rigid"),
    ];
    let halves = [
        cloud.points.iter().copied().filter(|p| p.x >= split_x).collect::<Vec<_>>(),
        cloud.points.iter().copied().filter(|p| p.x < split_x).collect::<Vec<_>>(),
    ];
    let mut out = halves.into_iter().zip(poses).enumerate().map(|(i, (pts, pose))| {
        let inv = pose.inverse();
        let local = PointCloud { points: pts.iter().map(|p| inv.apply(p)).collect(), frame_id: format!("camera_{i}") };
        (local, pose)
    });
    [out.next().unwrap(), out.next().unwrap()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_is_seeded() {
        let c = Cylinder::new(0.08, 0.12);
        assert_eq!(c.surface_points(100, 7), c.surface_points(100, 7));
        assert_ne!(c.surface_points(100, 7), c.surface_points(100, 8));
    }

    #[test]
    fn cylinder_points_lie_on_surface() {
        let c = Cylinder::new(0.08, 0.12).at(0.3, -0.1, 0.75);
        for p in c.surface_points(500, 1).points {
            let rho = ((p.x - 0.3).powi(2) + (p.y + 0.1).powi(2)).sqrt();
            let on_side = (rho - 0.04).abs() < 1e-12;
            let on_cap = (p.z - 0.75).abs() < 1e-12 || (p.z - 0.87).abs() < 1e-12;
            assert!(on_side || on_cap);
            assert!(p.z >= 0.75 - 1e-12 && p.z <= 0.87 + 1e-12);
        }
    }
}
