use nalgebra::{Matrix3, Matrix4, Point3, Vector3};
use serde::{Deserialize, Serialize};

use super::cloud::{PointCloud, GLOBAL_FRAME};
use super::PerceptionError;

const ORTHONORMAL_TOL: f64 = 1e-6;

/// Rigid camera-to-global transform, stored as a row-major 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 16]", into = "[f64; 16]")]
pub struct ScenePose {
    matrix: Matrix4<f64>,
}

impl ScenePose {
    pub fn identity() -> Self {
        Self { matrix: Matrix4::identity() }
    }

    /// Build from 16 row-major numbers. The rotation block must be
    /// orthonormal with determinant +1 and the bottom row must be (0,0,0,1).
    pub fn from_row_major(values: [f64; 16]) -> Result<Self, PerceptionError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(PerceptionError::InvalidPose("non-finite entry".into()));
        }
        let matrix = Matrix4::from_row_slice(&values);
        let bottom = [matrix[(3, 0)], matrix[(3, 1)], matrix[(3, 2)], matrix[(3, 3)]];
        if bottom != [0.0, 0.0, 0.0, 1.0] {
            return Err(PerceptionError::InvalidPose(format!("bottom row must be 0 0 0 1, got {bottom:?}")));
        }
        let rot: Matrix3<f64> = matrix.fixed_view::<3, 3>(0, 0).into();
        let err = (rot.transpose() * rot - Matrix3::identity()).abs().max();
        if err > ORTHONORMAL_TOL {
            return Err(PerceptionError::InvalidPose(format!("rotation block not orthonormal (error {err:e})")));
        }
        if rot.determinant() <= 0.0 {
            return Err(PerceptionError::InvalidPose("rotation block is a reflection".into()));
        }
        Ok(Self { matrix })
    }

    pub fn from_rotation_translation(
        rotation: Matrix3<f64>,
        translation: Vector3<f64>,
    ) -> Result<Self, PerceptionError> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&translation);
        let mut values = [0.0; 16];
        for (i, v) in values.iter_mut().enumerate() {
            *v = m[(i / 4, i % 4)];
        }
        Self::from_row_major(values)
    }

    pub fn translation(x: f64, y: f64, z: f64) -> Self {
        Self::from_rotation_translation(Matrix3::identity(), Vector3::new(x, y, z)).expect("pure translation is rigid")
    }

    pub fn rotation(&self) -> Matrix3<f64> {
        self.matrix.fixed_view::<3, 3>(0, 0).into()
    }

    pub fn translation_vector(&self) -> Vector3<f64> {
        self.matrix.fixed_view::<3, 1>(0, 3).into()
    }

    pub fn to_row_major(&self) -> [f64; 16] {
        let mut values = [0.0; 16];
        for (i, v) in values.iter_mut().enumerate() {
            *v = self.matrix[(i / 4, i % 4)];
        }
        values
    }

    /// Inverse rigid transform (global→camera).
    pub fn inverse(&self) -> Self {
        let rt = self.rotation().transpose();
        let t = -(rt * self.translation_vector());
        Self::from_rotation_translation(rt, t).expect("inverse of a rigid pose is rigid")
    }

    pub fn apply(&self, p: &Point3<f64>) -> Point3<f64> {
        Point3::from(self.rotation() * p.coords + self.translation_vector())
    }
}

impl TryFrom<[f64; 16]> for ScenePose {
    type Error = PerceptionError;

    fn try_from(values: [f64; 16]) -> Result<Self, Self::Error> {
        Self::from_row_major(values)
    }
}

impl From<ScenePose> for [f64; 16] {
    fn from(pose: ScenePose) -> Self {
        pose.to_row_major()
    }
}

/// Apply `p' = R p + t` to every point; the result is in the global frame.
pub fn transform_cloud(cloud: &PointCloud, pose: &ScenePose) -> PointCloud {
    let rot = pose.rotation();
    let t = pose.translation_vector();
    PointCloud {
        points: cloud.points.iter().map(|p| Point3::from(rot * p.coords + t)).collect(),
        frame_id: GLOBAL_FRAME.to_string(),
    }
}
