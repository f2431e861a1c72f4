//! Rigid-body transforms: unit quaternion rotation plus translation.

use std::ops::Mul;

use nalgebra::{Isometry3, Translation3, Unit, UnitQuaternion, Vector3, Vector6};

/// A rigid transform from one frame to another.
///
/// Stored as a unit quaternion and a translation in meters. The quaternion
/// is renormalized on construction, so the unit-norm invariant holds for
/// every reachable value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    iso: Isometry3<f64>,
}

impl Transform {
    pub fn identity() -> Self {
        Self {
            iso: Isometry3::identity(),
        }
    }

    pub fn from_parts(rotation: UnitQuaternion<f64>, translation: Vector3<f64>) -> Self {
        Self {
            iso: Isometry3::from_parts(Translation3::from(translation), rotation),
        }
    }

    /// Build from raw quaternion components (w, x, y, z) and a translation,
    /// renormalizing the quaternion.
    pub fn from_wxyz(w: f64, x: f64, y: f64, z: f64, translation: Vector3<f64>) -> Self {
        let q = UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(w, x, y, z));
        Self::from_parts(q, translation)
    }

    /// URDF-style origin: translation xyz plus fixed-axis roll/pitch/yaw.
    pub fn from_xyz_rpy(xyz: [f64; 3], rpy: [f64; 3]) -> Self {
        let rot = UnitQuaternion::from_euler_angles(rpy[0], rpy[1], rpy[2]);
        Self::from_parts(rot, Vector3::new(xyz[0], xyz[1], xyz[2]))
    }

    pub fn translation_xyz(x: f64, y: f64, z: f64) -> Self {
        Self::from_parts(UnitQuaternion::identity(), Vector3::new(x, y, z))
    }

    /// Rotation by `angle` radians about `axis`.
    pub fn rotation_about(axis: Unit<Vector3<f64>>, angle: f64) -> Self {
        Self::from_parts(UnitQuaternion::from_axis_angle(&axis, angle), Vector3::zeros())
    }

    pub fn translation(&self) -> Vector3<f64> {
        self.iso.translation.vector
    }

    pub fn rotation(&self) -> UnitQuaternion<f64> {
        self.iso.rotation
    }

    pub fn inverse(&self) -> Self {
        Self {
            iso: self.iso.inverse(),
        }
    }

    /// Apply the transform to a point expressed in the source frame.
    pub fn transform_point(&self, p: Vector3<f64>) -> Vector3<f64> {
        self.iso.transform_point(&nalgebra::Point3::from(p)).coords
    }

    /// Pose difference `target ⊖ current` as a 6-vector: translation delta
    /// stacked over the axis-angle of the relative rotation. Both poses and
    /// the result are expressed in the same (parent) frame.
    pub fn pose_error(target: &Transform, current: &Transform) -> Vector6<f64> {
        let dp = target.translation() - current.translation();
        let drot = target.rotation() * current.rotation().inverse();
        let aa = drot.scaled_axis();
        Vector6::new(dp.x, dp.y, dp.z, aa.x, aa.y, aa.z)
    }

    /// Norm used by the IK solver: translation meters plus rotation radians,
    /// weighted 1:1.
    pub fn pose_error_norm(target: &Transform, current: &Transform) -> f64 {
        let e = Self::pose_error(target, current);
        e.fixed_rows::<3>(0).norm() + e.fixed_rows::<3>(3).norm()
    }

    /// Largest absolute difference over translation components and the
    /// relative-rotation angle; used by tests and the transform graph.
    pub fn max_abs_diff(&self, other: &Transform) -> f64 {
        let dp = (self.translation() - other.translation()).abs().max();
        let da = (self.rotation() * other.rotation().inverse()).angle();
        dp.max(da)
    }

    /// Serialize as [x, y, z, qw, qx, qy, qz].
    pub fn to_vec7(&self) -> [f64; 7] {
        let t = self.translation();
        let q = self.rotation().into_inner();
        [t.x, t.y, t.z, q.w, q.i, q.j, q.k]
    }

    pub fn from_vec7(v: &[f64]) -> Option<Self> {
        if v.len() != 7 {
            return None;
        }
        Some(Self::from_wxyz(v[3], v[4], v[5], v[6], Vector3::new(v[0], v[1], v[2])))
    }
}

impl Default for Transform {
    fn default() -> Self {
        Self::identity()
    }
}

impl Mul for Transform {
    type Output = Transform;

    fn mul(self, rhs: Transform) -> Transform {
        Transform {
            iso: self.iso * rhs.iso,
        }
    }
}
