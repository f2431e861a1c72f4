//! Geometric Jacobian of a segment pair, expressed in the pair's root frame.

use nalgebra::{DMatrix, Vector3};

use super::transform::Transform;
use super::tree::{JointKind, JointPositions, KinematicTree, Traversal, TreeError};

/// 6×n geometric Jacobian of `tip_seg` relative to `root_seg`.
///
/// Rows 0..3 are the linear velocity of the tip origin, rows 3..6 the
/// angular velocity, both in the root frame and per unit joint velocity.
/// Columns follow the chain's articulated joints in path order (see
/// [`KinematicTree::chain_joint_names`]).
pub fn jacobian(
    tree: &KinematicTree,
    q: &JointPositions,
    root_seg: &str,
    tip_seg: &str,
) -> Result<DMatrix<f64>, TreeError> {
    struct Column {
        kind: JointKind,
        axis_in_root: Vector3<f64>,
        anchor: Vector3<f64>,
        sign: f64,
    }

    let path = tree.path(root_seg, tip_seg)?;
    let mut t = Transform::identity();
    let mut columns = Vec::new();
    for elem in &path {
        let joint = &tree.joints()[elem.joint];
        let value = if joint.kind.is_articulated() {
            q.get(&joint.name)
                .ok_or_else(|| TreeError::MissingJointValue(joint.name.clone()))?
        } else {
            0.0
        };
        match elem.direction {
            Traversal::Forward => {
                // Joint motion happens at the joint frame, reached after the
                // fixed origin offset.
                let joint_frame = t * joint.origin;
                if joint.kind.is_articulated() {
                    columns.push(Column {
                        kind: joint.kind,
                        axis_in_root: joint_frame.rotation() * joint.axis.into_inner(),
                        anchor: joint_frame.translation(),
                        sign: 1.0,
                    });
                }
                t = joint_frame * joint.motion_at(value);
            }
            Traversal::Reverse => {
                // Traversing child→parent: the motion acts about the current
                // (child) frame origin with opposite sign.
                if joint.kind.is_articulated() {
                    columns.push(Column {
                        kind: joint.kind,
                        axis_in_root: t.rotation() * joint.axis.into_inner(),
                        anchor: t.translation(),
                        sign: -1.0,
                    });
                }
                t = t * joint.transform_at(value).inverse();
            }
        }
    }

    let tip = t.translation();
    let mut jac = DMatrix::zeros(6, columns.len());
    for (i, col) in columns.iter().enumerate() {
        let (linear, angular) = match col.kind {
            JointKind::Revolute | JointKind::Continuous => {
                let w = col.axis_in_root * col.sign;
                (w.cross(&(tip - col.anchor)), w)
            }
            JointKind::Prismatic => (col.axis_in_root * col.sign, Vector3::zeros()),
            JointKind::Fixed => unreachable!("fixed joints produce no column"),
        };
        for r in 0..3 {
            jac[(r, i)] = linear[r];
            jac[(r + 3, i)] = angular[r];
        }
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::super::tree::test_fixtures::planar_two_link_with_tip;
    use super::super::tree::{JointSpec, KinematicTree};
    use super::*;
    use nalgebra::Vector6;

    fn single_revolute_arm() -> KinematicTree {
        KinematicTree::new(
            "base".into(),
            vec!["base".into(), "link".into(), "tip".into()],
            vec![
                JointSpec {
                    name: "j1".into(),
                    kind: JointKind::Revolute,
                    axis: Vector3::z_axis(),
                    origin: Transform::identity(),
                    limits: None,
                    parent_segment: "base".into(),
                    child_segment: "link".into(),
                },
                JointSpec {
                    name: "ee".into(),
                    kind: JointKind::Fixed,
                    axis: Vector3::z_axis(),
                    origin: Transform::translation_xyz(1.0, 0.0, 0.0),
                    limits: None,
                    parent_segment: "link".into(),
                    child_segment: "tip".into(),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_revolute_column_matches_cross_product() {
        let tree = single_revolute_arm();
        let q = JointPositions::from_pairs([("j1", 0.0)]);
        let jac = jacobian(&tree, &q, "base", "tip").unwrap();
        assert_eq!(jac.ncols(), 1);
        let col = jac.column(0);
        let expected = Vector6::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!((col - expected).norm() < 1e-12);
    }

    #[test]
    fn prismatic_column_has_zero_angular_part() {
        let tree = KinematicTree::new(
            "base".into(),
            vec!["base".into(), "slide".into()],
            vec![JointSpec {
                name: "p1".into(),
                kind: JointKind::Prismatic,
                axis: Vector3::x_axis(),
                origin: Transform::identity(),
                limits: None,
                parent_segment: "base".into(),
                child_segment: "slide".into(),
            }],
        )
        .unwrap();
        let q = JointPositions::from_pairs([("p1", 0.3)]);
        let jac = jacobian(&tree, &q, "base", "slide").unwrap();
        assert!(jac.view((3, 0), (3, 1)).norm() < 1e-15);
        assert!((jac[(0, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn forward_difference_agrees_on_planar_arm() {
        // Forward-difference oracle: column i ≈ (FK(q + h·eᵢ) ⊖ FK(q)) / h.
        let tree = planar_two_link_with_tip();
        let q = JointPositions::from_pairs([("j1", 0.37), ("j2", -0.81)]);
        let jac = jacobian(&tree, &q, "base", "tip").unwrap();
        let h = 1e-6;
        let base = tree.forward_kinematics(&q, "base", "tip").unwrap();
        for (i, name) in ["j1", "j2"].iter().enumerate() {
            let mut q2 = q.clone();
            q2.set(name, q.get(name).unwrap() + h);
            let bumped = tree.forward_kinematics(&q2, "base", "tip").unwrap();
            let fd = Transform::pose_error(&bumped, &base) / h;
            let dev = (jac.column(i) - fd).abs().max();
            assert!(dev < 1e-5, "column {i} deviates by {dev}");
        }
    }
}
