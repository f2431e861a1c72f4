//! Kinematic tree: named segments connected by fixed or articulated joints,
//! with forward kinematics over arbitrary segment pairs.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Unit, Vector3};
use thiserror::Error;

use super::transform::Transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointKind {
    Revolute,
    Prismatic,
    Fixed,
    Continuous,
}

impl JointKind {
    /// Fixed joints carry no position variable.
    pub fn is_articulated(&self) -> bool {
        !matches!(self, JointKind::Fixed)
    }
}

/// One joint: a fixed origin transform from the parent segment frame to the
/// joint frame, followed by the joint motion along/about `axis`.
#[derive(Debug, Clone)]
pub struct JointSpec {
    pub name: String,
    pub kind: JointKind,
    pub axis: Unit<Vector3<f64>>,
    pub origin: Transform,
    pub limits: Option<(f64, f64)>,
    pub parent_segment: String,
    pub child_segment: String,
}

impl JointSpec {
    /// Transform contributed by this joint at position `q` (ignored for
    /// fixed joints): origin composed with the joint motion.
    pub fn transform_at(&self, q: f64) -> Transform {
        self.origin * self.motion_at(q)
    }

    pub fn motion_at(&self, q: f64) -> Transform {
        match self.kind {
            JointKind::Revolute | JointKind::Continuous => Transform::rotation_about(self.axis, q),
            JointKind::Prismatic => {
                let t = self.axis.into_inner() * q;
                Transform::translation_xyz(t.x, t.y, t.z)
            }
            JointKind::Fixed => Transform::identity(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TreeError {
    #[error("duplicate joint name '{0}'")]
    DuplicateJoint(String),
    #[error("duplicate segment name '{0}'")]
    DuplicateSegment(String),
    #[error("joint '{joint}' references unknown segment '{segment}'")]
    UnknownSegmentRef { joint: String, segment: String },
    #[error("cyclic or multi-parent structure at segment '{0}'")]
    CyclicOrMultiParent(String),
    #[error("segment '{0}' is not reachable from the root")]
    Unreachable(String),
    #[error("joint '{0}' has a zero-length axis")]
    ZeroAxis(String),
    #[error("joint '{0}' has lower limit above upper limit")]
    BadLimits(String),
    #[error("unknown segment '{0}'")]
    UnknownSegment(String),
    #[error("missing position for joint '{0}'")]
    MissingJointValue(String),
    #[error("unknown joint '{0}'")]
    UnknownJoint(String),
}

/// Ordered joint positions, keyed by joint name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JointPositions(Vec<(String, f64)>);

impl JointPositions {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        Self(pairs.into_iter().map(|(n, v)| (n.into(), v)).collect())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn set(&mut self, name: &str, value: f64) {
        if let Some(entry) = self.0.iter_mut().find(|(n, _)| n == name) {
            entry.1 = value;
        } else {
            self.0.push((name.to_string(), value));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Direction in which a path element traverses its joint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    /// Parent segment towards child segment.
    Forward,
    /// Child segment towards parent segment.
    Reverse,
}

/// One step on a root→tip path: a joint index plus traversal direction.
#[derive(Debug, Clone, Copy)]
pub struct PathElement {
    pub joint: usize,
    pub direction: Traversal,
}

/// The robot's structural model: a tree of segments rooted at `root`.
#[derive(Debug, Clone)]
pub struct KinematicTree {
    root: String,
    segments: BTreeSet<String>,
    joints: Vec<JointSpec>,
    /// For each non-root segment, the index of the joint whose child it is.
    parent_joint: BTreeMap<String, usize>,
}

impl KinematicTree {
    /// Validate and build. Checks name uniqueness, single-parent/acyclicity,
    /// connectivity from the root, axis normalization and limit ordering.
    pub fn new(
        root: String,
        segments: Vec<String>,
        joints: Vec<JointSpec>,
    ) -> Result<Self, TreeError> {
        let mut segment_set = BTreeSet::new();
        for s in &segments {
            if !segment_set.insert(s.clone()) {
                return Err(TreeError::DuplicateSegment(s.clone()));
            }
        }
        if !segment_set.contains(&root) {
            return Err(TreeError::UnknownSegment(root));
        }

        let mut joint_names = BTreeSet::new();
        let mut parent_joint = BTreeMap::new();
        let mut joints = joints;
        for (idx, joint) in joints.iter_mut().enumerate() {
            if !joint_names.insert(joint.name.clone()) {
                return Err(TreeError::DuplicateJoint(joint.name.clone()));
            }
            for seg in [&joint.parent_segment, &joint.child_segment] {
                if !segment_set.contains(seg) {
                    return Err(TreeError::UnknownSegmentRef {
                        joint: joint.name.clone(),
                        segment: seg.clone(),
                    });
                }
            }
            if joint.kind.is_articulated() {
                let norm = joint.axis.into_inner().norm();
                if !(norm.is_finite() && norm > 0.0) {
                    return Err(TreeError::ZeroAxis(joint.name.clone()));
                }
            }
            if let Some((lo, hi)) = joint.limits {
                if lo > hi {
                    return Err(TreeError::BadLimits(joint.name.clone()));
                }
            }
            if joint.child_segment == root
                || parent_joint.insert(joint.child_segment.clone(), idx).is_some()
            {
                return Err(TreeError::CyclicOrMultiParent(joint.child_segment.clone()));
            }
        }

        let tree = Self {
            root,
            segments: segment_set,
            joints,
            parent_joint,
        };

        // Single parent per segment plus reachability of every segment from
        // the root is equivalent to tree-ness.
        for seg in &tree.segments {
            let mut cur = seg.clone();
            let mut hops = 0;
            while cur != tree.root {
                match tree.parent_joint.get(&cur) {
                    Some(&j) => cur = tree.joints[j].parent_segment.clone(),
                    None => return Err(TreeError::Unreachable(seg.clone())),
                }
                hops += 1;
                if hops > tree.segments.len() {
                    return Err(TreeError::CyclicOrMultiParent(seg.clone()));
                }
            }
        }
        Ok(tree)
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().map(|s| s.as_str())
    }

    pub fn has_segment(&self, name: &str) -> bool {
        self.segments.contains(name)
    }

    pub fn joints(&self) -> &[JointSpec] {
        &self.joints
    }

    pub fn joint(&self, name: &str) -> Option<&JointSpec> {
        self.joints.iter().find(|j| j.name == name)
    }

    /// Names of all articulated joints, in declaration order.
    pub fn articulated_joint_names(&self) -> Vec<String> {
        self.joints
            .iter()
            .filter(|j| j.kind.is_articulated())
            .map(|j| j.name.clone())
            .collect()
    }

    fn ancestors(&self, segment: &str) -> Vec<(String, Option<usize>)> {
        // (segment, joint that leads up from it), root last with None.
        let mut out = Vec::new();
        let mut cur = segment.to_string();
        loop {
            let up = self.parent_joint.get(&cur).copied();
            out.push((cur.clone(), up));
            match up {
                Some(j) => cur = self.joints[j].parent_segment.clone(),
                None => break,
            }
        }
        out
    }

    /// The joint path between two segments, passing through their lowest
    /// common ancestor. Elements are ordered from `root_seg` to `tip_seg`.
    pub fn path(&self, root_seg: &str, tip_seg: &str) -> Result<Vec<PathElement>, TreeError> {
        for seg in [root_seg, tip_seg] {
            if !self.segments.contains(seg) {
                return Err(TreeError::UnknownSegment(seg.to_string()));
            }
        }
        let up_from_root = self.ancestors(root_seg);
        let up_from_tip = self.ancestors(tip_seg);
        let root_side: BTreeMap<&str, usize> = up_from_root
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.as_str(), i))
            .collect();
        // First ancestor of tip that also lies above root_seg is the LCA.
        let (lca_tip_idx, lca_root_idx) = up_from_tip
            .iter()
            .enumerate()
            .find_map(|(i, (s, _))| root_side.get(s.as_str()).map(|&ri| (i, ri)))
            .expect("two segments of one tree always share the root");

        let mut path = Vec::new();
        for (_, up) in &up_from_root[..lca_root_idx] {
            path.push(PathElement {
                joint: up.expect("non-LCA entries have a parent joint"),
                direction: Traversal::Reverse,
            });
        }
        for (_, up) in up_from_tip[..lca_tip_idx].iter().rev() {
            path.push(PathElement {
                joint: up.expect("non-LCA entries have a parent joint"),
                direction: Traversal::Forward,
            });
        }
        Ok(path)
    }

    /// Articulated joint names along the `root→tip` path, in path order.
    pub fn chain_joint_names(&self, root_seg: &str, tip_seg: &str) -> Result<Vec<String>, TreeError> {
        Ok(self
            .path(root_seg, tip_seg)?
            .iter()
            .filter(|e| self.joints[e.joint].kind.is_articulated())
            .map(|e| self.joints[e.joint].name.clone())
            .collect())
    }

    fn joint_value(&self, q: &JointPositions, idx: usize) -> Result<f64, TreeError> {
        let joint = &self.joints[idx];
        if !joint.kind.is_articulated() {
            return Ok(0.0);
        }
        q.get(&joint.name)
            .ok_or_else(|| TreeError::MissingJointValue(joint.name.clone()))
    }

    /// Pose of `tip_seg` expressed in the `root_seg` frame at configuration
    /// `q`. `q` must cover every articulated joint on the path; joints off
    /// the path are not consulted.
    pub fn forward_kinematics(
        &self,
        q: &JointPositions,
        root_seg: &str,
        tip_seg: &str,
    ) -> Result<Transform, TreeError> {
        let mut t = Transform::identity();
        for elem in self.path(root_seg, tip_seg)? {
            let value = self.joint_value(q, elem.joint)?;
            let step = self.joints[elem.joint].transform_at(value);
            t = match elem.direction {
                Traversal::Forward => t * step,
                Traversal::Reverse => t * step.inverse(),
            };
        }
        Ok(t)
    }
}

#[cfg(test)]
pub(crate) mod test_fixtures {
    use super::*;

    /// 2-link planar arm: base →(j1, revolute z)→ link1 →(j2, revolute z)→
    /// link2, with 1 m offsets along x.
    pub fn planar_two_link() -> KinematicTree {
        KinematicTree::new(
            "base".into(),
            vec!["base".into(), "link1".into(), "link2".into()],
            vec![
                JointSpec {
                    name: "j1".into(),
                    kind: JointKind::Revolute,
                    axis: Vector3::z_axis(),
                    origin: Transform::identity(),
                    limits: None,
                    parent_segment: "base".into(),
                    child_segment: "link1".into(),
                },
                JointSpec {
                    name: "j2".into(),
                    kind: JointKind::Revolute,
                    axis: Vector3::z_axis(),
                    origin: Transform::translation_xyz(1.0, 0.0, 0.0),
                    limits: None,
                    parent_segment: "link1".into(),
                    child_segment: "link2".into(),
                },
            ],
        )
        .unwrap()
    }

    /// Pose of the planar arm tip (1 m past j2 along link2's x axis is NOT
    /// modeled here; the tip frame is link2 itself, 1 m from j1 at q = 0...
    /// kept consistent with `planar_two_link_tip`).
    pub fn planar_two_link_with_tip() -> KinematicTree {
        // Same arm plus a fixed 1 m extension so the tip sits 2 m out when
        // the arm is straight.
        KinematicTree::new(
            "base".into(),
            vec!["base".into(), "link1".into(), "link2".into(), "tip".into()],
            vec![
                JointSpec {
                    name: "j1".into(),
                    kind: JointKind::Revolute,
                    axis: Vector3::z_axis(),
                    origin: Transform::identity(),
                    limits: None,
                    parent_segment: "base".into(),
                    child_segment: "link1".into(),
                },
                JointSpec {
                    name: "j2".into(),
                    kind: JointKind::Revolute,
                    axis: Vector3::z_axis(),
                    origin: Transform::translation_xyz(1.0, 0.0, 0.0),
                    limits: None,
                    parent_segment: "link1".into(),
                    child_segment: "link2".into(),
                },
                JointSpec {
                    name: "ee".into(),
                    kind: JointKind::Fixed,
                    axis: Vector3::z_axis(),
                    origin: Transform::translation_xyz(1.0, 0.0, 0.0),
                    limits: None,
                    parent_segment: "link2".into(),
                    child_segment: "tip".into(),
                },
            ],
        )
        .unwrap()
    }
}
