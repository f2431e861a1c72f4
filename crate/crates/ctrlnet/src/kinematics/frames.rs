//! Transform lookup over an undirected graph of known frame transforms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use super::transform::Transform;

#[derive(Debug, Error, PartialEq)]
pub enum FrameGraphError {
    #[error("frames '{from}' and '{to}' are not connected (components {from_component:?} and {to_component:?})")]
    Disconnected {
        from: String,
        to: String,
        from_component: Vec<String>,
        to_component: Vec<String>,
    },
}

/// A set of known frame-to-frame transforms. Edges are invertible, so a
/// transform between any two frames of one connected component can be
/// composed along a path.
#[derive(Debug, Clone, Default)]
pub struct TransformGraph {
    edges: BTreeMap<String, Vec<(String, Transform)>>,
}

impl TransformGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I, S>(edges: I) -> Self
    where
        I: IntoIterator<Item = (S, S, Transform)>,
        S: Into<String>,
    {
        let mut graph = Self::new();
        for (a, b, t) in edges {
            graph.add_edge(a.into(), b.into(), t);
        }
        graph
    }

    pub fn add_edge(&mut self, from: String, to: String, transform: Transform) {
        self.edges
            .entry(from.clone())
            .or_default()
            .push((to.clone(), transform));
        self.edges.entry(to).or_default().push((from, transform.inverse()));
    }

    fn component_of(&self, start: &str) -> Vec<String> {
        let mut seen = BTreeSet::new();
        seen.insert(start.to_string());
        let mut queue = VecDeque::from([start.to_string()]);
        while let Some(cur) = queue.pop_front() {
            for (next, _) in self.edges.get(&cur).into_iter().flatten() {
                if seen.insert(next.clone()) {
                    queue.push_back(next.clone());
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Transform mapping `from`-frame coordinates into the `to` frame...
    /// more precisely the pose of `to` expressed in `from`, composed along
    /// any path. Identity when `from == to`.
    pub fn lookup(&self, from: &str, to: &str) -> Result<Transform, FrameGraphError> {
        if from == to {
            return Ok(Transform::identity());
        }
        let mut seen: BTreeMap<String, Transform> = BTreeMap::new();
        seen.insert(from.to_string(), Transform::identity());
        let mut queue = VecVecDeque::from([from.to_string()]);
        while let Some(cur) = queue.pop_front() {
            let acc = seen[&cur];
            if cur == to {
                return Ok(acc);
            }
            for (next, step) in self.edges.get(&cur).into_iter().flatten() {
                if !seen.contains_key(next) {
                    seen.insert(next.clone(), acc * *step);
                    queue.push_back(next.clone());
                }
            }
        }
        Err(FrameGraphError::Disconnected {
            from: from.to_string(),
            to: to.to_string(),
            from_component: self.component_of(from),
            to_component: self.component_of(to),
        })
    }
}

type VecVecDeque = VecDeque<String>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_frame_is_identity() {
        let graph = TransformGraph::new();
        let t = graph.lookup("O", "O").unwrap();
        assert!(t.max_abs_diff(&Transform::identity()) < 1e-15);
    }

    #[test]
    fn translations_compose_along_path() {
        let graph = TransformGraph::from_edges([
            ("A", "B", Transform::translation_xyz(1.0, 0.0, 0.0)),
            ("B", "C", Transform::translation_xyz(0.0, 1.0, 0.0)),
        ]);
        let t = graph.lookup("A", "C").unwrap();
        assert!(t.max_abs_diff(&Transform::translation_xyz(1.0, 1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn reverse_lookup_is_inverse() {
        let graph = TransformGraph::from_edges([
            ("A", "B", Transform::from_xyz_rpy([1.0, 0.2, -0.3], [0.3, 0.1, 0.9])),
            ("B", "C", Transform::from_xyz_rpy([0.0, 1.0, 0.5], [-0.2, 0.4, 0.0])),
        ]);
        let fwd = graph.lookup("A", "C").unwrap();
        let rev = graph.lookup("C", "A").unwrap();
        assert!((fwd * rev).max_abs_diff(&Transform::identity()) < 1e-12);
    }

    #[test]
    fn disconnected_frames_list_components() {
        let graph = TransformGraph::from_edges([
            ("A", "B", Transform::identity()),
            ("X", "Y", Transform::identity()),
        ]);
        let err = graph.lookup("A", "Y").unwrap_err();
        match err {
            FrameGraphError::Disconnected {
                from_component,
                to_component,
                ..
            } => {
                assert_eq!(from_component, vec!["A".to_string(), "B".to_string()]);
                assert_eq!(to_component, vec!["X".to_string(), "Y".to_string()]);
            }
        }
    }
}
