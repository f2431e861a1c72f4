//! Damped-least-squares inverse kinematics.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use super::jacobian::jacobian;
use super::transform::Transform;
use super::tree::{JointPositions, KinematicTree, TreeError};

/// Solver parameters. Defaults are tuned for desk-scale chains of up to
/// about seven joints.
#[derive(Debug, Clone, Copy)]
pub struct IkParams {
    pub max_iter: usize,
    pub tol: f64,
    pub damping: f64,
}

impl Default for IkParams {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-6,
            damping: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IkSolution {
    pub positions: JointPositions,
    pub iterations: usize,
    pub residual: f64,
    /// Joints whose solution lies outside declared limits. Limits are
    /// reported, never used to clamp iterates.
    pub limit_warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum IkError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("no convergence after {iterations} iterations, residual {residual:.6}")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best: JointPositions,
    },
}

/// Iterates `q ← q + Jᵀ(JJᵀ + λ²I)⁻¹ e` until the pose error norm
/// (translation meters plus rotation radians) drops below `tol`.
pub fn inverse_kinematics(
    tree: &KinematicTree,
    target: &Transform,
    root_seg: &str,
    tip_seg: &str,
    seed: &JointPositions,
    params: &IkParams,
) -> Result<IkSolution, IkError> {
    let chain = tree.chain_joint_names(root_seg, tip_seg)?;
    let mut q = DVector::from_iterator(
        chain.len(),
        chain
            .iter()
            .map(|name| seed.get(name).ok_or_else(|| TreeError::MissingJointValue(name.clone())))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter(),
    );

    let positions_of = |q: &DVector<f64>| {
        JointPositions::from_pairs(chain.iter().cloned().zip(q.iter().copied()))
    };

    let mut best = q.clone();
    let mut best_residual = f64::INFINITY;
    for iter in 0..=params.max_iter {
        let qp = positions_of(&q);
        let current = tree.forward_kinematics(&qp, root_seg, tip_seg)?;
        let residual = Transform::pose_error_norm(target, &current);
        if residual < best_residual {
            best_residual = residual;
            best = q.clone();
        }
        if residual < params.tol {
            return Ok(IkSolution {
                limit_warnings: limit_warnings(tree, &qp),
                positions: qp,
                iterations: iter,
                residual,
            });
        }
        if iter == params.max_iter {
            break;
        }
        let jac = jacobian(tree, &qp, root_seg, tip_seg)?;
        let error = Transform::pose_error(target, &current);
        q += damped_step(&jac, &DVector::from_column_slice(error.as_slice()), params.damping);
    }

    Err(IkError::NoConvergence {
        iterations: params.max_iter,
        residual: best_residual,
        best: positions_of(&best),
    })
}

fn damped_step(jac: &DMatrix<f64>, error: &DVector<f64>, damping: f64) -> DVector<f64> {
    let m = jac.nrows();
    let jjt = jac * jac.transpose() + DMatrix::identity(m, m) * damping * damping;
    let rhs = jjt
        .cholesky()
        .map(|chol| chol.solve(error))
        .unwrap_or_else(|| DVector::zeros(m));
    jac.transpose() * rhs
}

fn limit_warnings(tree: &KinematicTree, q: &JointPositions) -> Vec<String> {
    let mut out = Vec::new();
    for (name, value) in q.iter() {
        if let Some(joint) = tree.joint(name) {
            if let Some((lo, hi)) = joint.limits {
                if value < lo || value > hi {
                    out.push(format!(
                        "joint '{name}' solution {value:.4} outside limits [{lo:.4}, {hi:.4}]"
                    ));
                }
            }
        }
    }
    out
}
