//! Truncated covering trees and the Perron unit flow.

use num_bigint::BigUint;

use crate::nonbacktracking::{NbOperator, PerronData};

use super::PercolationError;

/// Upper limit on the node count of a materialised tree.
pub const MAX_TREE_NODES: u64 = 100_000_000;

const NO_PARENT: u32 = u32::MAX;

/// The covering tree `Γ_e(G)` cut off at depth `depth_cap`.
///
/// Node 0 is the root (the length-zero walk); every other node is a
/// non-backtracking walk starting with arc `e`, stored by parent and last
/// arc. Nodes are in breadth-first order, so each level is a contiguous
/// range and each node's children are contiguous.
#[derive(Debug, Clone)]
pub struct CoveringTree {
    root_arc: usize,
    depth_cap: usize,
    parent: Vec<u32>,
    last_arc: Vec<u32>,
    // children of node x are child_start[x]..child_start[x + 1]
    child_start: Vec<u32>,
    level_start: Vec<usize>,
}

impl CoveringTree {
    pub fn build(op: &NbOperator, root_arc: usize, depth_cap: usize) -> Result<Self, PercolationError> {
        let counts = op.walk_counts_from(root_arc, depth_cap)?;
        let projected: BigUint = counts.iter().sum();
        if projected > BigUint::from(MAX_TREE_NODES) {
            return Err(PercolationError::TreeTooLarge {
                projected: projected.to_string(),
                limit: MAX_TREE_NODES,
            });
        }
        let total = u32::try_from(&projected).expect("bounded by MAX_TREE_NODES") as usize;

        let mut parent = Vec::with_capacity(total);
        let mut last_arc = Vec::with_capacity(total);
        let mut child_start = Vec::with_capacity(total + 1);
        let mut level_start = vec![0, 1];
        parent.push(NO_PARENT);
        last_arc.push(NO_PARENT);
        if depth_cap >= 1 {
            child_start.push(1);
            level_start.push(2);
            parent.push(0);
            last_arc.push(root_arc as u32);
        }
        for depth in 1..depth_cap {
            let (lo, hi) = (level_start[depth], level_start[depth + 1]);
            for x in lo..hi {
                child_start.push(parent.len() as u32);
                for &f in op.successors(last_arc[x] as usize) {
                    parent.push(x as u32);
                    last_arc.push(f as u32);
                }
            }
            level_start.push(parent.len());
        }
        while child_start.len() <= parent.len() {
            child_start.push(parent.len() as u32);
        }
        debug_assert_eq!(parent.len(), total);
        Ok(CoveringTree {
            root_arc,
            depth_cap,
            parent,
            last_arc,
            child_start,
            level_start,
        })
    }

    pub fn root_arc(&self) -> usize {
        self.root_arc
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Parent of `x`, or `None` for the root.
    pub fn parent(&self, x: usize) -> Option<usize> {
        (x != 0).then(|| self.parent[x] as usize)
    }

    /// Last arc `ρ(x)` of the walk at `x`, or `None` for the root.
    pub fn last_arc(&self, x: usize) -> Option<usize> {
        (x != 0).then(|| self.last_arc[x] as usize)
    }

    pub fn children(&self, x: usize) -> std::ops::Range<usize> {
        self.child_start[x] as usize..self.child_start[x + 1] as usize
    }

    /// Node range at distance `depth` from the root.
    pub fn level(&self, depth: usize) -> std::ops::Range<usize> {
        self.level_start[depth]..self.level_start[depth + 1]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.depth_cap).map(|d| self.level(d).len()).collect()
    }

    /// Depth of `x` by binary search over the level boundaries.
    pub fn depth(&self, x: usize) -> usize {
        self.level_start.partition_point(|&s| s <= x) - 1
    }
}

/// Arc with the largest Perron-vector entry, lowest index on ties.
pub fn root_arc_choice(perron: &PerronData) -> usize {
    perron.max_arc()
}

/// `φ(x) = λ*^(1-|x|) w*(ρ(x)) / w*(e)` on the nodes of a covering tree,
/// with `φ(root) = 1`. Dividing by `w*(e)` makes `φ((e)) = 1` for any root
/// arc, not only a maximal one.
#[derive(Debug, Clone)]
pub struct UnitFlow {
    pub phi: Vec<f64>,
    pub lambda_star: f64,
    /// Largest `|Σ_children φ - φ(x)|` over internal nodes.
    pub max_violation: f64,
}

impl UnitFlow {
    /// Tolerated conservation error before the eigenpair is rejected.
    pub const TOLERANCE: f64 = 1e-6;

    pub fn new(tree: &CoveringTree, perron: &PerronData) -> Result<Self, PercolationError> {
        let n = tree.node_count();
        let arcs = perron.w_star.len();
        if let Some(&arc) = tree.last_arc[1..].iter().find(|&&a| a as usize >= arcs) {
            return Err(PercolationError::PerronMismatch {
                arc: arc as usize,
                found: arcs,
            });
        }
        let lambda = perron.lambda_star;
        let scale = perron.w_star[tree.root_arc];
        let mut phi = vec![1.0; n];
        let mut power = 1.0;
        for depth in 1..=tree.depth_cap {
            for x in tree.level(depth) {
                phi[x] = power * perron.w_star[tree.last_arc[x] as usize] / scale;
            }
            power /= lambda;
        }

        let mut max_violation: f64 = 0.0;
        for depth in 0..tree.depth_cap {
            for x in tree.level(depth) {
                let flow: f64 = tree.children(x).map(|y| phi[y]).sum();
                let violation = (flow - phi[x]).abs();
                if violation > Self::TOLERANCE {
                    return Err(PercolationError::FlowViolation { node: x, violation });
                }
                max_violation = max_violation.max(violation);
            }
        }
        Ok(UnitFlow {
            phi,
            lambda_star: lambda,
            max_violation,
        })
    }

    /// `Σ φ(x)` over the nodes at `depth`.
    pub fn level_sum(&self, tree: &CoveringTree, depth: usize) -> f64 {
        tree.level(depth).map(|x| self.phi[x]).sum()
    }
}
