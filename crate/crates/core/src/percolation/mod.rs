//! Fractional percolation on covering trees.
//!
//! [`adapted`] holds the density conditions on 0/1 sequences and their
//! exact probabilities; [`tree`] builds truncated covering trees and the
//! Perron unit flow on them; [`reach`] samples random edge subsets of a
//! tree and evaluates reachability and the second-moment statistic `Q`.

pub mod adapted;
pub mod reach;
pub mod tree;

use thiserror::Error;

use crate::fraction::Fraction;
use crate::nonbacktracking::WalkError;

pub use adapted::{
    adapted_counts, alpha_adapted_probability, default_slow_sequence, is_alpha_adapted,
    is_alpha_t_adapted, rotation_witness, slowness_ratio, AdaptedSpec, BlockSchedule,
};
pub use reach::{
    probe_adapted_path, reach_experiment, regular_tree_reach_probability, ReachExperiment, ReachOutcome,
};
pub use tree::{root_arc_choice, CoveringTree, UnitFlow, MAX_TREE_NODES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PercolationError {
    #[error("alpha must be positive, got {0}")]
    BadAlpha(Fraction),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("rotation needs at least alpha * {len} ones, found {ones}")]
    RotationPrecondition { ones: usize, len: usize },
    #[error("covering tree would have {projected} nodes (limit {limit})")]
    TreeTooLarge { projected: String, limit: u64 },
    #[error("depth {needed} required but the tree is truncated at {cap}")]
    DepthCap { needed: usize, cap: usize },
    #[error("flow conservation fails at node {node} by {violation:e}")]
    FlowViolation { node: usize, violation: f64 },
    #[error("tree uses arc {arc} but the perron vector has {found} entries")]
    PerronMismatch { arc: usize, found: usize },
    #[error("search explored more than {0} nodes")]
    SearchBudget(usize),
    #[error(transparent)]
    Walk(#[from] WalkError),
}
