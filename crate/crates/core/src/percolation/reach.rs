//! Random edge subsets of a covering tree: reachability and the statistic
//! `Q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::nonbacktracking::NbOperator;

use super::adapted::{alpha_adapted_probability, AdaptedSpec};
use super::tree::{CoveringTree, UnitFlow};
use super::PercolationError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachOutcome {
    /// Some node at depth `n` is (α, t)-reachable.
    pub reached: bool,
    /// `f(l) Σ_{|x| = T_l} φ(x) 1[x reachable]`.
    pub q_value: f64,
}

/// A prepared experiment: tree, flow, spec, `p` and target depth `n`, with
/// the block offsets and normalising factor `f(l)` precomputed.
#[derive(Debug)]
pub struct ReachExperiment<'a> {
    tree: &'a CoveringTree,
    flow: &'a UnitFlow,
    spec: AdaptedSpec,
    p: f64,
    n: usize,
    q_depth: usize,
    f_ell: f64,
    // need[d] = ceil(alpha * offset of depth d within its block); offset 1
    // starts a new block
    need: Vec<u32>,
    block_start: Vec<bool>,
}

impl<'a> ReachExperiment<'a> {
    pub fn new(
        tree: &'a CoveringTree,
        flow: &'a UnitFlow,
        spec: &AdaptedSpec,
        p: f64,
        n: usize,
    ) -> Result<Self, PercolationError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(PercolationError::BadProbability(p));
        }
        let (ell, q_depth) = spec.schedule.cover(n);
        if q_depth > tree.depth_cap() {
            return Err(PercolationError::DepthCap {
                needed: q_depth,
                cap: tree.depth_cap(),
            });
        }
        let mut f_ell = 1.0;
        for i in 1..=ell {
            f_ell /= alpha_adapted_probability(spec.schedule.term(i), spec.alpha, p)?;
        }
        let offsets = spec.schedule.offsets(q_depth);
        let mut need = vec![0];
        let mut block_start = vec![true];
        for &o in &offsets {
            need.push(spec.alpha.ceil_mul(o as u64) as u32);
            block_start.push(o == 1);
        }
        Ok(ReachExperiment {
            tree,
            flow,
            spec: spec.clone(),
            p,
            n,
            q_depth,
            f_ell,
            need,
            block_start,
        })
    }

    /// `T_l`, the depth at which `Q` is evaluated.
    pub fn q_depth(&self) -> usize {
        self.q_depth
    }

    /// `f(l) = Π_{i <= l} Π(t_i)^(-1)`.
    pub fn normaliser(&self) -> f64 {
        self.f_ell
    }

    pub fn spec(&self) -> &AdaptedSpec {
        &self.spec
    }

    /// One sample. Tree edges are drawn in breadth-first order, and only
    /// below reachable nodes: the edges under an unreachable node cannot
    /// affect the outcome, so they are never drawn.
    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> ReachOutcome {
        const DEAD: u32 = u32::MAX;
        let tree = self.tree;
        let last = tree.level(self.q_depth).end;
        let mut ones = vec![DEAD; last];
        ones[0] = 0;
        for depth in 0..self.q_depth {
            let d = depth + 1;
            for x in tree.level(depth) {
                if ones[x] == DEAD {
                    continue;
                }
                let carried = if self.block_start[d] { 0 } else { ones[x] };
                for y in tree.children(x) {
                    let c = carried + rng.gen_bool(self.p) as u32;
                    if c >= self.need[d] {
                        ones[y] = c;
                    }
                }
            }
        }
        let reached = tree.level(self.n).any(|x| ones[x] != DEAD);
        let mass: f64 = tree
            .level(self.q_depth)
            .filter(|&x| ones[x] != DEAD)
            .map(|x| self.flow.phi[x])
            .sum();
        ReachOutcome {
            reached,
            q_value: if mass > 0.0 { self.f_ell * mass } else { 0.0 },
        }
    }
}

/// One reach experiment seeded from `seed`.
pub fn reach_experiment(
    tree: &CoveringTree,
    flow: &UnitFlow,
    spec: &AdaptedSpec,
    p: f64,
    n: usize,
    seed: u64,
) -> Result<ReachOutcome, PercolationError> {
    let exp = ReachExperiment::new(tree, flow, spec, p, n)?;
    Ok(exp.run(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Whether a `p`-random edge subset of `Γ_e(G)` has an (α, t)-adapted path
/// of length `n` from the root, without materialising the tree.
///
/// Depth-first search that draws each tree edge the first time it is
/// looked at and stops at the first path of length `n`. Only reachable
/// nodes are expanded, so the cost is the size of the explored part of
/// the reachable cluster; `budget` caps the number of edges drawn.
pub fn probe_adapted_path<R: Rng + ?Sized>(
    op: &NbOperator,
    root_arc: usize,
    spec: &AdaptedSpec,
    p: f64,
    n: usize,
    rng: &mut R,
    budget: usize,
) -> Result<bool, PercolationError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PercolationError::BadProbability(p));
    }
    if root_arc >= op.arc_count() {
        return Err(crate::nonbacktracking::WalkError::ArcOutOfRange(root_arc).into());
    }
    if n == 0 {
        return Ok(true);
    }
    let offsets = spec.schedule.offsets(n);
    let mut drawn = 0usize;
    let mut step = |ones: u32, depth: usize, rng: &mut R| -> Result<Option<u32>, PercolationError> {
        drawn += 1;
        if drawn > budget {
            return Err(PercolationError::SearchBudget(budget));
        }
        let o = offsets[depth - 1];
        let c = if o == 1 { 0 } else { ones } + rng.gen_bool(p) as u32;
        Ok(spec.alpha.at_least(c as u64, o as u64).then_some(c))
    };
    let mut stack = Vec::new();
    if let Some(c) = step(0, 1, rng)? {
        stack.push((root_arc, 1usize, c));
    }
    while let Some((arc, depth, ones)) = stack.pop() {
        if depth == n {
            return Ok(true);
        }
        for &f in op.successors(arc).iter().rev() {
            if let Some(c) = step(ones, depth + 1, rng)? {
                stack.push((f, depth + 1, c));
            }
        }
    }
    Ok(false)
}

/// Exact probability that a `p`-random edge subset of the covering tree of
/// a `(b + 1)`-regular graph has an (α, t)-adapted path of length `n`.
///
/// That tree has a single edge at the root and `b` children below every
/// other node, so the failure probability depends only on depth and the
/// count of present edges in the current block; it is computed bottom-up.
pub fn regular_tree_reach_probability(
    b: usize,
    spec: &AdaptedSpec,
    p: f64,
    n: usize,
) -> Result<f64, PercolationError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PercolationError::BadProbability(p));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let offsets = spec.schedule.offsets(n);
    let width = offsets.iter().copied().max().unwrap_or(1) + 1;
    // fail[c]: no adapted continuation to depth n from a reachable node at
    // the current depth holding c present edges in its block
    let mut fail = vec![0.0; width];
    let mut edge_fail = vec![0.0; width];
    for d in (0..n).rev() {
        let o = offsets[d];
        let need = spec.alpha.ceil_mul(o as u64) as usize;
        for (c, slot) in edge_fail.iter_mut().enumerate() {
            let base = if o == 1 { 0 } else { c };
            let branch = |c2: usize| if c2 >= need && c2 < width { fail[c2] } else { 1.0 };
            *slot = (1.0 - p) * branch(base) + p * branch(base + 1);
        }
        if d == 0 {
            return Ok(1.0 - edge_fail[0]);
        }
        for (c, slot) in fail.iter_mut().enumerate() {
            *slot = edge_fail[c].powi(b as i32);
        }
    }
    unreachable!("loop returns at depth 0")
}
