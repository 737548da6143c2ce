//! The non-backtracking arc operator `B(G)` and its Perron data.
//!
//! Arcs are the `2|E|` ordered pairs `(u, v)` with `u ~ v`, indexed in
//! lexicographic order, so the arcs leaving `v` occupy a contiguous range
//! that mirrors `v`'s sorted neighbour list. Row `(u, v)` of `B` lists the
//! arcs `(v, w)` with `w != u`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("vertex {vertex} has degree {degree} < 2; apply strip_degree_one first")]
    MinDegree { vertex: usize, degree: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("walk length must be at least 1")]
    ZeroLength,
    #[error("arc index {0} out of range")]
    ArcOutOfRange(usize),
    #[error("power iteration did not converge in {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("mu0 = {0} is below 2")]
    MuBelowTwo(f64),
}

/// Directed edge `tail -> head` of the host graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

/// Sparse `B(G)` for a connected graph of minimum degree at least 2.
#[derive(Debug, Clone)]
pub struct NbOperator {
    graph: Graph,
    arcs: Vec<Arc>,
    // arcs leaving vertex v are arc_start[v]..arc_start[v + 1]
    arc_start: Vec<usize>,
    row_start: Vec<usize>,
    successors: Vec<usize>,
    strongly_connected: Option<bool>,
}

/// Graphs up to this many edges get the arc digraph's strong connectivity
/// recorded at build time.
pub const STRONG_CHECK_MAX_EDGES: usize = 50;

impl NbOperator {
    pub fn new(g: &Graph) -> Result<Self, WalkError> {
        if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) < 2) {
            return Err(WalkError::MinDegree {
                vertex: v,
                degree: g.degree(v),
            });
        }
        if !g.is_connected() {
            return Err(WalkError::NotConnected);
        }
        let n = g.vertex_count();
        let mut arc_start = Vec::with_capacity(n + 1);
        let mut arcs = Vec::with_capacity(2 * g.edge_count());
        for v in 0..n {
            arc_start.push(arcs.len());
            arcs.extend(g.neighbors(v).iter().map(|&w| Arc { tail: v, head: w }));
        }
        arc_start.push(arcs.len());

        let mut row_start = Vec::with_capacity(arcs.len() + 1);
        let mut successors = Vec::with_capacity(arcs.len() * 2);
        for a in &arcs {
            row_start.push(successors.len());
            let base = arc_start[a.head];
            for (j, &w) in g.neighbors(a.head).iter().enumerate() {
                if w != a.tail {
                    successors.push(base + j);
                }
            }
        }
        row_start.push(successors.len());

        let mut op = NbOperator {
            graph: g.clone(),
            arcs,
            arc_start,
            row_start,
            successors,
            strongly_connected: None,
        };
        if g.edge_count() <= STRONG_CHECK_MAX_EDGES {
            op.strongly_connected = Some(op.is_strongly_connected());
        }
        Ok(op)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, index: usize) -> Arc {
        self.arcs[index]
    }

    pub fn arc_index(&self, arc: Arc) -> Option<usize> {
        if arc.tail >= self.graph.vertex_count() {
            return None;
        }
        let nbrs = self.graph.neighbors(arc.tail);
        nbrs.binary_search(&arc.head).ok().map(|j| self.arc_start[arc.tail] + j)
    }

    /// Arc indices `f` with `B[e][f] = 1`.
    pub fn successors(&self, e: usize) -> &[usize] {
        &self.successors[self.row_start[e]..self.row_start[e + 1]]
    }

    /// Strong connectivity recorded at build time for small graphs.
    pub fn strongly_connected(&self) -> Option<bool> {
        self.strongly_connected
    }

    /// Forward and backward reachability from arc 0. Cycles fail this
    /// (their arcs split into two directed circuits).
    pub fn is_strongly_connected(&self) -> bool {
        let m = self.arcs.len();
        if m == 0 {
            return false;
        }
        let mut preds = vec![Vec::new(); m];
        for a in 0..m {
            for &b in self.successors(a) {
                preds[b].push(a);
            }
        }
        let reach = |next: &dyn Fn(usize) -> Vec<usize>| {
            let mut seen = vec![false; m];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            let mut count = 1;
            while let Some(a) = queue.pop_front() {
                for b in next(a) {
                    if !seen[b] {
                        seen[b] = true;
                        count += 1;
                        queue.push_back(b);
                    }
                }
            }
            count == m
        };
        reach(&|a| self.successors(a).to_vec()) && reach(&|a| preds[a].clone())
    }

    /// `y = B x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (e, out) in y.iter_mut().enumerate() {
            *out = self.successors(e).iter().map(|&f| x[f]).sum();
        }
    }

    /// Number of non-backtracking walks of length `length` whose first arc
    /// is `e`, i.e. the `e` entry of `B^(length-1) 1`.
    pub fn count_walks(&self, e: usize, length: usize) -> Result<BigUint, WalkError> {
        if length == 0 {
            return Err(WalkError::ZeroLength);
        }
        if e >= self.arcs.len() {
            return Err(WalkError::ArcOutOfRange(e));
        }
        let mut v = vec![BigUint::one(); self.arcs.len()];
        for _ in 1..length {
            v = (0..self.arcs.len())
                .map(|a| self.successors(a).iter().map(|&f| &v[f]).sum())
                .collect();
        }
        Ok(v.swap_remove(e))
    }

    /// Walk counts for lengths `0..=max_len` starting with arc `e`; entry 0
    /// is the empty walk. Propagates the distribution of last arcs forward.
    pub fn walk_counts_from(&self, e: usize, max_len: usize) -> Result<Vec<BigUint>, WalkError> {
        if e >= self.arcs.len() {
            return Err(WalkError::ArcOutOfRange(e));
        }
        let mut counts = vec![BigUint::one()];
        if max_len == 0 {
            return Ok(counts);
        }
        let mut last = vec![BigUint::zero(); self.arcs.len()];
        last[e] = BigUint::one();
        counts.push(BigUint::one());
        for _ in 2..=max_len {
            let mut next = vec![BigUint::zero(); self.arcs.len()];
            for (a, c) in last.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &f in self.successors(a) {
                    next[f] += c;
                }
            }
            counts.push(next.iter().sum());
            last = next;
        }
        Ok(counts)
    }

    /// Perron eigenpair by power iteration from the all-ones vector.
    ///
    /// Each step renormalises to max-entry 1 and stops once
    /// `|Bw - λw|_∞ <= tol · λ`, with `λ` the Rayleigh quotient. If the
    /// residual stalls (periodic `B`, e.g. bipartite hosts) the iteration
    /// switches to averaging consecutive iterates, `w <- w + Bw/λ`, which
    /// has the same Perron vector and no oscillation.
    pub fn perron(&self, tol: f64, max_iter: usize) -> Result<PerronData, WalkError> {
        let m = self.arcs.len();
        let mut w = vec![1.0; m];
        let mut bw = vec![0.0; m];
        let mut averaging = false;
        let mut checkpoint = f64::INFINITY;
        let mut residual = f64::INFINITY;
        for iteration in 1..=max_iter {
            self.apply(&w, &mut bw);
            let num: f64 = w.iter().zip(&bw).map(|(a, b)| a * b).sum();
            let den: f64 = w.iter().map(|a| a * a).sum();
            let lambda = num / den;
            residual = w
                .iter()
                .zip(&bw)
                .map(|(a, b)| (b - lambda * a).abs())
                .fold(0.0, f64::max);
            if residual <= tol * lambda {
                let ratios = w.iter().zip(&bw).map(|(a, b)| b / a);
                let lower = ratios.clone().fold(f64::INFINITY, f64::min);
                let upper = ratios.fold(0.0, f64::max);
                return Ok(PerronData {
                    lambda_star: lambda,
                    w_star: w,
                    residual,
                    iterations: iteration,
                    collatz_wielandt: (lower, upper),
                });
            }
            if iteration % 32 == 0 {
                if !averaging && residual > 0.5 * checkpoint {
                    averaging = true;
                }
                checkpoint = residual;
            }
            if averaging {
                for (a, b) in w.iter_mut().zip(&bw) {
                    *a += b / lambda;
                }
            } else {
                std::mem::swap(&mut w, &mut bw);
            }
            let max = w.iter().copied().fold(0.0, f64::max);
            w.iter_mut().for_each(|a| *a /= max);
        }
        Err(WalkError::NonConvergence {
            iterations: max_iter,
            residual,
        })
    }

    /// [`Self::perron`] with tolerance `1e-12` and a generous iteration cap.
    pub fn perron_default(&self) -> Result<PerronData, WalkError> {
        self.perron(PerronData::DEFAULT_TOL, PerronData::DEFAULT_MAX_ITER)
    }
}

/// Perron eigenvalue and eigenvector of `B(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronData {
    pub lambda_star: f64,
    /// Positive eigenvector indexed by arc, largest entry exactly 1.
    pub w_star: Vec<f64>,
    /// `|Bw - λw|_∞` at the returned vector.
    pub residual: f64,
    pub iterations: usize,
    /// `(min_e (Bw)_e / w_e, max_e (Bw)_e / w_e)`, which bracket `λ*`.
    pub collatz_wielandt: (f64, f64),
}

impl PerronData {
    pub const DEFAULT_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_ITER: usize = 1_000_000;

    /// Lowest-index arc whose eigenvector entry is maximal.
    pub fn max_arc(&self) -> usize {
        let max = self.w_star.iter().copied().fold(0.0, f64::max);
        self.w_star.iter().position(|&x| x == max).unwrap_or(0)
    }
}

/// `Λ(G) = Π_v (d_v - 1)^(d_v / 2|E|)`, evaluated in log space.
pub fn big_lambda(g: &Graph) -> Result<f64, WalkError> {
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) < 2) {
        return Err(WalkError::MinDegree {
            vertex: v,
            degree: g.degree(v),
        });
    }
    let total = (2 * g.edge_count()) as f64;
    let log: f64 = g
        .degrees()
        .iter()
        .map(|&d| d as f64 * ((d - 1) as f64).ln())
        .sum();
    Ok((log / total).exp())
}

/// Distance from `x` to the nearest integer.
pub fn eta(x: f64) -> f64 {
    (x - x.floor()).min(x.ceil() - x)
}

/// `μ0 - 1 + η(μ0)³ / (8 μ0³)`: a lower bound on `λ*(B(G))` for every
/// connected graph of minimum degree 2 and average degree at least `μ0`.
pub fn lambda_lower_bound(mu0: f64) -> Result<f64, WalkError> {
    if mu0.is_nan() || mu0 < 2.0 {
        return Err(WalkError::MuBelowTwo(mu0));
    }
    let e = eta(mu0);
    Ok(mu0 - 1.0 + e.powi(3) / (8.0 * mu0.powi(3)))
}
