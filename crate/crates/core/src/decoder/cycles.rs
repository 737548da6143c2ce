//! Exhaustive cycle-space enumeration. Exponential in the cycle-space
//! dimension, so only used on small graphs and as an independent check on
//! the matching-based decoder.

use std::collections::VecDeque;

use super::{DecodeError, EdgeSet};
use crate::fraction::Fraction;
use crate::graph::Graph;

/// Largest cycle-space dimension [`brute_force_nearest_cycle`] will enumerate.
pub const BRUTE_FORCE_MAX_DIMENSION: usize = 22;
/// Largest edge count for which all circuits are listed.
pub const CIRCUIT_MAX_EDGES: usize = 24;

/// Fundamental-cycle basis of the cycle space with respect to a BFS
/// spanning forest.
#[derive(Debug, Clone)]
pub struct CycleSpace {
    edge_count: usize,
    basis: Vec<EdgeSet>,
}

impl CycleSpace {
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let m = g.edge_count();
        let mut parent_edge = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        let mut tree = vec![false; m];
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for (&w, &e) in g.neighbors(u).iter().zip(g.incident_edges(u)) {
                    if depth[w] == usize::MAX {
                        depth[w] = depth[u] + 1;
                        parent[w] = u;
                        parent_edge[w] = e;
                        tree[e] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let basis = (0..m)
            .filter(|&e| !tree[e])
            .map(|e| {
                let (mut a, mut b) = g.edges()[e];
                let mut c = EdgeSet::from_indices(m, [e]);
                while a != b {
                    if depth[a] < depth[b] {
                        std::mem::swap(&mut a, &mut b);
                    }
                    c.toggle(parent_edge[a]);
                    a = parent[a];
                }
                c
            })
            .collect();
        CycleSpace { edge_count: m, basis }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[EdgeSet] {
        &self.basis
    }

    /// Visits all `2^k` codewords in Gray-code order, starting with `∅`.
    pub fn for_each_codeword(&self, mut visit: impl FnMut(&EdgeSet)) {
        let mut c = EdgeSet::empty(self.edge_count);
        visit(&c);
        for i in 1u64..(1u64 << self.basis.len()) {
            c.xor_with(&self.basis[i.trailing_zeros() as usize]);
            visit(&c);
        }
    }
}

/// Minimum Hamming distance from `x` to the cycle code, and the number of
/// codewords attaining it.
pub fn brute_force_nearest_cycle(g: &Graph, x: &EdgeSet) -> Result<(usize, u64), DecodeError> {
    let space = CycleSpace::new(g);
    if space.dimension() > BRUTE_FORCE_MAX_DIMENSION {
        return Err(DecodeError::CycleSpaceTooLarge {
            dimension: space.dimension(),
            max: BRUTE_FORCE_MAX_DIMENSION,
        });
    }
    let mut best = usize::MAX;
    let mut count = 0;
    space.for_each_codeword(|c| {
        let d = x.symmetric_difference_len(c);
        if d < best {
            best = d;
            count = 1;
        } else if d == best {
            count += 1;
        }
    });
    Ok((best, count))
}

/// Every circuit of a small graph.
#[derive(Debug, Clone)]
pub struct CircuitList {
    circuits: Vec<EdgeSet>,
}

impl CircuitList {
    pub fn enumerate(g: &Graph) -> Result<Self, DecodeError> {
        if g.edge_count() > CIRCUIT_MAX_EDGES {
            return Err(DecodeError::CircuitBudget {
                edges: g.edge_count(),
                max: CIRCUIT_MAX_EDGES,
            });
        }
        let space = CycleSpace::new(g);
        let mut circuits = Vec::new();
        space.for_each_codeword(|c| {
            if is_circuit(g, c) {
                circuits.push(c.clone());
            }
        });
        Ok(CircuitList { circuits })
    }

    pub fn circuits(&self) -> &[EdgeSet] {
        &self.circuits
    }

    /// Whether some circuit `C` has `|X ∩ C| >= beta |C|`.
    pub fn any_dense(&self, x: &EdgeSet, beta: Fraction) -> bool {
        self.circuits
            .iter()
            .any(|c| beta.at_least(x.intersection_len(c) as u64, c.len() as u64))
    }
}

/// Nonempty, connected and 2-regular on its support.
fn is_circuit(g: &Graph, c: &EdgeSet) -> bool {
    if c.is_empty() {
        return false;
    }
    let mut deg = vec![0u8; g.vertex_count()];
    for e in c.iter() {
        let (u, v) = g.edges()[e];
        deg[u] += 1;
        deg[v] += 1;
        if deg[u] > 2 || deg[v] > 2 {
            return false;
        }
    }
    // an even subgraph with all degrees 2 is a disjoint union of circuits;
    // walk the one through the first edge and compare lengths
    let first = c.iter().next().unwrap();
    let (start, mut cur) = g.edges()[first];
    let mut prev_edge = first;
    let mut len = 1;
    while cur != start {
        let next = g
            .neighbors(cur)
            .iter()
            .zip(g.incident_edges(cur))
            .find(|&(_, &e)| e != prev_edge && c.contains(e))
            .expect("degree 2 in the subgraph");
        prev_edge = *next.1;
        cur = *next.0;
        len += 1;
    }
    len == c.len()
}

/// Exhaustive test for a circuit holding at least a `beta` fraction of
/// edges in `x`. Limited to graphs with at most [`CIRCUIT_MAX_EDGES`] edges.
pub fn half_circuit_oracle(g: &Graph, x: &EdgeSet, beta: Fraction) -> Result<bool, DecodeError> {
    Ok(CircuitList::enumerate(g)?.any_dense(x, beta))
}
