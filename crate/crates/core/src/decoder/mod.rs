//! Exact nearest-codeword decoding of cycle codes.
//!
//! Received word `x` differs from the nearest codeword by a minimum
//! `T`-join, where `T` is the set of odd-degree vertices of `x`: the
//! codewords are exactly the even subgraphs, and `x Δ K` ranges over all
//! `T`-joins as `K` ranges over the cycle code. A minimum `T`-join is the
//! union of shortest paths along a minimum-weight perfect matching of `T`.

mod cycles;
mod edgeset;
mod matching;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

pub use cycles::{
    brute_force_nearest_cycle, half_circuit_oracle, CircuitList, CycleSpace, BRUTE_FORCE_MAX_DIMENSION,
    CIRCUIT_MAX_EDGES,
};
pub use edgeset::EdgeSet;
pub use matching::{min_weight_perfect_matching, subset_dp, DP_MAX_TERMINALS};

use crate::fraction::Fraction;
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("terminal set has odd size {0}")]
    OddSyndrome(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no circuit")]
    NoCycle,
    #[error("edge set has universe {found}, graph has {expected} edges")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("cycle space dimension {dimension} exceeds the enumeration budget {max}; use min_t_join")]
    CycleSpaceTooLarge { dimension: usize, max: usize },
    #[error("{edges} edges exceed the circuit enumeration budget of {max}; Monte Carlo path only")]
    CircuitBudget { edges: usize, max: usize },
    #[error("path weight {0} too large for the matching solver")]
    WeightOverflow(u64),
}

/// Odd-degree vertices of the subgraph `(V, x)`, sorted. Empty exactly
/// when `x` is a codeword.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Syndrome(Vec<usize>);

impl Syndrome {
    /// Panics on an odd number of vertices.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        assert!(vertices.len().is_multiple_of(2), "syndromes have even size");
        Syndrome(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn syndrome(g: &Graph, x: &EdgeSet) -> Syndrome {
    let mut odd = vec![false; g.vertex_count()];
    for e in x.iter() {
        let (u, v) = g.edges()[e];
        odd[u] = !odd[u];
        odd[v] = !odd[v];
    }
    Syndrome((0..g.vertex_count()).filter(|&v| odd[v]).collect())
}

fn check_universe(g: &Graph, x: &EdgeSet) -> Result<(), DecodeError> {
    if x.universe() != g.edge_count() {
        return Err(DecodeError::UniverseMismatch {
            expected: g.edge_count(),
            found: x.universe(),
        });
    }
    Ok(())
}

/// Single-source shortest paths: distances and the edge used to enter each
/// vertex. Breadth-first for unit weights, Dijkstra otherwise.
fn shortest_paths(g: &Graph, source: usize, weights: Option<&[u64]>) -> (Vec<u64>, Vec<usize>) {
    let n = g.vertex_count();
    let mut dist = vec![u64::MAX; n];
    let mut via = vec![usize::MAX; n];
    dist[source] = 0;
    match weights {
        None => {
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                for (&w, &e) in g.neighbors(u).iter().zip(g.incident_edges(u)) {
                    if dist[w] == u64::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    }
                }
            }
        }
        Some(wt) => {
            let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for (&w, &e) in g.neighbors(u).iter().zip(g.incident_edges(u)) {
                    let nd = d + wt[e];
                    if nd < dist[w] {
                        dist[w] = nd;
                        via[w] = e;
                        heap.push(Reverse((nd, w)));
                    }
                }
            }
        }
    }
    (dist, via)
}

fn t_join(g: &Graph, t: &Syndrome, weights: Option<&[u64]>) -> Result<(u64, EdgeSet), DecodeError> {
    let m = g.edge_count();
    let terms = t.vertices();
    if terms.len() % 2 == 1 {
        return Err(DecodeError::OddSyndrome(terms.len()));
    }
    if terms.is_empty() {
        return Ok((0, EdgeSet::empty(m)));
    }
    if !g.is_connected() {
        return Err(DecodeError::Disconnected);
    }
    let trees: Vec<(Vec<u64>, Vec<usize>)> = terms.iter().map(|&s| shortest_paths(g, s, weights)).collect();
    let dist: Vec<Vec<u64>> = trees
        .iter()
        .map(|(d, _)| terms.iter().map(|&v| d[v]).collect())
        .collect();
    let pairs = min_weight_perfect_matching(&dist)?;
    let mut witness = EdgeSet::empty(m);
    for (i, j) in pairs {
        let via = &trees[i].1;
        let mut v = terms[j];
        while v != terms[i] {
            let e = via[v];
            witness.toggle(e);
            let (a, b) = g.edges()[e];
            v = if a == v { b } else { a };
        }
    }
    debug_assert_eq!(&syndrome(g, &witness), t);
    let weight = match weights {
        None => witness.len() as u64,
        Some(wt) => witness.iter().map(|e| wt[e]).sum(),
    };
    Ok((weight, witness))
}

/// Minimum-cardinality edge set whose odd-degree vertices are exactly `t`.
pub fn min_t_join(g: &Graph, t: &Syndrome) -> Result<(usize, EdgeSet), DecodeError> {
    let (w, set) = t_join(g, t, None)?;
    Ok((w as usize, set))
}

/// Minimum `T`-join under positive integer edge weights.
pub fn weighted_min_t_join(g: &Graph, t: &Syndrome, weights: &[u64]) -> Result<(u64, EdgeSet), DecodeError> {
    assert_eq!(weights.len(), g.edge_count());
    assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
    t_join(g, t, Some(weights))
}

/// Whether some circuit `C` has `|X ∩ C| >= beta |C|`, decided with one
/// weighted `T`-join instead of enumerating circuits.
///
/// With `beta = a/b`, give edge `e` the weight `a - b[e ∈ X]`; the event is
/// a circuit of weight `<= 0`. Scaling by `M = |E| + 1` and subtracting 1
/// per edge turns "`<= 0`" into "`< 0`" without creating new negative
/// circuits. A negative cycle exists iff the cheapest `T`-join for
/// `T = odd(X)` under the absolute weights undercuts `X` itself.
pub fn dense_circuit_event(g: &Graph, x: &EdgeSet, beta: Fraction) -> Result<bool, DecodeError> {
    check_universe(g, x)?;
    if !g.is_connected() {
        return Err(DecodeError::Disconnected);
    }
    let has_cycle = g.edge_count() >= g.vertex_count();
    if beta.numer() == 0 {
        return Ok(has_cycle);
    }
    if x.is_empty() || !has_cycle {
        return Ok(false);
    }
    let scale = g.edge_count() as u64 + 1;
    let (a, b) = (beta.numer(), beta.denom());
    let inside = scale * (b - a) + 1;
    let outside = scale * a - 1;
    let weights: Vec<u64> = (0..g.edge_count())
        .map(|e| if x.contains(e) { inside } else { outside })
        .collect();
    let (best, _) = weighted_min_t_join(g, &syndrome(g, x), &weights)?;
    Ok(best < inside * x.len() as u64)
}

/// Decoder verdict relative to the transmitted all-zero codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DecodeFlag {
    Correct,
    /// A codeword strictly closer than the transmitted one exists.
    Wrong,
    /// The transmitted codeword ties with another nearest codeword.
    Ambiguous,
}

impl DecodeFlag {
    /// Decoding error in the convention where ties count as failures.
    pub fn is_error(self) -> bool {
        self != DecodeFlag::Correct
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub flag: DecodeFlag,
    pub min_weight: usize,
    /// A minimum `T`-join: the decoder's estimate of the error pattern.
    pub witness: EdgeSet,
}

/// Decodes the received word `error` (the transmitted codeword is `∅`).
///
/// `WRONG` when the minimum `T`-join is lighter than `error`. Otherwise
/// `error` is itself optimal, and another optimum exists iff some circuit
/// carries exactly half of its edges in `error`, which
/// [`dense_circuit_event`] detects at `beta = 1/2`.
pub fn decode_outcome(g: &Graph, error: &EdgeSet) -> Result<DecodeOutcome, DecodeError> {
    check_universe(g, error)?;
    if g.edge_count() < g.vertex_count() {
        return Err(DecodeError::NoCycle);
    }
    let (min_weight, witness) = min_t_join(g, &syndrome(g, error))?;
    let flag = if min_weight < error.len() {
        DecodeFlag::Wrong
    } else if dense_circuit_event(g, error, Fraction::HALF)? {
        DecodeFlag::Ambiguous
    } else {
        DecodeFlag::Correct
    };
    Ok(DecodeOutcome {
        flag,
        min_weight,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, petersen, random_regular, random_with_degrees};
    use proptest::prelude::*;

    fn k4_set(pairs: &[(usize, usize)]) -> EdgeSet {
        let g = complete(4);
        EdgeSet::from_indices(6, pairs.iter().map(|&(u, v)| g.edge_index(u, v).unwrap()))
    }

    #[test]
    fn syndrome_examples() {
        let g = complete(4);
        assert!(syndrome(&g, &k4_set(&[(0, 1), (1, 2), (0, 2)])).is_empty());
        assert_eq!(syndrome(&g, &k4_set(&[(0, 1)])).vertices(), &[0, 1]);
        assert_eq!(syndrome(&g, &k4_set(&[(0, 1), (1, 2)])).vertices(), &[0, 2]);
    }

    #[test]
    fn t_join_examples() {
        let k4 = complete(4);
        assert_eq!(min_t_join(&k4, &Syndrome::default()).unwrap(), (0, EdgeSet::empty(6)));
        let (w, j) = min_t_join(&k4, &Syndrome::new(vec![0, 2])).unwrap();
        assert_eq!((w, j), (1, k4_set(&[(0, 2)])));

        let c5 = cycle(5);
        let (w, j) = min_t_join(&c5, &Syndrome::new(vec![0, 2])).unwrap();
        assert_eq!(w, 2);
        assert_eq!(j, EdgeSet::from_indices(5, [c5.edge_index(0, 1).unwrap(), c5.edge_index(1, 2).unwrap()]));
    }

    #[test]
    fn t_join_errors() {
        let disconnected = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(
            min_t_join(&disconnected, &Syndrome::new(vec![0, 3])),
            Err(DecodeError::Disconnected)
        );
        let odd = Syndrome(vec![0, 1, 2]);
        assert_eq!(min_t_join(&complete(4), &odd), Err(DecodeError::OddSyndrome(3)));
    }

    #[test]
    fn decode_examples() {
        let k4 = complete(4);
        assert_eq!(decode_outcome(&k4, &EdgeSet::empty(6)).unwrap().flag, DecodeFlag::Correct);
        let out = decode_outcome(&k4, &k4_set(&[(0, 1), (1, 2)])).unwrap();
        assert_eq!((out.flag, out.min_weight), (DecodeFlag::Wrong, 1));
        let out = decode_outcome(&k4, &k4_set(&[(0, 1)])).unwrap();
        assert_eq!((out.flag, out.min_weight), (DecodeFlag::Correct, 1));
        // two opposite edges of a four-cycle tie with the other two
        let out = decode_outcome(&k4, &k4_set(&[(0, 1), (2, 3)])).unwrap();
        assert_eq!(out.flag, DecodeFlag::Ambiguous);
        assert!(decode_outcome(&crate::graph::path(4), &EdgeSet::empty(3)).is_err());
    }

    #[test]
    fn large_terminal_sets_use_blossom() {
        let g = random_regular(60, 3, 9).unwrap();
        let x = EdgeSet::from_indices(g.edge_count(), (0..g.edge_count()).step_by(3));
        let t = syndrome(&g, &x);
        assert!(t.len() > DP_MAX_TERMINALS);
        let (w, j) = min_t_join(&g, &t).unwrap();
        assert_eq!(syndrome(&g, &j), t);
        assert!(w <= x.len());
    }

    #[test]
    fn dense_event_agrees_with_enumeration() {
        let graphs = [complete(4), complete(5), petersen(), random_with_degrees(&[2, 3, 3, 4, 2, 2, 3, 3], 4).unwrap()];
        let betas = ["1/2", "1/3", "2/3", "1", "1/4", "3/5"].map(|s| s.parse::<Fraction>().unwrap());
        let mut rng_state = 17u64;
        for g in &graphs {
            let circuits = CircuitList::enumerate(g).unwrap();
            for _ in 0..300 {
                rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let mask = rng_state >> 11;
                let x = EdgeSet::from_mask(g.edge_count(), mask & ((1 << g.edge_count()) - 1));
                for beta in betas {
                    assert_eq!(
                        dense_circuit_event(g, &x, beta).unwrap(),
                        circuits.any_dense(&x, beta),
                        "beta {beta}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn witness_has_requested_syndrome(seed in 0u64..500, mask in any::<u64>()) {
            let g = random_with_degrees(&[2, 3, 3, 4, 2, 3, 3, 4, 2, 2], seed % 50).unwrap();
            let x = EdgeSet::from_mask(g.edge_count(), mask & ((1u64 << g.edge_count()) - 1));
            let t = syndrome(&g, &x);
            let (w, j) = min_t_join(&g, &t).unwrap();
            prop_assert_eq!(syndrome(&g, &j), t);
            prop_assert_eq!(w, j.len());
            let (brute, _) = brute_force_nearest_cycle(&g, &x).unwrap();
            prop_assert_eq!(w, brute);
        }
    }
}
