//! Deterministic graph families and seeded random generators.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError, MAX_RESAMPLES};

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::new(n, edges).expect("complete graph is simple")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner)).expect("Petersen graph is simple")
}

/// Uniformly-seeded simple connected `d`-regular graph on `n` vertices.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if d == 0 || d >= n {
        return Err(GraphError::Infeasible(format!("need 0 < d < n, got n={n}, d={d}")));
    }
    if n * d % 2 == 1 {
        return Err(GraphError::Infeasible(format!("n*d = {} is odd", n * d)));
    }
    realise(&vec![d; n], seed)
}

/// Simple connected graph with the given degree sequence (vertex `i` gets
/// `degrees[i]`). Every entry must be at least 2.
pub fn random_with_degrees(degrees: &[usize], seed: u64) -> Result<Graph, GraphError> {
    if let Some(&d) = degrees.iter().find(|&&d| d < 2) {
        return Err(GraphError::Infeasible(format!("degree {d} < 2 in profile")));
    }
    if degrees.iter().sum::<usize>() % 2 == 1 {
        return Err(GraphError::Infeasible("degree sum is odd".into()));
    }
    if !is_graphical(degrees) {
        return Err(GraphError::Infeasible(format!("{degrees:?} is not graphical")));
    }
    realise(degrees, seed)
}

/// Member of the family on `n` vertices whose degree multiset repeats
/// `profile` `n / profile.len()` times. Vertex `i` gets `profile[i % len]`.
pub fn irregular_family(n: usize, profile: &[usize], seed: u64) -> Result<Graph, GraphError> {
    if profile.is_empty() || !n.is_multiple_of(profile.len()) {
        return Err(GraphError::Infeasible(format!(
            "n = {n} is not a multiple of the profile length {}",
            profile.len()
        )));
    }
    let degrees: Vec<usize> = (0..n).map(|i| profile[i % profile.len()]).collect();
    random_with_degrees(&degrees, seed)
}

/// Erdős–Gallai test.
pub(crate) fn is_graphical(degrees: &[usize]) -> bool {
    let mut d: Vec<usize> = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let n = d.len();
    if d.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    let mut prefix = 0;
    for k in 1..=n {
        prefix += d[k - 1];
        let tail: usize = d[k..].iter().map(|&x| x.min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

fn realise(degrees: &[usize], seed: u64) -> Result<Graph, GraphError> {
    let n = degrees.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESAMPLES {
        if let Some(edges) = pair_stubs(degrees, &mut rng) {
            let g = Graph::new(n, edges).expect("pairing avoids loops and repeats");
            if g.is_connected() {
                return Ok(g);
            }
        }
    }
    Err(GraphError::RejectionBudget(MAX_RESAMPLES))
}

/// One pass of the configuration model that refuses loops and repeated
/// edges as pairs are drawn. Returns `None` when the remaining stubs admit
/// no legal pair, in which case the caller restarts.
fn pair_stubs(degrees: &[usize], rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    let ok = |u: usize, v: usize, present: &HashSet<(usize, usize)>| {
        u != v && !present.contains(&(u.min(v), u.max(v)))
    };
    while !stubs.is_empty() {
        let r = stubs.len();
        let mut pick = None;
        for _ in 0..64 {
            let i = rng.gen_range(0..r);
            let j = rng.gen_range(0..r);
            if i != j && ok(stubs[i], stubs[j], &present) {
                pick = Some((i, j));
                break;
            }
        }
        if pick.is_none() {
            let legal: Vec<(usize, usize)> = (0..r)
                .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
                .filter(|&(i, j)| ok(stubs[i], stubs[j], &present))
                .collect();
            if legal.is_empty() {
                return None;
            }
            pick = Some(legal[rng.gen_range(0..legal.len())]);
        }
        let (i, j) = pick.unwrap();
        let (u, v) = (stubs[i], stubs[j]);
        present.insert((u.min(v), u.max(v)));
        edges.push((u, v));
        let (hi, lo) = (i.max(j), i.min(j));
        stubs.swap_remove(hi);
        stubs.swap_remove(lo);
    }
    Some(edges)
}
