//! Minimum-weight perfect matching on a complete graph given by a
//! symmetric distance matrix.

use mwmatching::{Matching, SENTINEL};

use super::DecodeError;

/// Terminal counts up to this size use the exact subset dynamic program;
/// larger ones go to the blossom algorithm.
pub const DP_MAX_TERMINALS: usize = 12;

/// Pairs `(i, j)` with `i < j` of a minimum-weight perfect matching.
pub fn min_weight_perfect_matching(dist: &[Vec<u64>]) -> Result<Vec<(usize, usize)>, DecodeError> {
    let k = dist.len();
    if k % 2 == 1 {
        return Err(DecodeError::OddSyndrome(k));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    if k <= DP_MAX_TERMINALS {
        Ok(subset_dp(dist))
    } else {
        blossom(dist)
    }
}

/// Exact DP over subsets: the lowest unmatched terminal is paired with each
/// candidate in increasing index order, keeping the first strict minimum.
pub fn subset_dp(dist: &[Vec<u64>]) -> Vec<(usize, usize)> {
    let k = dist.len();
    let full = (1usize << k) - 1;
    let mut cost = vec![u64::MAX; 1 << k];
    let mut partner = vec![0u8; 1 << k];
    cost[0] = 0;
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = u64::MAX;
        let mut best_j = 0;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let sub = cost[rest & !(1 << j)];
            let c = sub.saturating_add(dist[i][j]);
            if c < best {
                best = c;
                best_j = j;
            }
        }
        cost[mask] = best;
        partner[mask] = best_j as u8;
    }
    let mut pairs = Vec::with_capacity(k / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = partner[mask] as usize;
        pairs.push((i, j));
        mask &= !(1 << i) & !(1 << j);
    }
    pairs
}

fn blossom(dist: &[Vec<u64>]) -> Result<Vec<(usize, usize)>, DecodeError> {
    let k = dist.len();
    let max = dist.iter().flatten().copied().max().unwrap_or(0);
    // the dual variables of the blossom solver reach about twice the
    // largest weight, which must stay inside i32
    if max >= (1 << 29) {
        return Err(DecodeError::WeightOverflow(max));
    }
    let top = max as i32 + 1;
    let mut edges = Vec::with_capacity(k * (k - 1) / 2);
    for (i, row) in dist.iter().enumerate() {
        for (j, &d) in row.iter().enumerate().skip(i + 1) {
            edges.push((i, j, top - d as i32));
        }
    }
    let mate = Matching::new(edges).max_cardinality().solve();
    let mut pairs = Vec::with_capacity(k / 2);
    for (i, &j) in mate.iter().enumerate() {
        assert!(j != SENTINEL, "complete graph on an even vertex set has a perfect matching");
        if i < j {
            pairs.push((i, j));
        }
    }
    Ok(pairs)
}
