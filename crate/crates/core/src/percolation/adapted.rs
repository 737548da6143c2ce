//! Density conditions on 0/1 sequences read along a path.
//!
//! A sequence is α-adapted when every prefix of length `i` has at least
//! `αi` ones. It is (α, t)-adapted when, cutting it into consecutive blocks
//! of lengths `t_1, t_2, ...` (the last one possibly partial), every block
//! is α-adapted on its own.

use crate::fraction::Fraction;

use super::PercolationError;

/// Block lengths `t_1, t_2, ...` for (α, t)-adapted paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSchedule {
    /// `t_i = max(1, ⌊√i⌋)`: nondecreasing, divergent, and
    /// `t_{n+1} / T_n -> 0`.
    Sqrt,
    /// Every block has the same length. Not slow; handy in tests.
    Constant(usize),
    /// Explicit prefix; the last entry repeats forever.
    Explicit(Vec<usize>),
}

impl BlockSchedule {
    /// `t_i` for `i >= 1`.
    pub fn term(&self, i: usize) -> usize {
        assert!(i >= 1, "block indices start at 1");
        match self {
            BlockSchedule::Sqrt => i.isqrt().max(1),
            BlockSchedule::Constant(t) => *t,
            BlockSchedule::Explicit(v) => v[(i - 1).min(v.len() - 1)],
        }
    }

    /// `T_l = t_1 + ... + t_l`, with `T_0 = 0`.
    pub fn partial_sum(&self, l: usize) -> usize {
        (1..=l).map(|i| self.term(i)).sum()
    }

    /// Smallest `l` with `T_l >= n`, together with `T_l`.
    pub fn cover(&self, n: usize) -> (usize, usize) {
        let (mut l, mut total) = (0, 0);
        while total < n {
            l += 1;
            total += self.term(l);
        }
        (l, total)
    }

    /// For each edge position `1..=len`, its offset within its block
    /// (1-based). Offset 1 marks the start of a block.
    pub fn offsets(&self, len: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(len);
        let mut block = 1;
        while out.len() < len {
            let t = self.term(block);
            out.extend((1..=t).take(len - out.len()));
            block += 1;
        }
        out
    }
}

/// The schedule `t_i = max(1, ⌊√i⌋)`.
pub fn default_slow_sequence() -> BlockSchedule {
    BlockSchedule::Sqrt
}

/// Validates a schedule's slowness on the prefix `1..=n`: nondecreasing,
/// positive, and returns `t_{n+1} / T_n`.
pub fn slowness_ratio(schedule: &BlockSchedule, n: usize) -> Option<f64> {
    let mut total = 0usize;
    let mut prev = 0usize;
    for i in 1..=n {
        let t = schedule.term(i);
        if t == 0 || t < prev {
            return None;
        }
        prev = t;
        total += t;
    }
    Some(schedule.term(n + 1) as f64 / total as f64)
}

/// Threshold `α` plus block schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedSpec {
    pub alpha: Fraction,
    pub schedule: BlockSchedule,
}

impl AdaptedSpec {
    pub fn new(alpha: Fraction, schedule: BlockSchedule) -> Result<Self, PercolationError> {
        if alpha.numer() == 0 {
            return Err(PercolationError::BadAlpha(alpha));
        }
        Ok(AdaptedSpec { alpha, schedule })
    }
}

pub fn is_alpha_adapted(bits: &[bool], alpha: Fraction) -> bool {
    let mut ones = 0u64;
    bits.iter().enumerate().all(|(i, &b)| {
        ones += b as u64;
        alpha.at_least(ones, i as u64 + 1)
    })
}

pub fn is_alpha_t_adapted(bits: &[bool], spec: &AdaptedSpec) -> bool {
    let mut rest = bits;
    let mut block = 1;
    while !rest.is_empty() {
        let t = spec.schedule.term(block).min(rest.len());
        if !is_alpha_adapted(&rest[..t], spec.alpha) {
            return false;
        }
        rest = &rest[t..];
        block += 1;
    }
    true
}

/// Probability that a path of `n` edges, each present independently with
/// probability `p`, is α-adapted. Exact dynamic program over the number of
/// present edges, discarding prefixes that fall below `⌈αi⌉`.
pub fn alpha_adapted_probability(n: usize, alpha: Fraction, p: f64) -> Result<f64, PercolationError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PercolationError::BadProbability(p));
    }
    let mut dist = vec![0.0; n + 1];
    dist[0] = 1.0;
    for i in 1..=n {
        for c in (0..=i).rev() {
            let stay = if c < i { dist[c] * (1.0 - p) } else { 0.0 };
            let step = if c > 0 { dist[c - 1] * p } else { 0.0 };
            dist[c] = stay + step;
        }
        let need = alpha.ceil_mul(i as u64) as usize;
        dist[..need.min(i + 1)].iter_mut().for_each(|x| *x = 0.0);
    }
    Ok(dist.iter().sum())
}

/// Number of α-adapted 0/1 strings of length `n`, by number of ones.
/// Exact; `n <= 62`.
pub fn adapted_counts(n: usize, alpha: Fraction) -> Vec<u64> {
    assert!(n <= 62, "counts overflow beyond n = 62");
    let mut count = vec![0u64; n + 1];
    count[0] = 1;
    for i in 1..=n {
        for c in (1..=i).rev() {
            count[c] += count[c - 1];
        }
        let need = alpha.ceil_mul(i as u64) as usize;
        count[..need.min(i + 1)].iter_mut().for_each(|x| *x = 0);
    }
    count
}

/// A rotation `l` such that `bits[l..] ++ bits[..l]` is α-adapted, given at
/// least `αn` ones overall.
///
/// Scores each present bit `1 - α` and each absent bit `-α` (scaled by the
/// denominator of `α` to stay integral) and returns the first `l` in
/// `0..n` minimising the prefix score `S(0, l)`. Every prefix of the
/// rotation then has nonnegative score.
pub fn rotation_witness(bits: &[bool], alpha: Fraction) -> Result<usize, PercolationError> {
    let n = bits.len();
    let ones = bits.iter().filter(|&&b| b).count() as u64;
    if !alpha.at_least(ones, n as u64) || n == 0 {
        return Err(PercolationError::RotationPrecondition {
            ones: ones as usize,
            len: n,
        });
    }
    let up = (alpha.denom() - alpha.numer()) as i64;
    let down = alpha.numer() as i64;
    let mut score = 0i64;
    let mut best = (0i64, 0usize);
    for (l, &b) in bits.iter().enumerate().take(n - 1) {
        score += if b { up } else { -down };
        if score < best.0 {
            best = (score, l + 1);
        }
    }
    Ok(best.1)
}
