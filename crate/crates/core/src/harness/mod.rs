//! Monte Carlo estimation of decoding-error rates and `f_p^β(G)`, p-sweeps
//! with bound columns, and covering-tree reach batches.
//!
//! Trial `i` on graph `g` with master seed `s` draws from its own ChaCha8
//! stream keyed by `(s, graph_id(g))` with stream number `i`, so results do
//! not depend on how trials are spread over threads.

mod output;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bounds::{theta_from_lambda, theta_main, BoundsError};
use crate::decoder::{decode_outcome, dense_circuit_event, CircuitList, DecodeError, DecodeFlag, EdgeSet};
use crate::fraction::Fraction;
use crate::graph::{format_edge_list, Girth, Graph, GraphError};
use crate::nonbacktracking::{NbOperator, WalkError};
use crate::percolation::{root_arc_choice, AdaptedSpec, CoveringTree, PercolationError, ReachExperiment, UnitFlow};

pub use output::{write_csv, write_report_json, write_sweep_json, write_tree_json, CSV_COLUMNS, SCHEMA};

pub const DEFAULT_TRIALS: usize = 10_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("probability {0} outside the allowed range")]
    BadProbability(f64),
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("p grid must be strictly increasing inside (0, 1/2)")]
    BadGrid,
    #[error("could not start a pool of {threads} threads: {message}")]
    ThreadPool { threads: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Percolation(#[from] PercolationError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Content hash of the canonical edge list: `g-` plus 16 hex digits.
pub fn graph_id(g: &Graph) -> String {
    let digest = Sha256::digest(format_edge_list(g).as_bytes());
    let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    format!("g-{hex}")
}

/// The random stream of one trial.
pub fn rng_for(master_seed: u64, graph_id: &str, trial: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update(graph_id.as_bytes());
    let key: [u8; 32] = hasher.finalize().into();
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Each of `edge_count` edges independently with probability `p`.
pub fn sample_p_random_subset<R: Rng + ?Sized>(edge_count: usize, p: f64, rng: &mut R) -> EdgeSet {
    let mut x = EdgeSet::empty(edge_count);
    for e in 0..edge_count {
        if rng.gen_bool(p) {
            x.insert(e);
        }
    }
    x
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::ThreadPool {
            threads,
            message: e.to_string(),
        })?;
    Ok(pool.install(f))
}

/// How a trial's error pattern is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Minimum `T`-join decoding; ties are reported as ambiguous.
    Decode,
    /// Scan of all circuits for one with half its edges in the error.
    CircuitOracle,
}

/// Per-graph quantities shared by every row of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSummary {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub rate: f64,
    pub girth: Girth,
    /// `λ*` of the 2-core. Pendant trees carry no codeword edges, so the
    /// 2-core has the same cycle code up to always-zero coordinates.
    pub lambda_star: f64,
    pub theta_main: f64,
    pub theta_technical: f64,
}

impl GraphSummary {
    /// Requires a connected graph with at least one circuit.
    pub fn new(g: &Graph) -> Result<Self, HarnessError> {
        let params = g.code_parameters()?;
        if params.k_code == 0 {
            return Err(DecodeError::NoCycle.into());
        }
        let core = g.strip_degree_one();
        let lambda_star = NbOperator::new(&core)?.perron_default()?.lambda_star;
        Ok(GraphSummary {
            graph_id: graph_id(g),
            n: g.vertex_count(),
            m: g.edge_count(),
            rate: params.rate,
            girth: params.girth,
            lambda_star,
            theta_main: theta_main(params.rate)?,
            theta_technical: theta_from_lambda(lambda_star.max(1.0))?,
        })
    }
}

/// One row of simulation output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub rate: f64,
    #[serde(serialize_with = "output::display")]
    pub girth: Girth,
    pub lambda_star: f64,
    pub p: f64,
    #[serde(serialize_with = "output::display")]
    pub beta: Fraction,
    pub trials: usize,
    pub wrong: usize,
    pub ambiguous: usize,
    pub error_rate: f64,
    pub stderr: f64,
    pub theta_main: f64,
    pub theta_technical: f64,
    pub seed: u64,
    /// Wall-clock time; the only column outside the determinism contract.
    pub elapsed_ms: u64,
}

impl TrialReport {
    fn new(summary: &GraphSummary, p: f64, beta: Fraction, seed: u64, flags: &[DecodeFlag], started: Instant) -> Self {
        let trials = flags.len();
        let wrong = flags.iter().filter(|&&f| f == DecodeFlag::Wrong).count();
        let ambiguous = flags.iter().filter(|&&f| f == DecodeFlag::Ambiguous).count();
        let error_rate = (wrong + ambiguous) as f64 / trials as f64;
        TrialReport {
            graph_id: summary.graph_id.clone(),
            n: summary.n,
            m: summary.m,
            rate: summary.rate,
            girth: summary.girth,
            lambda_star: summary.lambda_star,
            p,
            beta,
            trials,
            wrong,
            ambiguous,
            error_rate,
            stderr: binomial_stderr(error_rate, trials),
            theta_main: summary.theta_main,
            theta_technical: summary.theta_technical,
            seed,
            elapsed_ms: started.elapsed().as_millis() as u64,
        }
    }
}

/// `√(p̂(1 - p̂)/trials)`.
pub fn binomial_stderr(rate: f64, trials: usize) -> f64 {
    (rate * (1.0 - rate) / trials as f64).sqrt()
}

fn check_run(p: f64, trials: usize) -> Result<(), HarnessError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(HarnessError::BadProbability(p));
    }
    if trials == 0 {
        return Err(HarnessError::ZeroTrials);
    }
    Ok(())
}

/// Per-trial verdicts, in trial order, on the current rayon pool.
///
/// With [`Method::CircuitOracle`] a trial is `WRONG` when some circuit has
/// at least half its edges in the error; the oracle cannot separate ties.
pub fn trial_flags(g: &Graph, p: f64, trials: usize, seed: u64, method: Method) -> Result<Vec<DecodeFlag>, HarnessError> {
    check_run(p, trials)?;
    let id = graph_id(g);
    let m = g.edge_count();
    match method {
        Method::Decode => {
            if !g.is_connected() {
                return Err(DecodeError::Disconnected.into());
            }
            (0..trials as u64)
                .into_par_iter()
                .map(|i| {
                    let x = sample_p_random_subset(m, p, &mut rng_for(seed, &id, i));
                    Ok(decode_outcome(g, &x)?.flag)
                })
                .collect()
        }
        Method::CircuitOracle => {
            let circuits = CircuitList::enumerate(g)?;
            if circuits.circuits().is_empty() {
                return Err(DecodeError::NoCycle.into());
            }
            Ok((0..trials as u64)
                .into_par_iter()
                .map(|i| {
                    let x = sample_p_random_subset(m, p, &mut rng_for(seed, &id, i));
                    if circuits.any_dense(&x, Fraction::HALF) {
                        DecodeFlag::Wrong
                    } else {
                        DecodeFlag::Correct
                    }
                })
                .collect())
        }
    }
}

/// Decoding-error rate of the cycle code of `g` at bit-error rate `p`.
pub fn estimate_error_rate(g: &Graph, p: f64, trials: usize, seed: u64, method: Method) -> Result<TrialReport, HarnessError> {
    let started = Instant::now();
    let summary = GraphSummary::new(g)?;
    let flags = trial_flags(g, p, trials, seed, method)?;
    Ok(TrialReport::new(&summary, p, Fraction::HALF, seed, &flags, started))
}

/// Monte Carlo estimate of `f_p^β(G)`: the chance that a `p`-random edge
/// set holds at least a `β` fraction of some circuit. Hits go to `wrong`.
pub fn estimate_f_beta(g: &Graph, p: f64, beta: Fraction, trials: usize, seed: u64) -> Result<TrialReport, HarnessError> {
    let started = Instant::now();
    let summary = GraphSummary::new(g)?;
    let flags = f_beta_flags(g, &summary.graph_id, p, beta, trials, seed)?;
    Ok(TrialReport::new(&summary, p, beta, seed, &flags, started))
}

fn f_beta_flags(g: &Graph, id: &str, p: f64, beta: Fraction, trials: usize, seed: u64) -> Result<Vec<DecodeFlag>, HarnessError> {
    check_run(p, trials)?;
    let m = g.edge_count();
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let x = sample_p_random_subset(m, p, &mut rng_for(seed, id, i));
            Ok(if dense_circuit_event(g, &x, beta)? {
                DecodeFlag::Wrong
            } else {
                DecodeFlag::Correct
            })
        })
        .collect()
}

/// Convention for reading a threshold off one graph's sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdRule {
    /// Error-rate floor `ε0`.
    pub floor: f64,
    /// Required margin above the floor, in standard errors.
    pub sigmas: f64,
}

impl Default for ThresholdRule {
    fn default() -> Self {
        ThresholdRule { floor: 0.05, sigmas: 3.0 }
    }
}

impl ThresholdRule {
    /// First grid point whose rate clears the floor by `sigmas` standard
    /// errors, moved back by linear interpolation to where the rate line
    /// from the previous point crosses the floor. `None` if no point
    /// clears it.
    pub fn locate(&self, reports: &[TrialReport]) -> Option<f64> {
        let i = reports
            .iter()
            .position(|r| r.error_rate - self.floor >= self.sigmas * r.stderr)?;
        if i == 0 {
            return Some(reports[0].p);
        }
        let (a, b) = (&reports[i - 1], &reports[i]);
        if a.error_rate >= self.floor || b.error_rate <= a.error_rate {
            return Some(a.p);
        }
        let t = (self.floor - a.error_rate) / (b.error_rate - a.error_rate);
        Some(a.p + t * (b.p - a.p))
    }
}

/// A p-grid of [`estimate_f_beta`] runs on one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub reports: Vec<TrialReport>,
    pub theta_main: f64,
    pub theta_technical: f64,
    pub rule: ThresholdRule,
    pub empirical_threshold: Option<f64>,
    /// Every consecutive pair satisfies `rate[i+1] >= rate[i] - 3σ`, with
    /// `σ` the combined standard error.
    pub monotone: bool,
}

/// All grid points share one seed, so trial `i` at every `p` uses the same
/// stream; the estimates are then coupled and monotone in `p` whenever the
/// event is.
pub fn p_sweep(g: &Graph, grid: &[f64], beta: Fraction, trials: usize, seed: u64) -> Result<SweepResult, HarnessError> {
    p_sweep_with(g, grid, beta, trials, seed, ThresholdRule::default())
}

pub fn p_sweep_with(
    g: &Graph,
    grid: &[f64],
    beta: Fraction,
    trials: usize,
    seed: u64,
    rule: ThresholdRule,
) -> Result<SweepResult, HarnessError> {
    let in_range = grid.iter().all(|&p| p > 0.0 && p < 0.5);
    if grid.is_empty() || !in_range || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HarnessError::BadGrid);
    }
    let summary = GraphSummary::new(g)?;
    let mut reports = Vec::with_capacity(grid.len());
    for &p in grid {
        let started = Instant::now();
        let flags = f_beta_flags(g, &summary.graph_id, p, beta, trials, seed)?;
        reports.push(TrialReport::new(&summary, p, beta, seed, &flags, started));
    }
    let monotone = reports.windows(2).all(|w| {
        let sigma = (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        w[1].error_rate >= w[0].error_rate - 3.0 * sigma
    });
    Ok(SweepResult {
        empirical_threshold: rule.locate(&reports),
        theta_main: summary.theta_main,
        theta_technical: summary.theta_technical,
        rule,
        monotone,
        reports,
    })
}

/// Summary of a batch of covering-tree reach experiments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeReport {
    pub graph_id: String,
    pub root_arc: usize,
    pub lambda_star: f64,
    #[serde(serialize_with = "output::display")]
    pub alpha: Fraction,
    pub p: f64,
    pub n: usize,
    pub q_depth: usize,
    pub normaliser: f64,
    pub trials: usize,
    pub reached: usize,
    pub reach_rate: f64,
    pub reach_stderr: f64,
    pub q_mean: f64,
    pub q_stderr: f64,
    pub q_second_moment: f64,
    pub max_flow_violation: f64,
    pub seed: u64,
    pub elapsed_ms: u64,
}

/// Reach experiments on `Γ_e(core)` for the arc `e` maximising the Perron
/// vector, where `core` is the 2-core of `g`. The tree is materialised to
/// the depth where `Q` is evaluated.
pub fn tree_batch(
    g: &Graph,
    spec: &AdaptedSpec,
    p: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<TreeReport, HarnessError> {
    let started = Instant::now();
    check_run(p, trials)?;
    let core = g.strip_degree_one();
    let op = NbOperator::new(&core)?;
    let perron = op.perron_default()?;
    let root = root_arc_choice(&perron);
    let (_, q_depth) = spec.schedule.cover(n);
    let tree = CoveringTree::build(&op, root, q_depth)?;
    let flow = UnitFlow::new(&tree, &perron)?;
    let exp = ReachExperiment::new(&tree, &flow, spec, p, n)?;
    let id = graph_id(g);
    let outcomes: Vec<_> = (0..trials as u64)
        .into_par_iter()
        .map(|i| exp.run(&mut rng_for(seed, &id, i)))
        .collect();
    let reached = outcomes.iter().filter(|o| o.reached).count();
    let reach_rate = reached as f64 / trials as f64;
    let q_mean = outcomes.iter().map(|o| o.q_value).sum::<f64>() / trials as f64;
    let q_second_moment = outcomes.iter().map(|o| o.q_value * o.q_value).sum::<f64>() / trials as f64;
    let q_var = if trials > 1 {
        outcomes.iter().map(|o| (o.q_value - q_mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    Ok(TreeReport {
        graph_id: id,
        root_arc: root,
        lambda_star: perron.lambda_star,
        alpha: spec.alpha,
        p,
        n,
        q_depth: exp.q_depth(),
        normaliser: exp.normaliser(),
        trials,
        reached,
        reach_rate,
        reach_stderr: binomial_stderr(reach_rate, trials),
        q_mean,
        q_stderr: (q_var / trials as f64).sqrt(),
        q_second_moment,
        max_flow_violation: flow.max_violation,
        seed,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}
