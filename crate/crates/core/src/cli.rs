//! Command-line front end. [`run`] parses arguments and returns the process
//! exit code: 0 on success, 1 on runtime errors, 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{curve, Formula};
use crate::fraction::Fraction;
use crate::graph::{self, format_edge_list, read_edge_list, Graph};
use crate::harness::{
    self, estimate_error_rate, estimate_f_beta, p_sweep, tree_batch, with_threads, write_csv, write_report_json,
    write_sweep_json, write_tree_json, Method,
};
use crate::nonbacktracking::{big_lambda, lambda_lower_bound, NbOperator};
use crate::percolation::{default_slow_sequence, AdaptedSpec};

#[derive(Debug, Parser)]
#[command(name = "cyclecode", version, about = "Cycle codes of graphs: decoding, spectra and threshold bounds")]
pub struct Cli {
    /// Master seed; required by every command that samples.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials per grid point.
    #[arg(long, global = true, default_value_t = harness::DEFAULT_TRIALS)]
    trials: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; defaults to the extension of --out, else csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a graph as an edge list.
    Gen(GenArgs),
    /// Code parameters of a graph's cycle code.
    Params { graph: PathBuf },
    /// Non-backtracking spectrum of a graph's 2-core.
    Spectrum { graph: PathBuf },
    /// Tabulate a threshold bound over a grid of rates.
    Bounds {
        #[arg(long, default_value = "main")]
        formula: Formula,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long)]
        grid: String,
    },
    /// Estimate decoding-error rates or f_p^beta at one or more p.
    Simulate {
        graph: PathBuf,
        /// Bit-error rates, comma-separated; each must be below 1/2.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// Circuit fraction; when given, estimates f_p^beta instead of decoding.
        #[arg(long)]
        beta: Option<Fraction>,
        #[arg(long, value_enum, default_value = "decode")]
        method: Method,
    },
    /// Sweep p over a grid and locate an empirical threshold.
    Sweep {
        graph: PathBuf,
        /// `start:stop:step` or a comma-separated list inside (0, 1/2).
        #[arg(long)]
        grid: String,
        #[arg(long, default_value = "1/2")]
        beta: Fraction,
    },
    /// Reach experiments on a covering tree of the graph's 2-core.
    Tree {
        graph: PathBuf,
        #[arg(long)]
        alpha: Fraction,
        #[arg(long)]
        p: f64,
        /// Path length to reach.
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
#[command(group(
    clap::ArgGroup::new("family")
        .required(true)
        .args(["regular", "degrees", "complete", "cycle", "petersen"])
))]
struct GenArgs {
    /// Random D-regular graph (needs --n).
    #[arg(long, value_name = "D", requires = "n")]
    regular: Option<usize>,
    /// Random graph with this comma-separated degree sequence.
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    /// Complete graph on N vertices.
    #[arg(long, value_name = "N")]
    complete: Option<usize>,
    /// Cycle on N vertices.
    #[arg(long, value_name = "N")]
    cycle: Option<usize>,
    /// The Petersen graph.
    #[arg(long)]
    petersen: bool,
    /// Vertex count for --regular.
    #[arg(long)]
    n: Option<usize>,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    if let Some(message) = usage_problem(&cli) {
        let _ = writeln!(stderr, "error: {message}\n\nFor more information, try '--help'.");
        return 2;
    }
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}

fn usage_problem(cli: &Cli) -> Option<String> {
    let stochastic = match &cli.command {
        Command::Gen(g) => g.regular.is_some() || g.degrees.is_some(),
        Command::Simulate { .. } | Command::Sweep { .. } | Command::Tree { .. } => true,
        _ => false,
    };
    if stochastic && cli.seed.is_none() {
        return Some("this command samples at random and needs --seed".into());
    }
    if let Command::Simulate { p, .. } = &cli.command {
        if let Some(bad) = p.iter().find(|&&p| !(0.0..0.5).contains(&p)) {
            return Some(format!("--p {bad} is outside [0, 1/2)"));
        }
    }
    None
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let seed = cli.seed.unwrap_or_default();
    let format = cli.format.unwrap_or_else(|| match &cli.out {
        Some(path) if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => Format::Json,
        _ => Format::Csv,
    });
    let mut sink = Sink::open(cli.out.as_deref(), stdout)?;
    let out = &mut sink as &mut dyn Write;
    match &cli.command {
        Command::Gen(args) => {
            let g = generate(args, seed)?;
            out.write_all(format_edge_list(&g).as_bytes())?;
        }
        Command::Params { graph } => {
            let g = load(graph)?;
            let params = g.code_parameters()?;
            let report = ParamsReport {
                vertices: g.vertex_count(),
                edges: params.n_code,
                dimension: params.k_code,
                rate: params.rate,
                girth: params.girth.to_string(),
                average_degree: g.average_degree(),
            };
            emit_record(out, format, &report)?;
        }
        Command::Spectrum { graph } => {
            let g = load(graph)?;
            if !g.is_connected() {
                bail!("graph is not connected");
            }
            let core = g.strip_degree_one();
            if core.edge_count() == 0 {
                bail!("graph has no circuit, so its 2-core is empty");
            }
            let perron = NbOperator::new(&core)?.perron_default()?;
            let mu = core.average_degree();
            let report = SpectrumReport {
                core_vertices: core.vertex_count(),
                core_edges: core.edge_count(),
                lambda_star: perron.lambda_star,
                big_lambda: big_lambda(&core)?,
                average_degree: mu,
                lower_bound: lambda_lower_bound(mu)?,
                collatz_lower: perron.collatz_wielandt.0,
                collatz_upper: perron.collatz_wielandt.1,
                iterations: perron.iterations,
            };
            emit_record(out, format, &report)?;
        }
        Command::Bounds { formula, grid } => {
            let rates = parse_grid(grid)?;
            let c = curve(*formula, &rates)?;
            let rows: Vec<BoundRow> = c
                .samples
                .iter()
                .map(|&(rate, theta)| BoundRow {
                    formula: *formula,
                    rate,
                    theta,
                })
                .collect();
            match format {
                Format::Csv => write_csv(&mut *out, &rows, &[])?,
                Format::Json => serde_json::to_writer_pretty(&mut *out, &rows)?,
            }
        }
        Command::Simulate { graph, p, beta, method } => {
            let g = load(graph)?;
            let reports = with_threads(cli.threads, || {
                p.iter()
                    .map(|&p| match beta {
                        Some(beta) => estimate_f_beta(&g, p, *beta, cli.trials, seed),
                        None => estimate_error_rate(&g, p, cli.trials, seed, *method),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })??;
            match format {
                Format::Csv => write_csv(&mut *out, &reports, &[])?,
                Format::Json => write_report_json(&mut *out, &reports)?,
            }
        }
        Command::Sweep { graph, grid, beta } => {
            let g = load(graph)?;
            let grid = parse_grid(grid)?;
            let sweep = with_threads(cli.threads, || p_sweep(&g, &grid, *beta, cli.trials, seed))??;
            match format {
                Format::Csv => {
                    let threshold = sweep
                        .empirical_threshold
                        .map_or_else(|| "none".to_string(), |t| t.to_string());
                    let notes = [
                        ("theta_main", sweep.theta_main.to_string()),
                        ("theta_technical", sweep.theta_technical.to_string()),
                        ("empirical_threshold", threshold),
                        (
                            "threshold_rule",
                            format!(
                                "first p with error_rate - {} >= {} stderr, interpolated linearly; a per-graph proxy, not an asymptotic threshold",
                                sweep.rule.floor, sweep.rule.sigmas
                            ),
                        ),
                        ("monotone", sweep.monotone.to_string()),
                    ];
                    write_csv(&mut *out, &sweep.reports, &notes)?;
                }
                Format::Json => write_sweep_json(&mut *out, &sweep)?,
            }
        }
        Command::Tree { graph, alpha, p, n } => {
            let g = load(graph)?;
            let spec = AdaptedSpec::new(*alpha, default_slow_sequence())?;
            let report = with_threads(cli.threads, || tree_batch(&g, &spec, *p, *n, cli.trials, seed))??;
            match format {
                Format::Csv => write_csv(&mut *out, std::slice::from_ref(&report), &[])?,
                Format::Json => write_tree_json(&mut *out, &report)?,
            }
        }
    }
    sink.finish()
}

fn generate(args: &GenArgs, seed: u64) -> anyhow::Result<Graph> {
    Ok(if let Some(d) = args.regular {
        let n = args.n.context("--regular needs --n")?;
        graph::random_regular(n, d, seed)?
    } else if let Some(degrees) = &args.degrees {
        graph::random_with_degrees(degrees, seed)?
    } else if let Some(n) = args.complete {
        graph::complete(n)
    } else if let Some(n) = args.cycle {
        if n < 3 {
            bail!("a cycle needs at least 3 vertices");
        }
        graph::cycle(n)
    } else {
        graph::petersen()
    })
}

fn load(path: &Path) -> anyhow::Result<Graph> {
    read_edge_list(path).with_context(|| format!("reading {}", path.display()))
}

/// `start:stop:step` (inclusive of `stop` up to rounding) or `a,b,c`.
pub fn parse_grid(text: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let [start, stop, step] = [parts[0], parts[1], parts[2]].map(|s| s.trim().parse::<f64>());
        let (start, stop, step) = (start?, stop?, step?);
        let ordered = step > 0.0 && stop >= start;
        if !ordered {
            bail!("grid {text:?} needs step > 0 and stop >= start");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // round away the representation noise of repeated addition
        return Ok((0..count)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect());
    }
    if parts.len() != 1 {
        bail!("grid {text:?} is neither start:stop:step nor a comma list");
    }
    text.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad grid value {s:?}")))
        .collect()
}

fn emit_record<T: Serialize>(out: &mut dyn Write, format: Format, record: &T) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, record)?;
            writeln!(out)?;
        }
        Format::Csv => {
            // key: value lines read better than a one-row table here
            let value = serde_json::to_value(record)?;
            for (key, v) in value.as_object().into_iter().flatten() {
                match v.as_f64() {
                    Some(x) if !v.is_u64() => writeln!(out, "{key}: {x:.6}")?,
                    _ => writeln!(out, "{key}: {}", v.as_str().map_or_else(|| v.to_string(), str::to_string))?,
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ParamsReport {
    vertices: usize,
    edges: usize,
    dimension: usize,
    rate: f64,
    girth: String,
    average_degree: f64,
}

#[derive(Serialize)]
struct SpectrumReport {
    core_vertices: usize,
    core_edges: usize,
    lambda_star: f64,
    big_lambda: f64,
    average_degree: f64,
    lower_bound: f64,
    collatz_lower: f64,
    collatz_upper: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct BoundRow {
    formula: Formula,
    rate: f64,
    theta: f64,
}

/// Either a buffered file or the caller's stdout.
enum Sink<'a> {
    File(BufWriter<File>),
    Stdout(&'a mut dyn Write),
}

impl<'a> Sink<'a> {
    fn open(path: Option<&Path>, stdout: &'a mut dyn Write) -> anyhow::Result<Self> {
        Ok(match path {
            Some(p) => Sink::File(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Sink::Stdout(stdout),
        })
    }

    fn finish(mut self) -> anyhow::Result<()> {
        self.flush()?;
        Ok(())
    }
}

impl Write for Sink<'_> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Sink::File(f) => f.write(buf),
            Sink::Stdout(s) => s.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            Sink::File(f) => f.flush(),
            Sink::Stdout(s) => s.flush(),
        }
    }
}
