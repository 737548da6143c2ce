//! CSV and JSON writers for harness results.

use std::fmt::Display;
use std::io::Write;

use serde::{Serialize, Serializer};

use super::{HarnessError, SweepResult, TrialReport, TreeReport};

/// Schema tag written at the top of every output file.
pub const SCHEMA: &str = "cyclecode-trials/1";

pub const CSV_COLUMNS: [&str; 17] = [
    "graph_id",
    "n",
    "m",
    "rate",
    "girth",
    "lambda_star",
    "p",
    "beta",
    "trials",
    "wrong",
    "ambiguous",
    "error_rate",
    "stderr",
    "theta_main",
    "theta_technical",
    "seed",
    "elapsed_ms",
];

pub(super) fn display<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Writes `# key: value` comment lines, then a header row and one row per
/// item. Readers should skip lines starting with `#`. For
/// [`TrialReport`] rows the header is [`CSV_COLUMNS`].
pub fn write_csv<W: Write, T: Serialize>(mut out: W, rows: &[T], notes: &[(&str, String)]) -> Result<(), HarnessError> {
    writeln!(out, "# schema: {SCHEMA}")?;
    for (key, value) in notes {
        writeln!(out, "# {key}: {value}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report_json<W: Write>(out: W, reports: &[TrialReport]) -> Result<(), HarnessError> {
    let doc = serde_json::json!({ "schema": SCHEMA, "rows": reports });
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

pub fn write_sweep_json<W: Write>(out: W, sweep: &SweepResult) -> Result<(), HarnessError> {
    let doc = serde_json::json!({
        "schema": SCHEMA,
        "rows": sweep.reports,
        "theta_main": sweep.theta_main,
        "theta_technical": sweep.theta_technical,
        "threshold_rule": sweep.rule,
        "empirical_threshold": sweep.empirical_threshold,
        "monotone": sweep.monotone,
    });
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

pub fn write_tree_json<W: Write>(out: W, report: &TreeReport) -> Result<(), HarnessError> {
    let doc = serde_json::json!({ "schema": SCHEMA, "tree": report });
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}
