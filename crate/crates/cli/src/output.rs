//! Results and summary tables in CSV or JSON.

use std::fmt::Write as _;

use privband::eval::ExperimentResult;
use serde::Serialize;

use crate::config::OutputFormat;
use crate::number::fmt_sig;

pub const RESULTS_HEADER: &str = "algorithm,adversary,trial,round,cum_gain,oracle_gain,regret";
pub const SUMMARY_HEADER: &str = "algorithm,adversary,round,center,dev_below,dev_above,n_trials,a0";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow<'a> {
    pub algorithm: &'a str,
    pub adversary: &'a str,
    pub trial: usize,
    pub round: usize,
    pub cum_gain: f64,
    pub oracle_gain: f64,
    pub regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow<'a> {
    pub algorithm: &'a str,
    pub adversary: &'a str,
    pub round: usize,
    pub center: f64,
    pub dev_below: f64,
    pub dev_above: f64,
    pub n_trials: usize,
    pub a0: usize,
}

pub fn result_rows(result: &ExperimentResult) -> Vec<ResultRow<'_>> {
    let mut rows = Vec::new();
    for cell in &result.cells {
        for (trial, traj) in cell.trajectories.iter().enumerate() {
            for c in &traj.checkpoints {
                rows.push(ResultRow {
                    algorithm: cell.algorithm.name(),
                    adversary: cell.adversary.name(),
                    trial,
                    round: c.round,
                    cum_gain: c.cum_gain,
                    oracle_gain: c.oracle_gain,
                    regret: c.regret,
                });
            }
        }
    }
    rows
}

pub fn summary_rows(result: &ExperimentResult) -> Vec<SummaryRow<'_>> {
    let mut rows = Vec::new();
    for cell in &result.cells {
        for (round, s) in &cell.summary {
            rows.push(SummaryRow {
                algorithm: cell.algorithm.name(),
                adversary: cell.adversary.name(),
                round: *round,
                center: s.center,
                dev_below: s.dev_below,
                dev_above: s.dev_above,
                n_trials: s.n_trials,
                a0: s.n_groups,
            });
        }
    }
    rows
}

/// `#`-prefixed provenance lines, then the header, then one line per row.
pub fn results_csv(preamble: &[String], rows: &[ResultRow<'_>]) -> String {
    let mut out = start_csv(preamble, RESULTS_HEADER);
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.algorithm,
            r.adversary,
            r.trial,
            r.round,
            fmt_sig(r.cum_gain),
            fmt_sig(r.oracle_gain),
            fmt_sig(r.regret)
        );
    }
    out
}

pub fn summary_csv(preamble: &[String], rows: &[SummaryRow<'_>]) -> String {
    let mut out = start_csv(preamble, SUMMARY_HEADER);
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.adversary,
            r.round,
            fmt_sig(r.center),
            fmt_sig(r.dev_below),
            fmt_sig(r.dev_above),
            r.n_trials,
            r.a0
        );
    }
    out
}

fn start_csv(preamble: &[String], header: &str) -> String {
    let mut out = String::new();
    for line in preamble {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(header);
    out.push('\n');
    out
}

#[derive(Serialize)]
struct JsonDoc<'a, R> {
    provenance: &'a [String],
    rows: &'a [R],
}

/// `{"provenance": [...], "rows": [...]}` with the same lines and rows as
/// the CSV form.
pub fn to_json<R: Serialize>(preamble: &[String], rows: &[R]) -> String {
    let mut s = serde_json::to_string_pretty(&JsonDoc {
        provenance: preamble,
        rows,
    })
    .expect("rows serialize");
    s.push('\n');
    s
}

/// Results and summary file contents for `format`.
pub fn render(format: OutputFormat, preamble: &[String], result: &ExperimentResult) -> (String, String) {
    let results = result_rows(result);
    let summary = summary_rows(result);
    match format {
        OutputFormat::Csv => (results_csv(preamble, &results), summary_csv(preamble, &summary)),
        OutputFormat::Json => (to_json(preamble, &results), to_json(preamble, &summary)),
    }
}
