use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use privband::bounds::{budget_report, BoundReport};
use privband::eval::{run_experiment_with_threads, trial_table, ExperimentConfig};

use crate::config::{derived_lines, OutputFormat, RunConfig};
use crate::error::{CliError, CliResult};
use crate::number::fmt_sig;
use crate::{output, plot};

/// Plays the configured algorithm against the configured adversary and
/// writes results and summary tables.
pub fn cmd_run(config: &RunConfig, threads: usize) -> CliResult<Vec<PathBuf>> {
    config.validate()?;
    execute(config, &config.single_experiment()?, threads)
}

/// The full grid of algorithms × adversaries.
pub fn cmd_experiment(config: &RunConfig, threads: usize) -> CliResult<Vec<PathBuf>> {
    config.validate()?;
    if config.arms < 4 {
        return Err(CliError::Usage(
            "the grid includes the deterministic adversary, which needs at least 4 arms".into(),
        ));
    }
    execute(config, &config.grid_experiment()?, threads)
}

fn execute(config: &RunConfig, experiment: &ExperimentConfig, threads: usize) -> CliResult<Vec<PathBuf>> {
    let result = run_experiment_with_threads(experiment, threads)?;
    let mut preamble = config.echo_lines();
    preamble.extend(derived_lines(experiment));
    let (results, summary) = output::render(config.format, &preamble, &result);
    let ext = config.format.extension();
    write_all(
        &config.out_dir,
        &[
            (format!("results.{ext}"), results),
            (format!("summary.{ext}"), summary),
        ],
    )
}

fn write_all(dir: &Path, files: &[(String, String)]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    files
        .iter()
        .map(|(name, contents)| {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

/// Every bound that applies to the configured horizon, arm count and
/// optional `epsilon`, `delta`, `tau`. `None` gives aligned text.
pub fn cmd_budget(config: &RunConfig, format: Option<OutputFormat>) -> CliResult<String> {
    if config.horizon == 0 {
        return Err(CliError::Usage("horizon must be >= 1".into()));
    }
    let rows = budget_report(
        config.horizon as u64,
        config.arms,
        config.epsilon,
        config.delta,
        config.tau.map(|t| t as u64),
    )
    .map_err(CliError::usage)?;
    Ok(match format {
        None => budget_text(&rows),
        Some(OutputFormat::Csv) => budget_csv(&rows),
        Some(OutputFormat::Json) => budget_json(&rows),
    })
}

fn inputs_joined(row: &BoundReport, sep: &str) -> String {
    row.inputs
        .iter()
        .map(|(k, v)| format!("{k}={}", fmt_sig(*v)))
        .collect::<Vec<_>>()
        .join(sep)
}

fn budget_text(rows: &[BoundReport]) -> String {
    let name_w = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let values: Vec<String> = rows.iter().map(|r| fmt_sig(r.value)).collect();
    let value_w = values.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (row, value) in rows.iter().zip(&values) {
        let _ = writeln!(out, "{:<name_w$}  {:>value_w$}  {}", row.name, value, inputs_joined(row, " "));
    }
    out
}

fn budget_csv(rows: &[BoundReport]) -> String {
    let mut out = String::new();
    for row in rows {
        let _ = writeln!(out, "{},{},{}", row.name, fmt_sig(row.value), inputs_joined(row, ","));
    }
    out
}

fn budget_json(rows: &[BoundReport]) -> String {
    let rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let inputs: serde_json::Map<String, serde_json::Value> =
                r.inputs.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect();
            serde_json::json!({ "name": r.name, "value": r.value, "inputs": inputs })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    s
}

/// One `regret_<adversary>.svg` per adversary in the summary table. Nothing
/// is written unless the whole table parses and holds at least one row.
pub fn cmd_plot(summary: &Path, out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let text = fs::read_to_string(summary).map_err(|e| CliError::io(summary, e))?;
    let points = plot::parse_summary_csv(&text).map_err(|(line, message)| CliError::Parse {
        path: summary.to_path_buf(),
        line,
        message,
    })?;
    if points.is_empty() {
        return Err(CliError::Parse {
            path: summary.to_path_buf(),
            line: text.lines().count(),
            message: "summary has no data rows".into(),
        });
    }
    let files: Vec<(String, String)> = plot::adversaries(&points)
        .into_iter()
        .map(|adv| {
            let svg = plot::render_svg(adv, &points).expect("adversary has points");
            (format!("{}.svg", plot::file_stem(adv)), svg)
        })
        .collect();
    write_all(out_dir, &files)
}

/// Writes the configured adversary's base gain table for one trial as
/// `gains_<adversary>_trial<k>.csv`.
pub fn cmd_dump_adversary(config: &RunConfig, trial: u64) -> CliResult<PathBuf> {
    config.validate()?;
    let kind = config.adversary_kind(&config.adversary)?;
    let table = trial_table(&kind, config.horizon, config.arms, config.seed, trial)?;
    let mut text = String::new();
    for line in config.echo_lines() {
        text.push_str(&line);
        text.push('\n');
    }
    text.push_str(&format!("# trial = {trial}\n# arms are zero-based; arm i is the (i+1)-th arm\n"));
    text.push_str("round,arm,gain\n");
    for t in 1..=table.horizon() {
        for (arm, g) in table.row(t)?.iter().enumerate() {
            let _ = writeln!(text, "{t},{arm},{}", fmt_sig(*g));
        }
    }
    let name = format!("gains_{}_trial{trial}.csv", config.adversary);
    Ok(write_all(&config.out_dir, &[(name, text)])?.remove(0))
}
