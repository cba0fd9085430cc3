//! Run configuration: defaults, a flat `key = value` file, and flag
//! overrides, resolved in that order.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use privband::adversary::AdversaryKind;
use privband::algorithm::{inner_gamma, tuned_gamma, AlgorithmKind, DpExp3LapParams};
use privband::bounds::{cor2_params, cor3_tau};
use privband::eval::{CheckpointSchedule, ExperimentConfig};
use privband::ArmIndex;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Textual form: `geometric`, `every:N` or `list:r1,r2,...`.
pub fn parse_schedule(s: &str) -> Result<CheckpointSchedule, String> {
    if s == "geometric" {
        return Ok(CheckpointSchedule::Geometric);
    }
    if let Some(n) = s.strip_prefix("every:") {
        let n: usize = n.trim().parse().map_err(|e| format!("bad checkpoint step `{n}`: {e}"))?;
        if n == 0 {
            return Err("checkpoint step must be >= 1".into());
        }
        return Ok(CheckpointSchedule::Every(n));
    }
    if let Some(list) = s.strip_prefix("list:") {
        let rounds = list
            .split(',')
            .map(|r| r.trim().parse::<usize>().map_err(|e| format!("bad checkpoint `{r}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(CheckpointSchedule::Explicit(rounds));
    }
    Err(format!("unknown checkpoint schedule `{s}` (expected geometric, every:N or list:...)"))
}

pub fn format_schedule(schedule: &CheckpointSchedule) -> String {
    match schedule {
        CheckpointSchedule::Geometric => "geometric".into(),
        CheckpointSchedule::Every(n) => format!("every:{n}"),
        CheckpointSchedule::Explicit(list) => {
            let parts: Vec<String> = list.iter().map(|r| r.to_string()).collect();
            format!("list:{}", parts.join(","))
        }
    }
}

/// Fully resolved settings for one invocation.
///
/// `None` means "derive from the horizon": the tuned `γ`, the
/// switching-cost defaults, and `ε`, `τ` from the switching-cost parameter
/// selection.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub horizon: usize,
    pub arms: usize,
    pub trials: usize,
    pub groups: usize,
    pub seed: u64,
    pub adversary: String,
    pub algorithm: String,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub tau: Option<usize>,
    pub gamma: Option<f64>,
    pub threshold: Option<f64>,
    pub spread: f64,
    pub period: usize,
    pub walk_std: Option<f64>,
    pub gap: Option<f64>,
    /// Zero-based.
    pub best_arm: usize,
    pub checkpoints: CheckpointSchedule,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: 1 << 18,
            arms: 4,
            trials: 720,
            groups: 24,
            seed: 42,
            adversary: "stochastic".into(),
            algorithm: "exp3".into(),
            epsilon: None,
            delta: None,
            tau: None,
            gamma: None,
            threshold: None,
            spread: privband::adversary::DEFAULT_SPREAD,
            period: privband::adversary::DEFAULT_PERIOD,
            walk_std: None,
            gap: None,
            best_arm: privband::adversary::DEFAULT_BEST_ARM.0,
            checkpoints: CheckpointSchedule::Geometric,
            out_dir: PathBuf::from("privband-out"),
            format: OutputFormat::Csv,
        }
    }
}

/// Every key accepted in a config file, in echo order.
pub const KEYS: [&str; 20] = [
    "horizon",
    "arms",
    "trials",
    "groups",
    "seed",
    "adversary",
    "algorithm",
    "epsilon",
    "delta",
    "tau",
    "gamma",
    "threshold",
    "spread",
    "period",
    "walk_std",
    "gap",
    "best_arm",
    "checkpoints",
    "out_dir",
    "format",
];

const ECHO_PREFIX: &str = "# config ";

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| format!("invalid value `{value}` for `{key}`: {e}"))
}

impl RunConfig {
    /// Sets one key from its textual value. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key {
            "horizon" => self.horizon = parse_value(key, v)?,
            "arms" => self.arms = parse_value(key, v)?,
            "trials" => self.trials = parse_value(key, v)?,
            "groups" => self.groups = parse_value(key, v)?,
            "seed" => self.seed = parse_value(key, v)?,
            "adversary" => self.adversary = v.to_string(),
            "algorithm" => self.algorithm = v.to_string(),
            "epsilon" => self.epsilon = Some(parse_value(key, v)?),
            "delta" => self.delta = Some(parse_value(key, v)?),
            "tau" => self.tau = Some(parse_value(key, v)?),
            "gamma" => self.gamma = Some(parse_value(key, v)?),
            "threshold" => self.threshold = Some(parse_value(key, v)?),
            "spread" => self.spread = parse_value(key, v)?,
            "period" => self.period = parse_value(key, v)?,
            "walk_std" => self.walk_std = Some(parse_value(key, v)?),
            "gap" => self.gap = Some(parse_value(key, v)?),
            "best_arm" => self.best_arm = parse_value(key, v)?,
            "checkpoints" => self.checkpoints = parse_schedule(v)?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            "format" => self.format = parse_value(key, v)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Applies a config file's contents on top of `self`.
    ///
    /// Lines are `key = value`; blank lines and anything after `#` are
    /// ignored. A key may appear only once.
    pub fn apply_file_text(&mut self, text: &str) -> CliResult<()> {
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::Usage(format!("config line {}: {msg}", i + 1));
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(format!("expected `key = value`, got `{line}`")));
            };
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            self.set(key, value).map_err(err)?;
        }
        Ok(())
    }

    /// `key = value` for every set field, in [`KEYS`] order. Unset optional
    /// fields are omitted. Floats use the shortest representation that
    /// parses back to the same value.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let opt_f = |v: Option<f64>| v.map(|x| x.to_string());
        for key in KEYS {
            let value = match key {
                "horizon" => Some(self.horizon.to_string()),
                "arms" => Some(self.arms.to_string()),
                "trials" => Some(self.trials.to_string()),
                "groups" => Some(self.groups.to_string()),
                "seed" => Some(self.seed.to_string()),
                "adversary" => Some(self.adversary.clone()),
                "algorithm" => Some(self.algorithm.clone()),
                "epsilon" => opt_f(self.epsilon),
                "delta" => opt_f(self.delta),
                "tau" => self.tau.map(|t| t.to_string()),
                "gamma" => opt_f(self.gamma),
                "threshold" => opt_f(self.threshold),
                "spread" => Some(self.spread.to_string()),
                "period" => Some(self.period.to_string()),
                "walk_std" => opt_f(self.walk_std),
                "gap" => opt_f(self.gap),
                "best_arm" => Some(self.best_arm.to_string()),
                "checkpoints" => Some(format_schedule(&self.checkpoints)),
                "out_dir" => Some(self.out_dir.display().to_string()),
                "format" => Some(self.format.to_string()),
                _ => unreachable!(),
            };
            if let Some(v) = value {
                out.push((key, v));
            }
        }
        out
    }

    /// Header lines recording this configuration, e.g. `# config arms = 4`.
    pub fn echo_lines(&self) -> Vec<String> {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{ECHO_PREFIX}{k} = {v}"))
            .collect()
    }

    /// Rebuilds a configuration from the `# config` lines of an output
    /// header. Other lines are ignored.
    pub fn from_echo(text: &str) -> CliResult<Self> {
        let mut cfg = RunConfig::default();
        for line in text.lines() {
            if let Some(kv) = line.strip_prefix(ECHO_PREFIX) {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("malformed echo line `{line}`")))?;
                cfg.set(k.trim(), v).map_err(CliError::Usage)?;
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.horizon == 0 {
            return usage("horizon must be >= 1".into());
        }
        if self.arms < 2 {
            return usage(format!("arms must be >= 2, got {}", self.arms));
        }
        if self.trials == 0 {
            return usage("trials must be >= 1".into());
        }
        if self.groups == 0 || self.trials % self.groups != 0 {
            return usage(format!("groups ({}) must divide trials ({})", self.groups, self.trials));
        }
        if !AdversaryKind::NAMES.contains(&self.adversary.as_str()) {
            return usage(format!(
                "unknown adversary `{}` (expected one of {})",
                self.adversary,
                AdversaryKind::NAMES.join(", ")
            ));
        }
        if !AlgorithmKind::NAMES.contains(&self.algorithm.as_str()) {
            return usage(format!(
                "unknown algorithm `{}` (expected one of {})",
                self.algorithm,
                AlgorithmKind::NAMES.join(", ")
            ));
        }
        if self.best_arm >= self.arms {
            return usage(format!("best_arm {} is not below arms {}", self.best_arm, self.arms));
        }
        // Surface parameter errors now rather than mid-run, including
        // overrides that only matter to the other grid entries.
        for name in AdversaryKind::NAMES {
            let kind = self.adversary_kind(name)?;
            if name == self.adversary || name != "deterministic" {
                let mut probe = privband::rng::RngStream::new(0, 0, privband::rng::StreamRole::Adversary);
                kind.generate(1, self.arms, &mut probe).map_err(CliError::usage)?;
            }
        }
        for name in AlgorithmKind::NAMES {
            self.algorithm_kind(name)?;
        }
        Ok(())
    }

    /// The named adversary with this configuration's parameters.
    pub fn adversary_kind(&self, name: &str) -> CliResult<AdversaryKind> {
        let best_arm = ArmIndex(self.best_arm);
        let kind = match AdversaryKind::with_defaults(name, self.horizon).map_err(CliError::usage)? {
            AdversaryKind::FullyOblivious { .. } => AdversaryKind::FullyOblivious {
                spread: self.spread,
                best_arm,
            },
            AdversaryKind::Oblivious { .. } => AdversaryKind::Oblivious {
                spread: self.spread,
                best_arm,
                period: self.period,
            },
            AdversaryKind::SwitchingCost { walk_std, gap, .. } => AdversaryKind::SwitchingCost {
                walk_std: self.walk_std.unwrap_or(walk_std),
                gap: self.gap.unwrap_or(gap),
                best_arm,
            },
            other => other,
        };
        Ok(kind)
    }

    /// The named algorithm with this configuration's parameters.
    ///
    /// DP-EXP3-Lap takes `epsilon` (default: the switching-cost selection's
    /// `ε`) and `threshold` (default `ln T / ε`). EXP3_τ takes `tau`; without
    /// it, `epsilon` and `delta` together pick the block length that meets
    /// that target, and otherwise the switching-cost selection's `τ` is used.
    /// `gamma` overrides the exploration rate of whichever agent runs.
    pub fn algorithm_kind(&self, name: &str) -> CliResult<AlgorithmKind> {
        self.resolve_algorithm(name).map_err(CliError::usage)
    }

    fn resolve_algorithm(&self, name: &str) -> privband::Result<AlgorithmKind> {
        let t = self.horizon;
        let k = self.arms;
        Ok(match name {
            "exp3" => AlgorithmKind::Exp3 {
                gamma: self.gamma.map_or_else(|| tuned_gamma(t, k), Ok)?,
            },
            "dp-exp3-lap" => {
                let epsilon = match self.epsilon {
                    Some(e) => e,
                    None => cor2_params(t as u64, k)?.budget.epsilon(),
                };
                let params = match self.threshold {
                    Some(b) => DpExp3LapParams::new(epsilon, b)?,
                    None => DpExp3LapParams::with_default_threshold(epsilon, t)?,
                };
                AlgorithmKind::DpExp3Lap {
                    gamma: self.gamma.map_or_else(|| tuned_gamma(t, k), Ok)?,
                    epsilon: params.epsilon(),
                    threshold: params.threshold(),
                }
            }
            "exp3-tau" => {
                let tau = match (self.tau, self.epsilon, self.delta) {
                    (Some(tau), _, _) => tau,
                    (None, Some(eps), Some(delta)) => cor3_tau(t as u64, eps, delta)?.tau as usize,
                    _ => cor2_params(t as u64, k)?.tau as usize,
                };
                let kind = AlgorithmKind::exp3_tau(t, k, tau)?;
                match self.gamma {
                    Some(gamma) => AlgorithmKind::Exp3Tau { gamma, tau },
                    None => kind,
                }
            }
            other => return Err(privband::Error::InvalidParameter {
                name: "algorithm",
                reason: format!("unknown algorithm `{other}`"),
            }),
        })
    }

    /// One cell for `run`.
    pub fn single_experiment(&self) -> CliResult<ExperimentConfig> {
        Ok(ExperimentConfig {
            algorithms: vec![self.algorithm_kind(&self.algorithm)?],
            adversaries: vec![self.adversary_kind(&self.adversary)?],
            ..self.empty_experiment()
        })
    }

    /// The full algorithm × adversary grid for `experiment`.
    pub fn grid_experiment(&self) -> CliResult<ExperimentConfig> {
        Ok(ExperimentConfig {
            algorithms: AlgorithmKind::NAMES
                .iter()
                .map(|n| self.algorithm_kind(n))
                .collect::<CliResult<_>>()?,
            adversaries: AdversaryKind::NAMES
                .iter()
                .map(|n| self.adversary_kind(n))
                .collect::<CliResult<_>>()?,
            ..self.empty_experiment()
        })
    }

    fn empty_experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            horizon: self.horizon,
            arms: self.arms,
            trials: self.trials,
            groups: self.groups,
            base_seed: self.seed,
            algorithms: Vec::new(),
            adversaries: Vec::new(),
            schedule: self.checkpoints.clone(),
        }
    }
}

/// Lines describing the resolved parameters of every agent and adversary
/// in `experiment`, e.g. `# derived dp-exp3-lap.epsilon = 243.29…`.
pub fn derived_lines(experiment: &ExperimentConfig) -> Vec<String> {
    let mut lines = vec!["# derived arms are zero-based; arm i is the (i+1)-th arm".to_string()];
    for algo in &experiment.algorithms {
        let name = algo.name();
        let mut push = |k: &str, v: String| lines.push(format!("# derived {name}.{k} = {v}"));
        push("gamma", algo.gamma().to_string());
        match *algo {
            AlgorithmKind::DpExp3Lap { epsilon, threshold, .. } => {
                push("epsilon", epsilon.to_string());
                push("threshold", threshold.to_string());
            }
            AlgorithmKind::Exp3Tau { tau, .. } => {
                push("tau", tau.to_string());
                if let Ok(g) = inner_gamma(experiment.horizon, tau, experiment.arms) {
                    push("tuned_gamma", g.to_string());
                }
            }
            AlgorithmKind::Exp3 { .. } => {}
        }
    }
    for adv in &experiment.adversaries {
        let name = adv.name();
        let mut push = |k: &str, v: String| lines.push(format!("# derived {name}.{k} = {v}"));
        match *adv {
            AdversaryKind::FullyOblivious { spread, best_arm } => {
                push("spread", spread.to_string());
                push("best_arm", best_arm.0.to_string());
            }
            AdversaryKind::Oblivious {
                spread,
                best_arm,
                period,
            } => {
                push("spread", spread.to_string());
                push("best_arm", best_arm.0.to_string());
                push("period", period.to_string());
            }
            AdversaryKind::SwitchingCost {
                walk_std,
                gap,
                best_arm,
            } => {
                push("walk_std", walk_std.to_string());
                push("gap", gap.to_string());
                push("best_arm", best_arm.0.to_string());
            }
            AdversaryKind::Deterministic | AdversaryKind::Stochastic => {}
        }
    }
    lines
}
