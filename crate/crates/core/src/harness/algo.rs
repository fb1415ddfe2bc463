use std::time::Duration;

use clap::{Args, Parser, ValueEnum};

use super::HarnessError;
use crate::model::Problem;
use crate::sampling::{GuidedParams, SamplerConfig, SamplerKind};
use crate::search::{mcts_pw_run, sbfs_run, EvalMode, MctsConfig, Rectifier, SearchConfig, SearchError, SearchResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoName {
    Sg,
    Sa,
    Mcts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RectName {
    Lin,
    Qua,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerName {
    Systematic,
    Uniform,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

/// Flags shared by `plan solve` and suite algorithm lines.
#[derive(Debug, Clone, Args)]
pub struct AlgoArgs {
    #[arg(long, value_enum, default_value = "sg")]
    pub algo: AlgoName,
    #[arg(long, value_enum, default_value = "log")]
    pub rect: RectName,
    #[arg(long, value_enum, default_value = "uniform")]
    pub sampler: SamplerName,
    #[arg(long, default_value = "gc")]
    pub heuristic: String,
    /// Exponent of the guided sampler weights.
    #[arg(long, default_value_t = crate::sampling::DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, default_value_t = crate::sampling::DEFAULT_EPS)]
    pub eps: f64,
    /// Candidates drawn by the guided sampler.
    #[arg(long, default_value_t = crate::sampling::DEFAULT_CANDIDATES)]
    pub cand: u32,
    /// Decimals kept in sampled control values (0 disables rounding).
    #[arg(long, default_value_t = crate::sampling::DEFAULT_GRID_DIGITS)]
    pub grid_digits: u32,
    #[arg(long, default_value_t = crate::sampling::DEFAULT_REJECT_BUDGET)]
    pub reject_budget: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Expansion limit (trials for MCTS).
    #[arg(long)]
    pub expansion_limit: Option<u64>,
    #[arg(long, value_enum, default_value = "on")]
    pub dup_detect: Switch,
    #[arg(long = "assert", value_enum, default_value = "off")]
    pub assertions: Switch,
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    #[arg(long = "pw-k", default_value_t = 1.0)]
    pub pw_k: f64,
    #[arg(long = "ucb-c", default_value_t = std::f64::consts::SQRT_2)]
    pub ucb_c: f64,
    #[arg(long, default_value_t = 50)]
    pub rollout_depth: u32,
}

#[derive(Parser)]
#[command(no_binary_name = true)]
struct AlgoLine {
    #[command(flatten)]
    args: AlgoArgs,
}

impl AlgoArgs {
    /// Parses whitespace-separated flags, e.g. `--algo sa --rect lin`.
    pub fn parse_line(line: &str) -> Result<Self, HarnessError> {
        AlgoLine::try_parse_from(line.split_whitespace())
            .map(|l| l.args)
            .map_err(|e| HarnessError::Flags(e.to_string().trim().to_string()))
    }

    pub fn to_config(&self) -> Result<AlgoConfig, HarnessError> {
        let time_limit = match self.time_limit {
            Some(t) if !(t > 0.0 && t.is_finite()) => {
                return Err(HarnessError::Flags(format!("time limit must be positive, got {t}")));
            }
            t => t.map(Duration::from_secs_f64),
        };
        match self.algo {
            AlgoName::Mcts => {
                let cfg = MctsConfig {
                    alpha: self.alpha,
                    k: self.pw_k,
                    c: self.ucb_c,
                    rollout_depth: self.rollout_depth,
                    trial_limit: self.expansion_limit,
                    time_limit,
                    seed: self.seed,
                    grid_digits: self.grid_digits,
                    reject_budget: self.reject_budget,
                };
                cfg.check()?;
                Ok(AlgoConfig::Mcts(cfg))
            }
            AlgoName::Sg | AlgoName::Sa => {
                let kind = match self.sampler {
                    SamplerName::Systematic => SamplerKind::Systematic,
                    SamplerName::Uniform => SamplerKind::Uniform,
                    SamplerName::Heuristic => {
                        SamplerKind::Heuristic(GuidedParams { beta: self.beta, eps: self.eps, candidates: self.cand })
                    }
                };
                let cfg = SearchConfig {
                    mode: if self.algo == AlgoName::Sg { EvalMode::Greedy } else { EvalMode::Additive },
                    rectifier: match self.rect {
                        RectName::Lin => Rectifier::Linear,
                        RectName::Qua => Rectifier::Quadratic,
                        RectName::Log => Rectifier::Logarithmic,
                    },
                    sampler: SamplerConfig { kind, grid_digits: self.grid_digits, reject_budget: self.reject_budget },
                    heuristic: self.heuristic.clone(),
                    seed: self.seed,
                    time_limit,
                    expansion_limit: self.expansion_limit,
                    dup_detect: self.dup_detect.on(),
                    assertions: self.assertions.on(),
                    ..Default::default()
                };
                cfg.check()?;
                Ok(AlgoConfig::Sbfs(cfg))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgoConfig {
    Sbfs(SearchConfig),
    Mcts(MctsConfig),
}

impl AlgoConfig {
    pub fn seed(&self) -> u64 {
        match self {
            AlgoConfig::Sbfs(c) => c.seed,
            AlgoConfig::Mcts(c) => c.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            AlgoConfig::Sbfs(c) => c.seed = seed,
            AlgoConfig::Mcts(c) => c.seed = seed,
        }
    }

    pub fn time_limit(&self) -> Option<Duration> {
        match self {
            AlgoConfig::Sbfs(c) => c.time_limit,
            AlgoConfig::Mcts(c) => c.time_limit,
        }
    }

    pub fn set_time_limit(&mut self, t: Option<Duration>) {
        match self {
            AlgoConfig::Sbfs(c) => c.time_limit = t,
            AlgoConfig::Mcts(c) => c.time_limit = t,
        }
    }

    pub fn expansion_limit(&self) -> Option<u64> {
        match self {
            AlgoConfig::Sbfs(c) => c.expansion_limit,
            AlgoConfig::Mcts(c) => c.trial_limit,
        }
    }

    pub fn set_expansion_limit(&mut self, n: Option<u64>) {
        match self {
            AlgoConfig::Sbfs(c) => c.expansion_limit = n,
            AlgoConfig::Mcts(c) => c.trial_limit = n,
        }
    }

    pub fn run(&self, p: &Problem) -> Result<SearchResult, SearchError> {
        match self {
            AlgoConfig::Sbfs(c) => sbfs_run(p, c),
            AlgoConfig::Mcts(c) => mcts_pw_run(p, c),
        }
    }
}
