//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dynstore_core::model::{NetworkConfig, WeightRule};
use dynstore_core::rational::{self, Rational};

use crate::commands::{self, ModeArg, MonteCarlo, Occupancy, Outcome, RuleKind, SimulateArgs};
use crate::config::{load_config, Preset};
use crate::error::{CliError, CliResult};
use crate::oracle_check::{self, Relation};
use crate::output::{emit, Format, RunManifest};

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "dynstore", version, about = "Capacity bounds and simulation for dynamical storage networks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON network config.
    #[arg(long, global = true, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Bundled reference config.
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    #[arg(long, value_enum, default_value = "star")]
    pub rule: RuleKind,
    /// ε1 for the epsilon and hetero rules; defaults to the largest admissible value.
    #[arg(long, value_parser = parse_rational)]
    pub epsilon: Option<Rational>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every capacity bound, with discrepancy warnings.
    Bounds {
        /// ε1 for the protocol bound.
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        /// ε1 for the heterogeneous bound.
        #[arg(long, value_parser = parse_rational)]
        hetero_epsilon: Option<Rational>,
    },
    /// Static cut constants, and min/max cuts at a permutation.
    StaticCut {
        #[command(flatten)]
        rule: RuleArgs,
        /// Comma-separated failure order, e.g. 3,4,5,1,2.
        #[arg(long)]
        perm: Option<String>,
    },
    /// Exact average cut by position-class enumeration, optionally sampled too.
    AvgCut {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, value_enum, default_value = "min")]
        mode: ModeArg,
        /// Also estimate by simulation with this many steps per replica.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value_t = 1)]
        replicas: usize,
        #[arg(long)]
        burn_in: Option<u64>,
    },
    /// Trajectory simulation with a bandwidth audit.
    Simulate {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long)]
        burn_in: Option<u64>,
        #[arg(long, default_value_t = 1)]
        replicas: usize,
        #[arg(long, value_enum, default_value = "min")]
        mode: ModeArg,
        /// Cut pinned by the adaptive rule; defaults to the exact average min-cut.
        #[arg(long, value_parser = parse_rational)]
        target: Option<Rational>,
        /// Exponential holding times at rate nλ.
        #[arg(long)]
        continuous: bool,
        /// Overrides the config's λ.
        #[arg(long, value_parser = parse_rational)]
        lambda: Option<Rational>,
    },
    /// Exact TV distance to uniform at ⌈n ln n + cn⌉.
    Mixing {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3usize, 4, 5])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0f64, 1.0, 2.0, 3.0])]
        c: Vec<f64>,
    },
    /// Block stationary law for a single U node, optionally against simulation.
    Stationary {
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value_t = 1_000)]
        burn_in: u64,
        #[arg(long, default_value_t = 50)]
        thin: u64,
    },
    /// Closed-form cuts against the flow-graph oracle, exhaustively.
    OracleCheck {
        /// Largest network size in the sweep (at most 6).
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![Relation::Selection])]
        relation: Vec<Relation>,
        #[command(flatten)]
        rule: RuleArgs,
        /// Added to every closed-form value, to exercise the detector.
        #[arg(long, value_parser = parse_rational, hide = true)]
        inject_fault: Option<Rational>,
    },
    /// Bounds, static and average cuts in one document.
    Report,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds { .. } => "bounds",
            Command::StaticCut { .. } => "static-cut",
            Command::AvgCut { .. } => "avg-cut",
            Command::Simulate { .. } => "simulate",
            Command::Mixing { .. } => "mixing",
            Command::Stationary { .. } => "stationary",
            Command::OracleCheck { .. } => "oracle-check",
            Command::Report => "report",
        }
    }
}

fn resolve_config(g: &GlobalArgs) -> CliResult<Option<(NetworkConfig, String)>> {
    match (&g.config, g.preset) {
        (Some(path), _) => Ok(Some((load_config(path)?, path.display().to_string()))),
        (None, Some(p)) => Ok(Some((p.config(), format!("preset:{}", p.name())))),
        (None, None) => Ok(None),
    }
}

fn require(cfg: Option<(NetworkConfig, String)>) -> CliResult<(NetworkConfig, String)> {
    cfg.ok_or_else(|| CliError::invalid("this subcommand needs --config or --preset"))
}

fn rule_for(cfg: &NetworkConfig, r: &RuleArgs) -> CliResult<WeightRule> {
    if r.rule == RuleKind::Adaptive {
        return Err(CliError::invalid("the adaptive rule is only available to simulate"));
    }
    commands::weight_rule(cfg, r.rule, r.epsilon.clone())
}

/// Runs a parsed command; `flags` are recorded in the manifest.
pub fn run(cli: Cli, flags: Vec<String>) -> CliResult<Outcome> {
    let g = &cli.global;
    let loaded = resolve_config(g)?;
    let config_label = loaded.as_ref().map(|(_, l)| l.clone()).unwrap_or_default();
    let outcome = match &cli.command {
        Command::Bounds { epsilon, hetero_epsilon } => {
            let (cfg, _) = require(loaded)?;
            commands::cmd_bounds(&cfg, epsilon.clone(), hetero_epsilon.clone())?
        }
        Command::StaticCut { rule, perm } => {
            let (cfg, _) = require(loaded)?;
            let w = rule_for(&cfg, rule)?;
            let pi = perm.as_deref().map(commands::parse_permutation).transpose()?;
            commands::cmd_static_cut(&cfg, &w, pi.as_ref())?
        }
        Command::AvgCut { rule, mode, steps, replicas, burn_in } => {
            let (cfg, _) = require(loaded)?;
            let w = rule_for(&cfg, rule)?;
            let mc = steps.map(|steps| MonteCarlo {
                steps,
                replicas: *replicas,
                seed: g.seed,
                burn_in: *burn_in,
            });
            commands::cmd_avg_cut(&cfg, &w, *mode, mc.as_ref())?
        }
        Command::Simulate { rule, steps, burn_in, replicas, mode, target, continuous, lambda } => {
            let (mut cfg, _) = require(loaded)?;
            if lambda.is_some() {
                cfg = cfg.with_lambda(lambda.clone());
            }
            let args = SimulateArgs {
                rule: rule.rule,
                epsilon: rule.epsilon.clone(),
                target: target.clone(),
                mode: *mode,
                continuous: *continuous,
                mc: MonteCarlo {
                    steps: *steps,
                    replicas: *replicas,
                    seed: g.seed,
                    burn_in: *burn_in,
                },
            };
            commands::cmd_simulate(&cfg, &args)?
        }
        Command::Mixing { n, c } => commands::cmd_mixing(n, c)?,
        Command::Stationary { steps, burn_in, thin } => {
            let (cfg, _) = require(loaded)?;
            let occ = steps.map(|steps| Occupancy {
                steps,
                burn_in: *burn_in,
                thin: *thin,
                seed: g.seed,
            });
            commands::cmd_stationary(&cfg, occ.as_ref())?
        }
        Command::OracleCheck { max_n, relation, rule, inject_fault } => {
            if *max_n > oracle_check::MAX_N {
                return Err(CliError::Invalid(format!("--max-n must be at most {}", oracle_check::MAX_N)));
            }
            let configs = match loaded {
                Some((cfg, _)) if cfg.n() > *max_n => {
                    return Err(CliError::Invalid(format!("config has n = {} > --max-n {max_n}", cfg.n())));
                }
                Some((cfg, _)) => vec![cfg],
                None => oracle_check::grid(*max_n),
            };
            let w = match rule.rule {
                RuleKind::Star => WeightRule::Star,
                _ => rule_for(&configs[0], rule)?,
            };
            commands::cmd_oracle_check(&configs, &w, relation, inject_fault.clone())?.0
        }
        Command::Report => {
            let (cfg, _) = require(loaded)?;
            commands::cmd_report(&cfg)?
        }
    };
    let manifest = RunManifest::new(config_label, cli.command.name(), flags, g.seed);
    emit(&outcome.artifacts, g.format, &manifest, g.out.as_deref())?;
    Ok(outcome)
}
