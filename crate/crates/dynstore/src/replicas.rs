//! Parallel replicas with seeds that do not depend on the worker count.

use dynstore_core::chain;
use dynstore_core::model::{NetworkConfig, WeightRule};
use dynstore_core::rational::Rational;
use dynstore_core::sim::{self, AdaptiveRun, RunMode, TrajectoryStats};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

pub const THREADS_ENV: &str = "DYNSTORE_THREADS";

/// Worker cap from `DYNSTORE_THREADS`; unset or unparsable means no cap.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn pool() -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Invalid(format!("thread pool: {e}")))
}

/// Runs `f` over items on the capped pool, keeping input order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> CliResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> CliResult<R> + Sync + Send,
{
    pool()?.install(|| items.par_iter().map(&f).collect())
}

#[derive(Debug, Clone)]
pub enum ReplicaKind {
    Discrete,
    Continuous,
    Adaptive(Rational),
}

#[derive(Debug, Clone)]
pub struct ReplicaPlan<'a> {
    pub cfg: &'a NetworkConfig,
    pub rule: &'a WeightRule,
    pub steps: u64,
    pub burn_in: Option<u64>,
    pub mode: RunMode,
    pub kind: ReplicaKind,
}

pub enum ReplicaRun {
    Plain(TrajectoryStats),
    Adaptive(AdaptiveRun),
}

impl ReplicaRun {
    pub fn stats(&self) -> &TrajectoryStats {
        match self {
            ReplicaRun::Plain(s) => s,
            ReplicaRun::Adaptive(a) => &a.stats,
        }
    }
}

/// Replica `i` uses the `i`-th seed derived from `seed`, as the sequential estimator does.
pub fn run_replicas(plan: &ReplicaPlan<'_>, replicas: usize, seed: u64) -> CliResult<Vec<ReplicaRun>> {
    if replicas == 0 {
        return Err(CliError::invalid("need at least one replica"));
    }
    let seeds = chain::replica_seeds(seed, replicas);
    par_map(&seeds, |&s| {
        Ok(match &plan.kind {
            ReplicaKind::Discrete => ReplicaRun::Plain(sim::run_discrete(
                plan.cfg, plan.rule, plan.steps, s, plan.burn_in, plan.mode,
            )?),
            ReplicaKind::Continuous => ReplicaRun::Plain(sim::run_continuous(
                plan.cfg, plan.rule, plan.steps, s, plan.burn_in, plan.mode,
            )?),
            ReplicaKind::Adaptive(target) => {
                ReplicaRun::Adaptive(sim::adaptive_run(plan.cfg, target, plan.steps, s, plan.burn_in)?)
            }
        })
    })
}
