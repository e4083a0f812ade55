//! Trajectory simulation: average cuts, adaptive weights and bandwidth audits.
//!
//! Runs start from the identity permutation. Nodes that have not failed yet
//! keep their id order ahead of the failed ones, so every step has a cut.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::chain::{self, rng_stream, FailureSampler};
use crate::cut::{self, CutMode, Objective, OptimalCut};
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, NodeClass, Permutation, WeightMatrix, WeightRule};
use crate::rational::{self, int, Rational};

/// Batches used for batch-means standard errors.
pub const BATCHES: u64 = 100;

const FAILURE_STREAM: u64 = 0;
const HOLDING_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    MinCut,
    MaxCut,
}

impl RunMode {
    pub fn objective(self) -> Objective {
        match self {
            RunMode::MinCut => Objective::Min,
            RunMode::MaxCut => Objective::Max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    /// 1-based step index, counted from the start of the run.
    pub step: u64,
    pub failed: usize,
    pub cut: Rational,
    pub epsilon: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeLedger {
    pub total_sent: Rational,
    /// Repairs this node helped with.
    pub events: u64,
    /// Amount sent in each complete batch.
    pub batch_sent: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStats {
    pub steps: u64,
    pub burn_in: u64,
    pub mode: RunMode,
    /// Post-burn-in steps only.
    pub per_step: Vec<StepRecord>,
    pub running_avg_cut: Rational,
    pub per_node_sent: Vec<NodeLedger>,
    pub batch_len: u64,
    pub batch_means: Vec<f64>,
    /// Batch-means standard error of `running_avg_cut`.
    pub stderr: f64,
    /// Time-weighted average for continuous runs.
    pub time_average: Option<f64>,
    pub time_stderr: Option<f64>,
    pub total_time: Option<f64>,
}

impl TrajectoryStats {
    pub fn recorded_steps(&self) -> u64 {
        self.steps - self.burn_in
    }

    /// Exact averages over the first and second half of the recorded steps.
    pub fn half_averages(&self) -> (Rational, Rational) {
        let mid = self.per_step.len() / 2;
        let avg = |s: &[StepRecord]| {
            let cuts: Vec<Rational> = s.iter().map(|r| r.cut.clone()).collect();
            cut::mean(&cuts)
        };
        (avg(&self.per_step[..mid]), avg(&self.per_step[mid..]))
    }
}

/// Burn-in `⌈n ln n + 3n⌉`.
pub fn default_burn_in(n: usize) -> u64 {
    chain::mixing_time(n, 3.0) as u64
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
    (mean, libm::sqrt(var / k))
}

struct RunSpec<'a> {
    cfg: &'a NetworkConfig,
    rule: &'a WeightRule,
    steps: u64,
    seed: u64,
    burn_in: u64,
    mode: RunMode,
    target: Option<Rational>,
    holding_rate: Option<f64>,
}

fn simulate(spec: RunSpec<'_>) -> Result<TrajectoryStats> {
    let cfg = spec.cfg;
    cfg.check()?;
    if spec.steps <= spec.burn_in {
        return Err(Error::Precondition(String::from("steps must exceed burn-in")));
    }
    let n = cfg.n();
    let eval = OptimalCut::new(cfg, spec.rule, spec.mode.objective(), CutMode::Auto)?;
    let weights: WeightMatrix = eval.weights().clone();
    let sampler = FailureSampler::new(cfg)?;
    let mut frng = rng_stream(spec.seed, FAILURE_STREAM);
    let mut hrng = rng_stream(spec.seed, HOLDING_STREAM);
    let post = spec.steps - spec.burn_in;
    let batch_len = (post / BATCHES).max(1);
    let batches = (post / batch_len) as usize;

    let mut pi = Permutation::identity(n);
    let mut per_step = Vec::with_capacity(post as usize);
    let mut cut_sum = rational::zero();
    let mut fail_count = alloc::vec![0u64; n];
    let mut scale_sum = alloc::vec![rational::zero(); n];
    let mut batch_cut = alloc::vec![0.0f64; batches];
    let mut batch_scale = alloc::vec![alloc::vec![0.0f64; n]; batches];
    let mut batch_tw = alloc::vec![0.0f64; batches];
    let mut batch_time = alloc::vec![0.0f64; batches];
    let (mut tw_sum, mut time) = (0.0f64, 0.0f64);

    for t in 1..=spec.steps {
        let s = sampler.sample(&mut frng);
        pi.fail(s)?;
        let hold = spec.holding_rate.map(|rate| {
            let u: f64 = 1.0 - rand::Rng::gen::<f64>(&mut hrng);
            -libm::log(u) / rate
        });
        if t <= spec.burn_in {
            continue;
        }
        let base = eval.value(&pi);
        let (cut, epsilon, scale) = match &spec.target {
            None => (base, None, rational::one()),
            Some(target) => {
                let mut eps = target / &base - rational::one();
                if eps < -rational::one() {
                    eps = -rational::one();
                }
                let scale = &eps + rational::one();
                (&base * &scale, Some(eps), scale)
            }
        };
        let idx = (t - spec.burn_in - 1) / batch_len;
        let cut_f = rational::to_f64(&cut);
        let scale_f = rational::to_f64(&scale);
        fail_count[s - 1] += 1;
        if let Some(h) = hold {
            tw_sum += cut_f * h;
            time += h;
        }
        if (idx as usize) < batches {
            let b = idx as usize;
            batch_cut[b] += cut_f;
            batch_scale[b][s - 1] += scale_f;
            if let Some(h) = hold {
                batch_tw[b] += cut_f * h;
                batch_time[b] += h;
            }
        }
        cut_sum += &cut;
        scale_sum[s - 1] += scale;
        per_step.push(StepRecord {
            step: t,
            failed: s,
            cut,
            epsilon,
        });
    }

    let batch_means: Vec<f64> = batch_cut.iter().map(|c| c / batch_len as f64).collect();
    let (_, stderr) = mean_and_stderr(&batch_means);
    let per_node_sent = (1..=n)
        .map(|v| {
            let mut total = rational::zero();
            for s in 1..=n {
                if s != v {
                    total += weights.weight(s, v) * &scale_sum[s - 1];
                }
            }
            let batch_sent = batch_scale
                .iter()
                .map(|row| {
                    (1..=n)
                        .filter(|&s| s != v)
                        .map(|s| rational::to_f64(weights.weight(s, v)) * row[s - 1])
                        .sum()
                })
                .collect();
            NodeLedger {
                total_sent: total,
                events: post - fail_count[v - 1],
                batch_sent,
            }
        })
        .collect();
    let (time_average, time_stderr, total_time) = if spec.holding_rate.is_some() {
        let ratios: Vec<f64> = batch_tw
            .iter()
            .zip(&batch_time)
            .map(|(tw, tt)| tw / tt)
            .collect();
        (Some(tw_sum / time), Some(mean_and_stderr(&ratios).1), Some(time))
    } else {
        (None, None, None)
    };
    Ok(TrajectoryStats {
        steps: spec.steps,
        burn_in: spec.burn_in,
        mode: spec.mode,
        per_step,
        running_avg_cut: cut_sum / int(post as i64),
        per_node_sent,
        batch_len,
        batch_means,
        stderr,
        time_average,
        time_stderr,
        total_time,
    })
}

/// Discrete-time run; the cut at each step is the optimal one for the mode.
pub fn run_discrete(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    steps: u64,
    seed: u64,
    burn_in: Option<u64>,
    mode: RunMode,
) -> Result<TrajectoryStats> {
    simulate(RunSpec {
        cfg,
        rule,
        steps,
        seed,
        burn_in: burn_in.unwrap_or_else(|| default_burn_in(cfg.n())),
        mode,
        target: None,
        holding_rate: None,
    })
}

/// Continuous-time run over `events` failures with `Exp(nλ)` holding times.
///
/// Failures come from the same stream as [`run_discrete`] with the same seed;
/// holding times come from a separate stream.
pub fn run_continuous(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    events: u64,
    seed: u64,
    burn_in: Option<u64>,
    mode: RunMode,
) -> Result<TrajectoryStats> {
    let lambda = cfg
        .lambda
        .as_ref()
        .ok_or_else(|| Error::Precondition(String::from("continuous runs need λ")))?;
    let rate = rational::to_f64(lambda) * cfg.n() as f64;
    simulate(RunSpec {
        cfg,
        rule,
        steps: events,
        seed,
        burn_in: burn_in.unwrap_or_else(|| default_burn_in(cfg.n())),
        mode,
        target: None,
        holding_rate: Some(rate),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveRun {
    pub stats: TrajectoryStats,
    pub target: Rational,
    pub exact_average: Rational,
    pub max_deviation: Rational,
    /// Whether the largest cut deviation stays within the `n − k′` smallest
    /// bandwidths.
    pub deviation_feasible: bool,
}

/// Star weights scaled by `1 + ε_j` at each step so the min-cut equals `target`.
pub fn adaptive_run(
    cfg: &NetworkConfig,
    target: &Rational,
    steps: u64,
    seed: u64,
    burn_in: Option<u64>,
) -> Result<AdaptiveRun> {
    cfg.check()?;
    if !target.is_positive() {
        return Err(Error::Precondition(String::from("target must be positive")));
    }
    let spread = cut::cut_spread(cfg, &WeightRule::Star, Objective::Min)?;
    if target > &spread.average {
        return Err(Error::Precondition(String::from(
            "target exceeds the exact average min-cut; the bandwidth constraint cannot hold",
        )));
    }
    let max_deviation = spread.max_deviation();
    let stats = simulate(RunSpec {
        cfg,
        rule: &WeightRule::Star,
        steps,
        seed,
        burn_in: burn_in.unwrap_or_else(|| default_burn_in(cfg.n())),
        mode: RunMode::MinCut,
        target: Some(target.clone()),
        holding_rate: None,
    })?;
    Ok(AdaptiveRun {
        stats,
        target: target.clone(),
        exact_average: spread.average,
        deviation_feasible: cut::deviation_budget(cfg) >= max_deviation,
        max_deviation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub node: usize,
    pub class: NodeClass,
    pub events: u64,
    pub total_sent: Rational,
    pub per_event_avg: Rational,
    pub beta: Rational,
    /// Sent per recorded step, the quantity the bandwidth constraint bounds.
    pub per_step_avg: Rational,
    pub per_step_stderr: f64,
    pub ok: bool,
}

/// Per-node bandwidth use against `β`, allowing three standard errors.
pub fn bandwidth_audit(stats: &TrajectoryStats, cfg: &NetworkConfig) -> Vec<AuditRow> {
    let steps = stats.recorded_steps();
    stats
        .per_node_sent
        .iter()
        .enumerate()
        .map(|(i, ledger)| {
            let node = i + 1;
            let beta = cfg.beta_of(node).clone();
            let per_event_avg = if ledger.events == 0 {
                rational::zero()
            } else {
                &ledger.total_sent / int(ledger.events as i64)
            };
            let per_step_avg = &ledger.total_sent / int(steps as i64);
            let per_batch: Vec<f64> = ledger
                .batch_sent
                .iter()
                .map(|s| s / stats.batch_len as f64)
                .collect();
            let se = mean_and_stderr(&per_batch).1;
            let ok = per_step_avg <= beta
                || rational::to_f64(&per_step_avg) <= rational::to_f64(&beta) + 3.0 * se;
            AuditRow {
                node,
                class: cfg.class_of(node),
                events: ledger.events,
                total_sent: ledger.total_sent.clone(),
                per_event_avg,
                beta,
                per_step_avg,
                per_step_stderr: se,
                ok,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub replica_means: Vec<Rational>,
}

/// Combines per-replica averages; a single replica falls back to its own
/// batch-means error.
pub fn aggregate_replicas(runs: &[TrajectoryStats]) -> Estimate {
    let replica_means: Vec<Rational> = runs.iter().map(|r| r.running_avg_cut.clone()).collect();
    let xs: Vec<f64> = replica_means.iter().map(rational::to_f64).collect();
    let (mean, mut stderr) = mean_and_stderr(&xs);
    if runs.len() == 1 {
        stderr = runs[0].stderr;
    }
    Estimate {
        mean,
        stderr,
        replica_means,
    }
}

/// Sequential replicas with seeds derived from `seed`.
pub fn estimate_avg_cut(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    steps: u64,
    replicas: usize,
    seed: u64,
    mode: RunMode,
) -> Result<Estimate> {
    if replicas == 0 {
        return Err(Error::Precondition(String::from("need at least one replica")));
    }
    let runs = chain::replica_seeds(seed, replicas)
        .into_iter()
        .map(|s| run_discrete(cfg, rule, steps, s, None, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate_replicas(&runs))
}
