//! Subcommand bodies. Each returns its artifacts plus any failed checks.

use dynstore_core::bounds::{self, Warning};
use dynstore_core::chain;
use dynstore_core::combinatorics::binomial_u128;
use dynstore_core::cut::{self, CutMode, Objective};
use dynstore_core::model::{NetworkConfig, Permutation, WeightRule};
use dynstore_core::rational::{self, int, Rational};
use dynstore_core::sim::{self, AuditRow, RunMode, TrajectoryStats};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::oracle_check::{self, OracleSummary, Relation};
use crate::output::{decimal, exact, Artifact, QValue, Quantities, Table};
use crate::replicas::{self, ReplicaKind, ReplicaPlan, ReplicaRun};

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// Failed property checks; a nonempty list means exit code 2.
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RuleKind {
    Star,
    Epsilon,
    Hetero,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Min,
    Max,
}

impl ModeArg {
    pub fn run_mode(self) -> RunMode {
        match self {
            ModeArg::Min => RunMode::MinCut,
            ModeArg::Max => RunMode::MaxCut,
        }
    }

    pub fn objective(self) -> Objective {
        self.run_mode().objective()
    }
}

/// The weight rule for `kind`; ε defaults to the largest admissible value.
pub fn weight_rule(cfg: &NetworkConfig, kind: RuleKind, epsilon: Option<Rational>) -> CliResult<WeightRule> {
    Ok(match kind {
        RuleKind::Star | RuleKind::Adaptive => WeightRule::Star,
        RuleKind::Epsilon => WeightRule::FixedCostEpsilon(match epsilon {
            Some(e) => e,
            None => bounds::epsilon1_max(cfg)?,
        }),
        RuleKind::Hetero => WeightRule::HeteroEpsilon(match epsilon {
            Some(e) => e,
            None => bounds::hetero_epsilon_limit(cfg)?,
        }),
    })
}

fn warnings_json(ws: &[Warning]) -> Value {
    Value::Array(
        ws.iter()
            .map(|w| {
                json!({
                    "quantity": w.quantity,
                    "computed": exact(&w.computed),
                    "printed": exact(&w.printed),
                    "note": w.note,
                })
            })
            .collect(),
    )
}

pub fn bounds_quantities(
    cfg: &NetworkConfig,
    protocol_epsilon: Option<Rational>,
    hetero_epsilon: Option<Rational>,
) -> CliResult<(Quantities, Vec<Warning>)> {
    let r = bounds::bounds_report(cfg, protocol_epsilon, hetero_epsilon)?;
    let mut q = Quantities::default();
    q.push("static_c", Some(r.static_c), "");
    q.push(
        "static_c_alt_form",
        Some(r.static_c_alt_form),
        "alternative closed form, n2·β2 below static_c",
    );
    q.push("static_cprime", r.static_cprime, "");
    q.push("ub_average", Some(r.ub_average), "");
    q.push("epsilon1_max", r.epsilon1_max, "");
    match r.lb_protocol {
        Some((e, v)) => {
            q.push("lb_protocol", Some(v), "");
            q.push("lb_protocol.epsilon1", Some(e), "");
        }
        None => q.push("lb_protocol", None, "needs n1 ≥ 2"),
    }
    q.push("lb_avg", Some(r.lb_avg.closed_form.clone()), "");
    q.push("lb_avg.sum_form", Some(r.lb_avg.sum_form.clone()), "");
    q.push("ub_avg", Some(r.ub_avg), "");
    match r.lb_memory {
        Some(m) => {
            q.push("lb_memory", Some(m.closed_form), "");
            q.push("lb_memory.sum_form", Some(m.sum_form), "");
        }
        None => q.push("lb_memory", None, "needs k′ > n2"),
    }
    match r.lb_hetero {
        Some((e, v)) => {
            q.push("lb_hetero", Some(v), "");
            q.push("lb_hetero.epsilon1", Some(e), "");
        }
        None => q.push("lb_hetero", None, "needs a two-class failure model and n1 ≥ 2"),
    }
    q.push("hetero_expected_mincut", r.hetero_expected_mincut, "");
    q.push("best_lb", Some(r.best_lb), "");
    for w in &r.warnings {
        q.push(
            format!("warning.{}", w.quantity),
            Some(w.printed.clone()),
            format!("published figure; computed {}: {}", rational::to_fraction_string(&w.computed), w.note),
        );
    }
    Ok((q, r.warnings))
}

pub fn cmd_bounds(
    cfg: &NetworkConfig,
    protocol_epsilon: Option<Rational>,
    hetero_epsilon: Option<Rational>,
) -> CliResult<Outcome> {
    let (q, warnings) = bounds_quantities(cfg, protocol_epsilon, hetero_epsilon)?;
    let mut art = Artifact::from_quantities("bounds", &q);
    if let Value::Object(m) = &mut art.json {
        m.insert("warnings".into(), warnings_json(&warnings));
    }
    Ok(Outcome {
        artifacts: vec![art],
        failures: Vec::new(),
    })
}

pub fn parse_permutation(text: &str) -> CliResult<Permutation> {
    let order = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| CliError::Invalid(format!("permutation entry {t:?}: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Permutation::from_order(order)?)
}

pub fn static_quantities(cfg: &NetworkConfig, rule: &WeightRule, perm: Option<&Permutation>) -> CliResult<Quantities> {
    let mut q = Quantities::default();
    q.push("static_c", Some(cut::static_c(cfg)?), "");
    q.push("static_c_alt_form", Some(cut::static_c_printed(cfg)?), "alternative closed form");
    q.push("static_cprime", cut::static_cprime(cfg).ok(), "");
    if let Some(pi) = perm {
        let min = cut::min_cut(cfg, rule, pi, CutMode::Auto)?;
        q.push("min_cut", Some(min.value), format!("selection {}", min.selection));
        match cut::max_cut(cfg, rule, pi, CutMode::Auto) {
            Ok(max) => q.push("max_cut", Some(max.value), format!("selection {}", max.selection)),
            Err(e) => q.push("max_cut", None, e.to_string()),
        }
    }
    Ok(q)
}

pub fn cmd_static_cut(cfg: &NetworkConfig, rule: &WeightRule, perm: Option<&Permutation>) -> CliResult<Outcome> {
    let q = static_quantities(cfg, rule, perm)?;
    Ok(Outcome {
        artifacts: vec![Artifact::from_quantities("static_cut", &q)],
        failures: Vec::new(),
    })
}

pub fn avg_quantities(cfg: &NetworkConfig, rule: &WeightRule, objective: Objective) -> CliResult<Quantities> {
    let s = cut::cut_spread(cfg, rule, objective)?;
    let mut q = Quantities::default();
    q.push("exact_average", Some(s.average.clone()), "");
    q.push("min", Some(s.min.clone()), "");
    q.push("max", Some(s.max.clone()), "");
    q.push("max_deviation", Some(s.max_deviation()), "");
    q.push("position_classes", Some(int(s.classes as i64)), "");
    let budget = cut::deviation_budget(cfg);
    let feasible = budget >= s.max_deviation();
    q.push("deviation_budget", Some(budget), if feasible { "feasible" } else { "infeasible" });
    Ok(q)
}

#[derive(Debug, Clone)]
pub struct MonteCarlo {
    pub steps: u64,
    pub replicas: usize,
    pub seed: u64,
    pub burn_in: Option<u64>,
}

fn replica_quantities(runs: &[ReplicaRun], continuous: bool) -> Quantities {
    let stats: Vec<TrajectoryStats> = runs.iter().map(|r| r.stats().clone()).collect();
    let est = sim::aggregate_replicas(&stats);
    let mut q = Quantities::default();
    q.push("mc.replicas", Some(int(runs.len() as i64)), "");
    q.push("mc.mean", Some(cut::mean(&est.replica_means)), "mean of replica averages");
    q.push_value("mc.stderr", QValue::Float(est.stderr), "");
    if continuous {
        let xs: Vec<f64> = stats.iter().filter_map(|s| s.time_average).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        q.push_value("mc.time_average", QValue::Float(mean), "");
        if stats.len() == 1 {
            q.push_value("mc.time_stderr", QValue::Float(stats[0].time_stderr.unwrap_or(f64::NAN)), "");
        }
    }
    q
}

pub fn cmd_avg_cut(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    mode: ModeArg,
    mc: Option<&MonteCarlo>,
) -> CliResult<Outcome> {
    let mut q = avg_quantities(cfg, rule, mode.objective())?;
    if let Some(mc) = mc {
        let plan = ReplicaPlan {
            cfg,
            rule,
            steps: mc.steps,
            burn_in: mc.burn_in,
            mode: mode.run_mode(),
            kind: ReplicaKind::Discrete,
        };
        let runs = replicas::run_replicas(&plan, mc.replicas, mc.seed)?;
        let extra = replica_quantities(&runs, false);
        let mut merged = Quantities::default();
        merged.extend_prefixed("exact", q);
        merged.extend_prefixed("sampled", extra);
        q = merged;
    }
    Ok(Outcome {
        artifacts: vec![Artifact::from_quantities("avg_cut", &q)],
        failures: Vec::new(),
    })
}

pub fn trajectory_table(stats: &TrajectoryStats) -> Table {
    let mut t = Table::new(&[
        "step",
        "failed_node",
        "cut",
        "running_avg",
        "epsilon",
        "cut_decimal",
        "running_avg_decimal",
    ]);
    let mut sum = rational::zero();
    for (i, r) in stats.per_step.iter().enumerate() {
        sum += &r.cut;
        let avg = &sum / int(i as i64 + 1);
        t.push(vec![
            r.step.to_string(),
            r.failed.to_string(),
            rational::to_fraction_string(&r.cut),
            rational::to_fraction_string(&avg),
            r.epsilon.as_ref().map(rational::to_fraction_string).unwrap_or_default(),
            decimal(&r.cut),
            decimal(&avg),
        ]);
    }
    t
}

pub fn audit_table(rows: &[AuditRow]) -> Table {
    let mut t = Table::new(&[
        "node",
        "class",
        "events",
        "total_sent",
        "per_event_avg",
        "beta",
        "ok",
        "per_step_avg",
        "per_event_avg_decimal",
        "per_step_avg_decimal",
        "per_step_stderr",
    ]);
    for r in rows {
        t.push(vec![
            r.node.to_string(),
            format!("{:?}", r.class),
            r.events.to_string(),
            rational::to_fraction_string(&r.total_sent),
            rational::to_fraction_string(&r.per_event_avg),
            rational::to_fraction_string(&r.beta),
            r.ok.to_string(),
            rational::to_fraction_string(&r.per_step_avg),
            decimal(&r.per_event_avg),
            decimal(&r.per_step_avg),
            format!("{}", r.per_step_stderr),
        ]);
    }
    t
}

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub rule: RuleKind,
    pub epsilon: Option<Rational>,
    pub target: Option<Rational>,
    pub mode: ModeArg,
    pub continuous: bool,
    pub mc: MonteCarlo,
}

pub fn cmd_simulate(cfg: &NetworkConfig, args: &SimulateArgs) -> CliResult<Outcome> {
    let rule = weight_rule(cfg, args.rule, args.epsilon.clone())?;
    let kind = match (args.rule, args.continuous) {
        (RuleKind::Adaptive, true) => {
            return Err(CliError::invalid("the adaptive rule runs in discrete time only"));
        }
        (RuleKind::Adaptive, false) => {
            if args.mode == ModeArg::Max {
                return Err(CliError::invalid("the adaptive rule pins the min-cut"));
            }
            let target = match &args.target {
                Some(t) => t.clone(),
                None => cut::exact_avg_min_cut(cfg, &WeightRule::Star)?,
            };
            ReplicaKind::Adaptive(target)
        }
        (_, true) => ReplicaKind::Continuous,
        (_, false) => ReplicaKind::Discrete,
    };
    let plan = ReplicaPlan {
        cfg,
        rule: &rule,
        steps: args.mc.steps,
        burn_in: args.mc.burn_in,
        mode: args.mode.run_mode(),
        kind,
    };
    let runs = replicas::run_replicas(&plan, args.mc.replicas, args.mc.seed)?;
    let mut failures = Vec::new();
    let mut summary = Quantities::default();
    let rule_name = if args.rule == RuleKind::Adaptive { "adaptive" } else { rule.name() };
    summary.push_value("rule", QValue::Text(rule_name.to_string()), "");
    summary.push("steps", Some(int(args.mc.steps as i64)), "");
    summary.push("burn_in", Some(int(runs[0].stats().burn_in as i64)), "");
    let audits: Vec<Vec<AuditRow>> = runs.iter().map(|r| sim::bandwidth_audit(r.stats(), cfg)).collect();
    for (i, audit) in audits.iter().enumerate() {
        for row in audit.iter().filter(|r| !r.ok) {
            failures.push(format!(
                "replica {i}: node {} sends {} per step, above β = {}",
                row.node,
                decimal(&row.per_step_avg),
                rational::to_fraction_string(&row.beta)
            ));
        }
    }
    summary.push_value(
        "audit",
        QValue::Text(if failures.is_empty() { "pass" } else { "fail" }.to_string()),
        "",
    );
    if let ReplicaRun::Adaptive(a) = &runs[0] {
        summary.push("adaptive.target", Some(a.target.clone()), "");
        summary.push("adaptive.exact_average", Some(a.exact_average.clone()), "");
        summary.push("adaptive.max_deviation", Some(a.max_deviation.clone()), "");
        summary.push_value("adaptive.deviation_feasible", QValue::Text(a.deviation_feasible.to_string()), "");
        for (i, r) in runs.iter().enumerate() {
            if r.stats().per_step.iter().any(|s| s.cut != a.target) {
                failures.push(format!("replica {i}: a post-burn-in cut differs from the target"));
            }
        }
    }
    summary.extend_prefixed("estimate", replica_quantities(&runs, args.continuous));
    Ok(Outcome {
        artifacts: vec![
            Artifact::from_quantities("summary", &summary),
            Artifact::from_table("trajectory", trajectory_table(runs[0].stats())),
            Artifact::from_table("audit", audit_table(&audits[0])),
        ],
        failures,
    })
}

pub fn cmd_mixing(ns: &[usize], cs: &[f64]) -> CliResult<Outcome> {
    let mut t = Table::new(&["n", "c", "t", "tv", "tv_decimal", "bound", "holds"]);
    let mut failures = Vec::new();
    for &n in ns {
        for &c in cs {
            let cert = chain::mixing_certificate(n, c)?;
            if !cert.holds {
                failures.push(format!("n={n} c={c}: TV {} > e^-c", decimal(&cert.tv)));
            }
            t.push(vec![
                n.to_string(),
                c.to_string(),
                cert.t.to_string(),
                rational::to_fraction_string(&cert.tv),
                decimal(&cert.tv),
                format!("{:.6}", cert.bound),
                cert.holds.to_string(),
            ]);
        }
    }
    Ok(Outcome {
        artifacts: vec![Artifact::from_table("mixing", t)],
        failures,
    })
}

#[derive(Debug, Clone)]
pub struct Occupancy {
    pub steps: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
}

pub fn cmd_stationary(cfg: &NetworkConfig, occupancy: Option<&Occupancy>) -> CliResult<Outcome> {
    let nu = chain::stationary_nu(cfg)?;
    let residual = chain::verify_stationary(&nu, cfg)?;
    let mut failures = Vec::new();
    if residual != rational::zero() {
        failures.push(format!("block law is not stationary: residual {}", rational::to_fraction_string(&residual)));
    }
    let sampled = match occupancy {
        Some(o) => Some(chain::simulate_block_occupancy(cfg, o.steps, o.burn_in, o.thin, o.seed)?),
        None => None,
    };
    let mut headers = vec!["block_index", "probability", "probability_decimal"];
    if sampled.is_some() {
        headers.extend(["occupancy", "occupancy_stderr", "within_3se"]);
    }
    let mut t = Table::new(&headers);
    for (i, p) in nu.block_probs.iter().enumerate() {
        let mut row = vec![(i + 1).to_string(), rational::to_fraction_string(p), decimal(p)];
        if let Some(s) = &sampled {
            let m = s.samples as f64;
            let freq = s.counts[i] as f64 / m;
            let pf = rational::to_f64(p);
            let se = (pf * (1.0 - pf) / m).sqrt();
            let ok = (freq - pf).abs() <= 3.0 * se;
            if !ok {
                failures.push(format!("block {}: occupancy {freq} vs {pf} ± {se}", i + 1));
            }
            row.extend([format!("{freq}"), format!("{se}"), ok.to_string()]);
        }
        t.push(row);
    }
    Ok(Outcome {
        artifacts: vec![Artifact::from_table("blocks", t)],
        failures,
    })
}

pub fn cmd_oracle_check(
    configs: &[NetworkConfig],
    rule: &WeightRule,
    relations: &[Relation],
    fault: Option<Rational>,
) -> CliResult<(Outcome, Vec<OracleSummary>)> {
    let mut t = Table::new(&["relation", "configs", "comparisons", "mismatches", "first_mismatch"]);
    let mut failures = Vec::new();
    let mut summaries = Vec::new();
    for &rel in relations {
        let s = oracle_check::oracle_check(configs, rule, rel, fault.clone())?;
        let first = s
            .examples
            .first()
            .map(|m| {
                format!(
                    "{} pi={} D={} closed={} oracle={}",
                    m.config,
                    m.permutation,
                    m.selection.as_deref().unwrap_or("min"),
                    rational::to_fraction_string(&m.closed_form),
                    rational::to_fraction_string(&m.oracle)
                )
            })
            .unwrap_or_default();
        if s.mismatches > 0 {
            failures.push(s.line());
        }
        t.push(vec![
            rel.name().to_string(),
            s.configs.to_string(),
            s.comparisons.to_string(),
            s.mismatches.to_string(),
            first,
        ]);
        summaries.push(s);
    }
    Ok((
        Outcome {
            artifacts: vec![Artifact::from_table("oracle_check", t)],
            failures,
        },
        summaries,
    ))
}

/// Bounds, static cuts and exact averages in one document, plus the block law
/// when it applies.
pub fn cmd_report(cfg: &NetworkConfig) -> CliResult<Outcome> {
    let (bq, warnings) = bounds_quantities(cfg, None, None)?;
    let mut q = Quantities::default();
    q.extend_prefixed("bounds", bq);
    if binomial_u128(cfg.n() as u64, cfg.n1 as u64) <= cut::POSITION_CLASS_LIMIT {
        q.extend_prefixed("avg_min_cut", avg_quantities(cfg, &WeightRule::Star, Objective::Min)?);
        if cfg.a_hat() >= 0 {
            q.extend_prefixed("avg_max_cut", avg_quantities(cfg, &WeightRule::Star, Objective::Max)?);
        }
        if cfg.n1 >= 2 {
            let rule = weight_rule(cfg, RuleKind::Epsilon, None)?;
            q.extend_prefixed("avg_min_cut_epsilon", avg_quantities(cfg, &rule, Objective::Min)?);
        }
    }
    let mut failures = Vec::new();
    let mut artifacts = Vec::new();
    if cfg.n1 == 1 && cfg.two_class().is_some() {
        let st = cmd_stationary(cfg, None)?;
        failures.extend(st.failures);
        artifacts.extend(st.artifacts);
    }
    let mut art = Artifact::from_quantities("report", &q);
    if let Value::Object(m) = &mut art.json {
        m.insert("warnings".into(), warnings_json(&warnings));
    }
    artifacts.insert(0, art);
    Ok(Outcome { artifacts, failures })
}
