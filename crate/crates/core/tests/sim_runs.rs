mod common;

use common::cfg_b;
use dynstore_core::cut::{self, Objective};
use dynstore_core::model::{FailureModel, WeightRule};
use dynstore_core::rational::{int, ratio, to_f64};
use dynstore_core::sim::{self, RunMode};

#[test]
fn same_seed_same_trajectory() {
    let cfg = cfg_b();
    let a = sim::run_discrete(&cfg, &WeightRule::Star, 3_000, 9, None, RunMode::MinCut).unwrap();
    let b = sim::run_discrete(&cfg, &WeightRule::Star, 3_000, 9, None, RunMode::MinCut).unwrap();
    assert_eq!(a, b);
    let c = sim::run_discrete(&cfg, &WeightRule::Star, 3_000, 10, None, RunMode::MinCut).unwrap();
    assert_ne!(a.per_step, c.per_step);
}

#[test]
fn running_average_tracks_exact_average() {
    let cfg = cfg_b();
    for mode in [RunMode::MinCut, RunMode::MaxCut] {
        let exact = cut::cut_spread(&cfg, &WeightRule::Star, mode.objective()).unwrap().average;
        let s = sim::run_discrete(&cfg, &WeightRule::Star, 200_000, 3, None, mode).unwrap();
        let gap = (to_f64(&s.running_avg_cut) - to_f64(&exact)).abs();
        assert!(gap <= 3.0 * s.stderr, "{mode:?}: gap {gap} se {}", s.stderr);
    }
}

#[test]
fn every_step_cut_lies_in_the_spread() {
    let cfg = cfg_b();
    let spread = cut::cut_spread(&cfg, &WeightRule::Star, Objective::Min).unwrap();
    let s = sim::run_discrete(&cfg, &WeightRule::Star, 5_000, 4, Some(0), RunMode::MinCut).unwrap();
    assert!(s.per_step.iter().all(|r| r.cut >= spread.min && r.cut <= spread.max));
}

#[test]
fn adaptive_run_pins_the_cut() {
    let cfg = cfg_b();
    let target = ratio(12, 1);
    let run = sim::adaptive_run(&cfg, &target, 50_000, 5, None).unwrap();
    assert!(run.stats.per_step.iter().all(|r| r.cut == target));
    assert!(run.stats.per_step.iter().all(|r| r.epsilon.as_ref().is_some_and(|e| *e >= int(-1))));
    let audit = sim::bandwidth_audit(&run.stats, &cfg);
    assert_eq!(audit.len(), cfg.n());
    assert!(audit.iter().all(|row| row.ok), "{audit:?}");
    assert!(sim::adaptive_run(&cfg, &ratio(13, 1), 10, 5, None).is_err());
    assert!(sim::adaptive_run(&cfg, &int(0), 10, 5, None).is_err());
}

#[test]
fn continuous_time_average_matches_discrete() {
    let cfg = cfg_b().with_lambda(Some(ratio(1, 3)));
    let d = sim::run_discrete(&cfg, &WeightRule::Star, 100_000, 21, None, RunMode::MinCut).unwrap();
    let c = sim::run_continuous(&cfg, &WeightRule::Star, 100_000, 21, None, RunMode::MinCut).unwrap();
    let (tc, se) = (c.time_average.unwrap(), c.time_stderr.unwrap());
    let tol = 3.0 * (se * se + d.stderr * d.stderr).sqrt();
    assert!((tc - to_f64(&d.running_avg_cut)).abs() <= tol);
    assert!(sim::run_continuous(&cfg_b(), &WeightRule::Star, 10, 1, None, RunMode::MinCut).is_err());
}

#[test]
fn replicas_agree_with_exact_average() {
    let cfg = cfg_b();
    let est = sim::estimate_avg_cut(&cfg, &WeightRule::Star, 20_000, 8, 2, RunMode::MinCut).unwrap();
    assert_eq!(est.replica_means.len(), 8);
    assert!((est.mean - 12.5).abs() <= 3.0 * est.stderr + 1e-12);
}

#[test]
fn two_class_runs_use_the_failure_model() {
    let cfg = cfg_b().with_failure_model(FailureModel::TwoClass { p: ratio(1, 4), q: ratio(1, 8) });
    let s = sim::run_discrete(&cfg, &WeightRule::Star, 40_000, 8, Some(0), RunMode::MinCut).unwrap();
    let u_hits = s.per_step.iter().filter(|r| r.failed <= 2).count() as f64;
    let n = s.per_step.len() as f64;
    let sd = (n * 0.25 * 0.75).sqrt();
    assert!((u_hits - 0.25 * n).abs() <= 4.0 * sd);
}
