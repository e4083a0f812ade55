//! Acceptance criteria 1–12. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use dynstore::oracle_check::{self, Relation};
use dynstore_core::bounds;
use dynstore_core::chain;
use dynstore_core::combinatorics::{Combinations, Permutations};
use dynstore_core::cut::{self, Objective};
use dynstore_core::flow_graph::{oracle_cut, FlowGraph};
use dynstore_core::model::{FailureModel, NetworkConfig, Selection, WeightRule};
use dynstore_core::rational::{int, ratio, to_decimal_string, to_f64, to_fixed_string, to_fraction_string, Rational};
use dynstore_core::sim::{self, RunMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_traits::Signed;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            detail: String::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
            self.notes.push(format!("failed: {what}"));
        } else {
            self.notes.push(format!("ok: {what}"));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(format!("note: {}", what.into()));
    }

    fn within(&mut self, elapsed: Duration, limit: Duration) {
        self.check(
            elapsed <= limit,
            format!("runtime {:.1}s within {}s", elapsed.as_secs_f64(), limit.as_secs()),
        );
    }
}

fn cfg_a() -> NetworkConfig {
    NetworkConfig::new(10, 10, int(2), int(1), 13)
}

fn cfg_b() -> NetworkConfig {
    NetworkConfig::new(2, 3, int(2), int(1), 4)
}

fn cfg_c() -> NetworkConfig {
    NetworkConfig::new(1, 19, int(2), int(1), 13).with_failure_model(FailureModel::TwoClass {
        p: ratio(4, 95),
        q: ratio(1, 5),
    })
}

fn fmt(r: &Rational) -> String {
    format!("{} ({})", to_fraction_string(r), to_decimal_string(r, 6))
}

// ---- independent oracles ----

/// Star-rule cut written out directly: members of `d` ordered by position,
/// each contributes the bandwidth of every other node minus that of earlier members.
fn star_cut(cfg: &NetworkConfig, order: &[usize], d: &[usize]) -> Rational {
    let beta = |v: usize| if v <= cfg.n1 { cfg.beta1.clone() } else { cfg.beta2.clone() };
    let all: Rational = (1..=cfg.n()).map(beta).sum();
    let mut members: Vec<usize> = order.iter().copied().filter(|v| d.contains(v)).collect();
    members.dedup();
    let mut total = int(0);
    let mut earlier = int(0);
    for &u in &members {
        total += &all - beta(u) - &earlier;
        earlier += beta(u);
    }
    total
}

fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn hyper(n: u64, good: u64, draws: u64, l: u64) -> Rational {
    if l > good || l > draws || draws - l > n - good {
        return int(0);
    }
    let num = choose(good, l) * choose(n - good, draws - l);
    Rational::new((num as i128).into(), (choose(n, draws) as i128).into())
}

/// Exact TV to uniform after `t` uniform failures from the identity, by
/// counting paths per state.
fn tv_by_counting(n: usize, t: usize) -> Rational {
    let mut counts: HashMap<Vec<u8>, u128> = HashMap::new();
    counts.insert((1..=n as u8).collect(), 1);
    for _ in 0..t {
        let mut next: HashMap<Vec<u8>, u128> = HashMap::new();
        for (state, c) in &counts {
            for v in 1..=n as u8 {
                let mut s: Vec<u8> = state.iter().copied().filter(|&x| x != v).collect();
                s.push(v);
                *next.entry(s).or_default() += c;
            }
        }
        counts = next;
    }
    let total = (n as u128).pow(t as u32);
    let states: u128 = (1..=n as u128).product();
    let mut gap = int(0);
    let u = Rational::new(1.into(), (states as i128).into());
    for perm in Permutations::new(n) {
        let key: Vec<u8> = perm.iter().map(|&x| x as u8).collect();
        let c = counts.get(&key).copied().unwrap_or(0);
        let p = Rational::new((c as i128).into(), (total as i128).into());
        gap += (p - &u).abs();
    }
    gap / int(2)
}

/// Block transition matrix for a single U node, from the failure rule.
fn block_kernel(n: usize, p: &Rational, q: &Rational) -> Vec<Vec<Rational>> {
    let mut k = vec![vec![int(0); n]; n];
    for i in 1..=n {
        // U itself fails and moves to the end
        k[i - 1][n - 1] += q;
        // an L node behind it fails: U moves forward
        if i > 1 {
            k[i - 1][i - 2] += int(i as i64 - 1) * p;
        }
        // an L node after it fails: U keeps its position
        k[i - 1][i - 1] += int((n - i) as i64) * p;
    }
    k
}

fn grid(max_n: usize) -> Vec<NetworkConfig> {
    oracle_check::grid(max_n)
}

// ---- criteria ----

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let c = cut::static_c(&cfg_a()).unwrap();
    let elapsed = start.elapsed();
    o.check(c == int(214), format!("static_C(CFG-A) = {}", fmt(&c)));
    let d = Selection::new(&cfg_a(), (1..=13).collect()).unwrap();
    let g = oracle_cut(&cfg_a(), &WeightRule::Star, &(1..=20).collect::<Vec<_>>(), &d).unwrap();
    o.check(g.finite() == Some(&int(214)), "flow-graph min-cut at identity, D = {1..13}, is 214");
    o.within(elapsed, Duration::from_secs(1));
    o.detail = format!("static_C = {}", to_fraction_string(&c));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let cfg = cfg_a();
    let eps = ratio(1, 20);
    let rule = WeightRule::FixedCostEpsilon(eps.clone());
    let spread = cut::cut_spread(&cfg, &rule, Objective::Min).unwrap();
    o.check(spread.min == ratio(865, 4), format!("min over π of the ε-cut = {}", fmt(&spread.min)));
    o.check(
        bounds::lb_protocol(&cfg, &eps).unwrap() == spread.min,
        "protocol bound C + n1(n1−1)ε/2 equals the enumerated minimum",
    );
    let stats = sim::run_discrete(&cfg, &rule, 100_000, 2, None, RunMode::MinCut).unwrap();
    let audit = sim::bandwidth_audit(&stats, &cfg);
    o.check(audit.iter().all(|r| r.ok), "bandwidth audit passes on every node over 10^5 steps");
    // expected per-step sends: U helps other U repairs at β1+ε and L repairs at β1−(n1−1)ε/n2
    let u_expect = ratio(9, 20) * (int(2) + &eps) + ratio(10, 20) * (int(2) - ratio(9, 200));
    let l_expect = ratio(19, 20) * int(1);
    o.check(u_expect < int(2), format!("expected U send per step {} < β1", fmt(&u_expect)));
    for r in &audit {
        let want = if r.node <= 10 { &u_expect } else { &l_expect };
        let gap = (to_f64(&r.per_step_avg) - to_f64(want)).abs();
        if gap > 3.0 * r.per_step_stderr + 1e-12 {
            o.check(false, format!("node {} per-step send {} vs expected {}", r.node, to_f64(&r.per_step_avg), to_f64(want)));
        }
    }
    o.check(true, "per-node per-step sends match the expected values within 3σ");
    o.within(start.elapsed(), Duration::from_secs(60));
    o.detail = format!("min ε-cut = {}", to_fraction_string(&spread.min));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let configs = grid(6);
    let sel = oracle_check::oracle_check(&configs, &WeightRule::Star, Relation::Selection, None).unwrap();
    let min = oracle_check::oracle_check(&configs, &WeightRule::Star, Relation::MinOverSelections, None).unwrap();
    let pinned = oracle_check::oracle_check(&configs, &WeightRule::Star, Relation::Pinned, None).unwrap();
    o.check(sel.mismatches == 0, format!("per-selection cut_value vs graph min-cut: {}", sel.line()));
    for m in sel.examples.iter().take(2) {
        o.note(format!(
            "{} π={} D={}: closed form {} vs graph {}",
            m.config,
            m.permutation,
            m.selection.as_deref().unwrap_or("-"),
            to_fraction_string(&m.closed_form),
            to_fraction_string(&m.oracle)
        ));
    }
    o.note(
        "the graph min-cut for D is the min over supersets S ⊇ D of the selection cost: \
         unselected active nodes relay flow, so it can fall below cut_value(π, D)",
    );
    o.note(format!("min over D agrees everywhere: {}", min.line()));
    o.note(format!("with unselected incarnations pinned to the source: {}", pinned.line()));
    o.within(start.elapsed(), Duration::from_secs(600));
    o.detail = sel.line();
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let cfg = cfg_a();
    let avg = cut::exact_avg_min_cut(&cfg, &WeightRule::Star).unwrap();
    let lb = bounds::lb_avg(&cfg).unwrap();
    let ub = bounds::ub_avg(&cfg).unwrap();
    // independent hypergeometric sum for the lower-bound increment
    let a = 3u64;
    let mut inc = int(0);
    for l in 0..=a {
        inc += hyper(20, 10, a, l) * int((l * (a + l)) as i64);
    }
    let inc = inc / int(2);
    o.check(lb.sum_form == lb.closed_form, "lb_avg sum and closed forms agree");
    o.check(lb.closed_form == int(214) + &inc, format!("lb_avg = 214 + {} by an independent sum", to_fraction_string(&inc)));
    o.check(lb.closed_form <= avg && avg <= ub, format!("{} ≤ {} ≤ {}", fmt(&lb.closed_form), fmt(&avg), fmt(&ub)));
    o.check(to_fixed_string(&inc, 1) == "3.7", format!("increment renders as {} (\"+3.7\")", to_fixed_string(&inc, 1)));
    let ub_inc = &ub - int(214);
    o.check(ub_inc == ratio(39, 4), format!("upper increment = {} (\"+9.75\")", to_decimal_string(&ub_inc, 3)));
    if inc != ratio(1043, 280) {
        o.note(format!(
            "stated endpoint 214 + 1043/280 differs from the formula value 214 + {}; both render as +3.7",
            to_fraction_string(&inc)
        ));
    }
    o.within(start.elapsed(), Duration::from_secs(300));
    o.detail = format!("C_avg = {}", fmt(&avg));
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut tried, mut bad) = (0u32, 0u32);
    let (mut memory, mut independent) = (0u32, 0u32);
    while tried < 1200 {
        let n1 = rng.gen_range(1..=30usize);
        let n2 = rng.gen_range(2..=30usize);
        let k = rng.gen_range(n1 + 1..=n1 + n2);
        let b2 = ratio(rng.gen_range(1..=9), rng.gen_range(1..=4));
        let b1 = &b2 + ratio(rng.gen_range(0..=12), rng.gen_range(1..=5));
        let cfg = NetworkConfig::new(n1, n2, b1, b2, k);
        tried += 1;
        let lb = bounds::lb_avg(&cfg).unwrap();
        if !lb.agree() {
            bad += 1;
        }
        // independent check of the sum itself
        let a = (k - n1) as u64;
        let mut s = int(0);
        for l in 0..=a.min(n1 as u64) {
            s += hyper(cfg.n() as u64, n1 as u64, a, l) * int((l * (a + l)) as i64);
        }
        let want = cut::static_c(&cfg).unwrap() + (&cfg.beta1 - &cfg.beta2) * s / int(2);
        if want == lb.sum_form {
            independent += 1;
        } else {
            bad += 1;
        }
        if cfg.a_hat() >= 1 {
            memory += 1;
            if !bounds::lb_memory(&cfg).unwrap().agree() {
                bad += 1;
            }
        }
    }
    o.check(bad == 0, format!("{tried} configs, {memory} with â ≥ 1, {bad} disagreements"));
    o.check(independent == tried, "lb_avg sums match an independent hypergeometric evaluation");
    o.within(start.elapsed(), Duration::from_secs(60));
    o.detail = format!("{tried} configs, 0 mismatches expected, {bad} found");
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let cfg = cfg_b().with_lambda(Some(int(1)));
    // exact average by brute force over all permutations and selections
    let mut total = int(0);
    let mut count = 0i64;
    for order in Permutations::new(5) {
        let best = Combinations::new(5, 4).map(|d| star_cut(&cfg, &order, &d)).min().unwrap();
        total += best;
        count += 1;
    }
    let exact = total / int(count);
    o.check(exact == ratio(25, 2), format!("brute-force exact average {}", fmt(&exact)));
    o.check(cut::exact_avg_min_cut(&cfg, &WeightRule::Star).unwrap() == exact, "position-class average agrees");
    let d = sim::run_discrete(&cfg, &WeightRule::Star, 100_000, 6, None, RunMode::MinCut).unwrap();
    let gap = (to_f64(&d.running_avg_cut) - to_f64(&exact)).abs();
    o.check(gap <= 3.0 * d.stderr, format!("discrete avg {:.4} vs {} (|gap| {:.4} ≤ 3·{:.4})", to_f64(&d.running_avg_cut), to_f64(&exact), gap, d.stderr));
    let c = sim::run_continuous(&cfg, &WeightRule::Star, 100_000, 6, None, RunMode::MinCut).unwrap();
    let (ta, tse) = (c.time_average.unwrap(), c.time_stderr.unwrap());
    let se = (tse * tse + d.stderr * d.stderr).sqrt();
    let gap2 = (ta - to_f64(&d.running_avg_cut)).abs();
    o.check(gap2 <= 3.0 * se, format!("continuous avg {ta:.4} vs discrete (|gap| {gap2:.4} ≤ 3·{se:.4})"));
    o.within(start.elapsed(), Duration::from_secs(60));
    o.detail = format!("discrete {:.4}, continuous {ta:.4}, exact 12.5", to_f64(&d.running_avg_cut));
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut certified = 0;
    for n in [3usize, 4, 5] {
        for c in [0.0f64, 1.0, 2.0, 3.0] {
            let t = (n as f64 * (n as f64).ln() + c * n as f64).ceil() as usize;
            let tv = tv_by_counting(n, t);
            let cert = chain::mixing_certificate(n, c).unwrap();
            let ok = cert.t == t && cert.tv == tv && to_f64(&tv) <= (-c).exp();
            if ok {
                certified += 1;
            }
            o.check(ok, format!("n={n} c={c} t={t}: TV {} ≤ e^-{c}", to_decimal_string(&tv, 4)));
        }
    }
    o.within(start.elapsed(), Duration::from_secs(60));
    o.detail = format!("{certified}/12 certified");
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let cfg = cfg_c();
    let nu = chain::stationary_nu(&cfg).unwrap();
    let residual = chain::verify_stationary(&nu, &cfg).unwrap();
    o.check(residual == int(0), format!("verify_stationary residual = {}", to_fraction_string(&residual)));
    let total: Rational = nu.block_probs.iter().sum();
    o.check(total == int(1), "block masses sum to 1");
    o.check(nu.block_probs[19] == ratio(1, 5), format!("P_n mass = {}", to_fraction_string(&nu.block_probs[19])));
    // independent kernel
    let k = block_kernel(20, &ratio(4, 95), &ratio(1, 5));
    let mut worst = int(0);
    for j in 0..20 {
        let flow: Rational = (0..20).map(|i| &nu.block_probs[i] * &k[i][j]).sum();
        worst = worst.max((flow - &nu.block_probs[j]).abs());
    }
    o.check(worst == int(0), "ν is stationary for an independently built block kernel");
    let steps = 1_000_000u64;
    let thin = 50;
    let burn = chain::mixing_time(20, 3.0) as u64;
    let z_scores = |seed: u64| -> (u64, Vec<f64>) {
        let occ = chain::simulate_block_occupancy(&cfg, steps, burn, thin, seed).unwrap();
        let m = occ.samples as f64;
        let z = nu
            .block_probs
            .iter()
            .zip(&occ.counts)
            .map(|(p, &c)| {
                let pf = to_f64(p);
                (c as f64 / m - pf) / (pf * (1.0 - pf) / m).sqrt()
            })
            .collect();
        (occ.samples, z)
    };
    let (samples, z) = z_scores(0);
    let outside: Vec<String> = z
        .iter()
        .enumerate()
        .filter(|(_, z)| z.abs() > 3.0)
        .map(|(i, z)| format!("block {}: z = {z:.2}", i + 1))
        .collect();
    o.check(
        outside.is_empty(),
        format!("occupancy over {steps} steps ({samples} samples, every {thin}th) within 3 binomial SE per block"),
    );
    for s in outside {
        o.note(s);
    }
    // pooled calibration over further seeds: z should be standard normal
    let pooled: Vec<f64> = (1..=20u64).flat_map(|s| z_scores(s).1).collect();
    let mean_sq = pooled.iter().map(|z| z * z).sum::<f64>() / pooled.len() as f64;
    let mean = pooled.iter().sum::<f64>() / pooled.len() as f64;
    o.check(
        (0.8..=1.2).contains(&mean_sq) && mean.abs() <= 3.0 / (pooled.len() as f64).sqrt(),
        format!("pooled over 20 more seeds: mean z = {mean:.3}, mean z² = {mean_sq:.3}"),
    );
    o.within(start.elapsed(), Duration::from_secs(120));
    o.detail = format!("P_n = {}, residual {}", to_fraction_string(&nu.block_probs[19]), to_fraction_string(&residual));
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let n = 10usize;
    let threshold = 2.0 * n as f64 * (n as f64).ln();
    let sampler = chain::FailureSampler::uniform(n);
    let mut r = chain::rng(9);
    let trials = 10_000;
    let hits = (0..trials)
        .filter(|_| chain::sample_t0_with(&sampler, &mut r) as f64 >= threshold)
        .count();
    let freq = hits as f64 / trials as f64;
    let bound = (n as f64).powf(1.0 - 2.0);
    o.check(freq <= bound, format!("Pr(t0 ≥ {threshold:.2}) ≈ {freq:.4} ≤ {bound}"));
    o.within(start.elapsed(), Duration::from_secs(30));
    o.detail = format!("empirical tail {freq:.4}");
    o
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let cfg = cfg_a();
    let target = cut::exact_avg_min_cut(&cfg, &WeightRule::Star).unwrap();
    let run = sim::adaptive_run(&cfg, &target, 100_000, 10, None).unwrap();
    let pinned = run.stats.per_step.iter().all(|r| r.cut == target);
    o.check(pinned, format!("all {} post-burn-in cuts equal {}", run.stats.per_step.len(), fmt(&target)));
    o.check(
        run.stats.per_step.iter().all(|r| r.epsilon.as_ref().is_some_and(|e| *e >= int(-1))),
        "every ε_j ≥ −1",
    );
    let audit = sim::bandwidth_audit(&run.stats, &cfg);
    o.check(audit.iter().all(|r| r.ok), "bandwidth audit passes within 3σ on every node");
    let worst = audit
        .iter()
        .map(|r| to_f64(&r.per_step_avg) / to_f64(&r.beta))
        .fold(0.0f64, f64::max);
    o.note(format!("largest per-step send relative to β: {worst:.4}"));
    o.note(format!(
        "deviation budget check: max |C(π) − C_avg| = {} vs n−k′ smallest β sum = {} (feasible: {})",
        to_fraction_string(&run.max_deviation),
        to_fraction_string(&cut::deviation_budget(&cfg)),
        run.deviation_feasible
    ));
    o.within(start.elapsed(), Duration::from_secs(120));
    o.detail = format!("target {}", to_fraction_string(&target));
    o
}

fn criterion_11() -> Outcome {
    let mut o = Outcome::new();
    let hetero = cfg_a().with_failure_model(FailureModel::TwoClass {
        p: ratio(3, 40),
        q: ratio(1, 40),
    });
    let limit = bounds::hetero_epsilon_limit(&hetero).unwrap();
    o.check(limit == ratio(1, 6), format!("ε1 limit = {}", to_fraction_string(&limit)));
    let lb = bounds::lb_hetero(&hetero, &ratio(1, 6)).unwrap();
    o.check(lb == ratio(443, 2), format!("lb_hetero = {} (\"214+7.5\")", fmt(&lb)));
    let ub = bounds::ub_average(&cfg_c()).unwrap();
    o.check(ub == ratio(3549, 20), format!("averaging bound on CFG-C = {}", fmt(&ub)));
    o.check(to_fixed_string(&ub, 2) == "177.45", "renders as 177.45");
    o.detail = format!("{} and {}", to_fraction_string(&lb), to_fraction_string(&ub));
    o
}

fn criterion_12() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let a = cfg_a();
    let warnings = bounds::discrepancy_warnings(&a).unwrap();
    let flagged = |q: &str, printed: Rational| warnings.iter().any(|w| w.quantity == q && w.printed == printed);
    o.check(
        flagged("ub_average", ratio(471, 2)) && bounds::ub_average(&a).unwrap() == ratio(507, 2),
        "averaging bound on CFG-A: 507/2 computed, 471/2 printed, flagged",
    );
    o.check(
        flagged("static_cprime", int(269)) && cut::static_cprime(&a).unwrap() == int(263),
        "C′ on CFG-A: 263 computed, 269 printed, flagged",
    );
    let inc = bounds::lb_memory(&a).unwrap().closed_form - int(263);
    o.check(
        flagged("lb_memory_increment", ratio(40, 3)) && inc == ratio(270, 19),
        "memory increment on CFG-A: 270/19 computed, 40/3 printed, flagged",
    );
    let cw = bounds::discrepancy_warnings(&cfg_c()).unwrap();
    o.check(
        cw.iter().any(|w| w.quantity == "static_c" && w.printed == int(150)) && cut::static_c(&cfg_c()).unwrap() == int(169),
        "static C on CFG-C: 169 computed, 150 printed, flagged",
    );

    // C′ against exhaustive min over π of max over D, with an independent cut formula
    let instances: Vec<NetworkConfig> = grid(6).into_iter().filter(|c| c.a_hat() >= 1).collect();
    let results: Vec<(bool, bool, bool)> = instances
        .par_iter()
        .map(|cfg| {
            let cp = cut::static_cprime(cfg).unwrap();
            let c = cut::static_c(cfg).unwrap();
            let mut brute_cp: Option<Rational> = None;
            let mut oracle_cp: Option<Rational> = None;
            let mut oracle_c: Option<Rational> = None;
            for order in Permutations::new(cfg.n()) {
                let graph = FlowGraph::build(cfg, &WeightRule::Star, &order).unwrap();
                let mut max_b: Option<Rational> = None;
                let mut max_g: Option<Rational> = None;
                let mut min_g: Option<Rational> = None;
                for d in Combinations::new(cfg.n(), cfg.k_prime) {
                    let b = star_cut(cfg, &order, &d);
                    let sel = Selection::new(cfg, d).unwrap();
                    let g = graph.attach_selection(&sel).unwrap().min_cut_value().finite().cloned().unwrap();
                    max_b = Some(max_b.map_or(b.clone(), |m| m.max(b)));
                    max_g = Some(max_g.map_or(g.clone(), |m| m.max(g.clone())));
                    min_g = Some(min_g.map_or(g.clone(), |m| m.min(g)));
                }
                let (mb, mg, ng) = (max_b.unwrap(), max_g.unwrap(), min_g.unwrap());
                brute_cp = Some(brute_cp.map_or(mb.clone(), |m| m.min(mb)));
                oracle_cp = Some(oracle_cp.map_or(mg.clone(), |m| m.min(mg)));
                oracle_c = Some(oracle_c.map_or(ng.clone(), |m| m.min(ng)));
            }
            (brute_cp.unwrap() == cp, oracle_cp.unwrap() == cp, oracle_c.unwrap() == c)
        })
        .collect();
    let total = results.len();
    let brute_bad = results.iter().filter(|r| !r.0).count();
    let oracle_cp_bad = results.iter().filter(|r| !r.1).count();
    let oracle_c_bad = results.iter().filter(|r| !r.2).count();
    o.check(brute_bad == 0, format!("C′ = exhaustive min-max on {total} instances with n ≤ 6: {brute_bad} mismatches"));
    o.check(oracle_c_bad == 0, format!("flow-graph oracle confirms C on {total} instances: {oracle_c_bad} mismatches"));
    o.check(
        oracle_cp_bad == 0,
        format!("flow-graph oracle confirms C′ (min over π of max over D of the graph min-cut) on {total} instances: {oracle_cp_bad} mismatches"),
    );
    o.note(
        "the graph min-cut of a selection is the min over its supersets, so max over D of it \
         falls below max over D of the selection cost; C′ is confirmed by direct enumeration only",
    );
    o.within(start.elapsed(), Duration::from_secs(600));
    o.detail = format!("{total} memory instances; oracle C′ mismatches {oracle_cp_bad}");
    o
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "static fixed-cost cut", criterion_1),
        (2, "ε-protocol cut and audit", criterion_2),
        (3, "oracle equivalence", criterion_3),
        (4, "average-cut sandwich", criterion_4),
        (5, "Vandermonde identities", criterion_5),
        (6, "Monte Carlo consistency", criterion_6),
        (7, "mixing certificates", criterion_7),
        (8, "block stationary law", criterion_8),
        (9, "coupon-collector tail", criterion_9),
        (10, "adaptive protocol", criterion_10),
        (11, "heterogeneous bound", criterion_11),
        (12, "published-figure discrepancies", criterion_12),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        if filter.is_some_and(|x| x != id) {
            continue;
        }
        let start = Instant::now();
        let out = f();
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!(
            "ACCEPTANCE {id:>2} {status} [{:.1}s] {name}: {}",
            start.elapsed().as_secs_f64(),
            out.detail
        );
        for n in &out.notes {
            println!("    {n}");
        }
        if !out.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
