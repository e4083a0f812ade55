//! Closed-form cuts, collector selection policies and the static cut constants.
//!
//! For a permutation `π` and a selection `D = {u_1, …, u_k}` ordered by
//! position, the cut is
//!
//! ```text
//! Σ_j [ Σ_{v ≠ u_j} h(u_j, v) − Σ_{i < j} h(u_j, u_i) ]
//! ```
//!
//! Each selected node pays for its full repair except the helpers that are
//! earlier selected nodes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::combinatorics::{binomial_u128, Combinations};
use crate::error::{Error, Result};
use crate::model::{
    ClassWeights, CutReport, NetworkConfig, NodeClass, Permutation, Selection, WeightMatrix,
    WeightRule,
};
use crate::rational::{self, int, Rational};

/// Selections scanned by exhaustive mode at most.
pub const EXHAUSTIVE_SELECTION_LIMIT: u128 = 1_000_000;
/// Position classes enumerated by the exact averages at most.
pub const POSITION_CLASS_LIMIT: u128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutMode {
    /// Closed-form selection policy.
    Policy,
    /// Scan all `C(n, k′)` selections; ties go to the lexicographically smallest.
    Exhaustive,
    /// Dynamic program over class sequences (class-level rules only).
    Dynamic,
    /// Policy when admissible, else exhaustive when small, else dynamic.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// The collector reads the worst selection.
    Min,
    /// The collector knows the failure order and reads the best selection.
    Max,
}

/// Cut of selection `d` at permutation `pi`.
pub fn cut_value(w: &WeightMatrix, pi: &Permutation, d: &Selection) -> Rational {
    sequence_cost(w, &d.by_position(pi))
}

pub fn cut_value_for(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    pi: &Permutation,
    d: &Selection,
) -> Result<Rational> {
    check_pi(cfg, pi)?;
    Ok(cut_value(&rule.matrix(cfg)?, pi, d))
}

fn sequence_cost(w: &WeightMatrix, ordered: &[usize]) -> Rational {
    let mut total = rational::zero();
    for (j, &u) in ordered.iter().enumerate() {
        total += w.repair_total(u);
        for &earlier in &ordered[..j] {
            total -= w.weight(u, earlier);
        }
    }
    total
}

/// Cheapest cut over all supersets of `d`.
///
/// Active nodes outside `d` may still relay data to the collector through later
/// repairs, so the flow-graph cut for `d` is this minimum rather than the cut of
/// `d` alone.
pub fn selection_graph_cut(w: &WeightMatrix, pi: &Permutation, d: &Selection) -> Result<Rational> {
    let rest: Vec<usize> = (1..=pi.n()).filter(|&v| !d.contains(v)).collect();
    if rest.len() > 20 {
        return Err(Error::TooLarge(format!("2^{} supersets", rest.len())));
    }
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1u32 << rest.len()) {
        let mut nodes = d.nodes().to_vec();
        for (i, &v) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                nodes.push(v);
            }
        }
        nodes.sort_unstable_by_key(|&v| pi.pos(v));
        let c = sequence_cost(w, &nodes);
        if best.as_ref().is_none_or(|b| &c < b) {
            best = Some(c);
        }
    }
    Ok(best.expect("at least the empty extension"))
}

fn check_pi(cfg: &NetworkConfig, pi: &Permutation) -> Result<()> {
    if pi.n() != cfg.n() {
        return Err(Error::Precondition(format!(
            "permutation has {} entries, network has {} nodes",
            pi.n(),
            cfg.n()
        )));
    }
    Ok(())
}

/// Whether the closed-form selection policy is optimal for `rule`.
pub fn policy_admissible(cfg: &NetworkConfig, rule: &WeightRule, objective: Objective) -> Result<bool> {
    let b1 = &cfg.beta1;
    let b2 = &cfg.beta2;
    let n1 = int(cfg.n1 as i64);
    let n2 = int(cfg.n2 as i64);
    let n1m = &n1 - rational::one();
    match objective {
        Objective::Max => Ok(matches!(rule, WeightRule::Star) && cfg.a_hat() >= 0),
        Objective::Min => match rule {
            WeightRule::Star => Ok(true),
            WeightRule::FixedCostEpsilon(eps) => {
                rule.class_weights(cfg)?;
                Ok(b1 - b2 >= int(cfg.n() as i64) * &n1m * eps / &n2)
            }
            WeightRule::HeteroEpsilon(eps) => {
                let cw = rule.class_weights(cfg)?.expect("class rule");
                let y = &cw.lu;
                Ok(y >= b2 && b1 - b2 >= &n1m * eps + &n1 * (b1 - y))
            }
            WeightRule::Explicit(_) => Ok(false),
        },
    }
}

/// `U` plus the `a` most recently failed `L` nodes.
pub fn min_policy_selection(cfg: &NetworkConfig, pi: &Permutation) -> Selection {
    let a = cfg.a().max(0) as usize;
    let mut nodes: Vec<usize> = (1..=cfg.n1).collect();
    nodes.extend(
        pi.order()
            .iter()
            .rev()
            .filter(|&&v| cfg.class_of(v) == NodeClass::L)
            .take(a),
    );
    nodes.sort_unstable();
    Selection::from_sorted(nodes)
}

/// `L` plus the `â` most recently failed `U` nodes.
pub fn max_policy_selection(cfg: &NetworkConfig, pi: &Permutation) -> Result<Selection> {
    if cfg.a_hat() < 0 {
        return Err(Error::Precondition(String::from("max policy needs â ≥ 0")));
    }
    let a_hat = cfg.a_hat() as usize;
    let mut nodes: Vec<usize> = (cfg.n1 + 1..=cfg.n()).collect();
    nodes.extend(
        pi.order()
            .iter()
            .rev()
            .filter(|&&v| cfg.class_of(v) == NodeClass::U)
            .take(a_hat),
    );
    nodes.sort_unstable();
    Ok(Selection::from_sorted(nodes))
}

pub fn min_cut(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    pi: &Permutation,
    mode: CutMode,
) -> Result<CutReport> {
    optimal_cut(cfg, rule, pi, mode, Objective::Min)
}

pub fn max_cut(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    pi: &Permutation,
    mode: CutMode,
) -> Result<CutReport> {
    optimal_cut(cfg, rule, pi, mode, Objective::Max)
}

pub fn optimal_cut(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    pi: &Permutation,
    mode: CutMode,
    objective: Objective,
) -> Result<CutReport> {
    cfg.check()?;
    check_pi(cfg, pi)?;
    let eval = OptimalCut::new(cfg, rule, objective, mode)?;
    let selection = eval.selection(pi);
    let value = cut_value(&eval.weights, pi, &selection);
    Ok(CutReport {
        value,
        selection,
        permutation: pi.clone(),
    })
}

/// Integer pair counts of a class sequence; `xy` counts ordered pairs with an
/// `x` node after a `y` node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SequenceCounts {
    pub u: u64,
    pub l: u64,
    pub uu: u64,
    pub ul: u64,
    pub lu: u64,
    pub ll: u64,
}

impl SequenceCounts {
    pub fn push(&mut self, class: NodeClass) {
        match class {
            NodeClass::U => {
                self.uu += self.u;
                self.ul += self.l;
                self.u += 1;
            }
            NodeClass::L => {
                self.lu += self.u;
                self.ll += self.l;
                self.l += 1;
            }
        }
    }
}

/// Class-level constants a cut is linear in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTerms {
    pub weights: ClassWeights,
    pub repair_u: Rational,
    pub repair_l: Rational,
}

impl ClassTerms {
    pub fn new(cfg: &NetworkConfig, weights: ClassWeights) -> Self {
        Self {
            repair_u: weights.repair_total(cfg, NodeClass::U),
            repair_l: weights.repair_total(cfg, NodeClass::L),
            weights,
        }
    }

    pub fn value(&self, c: &SequenceCounts) -> Rational {
        let w = &self.weights;
        &self.repair_u * int(c.u as i64) + &self.repair_l * int(c.l as i64)
            - &w.uu * int(c.uu as i64)
            - &w.ul * int(c.ul as i64)
            - &w.lu * int(c.lu as i64)
            - &w.ll * int(c.ll as i64)
    }

    fn increment(&self, class: NodeClass, su: usize, sl: usize) -> Rational {
        let w = &self.weights;
        match class {
            NodeClass::U => &self.repair_u - &w.uu * int(su as i64) - &w.ul * int(sl as i64),
            NodeClass::L => &self.repair_l - &w.lu * int(su as i64) - &w.ll * int(sl as i64),
        }
    }
}

/// Counts of the policy selection for a class sequence in position order.
pub fn policy_counts(
    cfg: &NetworkConfig,
    classes: impl Iterator<Item = NodeClass>,
    objective: Objective,
) -> SequenceCounts {
    let mut counts = SequenceCounts::default();
    let (mut seen_u, mut seen_l) = (0usize, 0usize);
    for class in classes {
        let take = match (objective, class) {
            (Objective::Min, NodeClass::U) | (Objective::Max, NodeClass::L) => true,
            (Objective::Min, NodeClass::L) => seen_l + cfg.a().max(0) as usize >= cfg.n2,
            (Objective::Max, NodeClass::U) => seen_u + cfg.a_hat().max(0) as usize >= cfg.n1,
        };
        match class {
            NodeClass::U => seen_u += 1,
            NodeClass::L => seen_l += 1,
        }
        if take {
            counts.push(class);
        }
    }
    counts
}

/// Optimum over all `k`-subsequences of a class sequence; returns the value and
/// the chosen indices.
pub fn dynamic_optimum(
    terms: &ClassTerms,
    classes: &[NodeClass],
    k: usize,
    objective: Objective,
) -> (Rational, Vec<usize>) {
    let n = classes.len();
    let better = |a: &Rational, b: &Rational| match objective {
        Objective::Min => a < b,
        Objective::Max => a > b,
    };
    // table[i][su][sl]: best value after the first i positions.
    let width = k + 1;
    let idx = |su: usize, sl: usize| su * width + sl;
    let mut table: Vec<Vec<Option<(Rational, bool)>>> = Vec::with_capacity(n + 1);
    let mut first = alloc::vec![None; width * width];
    first[idx(0, 0)] = Some((rational::zero(), false));
    table.push(first);
    for (i, &class) in classes.iter().enumerate() {
        let mut next: Vec<Option<(Rational, bool)>> = alloc::vec![None; width * width];
        for su in 0..=k {
            for sl in 0..=k - su {
                let Some((value, _)) = &table[i][idx(su, sl)] else {
                    continue;
                };
                let skip = &mut next[idx(su, sl)];
                if skip.as_ref().is_none_or(|(b, _)| better(value, b)) {
                    *skip = Some((value.clone(), false));
                }
                if su + sl < k {
                    let (nu, nl) = match class {
                        NodeClass::U => (su + 1, sl),
                        NodeClass::L => (su, sl + 1),
                    };
                    let cand = value + terms.increment(class, su, sl);
                    let slot = &mut next[idx(nu, nl)];
                    if slot.as_ref().is_none_or(|(b, _)| better(&cand, b)) {
                        *slot = Some((cand, true));
                    }
                }
            }
        }
        table.push(next);
    }
    let mut best: Option<(Rational, usize, usize)> = None;
    for su in 0..=k {
        let sl = k - su;
        if let Some((v, _)) = &table[n][idx(su, sl)] {
            if best.as_ref().is_none_or(|(b, _, _)| better(v, b)) {
                best = Some((v.clone(), su, sl));
            }
        }
    }
    let (value, mut su, mut sl) = best.expect("k ≤ sequence length");
    let mut chosen = Vec::with_capacity(k);
    for i in (0..n).rev() {
        let (_, took) = table[i + 1][idx(su, sl)].as_ref().expect("reachable state");
        if *took {
            chosen.push(i);
            match classes[i] {
                NodeClass::U => su -= 1,
                NodeClass::L => sl -= 1,
            }
        }
    }
    chosen.reverse();
    (value, chosen)
}

#[derive(Debug, Clone)]
enum Strategy {
    Policy(ClassTerms),
    Dynamic(ClassTerms),
    Exhaustive,
}

/// Repeated optimal-cut evaluation for one configuration, rule and objective.
#[derive(Debug, Clone)]
pub struct OptimalCut {
    cfg: NetworkConfig,
    weights: WeightMatrix,
    objective: Objective,
    strategy: Strategy,
}

impl OptimalCut {
    pub fn new(cfg: &NetworkConfig, rule: &WeightRule, objective: Objective, mode: CutMode) -> Result<Self> {
        cfg.check()?;
        let weights = rule.matrix(cfg)?;
        let class = weights.class_weights().cloned();
        let small = binomial_u128(cfg.n() as u64, cfg.k_prime as u64) <= EXHAUSTIVE_SELECTION_LIMIT;
        let admissible = policy_admissible(cfg, rule, objective)?;
        let strategy = match mode {
            CutMode::Policy => {
                if !admissible {
                    return Err(Error::Precondition(format!(
                        "the {} selection policy is not optimal for the {} rule here",
                        match objective {
                            Objective::Min => "min",
                            Objective::Max => "max",
                        },
                        rule.name()
                    )));
                }
                Strategy::Policy(ClassTerms::new(cfg, class.expect("policy rules are class rules")))
            }
            CutMode::Exhaustive => {
                if !small {
                    return Err(Error::TooLarge(String::from("more than 10^6 selections")));
                }
                Strategy::Exhaustive
            }
            CutMode::Dynamic => match class {
                Some(cw) => Strategy::Dynamic(ClassTerms::new(cfg, cw)),
                None => {
                    return Err(Error::Precondition(String::from(
                        "dynamic mode needs a class-level rule",
                    )))
                }
            },
            CutMode::Auto => match class {
                Some(cw) if admissible => Strategy::Policy(ClassTerms::new(cfg, cw)),
                _ if small => Strategy::Exhaustive,
                Some(cw) => Strategy::Dynamic(ClassTerms::new(cfg, cw)),
                None => return Err(Error::TooLarge(String::from("more than 10^6 selections"))),
            },
        };
        Ok(Self {
            cfg: cfg.clone(),
            weights,
            objective,
            strategy,
        })
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn is_policy(&self) -> bool {
        matches!(self.strategy, Strategy::Policy(_))
    }

    pub fn value(&self, pi: &Permutation) -> Rational {
        match &self.strategy {
            Strategy::Policy(terms) => {
                let classes = pi.order().iter().map(|&v| self.cfg.class_of(v));
                terms.value(&policy_counts(&self.cfg, classes, self.objective))
            }
            Strategy::Dynamic(terms) => {
                let classes: Vec<NodeClass> = pi.order().iter().map(|&v| self.cfg.class_of(v)).collect();
                dynamic_optimum(terms, &classes, self.cfg.k_prime, self.objective).0
            }
            Strategy::Exhaustive => self.exhaustive(pi).0,
        }
    }

    pub fn selection(&self, pi: &Permutation) -> Selection {
        match &self.strategy {
            Strategy::Policy(_) => match self.objective {
                Objective::Min => min_policy_selection(&self.cfg, pi),
                Objective::Max => max_policy_selection(&self.cfg, pi).expect("checked â ≥ 0"),
            },
            Strategy::Dynamic(terms) => {
                let classes: Vec<NodeClass> = pi.order().iter().map(|&v| self.cfg.class_of(v)).collect();
                let (_, idx) = dynamic_optimum(terms, &classes, self.cfg.k_prime, self.objective);
                let mut nodes: Vec<usize> = idx.into_iter().map(|i| pi.order()[i]).collect();
                nodes.sort_unstable();
                Selection::from_sorted(nodes)
            }
            Strategy::Exhaustive => self.exhaustive(pi).1,
        }
    }

    fn exhaustive(&self, pi: &Permutation) -> (Rational, Selection) {
        let mut best: Option<(Rational, Vec<usize>)> = None;
        for d in Combinations::new(self.cfg.n(), self.cfg.k_prime) {
            let mut ordered = d.clone();
            ordered.sort_unstable_by_key(|&v| pi.pos(v));
            let c = sequence_cost(&self.weights, &ordered);
            let improves = match (&best, self.objective) {
                (None, _) => true,
                (Some((b, _)), Objective::Min) => &c < b,
                (Some((b, _)), Objective::Max) => &c > b,
            };
            if improves {
                best = Some((c, d));
            }
        }
        let (value, nodes) = best.expect("k′ ≤ n");
        (value, Selection::from_sorted(nodes))
    }
}

/// Worst-case cut of the star rule over all permutations and selections.
pub fn static_c(cfg: &NetworkConfig) -> Result<Rational> {
    cfg.check()?;
    let b1 = &cfg.beta1;
    let b2 = &cfg.beta2;
    let (n1, n2, a) = (cfg.n1 as i64, cfg.n2 as i64, cfg.a());
    let mut c = int(n1 * (n1 - 1) / 2) * b1 + int(n1 * n2) * b2;
    for j in 1..=a {
        c += int(n2 - j) * b2;
    }
    Ok(c)
}

/// The alternative closed form `n1(n1−1)/2·β1 + (n2(n1+a−1) − a(a+1)/2)·β2`.
///
/// It falls short of [`static_c`] and of the flow-graph oracle by exactly
/// `n2·β2`; kept for comparison only.
pub fn static_c_printed(cfg: &NetworkConfig) -> Result<Rational> {
    cfg.check()?;
    let (n1, n2, a) = (cfg.n1 as i64, cfg.n2 as i64, cfg.a());
    Ok(int(n1 * (n1 - 1) / 2) * &cfg.beta1 + int(n2 * (n1 + a - 1) - a * (a + 1) / 2) * &cfg.beta2)
}

/// Min over permutations of the star max-cut.
pub fn static_cprime(cfg: &NetworkConfig) -> Result<Rational> {
    cfg.check()?;
    let a_hat = cfg.a_hat();
    if a_hat < 1 {
        return Err(Error::Precondition(String::from("C′ needs â ≥ 1")));
    }
    let b1 = &cfg.beta1;
    let b2 = &cfg.beta2;
    let (n1, n2) = (cfg.n1 as i64, cfg.n2 as i64);
    let full = int(n1) * b1 + int(n2) * b2;
    let mut c = rational::zero();
    for i in 1..=a_hat {
        c += &full - int(i) * b1;
    }
    let base = int(n1 - a_hat) * b1 + int(n2) * b2;
    for j in 1..=n2 {
        c += &base - int(j) * b2;
    }
    Ok(c)
}

/// Number of selected `L` nodes at or before the position of `v`.
pub fn f_pi(cfg: &NetworkConfig, pi: &Permutation, d: &Selection, v: usize) -> Result<usize> {
    if !d.contains(v) {
        return Err(Error::InvalidSelection(format!("node {v} is not selected")));
    }
    let p = pi.position(v)?;
    Ok(d.nodes()
        .iter()
        .filter(|&&w| cfg.class_of(w) == NodeClass::L && pi.pos(w) <= p)
        .count())
}

/// ε-protocol min-cut through the identity value plus the `f_π` corrections.
pub fn lemma12_cut(cfg: &NetworkConfig, epsilon1: &Rational, pi: &Permutation) -> Result<Rational> {
    cfg.check()?;
    check_pi(cfg, pi)?;
    let rule = WeightRule::FixedCostEpsilon(epsilon1.clone());
    if !policy_admissible(cfg, &rule, Objective::Min)? {
        return Err(Error::Precondition(String::from(
            "ε1 exceeds the limit β1−β2 ≥ n(n1−1)ε1/n2",
        )));
    }
    let w = rule.matrix(cfg)?;
    let id = Permutation::identity(cfg.n());
    let base = cut_value(&w, &id, &min_policy_selection(cfg, &id));
    let d = min_policy_selection(cfg, pi);
    let per_f = &cfg.beta1 - &cfg.beta2
        - epsilon1 * int(cfg.n1 as i64 - 1) / int(cfg.n2 as i64);
    let mut total_f = 0usize;
    for &v in d.nodes().iter().filter(|&&v| cfg.class_of(v) == NodeClass::U) {
        total_f += f_pi(cfg, pi, &d, v)?;
    }
    Ok(base + per_f * int(total_f as i64))
}

/// Positions held by the `U` nodes; class-level cuts depend on nothing else.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionClass {
    u_positions: Vec<usize>,
}

impl PositionClass {
    pub fn new(cfg: &NetworkConfig, mut u_positions: Vec<usize>) -> Result<Self> {
        u_positions.sort_unstable();
        u_positions.dedup();
        if u_positions.len() != cfg.n1 || u_positions.iter().any(|&p| p == 0 || p > cfg.n()) {
            return Err(Error::Precondition(format!(
                "need {} distinct positions in 1..={}",
                cfg.n1,
                cfg.n()
            )));
        }
        Ok(Self { u_positions })
    }

    pub fn of(cfg: &NetworkConfig, pi: &Permutation) -> Self {
        let mut u_positions = pi.u_positions(cfg.n1);
        u_positions.sort_unstable();
        Self { u_positions }
    }

    pub fn u_positions(&self) -> &[usize] {
        &self.u_positions
    }

    /// Number of `U` nodes among the last `a` positions.
    pub fn ell(&self, cfg: &NetworkConfig) -> usize {
        let cutoff = cfg.n() as i64 - cfg.a();
        self.u_positions.iter().filter(|&&p| p as i64 > cutoff).count()
    }

    /// `U` nodes in id order at the class positions, `L` nodes in id order elsewhere.
    pub fn canonical_permutation(&self, cfg: &NetworkConfig) -> Permutation {
        let mut order = Vec::with_capacity(cfg.n());
        let (mut next_u, mut next_l) = (1, cfg.n1 + 1);
        for p in 1..=cfg.n() {
            if self.u_positions.binary_search(&p).is_ok() {
                order.push(next_u);
                next_u += 1;
            } else {
                order.push(next_l);
                next_l += 1;
            }
        }
        Permutation::from_order(order).expect("canonical order is a permutation")
    }

    pub fn classes(&self, cfg: &NetworkConfig) -> Vec<NodeClass> {
        (1..=cfg.n())
            .map(|p| {
                if self.u_positions.binary_search(&p).is_ok() {
                    NodeClass::U
                } else {
                    NodeClass::L
                }
            })
            .collect()
    }

    pub fn all(cfg: &NetworkConfig) -> impl Iterator<Item = PositionClass> {
        Combinations::new(cfg.n(), cfg.n1).map(|u_positions| PositionClass { u_positions })
    }
}

/// Mean, minimum and maximum of the optimal cut over all permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSpread {
    pub average: Rational,
    pub min: Rational,
    pub max: Rational,
    pub classes: u128,
}

impl CutSpread {
    pub fn max_deviation(&self) -> Rational {
        rational::max(&self.max - &self.average, &self.average - &self.min)
    }
}

/// Exact spread of the optimal cut under the uniform law on permutations.
///
/// Every position class holds `n1!·n2!` permutations, so the uniform mean over
/// permutations is the plain mean over classes.
pub fn cut_spread(cfg: &NetworkConfig, rule: &WeightRule, objective: Objective) -> Result<CutSpread> {
    cfg.check()?;
    let classes = binomial_u128(cfg.n() as u64, cfg.n1 as u64);
    if classes > POSITION_CLASS_LIMIT {
        return Err(Error::TooLarge(format!("{classes} position classes")));
    }
    let weights = rule.matrix(cfg)?;
    let Some(cw) = weights.class_weights().cloned() else {
        return Err(Error::Precondition(String::from(
            "exact averages need a class-level rule",
        )));
    };
    let terms = ClassTerms::new(cfg, cw);
    let policy = policy_admissible(cfg, rule, objective)?;
    if !policy && classes.saturating_mul((cfg.n() * cfg.k_prime * cfg.k_prime) as u128) > 200_000_000 {
        return Err(Error::TooLarge(String::from(
            "dynamic evaluation over all position classes",
        )));
    }
    let mut sum = rational::zero();
    let mut min: Option<Rational> = None;
    let mut max: Option<Rational> = None;
    let mut count = 0u128;
    let mut seq = alloc::vec![NodeClass::L; cfg.n()];
    for u_positions in Combinations::new(cfg.n(), cfg.n1) {
        seq.iter_mut().for_each(|c| *c = NodeClass::L);
        for &p in &u_positions {
            seq[p - 1] = NodeClass::U;
        }
        let value = if policy {
            terms.value(&policy_counts(cfg, seq.iter().copied(), objective))
        } else {
            dynamic_optimum(&terms, &seq, cfg.k_prime, objective).0
        };
        if min.as_ref().is_none_or(|m| &value < m) {
            min = Some(value.clone());
        }
        if max.as_ref().is_none_or(|m| &value > m) {
            max = Some(value.clone());
        }
        sum += value;
        count += 1;
    }
    let average = sum / Rational::from_integer(count.into());
    Ok(CutSpread {
        average,
        min: min.expect("at least one class"),
        max: max.expect("at least one class"),
        classes: count,
    })
}

pub fn exact_avg_min_cut(cfg: &NetworkConfig, rule: &WeightRule) -> Result<Rational> {
    Ok(cut_spread(cfg, rule, Objective::Min)?.average)
}

/// Largest gap between a permutation's min-cut and the exact average.
pub fn max_deviation(cfg: &NetworkConfig, rule: &WeightRule) -> Result<Rational> {
    Ok(cut_spread(cfg, rule, Objective::Min)?.max_deviation())
}

/// Sum of the `n − k′` smallest bandwidths.
pub fn deviation_budget(cfg: &NetworkConfig) -> Rational {
    let mut betas: Vec<&Rational> = (1..=cfg.n()).map(|v| cfg.beta_of(v)).collect();
    betas.sort();
    betas.into_iter().take(cfg.n() - cfg.k_prime.min(cfg.n())).sum()
}

pub fn deviation_feasible(cfg: &NetworkConfig, rule: &WeightRule) -> Result<bool> {
    Ok(deviation_budget(cfg) >= max_deviation(cfg, rule)?)
}

/// Mean of `values`, exact.
pub fn mean(values: &[Rational]) -> Rational {
    if values.is_empty() {
        return rational::zero();
    }
    let total: Rational = values.iter().sum();
    total / int(values.len() as i64)
}
