//! Configurations, failure-order permutations and repair weight rules.
//!
//! Nodes are numbered `1..=n`. Nodes `1..=n1` form the high-bandwidth class
//! `U`, nodes `n1+1..=n` the low-bandwidth class `L`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeClass {
    U,
    L,
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeClass::U => "U",
            NodeClass::L => "L",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureModel {
    Uniform,
    /// Each `U` node fails with probability `q`, each `L` node with `p`.
    TwoClass { p: Rational, q: Rational },
    /// Failure probability of node `i` at index `i - 1`.
    PerNode(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkConfig {
    pub n1: usize,
    pub n2: usize,
    pub beta1: Rational,
    pub beta2: Rational,
    pub k_prime: usize,
    pub alpha: Option<Rational>,
    pub failure_model: FailureModel,
    pub lambda: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    N1TooSmall,
    N2TooSmall,
    BetaOrder,
    BetaNonPositive,
    KPrimeRange,
    TwoClassNonPositive,
    TwoClassNormalization,
    PerNodeLength { expected: usize, found: usize },
    PerNodeNonPositive,
    PerNodeNormalization,
    AlphaNonPositive,
    LambdaNonPositive,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::N1TooSmall => f.write_str("n1 ≥ 1"),
            Violation::N2TooSmall => f.write_str("n2 ≥ 2"),
            Violation::BetaOrder => f.write_str("β1 ≥ β2"),
            Violation::BetaNonPositive => f.write_str("β2 > 0"),
            Violation::KPrimeRange => f.write_str("n1 < k′ ≤ n"),
            Violation::TwoClassNonPositive => f.write_str("p > 0 and q > 0"),
            Violation::TwoClassNormalization => f.write_str("n1·q + n2·p = 1"),
            Violation::PerNodeLength { expected, found } => {
                write!(f, "per-node probabilities: expected {expected} entries, found {found}")
            }
            Violation::PerNodeNonPositive => f.write_str("per-node probabilities > 0"),
            Violation::PerNodeNormalization => f.write_str("per-node probabilities sum to 1"),
            Violation::AlphaNonPositive => f.write_str("α > 0"),
            Violation::LambdaNonPositive => f.write_str("λ > 0"),
        }
    }
}

impl NetworkConfig {
    /// Uniform failures, unbounded storage, no failure rate.
    pub fn new(n1: usize, n2: usize, beta1: Rational, beta2: Rational, k_prime: usize) -> Self {
        Self {
            n1,
            n2,
            beta1,
            beta2,
            k_prime,
            alpha: None,
            failure_model: FailureModel::Uniform,
            lambda: None,
        }
    }

    pub fn with_failure_model(mut self, model: FailureModel) -> Self {
        self.failure_model = model;
        self
    }

    pub fn with_alpha(mut self, alpha: Option<Rational>) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_lambda(mut self, lambda: Option<Rational>) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn a(&self) -> i64 {
        self.k_prime as i64 - self.n1 as i64
    }

    pub fn a_hat(&self) -> i64 {
        self.k_prime as i64 - self.n2 as i64
    }

    /// `(n, a, â)`.
    pub fn derived_params(&self) -> (usize, i64, i64) {
        (self.n(), self.a(), self.a_hat())
    }

    pub fn class_of(&self, v: usize) -> NodeClass {
        if v <= self.n1 {
            NodeClass::U
        } else {
            NodeClass::L
        }
    }

    pub fn beta_of_class(&self, class: NodeClass) -> &Rational {
        match class {
            NodeClass::U => &self.beta1,
            NodeClass::L => &self.beta2,
        }
    }

    pub fn beta_of(&self, v: usize) -> &Rational {
        self.beta_of_class(self.class_of(v))
    }

    pub fn check_node(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n() {
            Err(Error::UnknownNode(v))
        } else {
            Ok(())
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n1 < 1 {
            out.push(Violation::N1TooSmall);
        }
        if self.n2 < 2 {
            out.push(Violation::N2TooSmall);
        }
        if self.beta1 < self.beta2 {
            out.push(Violation::BetaOrder);
        }
        if !self.beta2.is_positive() {
            out.push(Violation::BetaNonPositive);
        }
        if self.k_prime <= self.n1 || self.k_prime > self.n() {
            out.push(Violation::KPrimeRange);
        }
        match &self.failure_model {
            FailureModel::Uniform => {}
            FailureModel::TwoClass { p, q } => {
                if !p.is_positive() || !q.is_positive() {
                    out.push(Violation::TwoClassNonPositive);
                }
                let total = q * rational::int(self.n1 as i64) + p * rational::int(self.n2 as i64);
                if total != rational::one() {
                    out.push(Violation::TwoClassNormalization);
                }
            }
            FailureModel::PerNode(probs) => {
                if probs.len() != self.n() {
                    out.push(Violation::PerNodeLength {
                        expected: self.n(),
                        found: probs.len(),
                    });
                }
                if probs.iter().any(|x| !x.is_positive()) {
                    out.push(Violation::PerNodeNonPositive);
                }
                let total: Rational = probs.iter().sum();
                if total != rational::one() {
                    out.push(Violation::PerNodeNormalization);
                }
            }
        }
        if let Some(alpha) = &self.alpha {
            if !alpha.is_positive() {
                out.push(Violation::AlphaNonPositive);
            }
        }
        if let Some(lambda) = &self.lambda {
            if !lambda.is_positive() {
                out.push(Violation::LambdaNonPositive);
            }
        }
        out
    }

    /// `validate` as a `Result`, joining all violations into one message.
    pub fn check(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            return Ok(());
        }
        let parts: Vec<String> = violations.iter().map(|v| format!("{v}")).collect();
        Err(Error::InvalidConfig(parts.join("; ")))
    }

    /// Per-step failure probability of each node, index `v - 1`.
    pub fn failure_probabilities(&self) -> Vec<Rational> {
        let n = self.n();
        match &self.failure_model {
            FailureModel::Uniform => (0..n).map(|_| rational::ratio(1, n as i64)).collect(),
            FailureModel::TwoClass { p, q } => (1..=n)
                .map(|v| match self.class_of(v) {
                    NodeClass::U => q.clone(),
                    NodeClass::L => p.clone(),
                })
                .collect(),
            FailureModel::PerNode(probs) => probs.clone(),
        }
    }

    pub fn two_class(&self) -> Option<(&Rational, &Rational)> {
        match &self.failure_model {
            FailureModel::TwoClass { p, q } => Some((p, q)),
            _ => None,
        }
    }

    pub fn is_uniform_beta(&self) -> bool {
        self.beta1 == self.beta2
    }
}

/// Order of the `n` most recent failures; position `n` is the latest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<usize>,
    pos: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let order: Vec<usize> = (1..=n).collect();
        let pos = (0..=n).collect();
        Self { order, pos }
    }

    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut pos = alloc::vec![0usize; n + 1];
        for (i, &v) in order.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::UnknownNode(v));
            }
            if pos[v] != 0 {
                return Err(Error::Precondition(format!("node {v} appears twice")));
            }
            pos[v] = i + 1;
        }
        Ok(Self { order, pos })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 1-based position of `v`.
    pub fn position(&self, v: usize) -> Result<usize> {
        if v == 0 || v > self.n() {
            return Err(Error::UnknownNode(v));
        }
        Ok(self.pos[v])
    }

    pub(crate) fn pos(&self, v: usize) -> usize {
        self.pos[v]
    }

    /// Node at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.order[i - 1]
    }

    pub fn apply_failure(&self, v: usize) -> Result<Self> {
        let mut next = self.clone();
        next.fail(v)?;
        Ok(next)
    }

    /// In-place `apply_failure`.
    pub fn fail(&mut self, v: usize) -> Result<()> {
        let p = self.position(v)?;
        let n = self.n();
        for i in p..n {
            let w = self.order[i];
            self.order[i - 1] = w;
            self.pos[w] = i;
        }
        self.order[n - 1] = v;
        self.pos[v] = n;
        Ok(())
    }

    /// The last `m` entries in reverse order, the rest unchanged.
    pub fn reverse_tail(&self, m: usize) -> Self {
        let mut order = self.order.clone();
        let n = order.len();
        order[n - m.min(n)..].reverse();
        Self::from_order(order).expect("reordering of a permutation")
    }

    pub fn u_positions(&self, n1: usize) -> Vec<usize> {
        (1..=n1).map(|v| self.pos[v]).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightRule {
    /// Every helper sends its class bandwidth.
    Star,
    FixedCostEpsilon(Rational),
    HeteroEpsilon(Rational),
    /// `matrix[failed - 1][helper - 1]`.
    Explicit(Vec<Vec<Rational>>),
}

/// Weights of a rule that only looks at node classes, keyed by
/// (failed class, helper class).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWeights {
    pub uu: Rational,
    pub ul: Rational,
    pub lu: Rational,
    pub ll: Rational,
}

impl ClassWeights {
    pub fn get(&self, failed: NodeClass, helper: NodeClass) -> &Rational {
        match (failed, helper) {
            (NodeClass::U, NodeClass::U) => &self.uu,
            (NodeClass::U, NodeClass::L) => &self.ul,
            (NodeClass::L, NodeClass::U) => &self.lu,
            (NodeClass::L, NodeClass::L) => &self.ll,
        }
    }

    /// Total in-weight of a repair of a node of class `failed`.
    pub fn repair_total(&self, cfg: &NetworkConfig, failed: NodeClass) -> Rational {
        let n1 = cfg.n1 as i64;
        let n2 = cfg.n2 as i64;
        match failed {
            NodeClass::U => &self.uu * rational::int(n1 - 1) + &self.ul * rational::int(n2),
            NodeClass::L => &self.lu * rational::int(n1) + &self.ll * rational::int(n2 - 1),
        }
    }
}

impl WeightRule {
    pub fn name(&self) -> &'static str {
        match self {
            WeightRule::Star => "star",
            WeightRule::FixedCostEpsilon(_) => "fixed-cost-epsilon",
            WeightRule::HeteroEpsilon(_) => "hetero-epsilon",
            WeightRule::Explicit(_) => "explicit",
        }
    }

    /// Class-level weights; `None` for explicit matrices.
    pub fn class_weights(&self, cfg: &NetworkConfig) -> Result<Option<ClassWeights>> {
        let b1 = cfg.beta1.clone();
        let b2 = cfg.beta2.clone();
        let n1 = rational::int(cfg.n1 as i64);
        let n2 = rational::int(cfg.n2 as i64);
        let weights = match self {
            WeightRule::Star => ClassWeights {
                uu: b1.clone(),
                ul: b2.clone(),
                lu: b1,
                ll: b2,
            },
            WeightRule::FixedCostEpsilon(eps) => {
                non_negative_epsilon(eps)?;
                let lu = &b1 - eps * (&n1 - rational::one()) / &n2;
                ClassWeights {
                    uu: &b1 + eps,
                    ul: b2.clone(),
                    lu,
                    ll: b2,
                }
            }
            WeightRule::HeteroEpsilon(eps) => {
                non_negative_epsilon(eps)?;
                let (p, q) = cfg.two_class().ok_or_else(|| {
                    Error::Precondition(String::from("hetero-epsilon needs a two-class failure model"))
                })?;
                let lu = &b1 - q * eps * (&n1 - rational::one()) / (p * &n2);
                ClassWeights {
                    uu: &b1 + eps,
                    ul: b2.clone(),
                    lu,
                    ll: b2,
                }
            }
            WeightRule::Explicit(_) => return Ok(None),
        };
        if weights.lu.is_negative() {
            return Err(Error::Precondition(String::from(
                "epsilon makes the U-helper weight on L failures negative",
            )));
        }
        Ok(Some(weights))
    }

    pub fn matrix(&self, cfg: &NetworkConfig) -> Result<WeightMatrix> {
        WeightMatrix::new(cfg, self)
    }

    pub fn weight(&self, cfg: &NetworkConfig, failed: usize, helper: usize) -> Result<Rational> {
        cfg.check_node(failed)?;
        cfg.check_node(helper)?;
        Ok(self.matrix(cfg)?.weight(failed, helper).clone())
    }
}

fn non_negative_epsilon(eps: &Rational) -> Result<()> {
    if eps.is_negative() {
        Err(Error::Precondition(String::from("epsilon must be nonnegative")))
    } else {
        Ok(())
    }
}

/// Dense `failed × helper` weights of a rule for one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<Rational>,
    row_sums: Vec<Rational>,
    class: Option<ClassWeights>,
}

impl WeightMatrix {
    pub fn new(cfg: &NetworkConfig, rule: &WeightRule) -> Result<Self> {
        let n = cfg.n();
        let class = rule.class_weights(cfg)?;
        let mut entries = Vec::with_capacity(n * n);
        match (&class, rule) {
            (Some(cw), _) => {
                for s in 1..=n {
                    for v in 1..=n {
                        entries.push(if s == v {
                            rational::zero()
                        } else {
                            cw.get(cfg.class_of(s), cfg.class_of(v)).clone()
                        });
                    }
                }
            }
            (None, WeightRule::Explicit(rows)) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Precondition(format!("explicit weights must be {n}×{n}")));
                }
                for (i, row) in rows.iter().enumerate() {
                    for (j, w) in row.iter().enumerate() {
                        if i == j && !w.is_zero() {
                            return Err(Error::Precondition(String::from(
                                "explicit weights must vanish on the diagonal",
                            )));
                        }
                        if w.is_negative() {
                            return Err(Error::Precondition(String::from(
                                "explicit weights must be nonnegative",
                            )));
                        }
                        entries.push(w.clone());
                    }
                }
            }
            (None, _) => unreachable!("only explicit rules lack class weights"),
        }
        let row_sums = entries.chunks(n.max(1)).map(|r| r.iter().sum()).collect();
        Ok(Self {
            n,
            entries,
            row_sums,
            class,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, failed: usize, helper: usize) -> &Rational {
        &self.entries[(failed - 1) * self.n + helper - 1]
    }

    /// Total in-weight of a repair of `failed`.
    pub fn repair_total(&self, failed: usize) -> &Rational {
        &self.row_sums[failed - 1]
    }

    pub fn class_weights(&self) -> Option<&ClassWeights> {
        self.class.as_ref()
    }
}

/// A set of exactly `k′` nodes read by the collector, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    nodes: Vec<usize>,
}

impl Selection {
    pub fn new(cfg: &NetworkConfig, mut nodes: Vec<usize>) -> Result<Self> {
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.len() != cfg.k_prime {
            return Err(Error::InvalidSelection(format!(
                "expected {} distinct nodes, got {}",
                cfg.k_prime,
                nodes.len()
            )));
        }
        for &v in &nodes {
            cfg.check_node(v)?;
        }
        Ok(Self { nodes })
    }

    pub(crate) fn from_sorted(nodes: Vec<usize>) -> Self {
        Self { nodes }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn contains(&self, v: usize) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Members ordered by position in `pi`, earliest failure first.
    pub fn by_position(&self, pi: &Permutation) -> Vec<usize> {
        let mut out = self.nodes.clone();
        out.sort_unstable_by_key(|&v| pi.pos(v));
        out
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReport {
    pub value: Rational,
    pub selection: Selection,
    pub permutation: Permutation,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn cfg_a() -> NetworkConfig {
        NetworkConfig::new(10, 10, int(2), int(1), 13)
    }

    #[test]
    fn validate_examples() {
        assert!(cfg_a().validate().is_empty());
        let mut bad = cfg_a();
        bad.beta2 = int(3);
        assert_eq!(bad.validate(), alloc::vec![Violation::BetaOrder]);
        assert_eq!(format!("{}", Violation::BetaOrder), "β1 ≥ β2");
        let cfg_c = NetworkConfig::new(1, 19, int(2), int(1), 13).with_failure_model(
            FailureModel::TwoClass {
                p: ratio(4, 95),
                q: ratio(1, 4),
            },
        );
        assert_eq!(cfg_c.validate(), alloc::vec![Violation::TwoClassNormalization]);
    }

    #[test]
    fn derived() {
        assert_eq!(cfg_a().derived_params(), (20, 3, 3));
        assert_eq!(NetworkConfig::new(2, 3, int(2), int(1), 4).derived_params(), (5, 2, 1));
        assert_eq!(NetworkConfig::new(1, 19, int(2), int(1), 13).derived_params(), (20, 12, -6));
    }

    #[test]
    fn failure_moves_node_last() {
        let id = Permutation::identity(5);
        let p = id.apply_failure(2).unwrap();
        assert_eq!(p.order(), &[1, 3, 4, 5, 2]);
        assert_eq!(id.apply_failure(5).unwrap(), id);
        assert_eq!(p.apply_failure(1).unwrap().order(), &[3, 4, 5, 2, 1]);
        assert_eq!(p.position(2).unwrap(), 5);
        assert!(id.apply_failure(6).is_err());
    }

    #[test]
    fn fixed_cost_weights() {
        let cfg = cfg_a();
        let m = WeightRule::FixedCostEpsilon(ratio(1, 20)).matrix(&cfg).unwrap();
        assert_eq!(m.weight(1, 2), &ratio(41, 20));
        assert_eq!(m.weight(1, 11), &int(1));
        assert_eq!(m.weight(11, 1), &(int(2) - ratio(9, 200)));
        assert_eq!(m.weight(11, 12), &int(1));
        assert_eq!(m.weight(4, 4), &int(0));
    }

    #[test]
    fn explicit_rejects_bad_diagonal() {
        let cfg = NetworkConfig::new(1, 2, int(1), int(1), 2);
        let mut rows = alloc::vec![alloc::vec![int(1); 3]; 3];
        assert!(WeightRule::Explicit(rows.clone()).matrix(&cfg).is_err());
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = int(0);
        }
        assert!(WeightRule::Explicit(rows).matrix(&cfg).is_ok());
    }
}
