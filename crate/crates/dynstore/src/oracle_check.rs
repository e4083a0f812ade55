//! Exhaustive closed-form vs flow-graph comparison over small configurations.

use dynstore_core::combinatorics::{Combinations, Permutations};
use dynstore_core::cut;
use dynstore_core::flow_graph::{oracle_cut_pinned, FlowGraph, FlowValue};
use dynstore_core::model::{NetworkConfig, Permutation, Selection, WeightRule};
use dynstore_core::rational::{int, ratio, to_fraction_string, Rational};

use crate::error::{CliError, CliResult};
use crate::replicas::par_map;

pub const MAX_N: usize = 6;

/// What the closed form is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Relation {
    /// `cut_value(π, D)` against the graph min-cut with `D` attached, for every `D`.
    Selection,
    /// Min over `D` of `cut_value` against min over `D` of the graph min-cut.
    MinOverSelections,
    /// `cut_value(π, D)` against the graph min-cut with the unselected
    /// incarnations pinned to the source side.
    Pinned,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Selection => "selection",
            Relation::MinOverSelections => "min-over-selections",
            Relation::Pinned => "pinned",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub config: String,
    pub permutation: String,
    pub selection: Option<String>,
    pub closed_form: Rational,
    pub oracle: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSummary {
    pub relation: Relation,
    pub configs: usize,
    pub comparisons: u64,
    pub mismatches: u64,
    /// Up to the first few mismatches, in grid order.
    pub examples: Vec<Mismatch>,
}

impl OracleSummary {
    pub fn line(&self) -> String {
        format!(
            "{}: {} mismatches / {} comparisons over {} configs",
            self.relation.name(),
            self.mismatches,
            self.comparisons,
            self.configs
        )
    }
}

const KEEP_EXAMPLES: usize = 5;

/// The grid n1 ∈ {1,2,3}, n2 ∈ {2,3,4}, every valid k′, β1/β2 ∈ {1, 2, 5/2},
/// restricted to `n ≤ max_n`.
pub fn grid(max_n: usize) -> Vec<NetworkConfig> {
    let mut out = Vec::new();
    for n1 in 1..=3usize {
        for n2 in 2..=4usize {
            if n1 + n2 > max_n {
                continue;
            }
            for k in n1 + 1..=n1 + n2 {
                for b1 in [int(1), int(2), ratio(5, 2)] {
                    out.push(NetworkConfig::new(n1, n2, b1, int(1), k));
                }
            }
        }
    }
    out
}

fn describe(cfg: &NetworkConfig) -> String {
    format!(
        "n1={} n2={} beta1={} beta2={} k'={}",
        cfg.n1,
        cfg.n2,
        to_fraction_string(&cfg.beta1),
        to_fraction_string(&cfg.beta2),
        cfg.k_prime
    )
}

fn finite(v: FlowValue) -> CliResult<Rational> {
    v.finite()
        .cloned()
        .ok_or_else(|| CliError::Property(String::from("unbounded cut on a covering sequence")))
}

struct Tally {
    comparisons: u64,
    mismatches: u64,
    examples: Vec<Mismatch>,
}

impl Tally {
    fn compare(&mut self, cfg: &NetworkConfig, pi: &Permutation, d: Option<&Selection>, closed: Rational, oracle: Rational) {
        self.comparisons += 1;
        if closed != oracle {
            self.mismatches += 1;
            if self.examples.len() < KEEP_EXAMPLES {
                self.examples.push(Mismatch {
                    config: describe(cfg),
                    permutation: pi.to_string(),
                    selection: d.map(|d| d.to_string()),
                    closed_form: closed,
                    oracle,
                });
            }
        }
    }
}

/// `fault` is added to every closed-form value; it exists to show the check
/// notices a wrong formula.
fn check_one(cfg: &NetworkConfig, rule: &WeightRule, relation: Relation, fault: &Rational) -> CliResult<Tally> {
    let w = rule.matrix(cfg)?;
    let mut tally = Tally {
        comparisons: 0,
        mismatches: 0,
        examples: Vec::new(),
    };
    for order in Permutations::new(cfg.n()) {
        let pi = Permutation::from_order(order.clone())?;
        let graph = FlowGraph::build(cfg, rule, &order)?;
        let mut closed_min: Option<Rational> = None;
        let mut oracle_min: Option<Rational> = None;
        for nodes in Combinations::new(cfg.n(), cfg.k_prime) {
            let d = Selection::new(cfg, nodes)?;
            let closed = cut::cut_value(&w, &pi, &d) + fault;
            match relation {
                Relation::Selection => {
                    let g = finite(graph.attach_selection(&d)?.min_cut_value())?;
                    tally.compare(cfg, &pi, Some(&d), closed, g);
                }
                Relation::Pinned => {
                    let g = finite(oracle_cut_pinned(cfg, rule, &order, &d)?)?;
                    tally.compare(cfg, &pi, Some(&d), closed, g);
                }
                Relation::MinOverSelections => {
                    let g = finite(graph.attach_selection(&d)?.min_cut_value())?;
                    closed_min = Some(closed_min.map_or(closed.clone(), |m| m.min(closed)));
                    oracle_min = Some(oracle_min.map_or(g.clone(), |m| m.min(g)));
                }
            }
        }
        if relation == Relation::MinOverSelections {
            tally.compare(cfg, &pi, None, closed_min.expect("k′ ≤ n"), oracle_min.expect("k′ ≤ n"));
        }
    }
    Ok(tally)
}

pub fn oracle_check(
    configs: &[NetworkConfig],
    rule: &WeightRule,
    relation: Relation,
    fault: Option<Rational>,
) -> CliResult<OracleSummary> {
    if let Some(big) = configs.iter().find(|c| c.n() > MAX_N) {
        return Err(CliError::Invalid(format!(
            "oracle check needs n ≤ {MAX_N}, got n = {}",
            big.n()
        )));
    }
    let fault = fault.unwrap_or_else(|| int(0));
    let tallies = par_map(configs, |cfg| check_one(cfg, rule, relation, &fault))?;
    let mut summary = OracleSummary {
        relation,
        configs: configs.len(),
        comparisons: 0,
        mismatches: 0,
        examples: Vec::new(),
    };
    for t in tallies {
        summary.comparisons += t.comparisons;
        summary.mismatches += t.mismatches;
        for m in t.examples {
            if summary.examples.len() < KEEP_EXAMPLES {
                summary.examples.push(m);
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_b() -> NetworkConfig {
        NetworkConfig::new(2, 3, int(2), int(1), 4)
    }

    #[test]
    fn grid_sizes() {
        assert!(grid(6).iter().all(|c| c.n() <= 6));
        assert_eq!(grid(4).len(), 3 * (2 + 3 + 2));
    }

    #[test]
    fn min_and_pinned_relations_hold_on_cfg_b() {
        for rel in [Relation::MinOverSelections, Relation::Pinned] {
            let s = oracle_check(&[cfg_b()], &WeightRule::Star, rel, None).unwrap();
            assert_eq!(s.mismatches, 0, "{}", s.line());
            assert!(s.comparisons > 0);
        }
    }

    #[test]
    fn injected_fault_is_detected() {
        let s = oracle_check(&[cfg_b()], &WeightRule::Star, Relation::Pinned, Some(int(1))).unwrap();
        assert_eq!(s.mismatches, s.comparisons);
    }

    #[test]
    fn rejects_large_configs() {
        let big = NetworkConfig::new(3, 4, int(2), int(1), 5);
        assert!(oracle_check(&[big], &WeightRule::Star, Relation::Pinned, None).is_err());
    }
}
