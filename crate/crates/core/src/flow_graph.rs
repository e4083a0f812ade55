//! The information flow graph of a failure sequence and an exact max-flow oracle.
//!
//! The graph starts with one incarnation per node fed by the source. Each
//! failure `j` of node `s` adds a repair unit `cu<j>` with an in-edge from the
//! active incarnation of every other node, weighted by the rule, and an
//! out-edge to the new incarnation of `s`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{NetworkConfig, Selection, WeightMatrix, WeightRule};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Source,
    /// `ordinal` 0 is the original node; otherwise the failure index that created it.
    Incarnation { node: usize, ordinal: usize },
    RepairUnit(usize),
    Collector,
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Source => f.write_str("src"),
            Vertex::Incarnation { node, ordinal } => write!(f, "v{node}_{ordinal}"),
            Vertex::RepairUnit(j) => write!(f, "cu{j}"),
            Vertex::Collector => f.write_str("dc"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Unbounded,
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => f.write_str(&rational::to_fraction_string(c)),
            Capacity::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: Vertex,
    pub to: Vertex,
    pub capacity: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowValue {
    Finite(Rational),
    Unbounded,
}

impl FlowValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            FlowValue::Finite(v) => Some(v),
            FlowValue::Unbounded => None,
        }
    }
}

impl fmt::Display for FlowValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowValue::Finite(v) => f.write_str(&rational::to_fraction_string(v)),
            FlowValue::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FlowGraph {
    weights: WeightMatrix,
    alpha: Option<Rational>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    active: Vec<Vertex>,
    failures: usize,
    has_collector: bool,
}

impl FlowGraph {
    pub fn build(cfg: &NetworkConfig, rule: &WeightRule, failures: &[usize]) -> Result<Self> {
        let weights = rule.matrix(cfg)?;
        let n = cfg.n();
        let mut graph = Self {
            weights,
            alpha: cfg.alpha.clone(),
            vertices: alloc::vec![Vertex::Source],
            edges: Vec::new(),
            active: Vec::with_capacity(n),
            failures: 0,
            has_collector: false,
        };
        for node in 1..=n {
            let v = Vertex::Incarnation { node, ordinal: 0 };
            graph.vertices.push(v);
            graph.active.push(v);
            graph.edges.push(Edge {
                from: Vertex::Source,
                to: v,
                capacity: Capacity::Unbounded,
            });
        }
        for &s in failures {
            graph.push_failure(s)?;
        }
        Ok(graph)
    }

    /// Appends one repair; existing vertices and edges are untouched.
    pub fn push_failure(&mut self, s: usize) -> Result<()> {
        let n = self.active.len();
        if s == 0 || s > n {
            return Err(Error::UnknownNode(s));
        }
        if self.has_collector {
            return Err(Error::Precondition(String::from(
                "cannot grow a graph with an attached collector",
            )));
        }
        self.failures += 1;
        let j = self.failures;
        let cu = Vertex::RepairUnit(j);
        self.vertices.push(cu);
        for helper in 1..=n {
            if helper == s {
                continue;
            }
            self.edges.push(Edge {
                from: self.active[helper - 1],
                to: cu,
                capacity: Capacity::Finite(self.weights.weight(s, helper).clone()),
            });
        }
        let fresh = Vertex::Incarnation { node: s, ordinal: j };
        self.vertices.push(fresh);
        self.edges.push(Edge {
            from: cu,
            to: fresh,
            capacity: Capacity::Unbounded,
        });
        self.active[s - 1] = fresh;
        Ok(())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Active incarnation of node `i` at index `i - 1`.
    pub fn active_set(&self) -> &[Vertex] {
        &self.active
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn alpha(&self) -> Option<&Rational> {
        self.alpha.as_ref()
    }

    pub fn inactive_incarnations(&self) -> Vec<Vertex> {
        self.vertices
            .iter()
            .filter(|v| matches!(v, Vertex::Incarnation { .. }) && !self.active.contains(v))
            .copied()
            .collect()
    }

    /// Adds the collector with unbounded in-edges from each vertex of `d`.
    pub fn attach_collector(&self, d: &[Vertex]) -> Result<FlowGraph> {
        if self.has_collector {
            return Err(Error::Precondition(String::from("collector already attached")));
        }
        let mut out = self.clone();
        for v in d {
            if !self.active.contains(v) {
                return Err(Error::InvalidSelection(format!("{v} is not an active incarnation")));
            }
            out.edges.push(Edge {
                from: *v,
                to: Vertex::Collector,
                capacity: Capacity::Unbounded,
            });
        }
        out.vertices.push(Vertex::Collector);
        out.has_collector = true;
        Ok(out)
    }

    /// `attach_collector` on the active incarnations of the selected nodes.
    pub fn attach_selection(&self, d: &Selection) -> Result<FlowGraph> {
        let verts: Vec<Vertex> = d
            .nodes()
            .iter()
            .map(|&v| {
                self.active
                    .get(v.wrapping_sub(1))
                    .copied()
                    .ok_or(Error::UnknownNode(v))
            })
            .collect::<Result<_>>()?;
        self.attach_collector(&verts)
    }

    /// Cut between the source plus every retired incarnation and the collector.
    pub fn min_cut_value(&self) -> FlowValue {
        let mut side = self.inactive_incarnations();
        side.push(Vertex::Source);
        max_flow_min_cut(self, &side, Vertex::Collector)
    }

    /// One `from to capacity` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.from, e.to, e.capacity);
        }
        if let Some(alpha) = &self.alpha {
            let _ = writeln!(out, "# alpha {}", rational::to_fraction_string(alpha));
        }
        out
    }
}

type Residual = Option<Rational>;

struct Network {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<Residual>,
}

impl Network {
    fn new(size: usize) -> Self {
        Self {
            adj: alloc::vec![Vec::new(); size],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: Residual) {
        self.adj[from].push(self.to.len());
        self.to.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.to.len());
        self.to.push(from);
        self.cap.push(Some(rational::zero()));
    }

    fn usable(&self, e: usize) -> bool {
        match &self.cap[e] {
            None => true,
            Some(c) => c.is_positive(),
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> FlowValue {
        let mut total = rational::zero();
        if s == t {
            return FlowValue::Unbounded;
        }
        loop {
            let mut via = alloc::vec![usize::MAX; self.adj.len()];
            let mut seen = alloc::vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &e in &self.adj[u] {
                    let w = self.to[e];
                    if !seen[w] && self.usable(e) {
                        seen[w] = true;
                        via[w] = e;
                        queue.push_back(w);
                    }
                }
            }
            if !seen[t] {
                return FlowValue::Finite(total);
            }
            let mut bottleneck: Residual = None;
            let mut w = t;
            while w != s {
                let e = via[w];
                if let Some(c) = &self.cap[e] {
                    bottleneck = match bottleneck {
                        Some(b) if &b <= c => Some(b),
                        _ => Some(c.clone()),
                    };
                }
                w = self.to[e ^ 1];
            }
            let Some(b) = bottleneck else {
                return FlowValue::Unbounded;
            };
            let mut w = t;
            while w != s {
                let e = via[w];
                if let Some(c) = &mut self.cap[e] {
                    *c -= &b;
                }
                if let Some(c) = &mut self.cap[e ^ 1] {
                    *c += &b;
                }
                w = self.to[e ^ 1];
            }
            total += b;
        }
    }
}

/// Exact max-flow value from the vertex set `source_side` to `sink`.
///
/// With a finite `α` every incarnation is split into an in-half and an
/// out-half joined by an `α` edge. Vertices in `source_side` are tied to the
/// source by unbounded edges.
pub fn max_flow_min_cut(graph: &FlowGraph, source_side: &[Vertex], sink: Vertex) -> FlowValue {
    let split = graph.alpha.is_some();
    let mut index: BTreeMap<Vertex, (usize, usize)> = BTreeMap::new();
    let mut size = 0;
    for v in &graph.vertices {
        let halves = if split && matches!(v, Vertex::Incarnation { .. }) {
            size += 2;
            (size - 2, size - 1)
        } else {
            size += 1;
            (size - 1, size - 1)
        };
        index.insert(*v, halves);
    }
    let Some(&(sink_in, _)) = index.get(&sink) else {
        return FlowValue::Finite(rational::zero());
    };
    let src = size;
    let mut net = Network::new(size + 1);
    if let Some(alpha) = &graph.alpha {
        for &(i, o) in index.values() {
            if i != o {
                net.add(i, o, Some(alpha.clone()));
            }
        }
    }
    for e in &graph.edges {
        let (_, from) = index[&e.from];
        let (to, _) = index[&e.to];
        let cap = match &e.capacity {
            Capacity::Finite(c) => Some(c.clone()),
            Capacity::Unbounded => None,
        };
        if cap.as_ref().is_some_and(|c| c.is_zero()) {
            continue;
        }
        net.add(from, to, cap);
    }
    for v in source_side {
        if let Some(&(_, out)) = index.get(v) {
            net.add(src, out, None);
        }
    }
    net.max_flow(src, sink_in)
}

/// Flow-graph cut for collector selection `d` after the failure sequence.
pub fn oracle_cut(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    failures: &[usize],
    d: &Selection,
) -> Result<FlowValue> {
    let graph = FlowGraph::build(cfg, rule, failures)?.attach_selection(d)?;
    Ok(graph.min_cut_value())
}

/// As [`oracle_cut`], but active incarnations outside `d` are also pinned to
/// the source side, so they cannot relay flow to the collector.
pub fn oracle_cut_pinned(
    cfg: &NetworkConfig,
    rule: &WeightRule,
    failures: &[usize],
    d: &Selection,
) -> Result<FlowValue> {
    let graph = FlowGraph::build(cfg, rule, failures)?;
    let with_dc = graph.attach_selection(d)?;
    Ok(pinned_cut(&with_dc, d))
}

pub(crate) fn pinned_cut(with_dc: &FlowGraph, d: &Selection) -> FlowValue {
    let mut side = with_dc.inactive_incarnations();
    side.push(Vertex::Source);
    for (i, v) in with_dc.active.iter().enumerate() {
        if !d.contains(i + 1) {
            side.push(*v);
        }
    }
    max_flow_min_cut(with_dc, &side, Vertex::Collector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cfg_b() -> NetworkConfig {
        NetworkConfig::new(2, 3, int(2), int(1), 4)
    }

    #[test]
    fn active_set_follows_failures() {
        let cfg = NetworkConfig::new(2, 3, int(2), int(1), 4);
        let g = FlowGraph::build(&cfg, &WeightRule::Star, &[1, 3]).unwrap();
        assert_eq!(g.active_set()[0], Vertex::Incarnation { node: 1, ordinal: 1 });
        assert_eq!(g.active_set()[1], Vertex::Incarnation { node: 2, ordinal: 0 });
        assert_eq!(g.active_set()[2], Vertex::Incarnation { node: 3, ordinal: 2 });
        let g0 = FlowGraph::build(&cfg, &WeightRule::Star, &[]).unwrap();
        assert_eq!(g0.edges().len(), 5);
        assert!(g0.edges().iter().all(|e| e.from == Vertex::Source));
    }

    #[test]
    fn repair_unit_in_edges() {
        let g = FlowGraph::build(&cfg_b(), &WeightRule::Star, &[1, 2, 3, 4, 5]).unwrap();
        let caps = |j: usize| {
            let mut c: Vec<String> = g
                .edges()
                .iter()
                .filter(|e| e.to == Vertex::RepairUnit(j))
                .map(|e| format!("{}", e.capacity))
                .collect();
            c.sort();
            c
        };
        assert_eq!(caps(1), ["1", "1", "1", "2"]);
        assert_eq!(caps(5), ["1", "1", "2", "2"]);
        let outs = g.edges().iter().filter(|e| e.from == Vertex::RepairUnit(5)).count();
        assert_eq!(outs, 1);
    }

    #[test]
    fn stale_incarnation_rejected() {
        let g = FlowGraph::build(&cfg_b(), &WeightRule::Star, &[1, 2]).unwrap();
        let stale = Vertex::Incarnation { node: 1, ordinal: 0 };
        assert!(g.attach_collector(&[stale]).is_err());
    }

    #[test]
    fn no_failures_is_unbounded() {
        let cfg = cfg_b();
        let d = Selection::new(&cfg, alloc::vec![1, 2, 3, 4]).unwrap();
        assert_eq!(oracle_cut(&cfg, &WeightRule::Star, &[], &d).unwrap(), FlowValue::Unbounded);
    }

    #[test]
    fn cfg_b_optimal_is_eleven() {
        let cfg = cfg_b();
        let best = crate::combinatorics::Combinations::new(5, 4)
            .map(|d| {
                let d = Selection::new(&cfg, d).unwrap();
                oracle_cut(&cfg, &WeightRule::Star, &[1, 2, 3, 4, 5], &d).unwrap()
            })
            .map(|v| v.finite().cloned().unwrap())
            .min()
            .unwrap();
        assert_eq!(best, int(11));
    }

    #[test]
    fn edge_list_names() {
        let g = FlowGraph::build(&cfg_b(), &WeightRule::Star, &[2]).unwrap();
        let d = Selection::new(&cfg_b(), alloc::vec![1, 2, 3, 4]).unwrap();
        let text = g.attach_selection(&d).unwrap().to_edge_list();
        assert!(text.contains("src v1_0 inf"));
        assert!(text.contains("v1_0 cu1 2"));
        assert!(text.contains("cu1 v2_1 inf"));
        assert!(text.contains("v2_1 dc inf"));
    }
}
