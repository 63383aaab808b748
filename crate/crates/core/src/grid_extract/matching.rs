use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geom::{intersect, Line, Point};
use crate::grid_detect::Search;

/// One matched pair `u < v` of cluster lines meeting at `points[point]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatchingEdge {
    pub u: usize,
    pub v: usize,
    pub point: usize,
}

/// Union of per-point matchings on a line cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingGraph {
    pub lines: Vec<Line>,
    pub points: Vec<Point>,
    pub edges: Vec<MatchingEdge>,
    adj: Vec<Vec<usize>>,
}

impl MatchingGraph {
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges grouped by witness point, in point order.
    pub fn matchings(&self) -> Vec<(usize, Vec<MatchingEdge>)> {
        let mut out: Vec<(usize, Vec<MatchingEdge>)> = Vec::new();
        for e in &self.edges {
            match out.last_mut() {
                Some((p, v)) if *p == e.point => v.push(*e),
                _ => out.push((e.point, vec![*e])),
            }
        }
        out
    }
}

/// Slope order with vertical lines last.
fn slope_key(l: &Line) -> (bool, Option<crate::rational::Rational>) {
    (l.is_vertical(), l.slope())
}

/// For each point, the cluster lines through it sorted by slope and paired
/// consecutively; with an odd count the steepest line stays unmatched.
pub fn matching_graph(points: &[Point], cluster: &[Line]) -> MatchingGraph {
    let mut edges = Vec::new();
    for (pi, p) in points.iter().enumerate() {
        let mut through: Vec<usize> = (0..cluster.len()).filter(|&i| cluster[i].contains(p)).collect();
        through.sort_by_key(|&i| slope_key(&cluster[i]));
        for pair in through.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            edges.push(MatchingEdge { u, v, point: pi });
        }
    }
    let mut adj = vec![Vec::new(); cluster.len()];
    let mut seen = HashSet::new();
    for e in &edges {
        assert!(seen.insert((e.u, e.v)), "matchings at distinct points share an edge");
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let g = MatchingGraph {
        lines: cluster.to_vec(),
        points: points.to_vec(),
        edges,
        adj,
    };
    for (_, m) in g.matchings() {
        let mut ends = HashSet::new();
        assert!(m.iter().all(|e| ends.insert(e.u) && ends.insert(e.v)), "per-point edge set is not a matching");
    }
    g
}

/// Parts `(L1, L2)` of a complete bipartite subgraph `K_{t,t}` with
/// `min(L1) < min(L2)`, each part ascending.
pub type Ktt = (Vec<usize>, Vec<usize>);

/// Backtracking over `L1` with common-neighborhood pruning. The crossings
/// of a returned `K_{t,t}` are checked to be `t²` distinct points.
pub fn find_ktt(h: &MatchingGraph, t: usize, budget: u64) -> Result<Search<Ktt>> {
    if t == 0 {
        return Err(Error::InvalidParams("t must be at least 1".into()));
    }
    let mut nodes = 0u64;
    let mut l1 = Vec::with_capacity(t);
    let n = h.lines.len();
    let mut found = None;
    for first in 0..n {
        let common: Vec<usize> = h.adj[first].iter().copied().filter(|&v| v > first).collect();
        l1.push(first);
        let out = grow(h, t, budget, &mut nodes, &mut l1, common, &mut found);
        l1.pop();
        match out {
            Some(true) => break,
            Some(false) => {}
            None => return Ok(Search::BudgetExceeded),
        }
    }
    let Some((a, b)) = found else {
        return Ok(Search::Absent);
    };
    let mut pts = HashSet::new();
    for &i in &a {
        for &j in &b {
            let p = intersect(&h.lines[i], &h.lines[j])
                .ok_or_else(|| Error::InvalidWitness(format!("lines {i} and {j} do not cross")))?;
            pts.insert(p);
        }
    }
    if pts.len() != t * t {
        return Err(Error::InvalidWitness(format!("K_{{t,t}} has only {} distinct crossings", pts.len())));
    }
    Ok(Search::Found((a, b)))
}

/// `Some(true)` when found, `Some(false)` when exhausted, `None` on budget.
fn grow(
    h: &MatchingGraph,
    t: usize,
    budget: u64,
    nodes: &mut u64,
    l1: &mut Vec<usize>,
    common: Vec<usize>,
    found: &mut Option<Ktt>,
) -> Option<bool> {
    *nodes += 1;
    if *nodes > budget {
        return None;
    }
    if common.len() < t {
        return Some(false);
    }
    if l1.len() == t {
        *found = Some((l1.clone(), common[..t].to_vec()));
        return Some(true);
    }
    let last = *l1.last().unwrap();
    let mut nexts: Vec<usize> = common
        .iter()
        .flat_map(|&c| h.adj[c].iter().copied())
        .filter(|&v| v > last)
        .collect();
    nexts.sort_unstable();
    nexts.dedup();
    for next in nexts {
        let narrowed: Vec<usize> = common.iter().copied().filter(|&c| h.has_edge(next, c)).collect();
        if narrowed.len() < t {
            continue;
        }
        l1.push(next);
        let out = grow(h, t, budget, nodes, l1, narrowed, found);
        l1.pop();
        if out != Some(false) {
            return out;
        }
    }
    Some(false)
}
