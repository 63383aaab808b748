//! Detection and certification of t×t grids and natural t×t grids.
//!
//! A t×t grid in an arrangement is a pair of disjoint t-line families whose
//! t² cross-intersections are distinct points of the arrangement. The grid is
//! natural when no two lines of the same family meet inside or on the convex
//! hull of those t² points.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::path::Path;

use crate::arrangement::{build_incidence_graph, Arrangement, IncidenceGraph};
use crate::error::{Error, ParseError, Result};
use crate::format::{read_text, write_text, Cursor};
use crate::geom::{convex_hull, in_convex_hull, intersect, HullPosition, Line, Point};

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    Absent,
    /// The node budget ran out before the search space was exhausted.
    BudgetExceeded,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        match self {
            Search::Found(t) => Search::Found(f(t)),
            Search::Absent => Search::Absent,
            Search::BudgetExceeded => Search::BudgetExceeded,
        }
    }
}

/// Two line families and their t² crossing points, `points[i·t + j]` being
/// `l1[i] ∩ l2[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridWitness {
    pub l1: Vec<Line>,
    pub l2: Vec<Line>,
    pub points: Vec<Point>,
}

impl GridWitness {
    /// Builds the witness from its families. Fails if a cross pair is
    /// parallel.
    pub fn from_families(l1: Vec<Line>, l2: Vec<Line>) -> Result<Self> {
        let mut points = Vec::with_capacity(l1.len() * l2.len());
        for a in &l1 {
            for b in &l2 {
                let p = intersect(a, b)
                    .ok_or_else(|| Error::InvalidWitness(format!("lines {a} and {b} do not cross")))?;
                points.push(p);
            }
        }
        Ok(GridWitness { l1, l2, points })
    }

    pub fn t(&self) -> usize {
        self.l1.len()
    }
}

/// Position of a same-family crossing relative to the grid hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCrossing {
    /// 1 or 2.
    pub family: u8,
    pub i: usize,
    pub j: usize,
    pub point: Point,
    pub position: HullPosition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalGridWitness {
    pub grid: GridWitness,
    /// Convex hull of the grid points, counter-clockwise.
    pub hull: Vec<Point>,
    /// Every same-family crossing, each classified against `hull`. Parallel
    /// pairs have no crossing and are omitted.
    pub family_crossings: Vec<FamilyCrossing>,
}

/// The first condition a witness violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessDefect {
    EmptyFamily,
    FamilySizeMismatch { l1: usize, l2: usize },
    RepeatedLine(Line),
    LineNotInArrangement(Line),
    ParallelCrossPair(Box<[Line; 2]>),
    TooFewPoints { distinct: usize, expected: usize },
    PointsMismatch,
    PointNotInArrangement(Box<Point>),
    HullMismatch,
    FamilyCrossingInHull { family: u8, point: Box<Point> },
}

impl fmt::Display for WitnessDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessDefect::EmptyFamily => write!(f, "t must be at least 1"),
            WitnessDefect::FamilySizeMismatch { l1, l2 } => write!(f, "|L1| = {l1} differs from |L2| = {l2}"),
            WitnessDefect::RepeatedLine(l) => write!(f, "line {l} repeated; L1 and L2 must be disjoint sets"),
            WitnessDefect::LineNotInArrangement(l) => write!(f, "L1 ∪ L2 not subset of L: {l}"),
            WitnessDefect::ParallelCrossPair(pair) => {
                write!(f, "|P0| < t^2: cross pair {} / {} is parallel", pair[0], pair[1])
            },
            WitnessDefect::TooFewPoints { distinct, expected } => {
                write!(f, "|P0| < t^2: {distinct} distinct crossings, expected {expected}")
            }
            WitnessDefect::PointsMismatch => write!(f, "listed P0 differs from the cross intersections"),
            WitnessDefect::PointNotInArrangement(p) => write!(f, "P0 not subset of P: ({p})"),
            WitnessDefect::HullMismatch => write!(f, "stored hull differs from conv(P0)"),
            WitnessDefect::FamilyCrossingInHull { family, point } => {
                write!(f, "not natural: two lines of L{family} meet at ({point}) in conv(P0)")
            }
        }
    }
}

/// Recomputes every grid invariant from scratch.
pub fn verify_witness(arr: &Arrangement, w: &GridWitness) -> Result<(), WitnessDefect> {
    let t = w.l1.len();
    if t == 0 || w.l2.is_empty() {
        return Err(WitnessDefect::EmptyFamily);
    }
    if w.l2.len() != t {
        return Err(WitnessDefect::FamilySizeMismatch { l1: t, l2: w.l2.len() });
    }
    let mut seen = HashSet::new();
    for l in w.l1.iter().chain(&w.l2) {
        if !seen.insert(l) {
            return Err(WitnessDefect::RepeatedLine(l.clone()));
        }
        if !arr.contains_line(l) {
            return Err(WitnessDefect::LineNotInArrangement(l.clone()));
        }
    }
    let mut crossings = Vec::with_capacity(t * t);
    for a in &w.l1 {
        for b in &w.l2 {
            match intersect(a, b) {
                Some(p) => crossings.push(p),
                None => return Err(WitnessDefect::ParallelCrossPair(Box::new([a.clone(), b.clone()]))),
            }
        }
    }
    let distinct: HashSet<&Point> = crossings.iter().collect();
    if distinct.len() < t * t {
        return Err(WitnessDefect::TooFewPoints {
            distinct: distinct.len(),
            expected: t * t,
        });
    }
    if w.points != crossings {
        return Err(WitnessDefect::PointsMismatch);
    }
    for p in &crossings {
        if !arr.contains_point(p) {
            return Err(WitnessDefect::PointNotInArrangement(Box::new(p.clone())));
        }
    }
    Ok(())
}

fn family_crossings(w: &GridWitness, hull: &[Point]) -> Vec<FamilyCrossing> {
    let mut out = Vec::new();
    for (family, lines) in [(1u8, &w.l1), (2u8, &w.l2)] {
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if let Some(point) = intersect(&lines[i], &lines[j]) {
                    let position = in_convex_hull(&point, hull).expect("hull built by convex_hull");
                    out.push(FamilyCrossing {
                        family,
                        i,
                        j,
                        point,
                        position,
                    });
                }
            }
        }
    }
    out
}

/// Verifies a natural witness, recomputing the hull and every same-family
/// crossing. Boundary contact counts as containment.
pub fn verify_natural_witness(arr: &Arrangement, w: &NaturalGridWitness) -> Result<(), WitnessDefect> {
    verify_witness(arr, &w.grid)?;
    let hull = convex_hull(&w.grid.points);
    if hull != w.hull {
        return Err(WitnessDefect::HullMismatch);
    }
    for c in family_crossings(&w.grid, &hull) {
        if c.position != HullPosition::Outside {
            return Err(WitnessDefect::FamilyCrossingInHull {
                family: c.family,
                point: Box::new(c.point),
            });
        }
    }
    Ok(())
}

/// Upgrades a valid witness when it is natural.
pub fn is_natural(arr: &Arrangement, w: &GridWitness) -> Result<Option<NaturalGridWitness>> {
    verify_witness(arr, w).map_err(|d| Error::InvalidWitness(d.to_string()))?;
    Ok(natural_upgrade(w))
}

/// Like [`is_natural`], but names the defect: either the first violated grid
/// invariant or the first same-family crossing inside the closed hull.
pub fn check_natural(arr: &Arrangement, w: &GridWitness) -> Result<NaturalGridWitness, WitnessDefect> {
    verify_witness(arr, w)?;
    let hull = convex_hull(&w.points);
    let crossings = family_crossings(w, &hull);
    if let Some(c) = crossings.iter().find(|c| c.position != HullPosition::Outside) {
        return Err(WitnessDefect::FamilyCrossingInHull {
            family: c.family,
            point: Box::new(c.point.clone()),
        });
    }
    Ok(NaturalGridWitness {
        grid: w.clone(),
        hull,
        family_crossings: crossings,
    })
}

fn natural_upgrade(w: &GridWitness) -> Option<NaturalGridWitness> {
    let hull = convex_hull(&w.points);
    let crossings = family_crossings(w, &hull);
    crossings
        .iter()
        .all(|c| c.position == HullPosition::Outside)
        .then(|| NaturalGridWitness {
            grid: w.clone(),
            hull,
            family_crossings: crossings,
        })
}

/// Line ids crossing `line` at a point of the arrangement, with that point's
/// id, sorted by line id.
fn crossing_neighbors(g: &IncidenceGraph, line: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &p in g.points_on(line) {
        for &l in g.lines_through(p) {
            if l != line {
                out.push((l, p));
            }
        }
    }
    out.sort_unstable();
    out
}

/// 4-cycle search in the crossing graph: lines `u < w` and two further lines
/// `v, v'` meeting both at four distinct points of the arrangement.
fn find_c4(arr: &Arrangement, g: &IncidenceGraph) -> Option<([usize; 2], [usize; 2])> {
    #[derive(Clone, Copy)]
    struct Mid {
        v: usize,
        p: usize,
        q: usize,
    }
    #[derive(Clone, Copy, Default)]
    struct Slot {
        stamp: usize,
        first: Option<Mid>,
        same_p: Option<Mid>,
        same_q: Option<Mid>,
    }
    let n = arr.num_lines();
    let mut slots = vec![Slot::default(); n];
    for u in 0..n {
        let stamp = u + 1;
        for &p in g.points_on(u) {
            for &v in g.lines_through(p) {
                if v == u {
                    continue;
                }
                for &q in g.points_on(v) {
                    if q == p {
                        continue;
                    }
                    for &w in g.lines_through(q) {
                        if w <= u || w == v {
                            continue;
                        }
                        let mid = Mid { v, p, q };
                        let slot = &mut slots[w];
                        if slot.stamp != stamp {
                            *slot = Slot {
                                stamp,
                                first: Some(mid),
                                same_p: None,
                                same_q: None,
                            };
                            continue;
                        }
                        let first = slot.first.unwrap();
                        // Two middles work iff they differ at both ends.
                        let partner = if mid.p != first.p && mid.q != first.q {
                            Some(first)
                        } else if mid.p == first.p {
                            slot.same_p.get_or_insert(mid);
                            slot.same_q
                        } else {
                            slot.same_q.get_or_insert(mid);
                            slot.same_p
                        };
                        if let Some(other) = partner {
                            if other.p != mid.p && other.q != mid.q {
                                let (a, b) = (other.v.min(mid.v), other.v.max(mid.v));
                                return Some(([u, w], [a, b]));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

struct GridSearch<'a> {
    g: &'a IncidenceGraph,
    t: usize,
    budget: u64,
    nodes: u64,
    l1: Vec<usize>,
}

struct Candidate {
    line: usize,
    /// Point ids of `line ∩ l1[i]`, one per chosen L1 line.
    pts: Vec<usize>,
}

enum Flow {
    Continue,
    Stop,
    OutOfBudget,
}

impl GridSearch<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.budget
    }

    /// Extends L1; `cands` are lines crossing every chosen L1 line at
    /// distinct points of the arrangement.
    fn extend_l1(&mut self, cands: Vec<Candidate>, on_grid: &mut dyn FnMut(&[usize], &[usize]) -> bool) -> Flow {
        if self.l1.len() == self.t {
            let mut l2 = Vec::with_capacity(self.t);
            let mut used: Vec<HashSet<usize>> = vec![HashSet::new(); self.t];
            return self.extend_l2(&cands, 0, &mut l2, &mut used, on_grid);
        }
        let last = *self.l1.last().unwrap();
        // Next L1 line: must cross at least t candidates.
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for c in &cands {
            for (l, _) in crossing_neighbors(self.g, c.line) {
                if l > last {
                    *counts.entry(l).or_default() += 1;
                }
            }
        }
        for (&next, &cnt) in &counts {
            if cnt < self.t {
                continue;
            }
            if !self.tick() {
                return Flow::OutOfBudget;
            }
            let nb = crossing_neighbors(self.g, next);
            let narrowed: Vec<Candidate> = cands
                .iter()
                .filter_map(|c| {
                    let i = nb.binary_search_by_key(&c.line, |e| e.0).ok()?;
                    let q = nb[i].1;
                    if c.pts.contains(&q) {
                        return None;
                    }
                    let mut pts = c.pts.clone();
                    pts.push(q);
                    Some(Candidate { line: c.line, pts })
                })
                .collect();
            if narrowed.len() < self.t {
                continue;
            }
            self.l1.push(next);
            let flow = self.extend_l1(narrowed, on_grid);
            self.l1.pop();
            if !matches!(flow, Flow::Continue) {
                return flow;
            }
        }
        Flow::Continue
    }

    fn extend_l2(
        &mut self,
        cands: &[Candidate],
        from: usize,
        l2: &mut Vec<usize>,
        used: &mut [HashSet<usize>],
        on_grid: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    ) -> Flow {
        if l2.len() == self.t {
            return if on_grid(&self.l1, l2) { Flow::Stop } else { Flow::Continue };
        }
        for idx in from..cands.len() {
            if cands.len() - idx < self.t - l2.len() {
                break;
            }
            let c = &cands[idx];
            if c.pts.iter().enumerate().any(|(i, q)| used[i].contains(q)) {
                continue;
            }
            if !self.tick() {
                return Flow::OutOfBudget;
            }
            for (i, &q) in c.pts.iter().enumerate() {
                used[i].insert(q);
            }
            l2.push(c.line);
            let flow = self.extend_l2(cands, idx + 1, l2, used, on_grid);
            l2.pop();
            for (i, q) in c.pts.iter().enumerate() {
                used[i].remove(q);
            }
            if !matches!(flow, Flow::Continue) {
                return flow;
            }
        }
        Flow::Continue
    }
}

/// Enumerates t×t grids as `(L1 ids, L2 ids)` in a fixed order, each grid
/// once with `min(L1) < min(L2)`, until `on_grid` returns true.
fn enumerate_grids(
    arr: &Arrangement,
    g: &IncidenceGraph,
    t: usize,
    budget: u64,
    on_grid: &mut dyn FnMut(&[usize], &[usize]) -> bool,
) -> Search<()> {
    let mut search = GridSearch {
        g,
        t,
        budget,
        nodes: 0,
        l1: Vec::with_capacity(t),
    };
    for first in 0..arr.num_lines() {
        if !search.tick() {
            return Search::BudgetExceeded;
        }
        let cands: Vec<Candidate> = crossing_neighbors(g, first)
            .into_iter()
            .filter(|&(l, _)| l > first)
            .map(|(line, p)| Candidate { line, pts: vec![p] })
            .collect();
        if cands.len() < t {
            continue;
        }
        search.l1.push(first);
        let flow = search.extend_l1(cands, on_grid);
        search.l1.pop();
        match flow {
            Flow::Continue => {}
            Flow::Stop => return Search::Found(()),
            Flow::OutOfBudget => return Search::BudgetExceeded,
        }
    }
    Search::Absent
}

fn witness_from_ids(arr: &Arrangement, l1: &[usize], l2: &[usize]) -> GridWitness {
    let lines = arr.lines();
    GridWitness::from_families(
        l1.iter().map(|&i| lines[i].clone()).collect(),
        l2.iter().map(|&i| lines[i].clone()).collect(),
    )
    .expect("search only pairs crossing lines")
}

fn check_t(t: usize) -> Result<()> {
    if t < 2 {
        return Err(Error::InvalidParams(format!("grid size t must be at least 2, got {t}")));
    }
    Ok(())
}

/// Searches for a t×t grid. For `t = 2` this is a 4-cycle search in the
/// crossing graph and never exhausts the budget.
pub fn find_txt_grid(arr: &Arrangement, t: usize, budget: u64) -> Result<Search<GridWitness>> {
    check_t(t)?;
    let g = build_incidence_graph(arr);
    if t == 2 {
        return Ok(match find_c4(arr, &g) {
            Some((l1, l2)) => Search::Found(witness_from_ids(arr, &l1, &l2)),
            None => Search::Absent,
        });
    }
    find_txt_grid_exhaustive(arr, &g, t, budget)
}

/// The backtracking search used for `t > 2`, available for any `t ≥ 2`.
pub fn find_txt_grid_exhaustive(
    arr: &Arrangement,
    g: &IncidenceGraph,
    t: usize,
    budget: u64,
) -> Result<Search<GridWitness>> {
    check_t(t)?;
    let mut found = None;
    let outcome = enumerate_grids(arr, g, t, budget, &mut |l1, l2| {
        found = Some((l1.to_vec(), l2.to_vec()));
        true
    });
    Ok(outcome.map(|_| {
        let (l1, l2) = found.unwrap();
        witness_from_ids(arr, &l1, &l2)
    }))
}

/// First grid in enumeration order that is natural.
pub fn find_natural_grid(arr: &Arrangement, t: usize, budget: u64) -> Result<Search<NaturalGridWitness>> {
    check_t(t)?;
    let g = build_incidence_graph(arr);
    let mut found = None;
    let outcome = enumerate_grids(arr, &g, t, budget, &mut |l1, l2| {
        found = natural_upgrade(&witness_from_ids(arr, l1, l2));
        found.is_some()
    });
    Ok(outcome.map(|_| found.unwrap()))
}

pub fn format_witness(w: &GridWitness) -> String {
    let mut s = String::new();
    writeln!(s, "{}", w.t()).unwrap();
    writeln!(s, "# L1").unwrap();
    for l in &w.l1 {
        writeln!(s, "{l}").unwrap();
    }
    writeln!(s, "# L2").unwrap();
    for l in &w.l2 {
        writeln!(s, "{l}").unwrap();
    }
    writeln!(s, "# P0, row i lists L1[i] ∩ L2[0..t]").unwrap();
    for p in &w.points {
        writeln!(s, "{p}").unwrap();
    }
    s
}

pub fn parse_witness(text: &str) -> Result<GridWitness> {
    let mut cur = Cursor::new(text);
    let (ln, body) = cur.next_raw()?;
    let t: usize = body
        .parse()
        .map_err(|_| ParseError::new(ln, body, "expected grid size t"))?;
    if t == 0 {
        return Err(ParseError::new(ln, body, "grid size must be positive").into());
    }
    let l1 = cur.items::<Line>(t)?.into_iter().map(|(_, l)| l).collect();
    let l2 = cur.items::<Line>(t)?.into_iter().map(|(_, l)| l).collect();
    let points = cur.items::<Point>(t * t)?.into_iter().map(|(_, p)| p).collect();
    cur.expect_end()?;
    Ok(GridWitness { l1, l2, points })
}

pub fn read_witness(path: &Path) -> Result<GridWitness> {
    parse_witness(&read_text(path)?)
}

pub fn write_witness(w: &GridWitness, path: &Path) -> Result<()> {
    write_text(path, &format_witness(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{generate_grid_free, GridFreeParams};
    use crate::geom::line_through;
    use crate::rational::Rational;
    use proptest::prelude::*;

    fn line(a: i64, b: i64, c: i64) -> Line {
        Line::new(a, b, c).unwrap()
    }

    fn unit_square() -> Arrangement {
        let pts = vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(0, 1),
            Point::from_ints(1, 1),
        ];
        Arrangement::new(pts, vec![line(0, 1, 0), line(0, 1, 1), line(1, 0, 0), line(1, 0, 1)]).unwrap()
    }

    /// Lines y = ±x and y = ±2 with the four points (±2, ±2).
    fn cross_arrangement() -> Arrangement {
        let pts = vec![
            Point::from_ints(2, 2),
            Point::from_ints(-2, 2),
            Point::from_ints(2, -2),
            Point::from_ints(-2, -2),
        ];
        Arrangement::new(pts, vec![line(1, -1, 0), line(1, 1, 0), line(0, 1, 2), line(0, 1, -2)]).unwrap()
    }

    /// Brute-force 2×2 oracle over all pairs of disjoint line pairs.
    fn has_2x2_oracle(arr: &Arrangement) -> bool {
        let ls = arr.lines();
        let n = ls.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in 0..n {
                    for d in c + 1..n {
                        if [c, d].iter().any(|x| *x == a || *x == b) {
                            continue;
                        }
                        let pts: Vec<Option<Point>> = [(a, c), (a, d), (b, c), (b, d)]
                            .iter()
                            .map(|&(i, j)| intersect(&ls[i], &ls[j]))
                            .collect();
                        if pts.iter().any(|p| p.as_ref().is_none_or(|p| !arr.contains_point(p))) {
                            continue;
                        }
                        let set: HashSet<_> = pts.iter().collect();
                        if set.len() == 4 {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn unit_square_grid() {
        let arr = unit_square();
        let w = find_txt_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap().found().unwrap();
        assert_eq!(w.l1, vec![line(0, 1, 0), line(0, 1, 1)]);
        assert_eq!(w.l2, vec![line(1, 0, 0), line(1, 0, 1)]);
        assert_eq!(verify_witness(&arr, &w), Ok(()));
        let nat = is_natural(&arr, &w).unwrap().unwrap();
        assert!(nat.family_crossings.is_empty());
        assert_eq!(verify_natural_witness(&arr, &nat), Ok(()));
        let nat = find_natural_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap().found().unwrap();
        assert_eq!(verify_natural_witness(&arr, &nat), Ok(()));
    }

    #[test]
    fn grid_free_has_no_2x2() {
        let p = GridFreeParams { a: vec![1, 2], m: vec![1, 2], h: 20, k: 2 };
        let arr = generate_grid_free(&p).unwrap();
        assert!(!has_2x2_oracle(&arr));
        assert_eq!(find_txt_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap(), Search::Absent);
    }

    #[test]
    fn concurrent_lines_are_no_grid() {
        let arr = Arrangement::new(
            vec![Point::from_ints(0, 0)],
            vec![line(1, 0, 0), line(0, 1, 0), line(1, -1, 0)],
        )
        .unwrap();
        assert_eq!(find_txt_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap(), Search::Absent);
        assert_eq!(find_natural_grid(&Arrangement::empty(), 2, 10).unwrap(), Search::Absent);
        assert!(find_txt_grid(&arr, 1, 10).is_err());
    }

    #[test]
    fn center_crossing_is_not_natural() {
        let arr = cross_arrangement();
        let w = GridWitness::from_families(vec![line(1, -1, 0), line(1, 1, 0)], vec![line(0, 1, 2), line(0, 1, -2)])
            .unwrap();
        assert_eq!(verify_witness(&arr, &w), Ok(()));
        assert_eq!(is_natural(&arr, &w).unwrap(), None);
        assert_eq!(
            check_natural(&arr, &w),
            Err(WitnessDefect::FamilyCrossingInHull { family: 1, point: Box::new(Point::from_ints(0, 0)) })
        );
        // The only grid is the one above.
        let mut grids = 0;
        let g = build_incidence_graph(&arr);
        enumerate_grids(&arr, &g, 2, DEFAULT_NODE_BUDGET, &mut |_, _| {
            grids += 1;
            false
        });
        assert_eq!(grids, 1);
        assert_eq!(find_natural_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap(), Search::Absent);
    }

    #[test]
    fn sheared_3x3_is_natural() {
        // L1 is concurrent at (−10, −10), L2 at (10, 30); the grid sits
        // near x = 18.
        let r = |n: i64, d: i64| Rational::new(n, d).unwrap();
        let l1: Vec<Line> = [(1, 1), (11, 10), (6, 5)]
            .iter()
            .enumerate()
            .map(|(i, &(n, d))| Line::from_slope_intercept(&r(n, d), &r(i as i64, 1)))
            .collect();
        let l2: Vec<Line> = [(-1, 1), (-11, 10), (-6, 5)]
            .iter()
            .enumerate()
            .map(|(i, &(n, d))| Line::from_slope_intercept(&r(n, d), &r(40 + i as i64, 1)))
            .collect();
        let w = GridWitness::from_families(l1.clone(), l2.clone()).unwrap();
        let mut lines = l1.clone();
        lines.extend(l2.clone());
        let arr = Arrangement::new(w.points.clone(), lines).unwrap();
        let hull = convex_hull(&w.points);
        for fam in [&l1, &l2] {
            for i in 0..3 {
                for j in i + 1..3 {
                    let p = intersect(&fam[i], &fam[j]).unwrap();
                    assert_eq!(in_convex_hull(&p, &hull).unwrap(), HullPosition::Outside);
                }
            }
        }
        let nat = is_natural(&arr, &w).unwrap().unwrap();
        assert_eq!(nat.family_crossings.len(), 6);
        assert_eq!(verify_natural_witness(&arr, &nat), Ok(()));
        assert!(find_txt_grid(&arr, 3, DEFAULT_NODE_BUDGET).unwrap().is_found());
        let found = find_natural_grid(&arr, 3, DEFAULT_NODE_BUDGET).unwrap().found().unwrap();
        assert_eq!(verify_natural_witness(&arr, &found), Ok(()));
    }

    #[test]
    fn witness_diagnostics() {
        let arr = unit_square();
        let good = GridWitness::from_families(vec![line(0, 1, 0), line(0, 1, 1)], vec![line(1, 0, 0), line(1, 0, 1)])
            .unwrap();
        assert_eq!(verify_witness(&arr, &good), Ok(()));

        let full = unit_square();
        let missing = Arrangement::new(full.points()[..3].to_vec(), full.lines().to_vec()).unwrap();
        let d = verify_witness(&missing, &good).unwrap_err();
        assert!(d.to_string().contains("P0 not subset of P"), "{d}");

        // y = x, y = −x both cross y = 0 at the origin.
        let shared = GridWitness::from_families(vec![line(1, -1, 0), line(1, 1, 0)], vec![line(0, 1, 0), line(0, 1, 1)])
            .unwrap();
        let pts: Vec<Point> = shared.points.iter().cloned().collect::<HashSet<_>>().into_iter().collect();
        let arr2 = Arrangement::new(pts, [shared.l1.clone(), shared.l2.clone()].concat()).unwrap();
        let d = verify_witness(&arr2, &shared).unwrap_err();
        assert!(d.to_string().contains("|P0| < t^2"), "{d}");

        let mut bad = good.clone();
        bad.points.swap(0, 1);
        assert_eq!(verify_witness(&arr, &bad), Err(WitnessDefect::PointsMismatch));
        let mut bad = good.clone();
        bad.l2[0] = line(1, 0, 5);
        assert!(matches!(verify_witness(&arr, &bad), Err(WitnessDefect::LineNotInArrangement(_))));
        let mut bad = good.clone();
        bad.l2.pop();
        assert!(matches!(verify_witness(&arr, &bad), Err(WitnessDefect::FamilySizeMismatch { .. })));
        assert!(matches!(is_natural(&arr, &bad), Err(Error::InvalidWitness(_))));
        let mut bad = good;
        bad.l2[0] = bad.l1[0].clone();
        assert!(matches!(verify_witness(&arr, &bad), Err(WitnessDefect::RepeatedLine(_))));
    }

    #[test]
    fn witness_file_round_trip() {
        let arr = unit_square();
        let w = find_txt_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap().found().unwrap();
        assert_eq!(parse_witness(&format_witness(&w)).unwrap(), w);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        write_witness(&w, &path).unwrap();
        assert_eq!(read_witness(&path).unwrap(), w);
        assert!(parse_witness("2\n0 1 0\n").is_err());
        assert!(parse_witness("x\n").is_err());
    }

    #[test]
    fn budget_is_reported() {
        let p: Vec<Point> = (0..4).flat_map(|x| (0..4).map(move |y| Point::from_ints(x, y))).collect();
        let mut lines = Vec::new();
        for i in 0..4 {
            lines.push(line(1, 0, i));
            lines.push(line(0, 1, i));
        }
        let arr = Arrangement::new(p, lines).unwrap();
        assert_eq!(find_txt_grid(&arr, 3, 2).unwrap(), Search::BudgetExceeded);
        let w = find_txt_grid(&arr, 4, DEFAULT_NODE_BUDGET).unwrap().found().unwrap();
        assert_eq!(verify_witness(&arr, &w), Ok(()));
        assert_eq!(find_txt_grid(&arr, 5, DEFAULT_NODE_BUDGET).unwrap(), Search::Absent);
    }

    fn random_arrangement() -> impl Strategy<Value = Arrangement> {
        let pts = prop::collection::btree_set((0i64..5, 0i64..5), 3..14);
        let pairs = prop::collection::vec((0usize..64, 0usize..64), 2..16);
        (pts, pairs).prop_map(|(pts, pairs)| {
            let pts: Vec<Point> = pts.into_iter().map(|(x, y)| Point::from_ints(x, y)).collect();
            let mut lines: Vec<Line> = pairs
                .into_iter()
                .filter_map(|(i, j)| line_through(&pts[i % pts.len()], &pts[j % pts.len()]).ok())
                .collect();
            lines.sort();
            lines.dedup();
            Arrangement::new(pts, lines).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn c4_path_matches_oracle_and_backtracking(arr in random_arrangement()) {
            let fast = find_txt_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap();
            prop_assert_eq!(fast.is_found(), has_2x2_oracle(&arr));
            let g = build_incidence_graph(&arr);
            let slow = find_txt_grid_exhaustive(&arr, &g, 2, DEFAULT_NODE_BUDGET).unwrap();
            prop_assert_eq!(fast.is_found(), slow.is_found());
            if let Search::Found(w) = fast {
                prop_assert_eq!(verify_witness(&arr, &w), Ok(()));
            }
            if let Search::Found(w) = find_natural_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap() {
                prop_assert_eq!(verify_natural_witness(&arr, &w), Ok(()));
            }
        }

        #[test]
        fn detection_is_deterministic_and_monotone(arr in random_arrangement(), extra in (0i64..5, 0i64..5)) {
            let first = find_txt_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap();
            prop_assert_eq!(&first, &find_txt_grid(&arr, 2, DEFAULT_NODE_BUDGET).unwrap());
            let p = Point::from_ints(extra.0 + 7, extra.1);
            let mut pts = arr.points().to_vec();
            pts.push(p);
            let bigger = Arrangement::new(pts, arr.lines().to_vec()).unwrap();
            if first.is_found() {
                prop_assert!(find_txt_grid(&bigger, 2, DEFAULT_NODE_BUDGET).unwrap().is_found());
            }
        }
    }
}
