//! Point-line arrangements, their incidence graphs and incidence counting.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::fastkey::{functional_key, incident, Key, SmallLine, SmallPoint};
use crate::format::{read_text, write_text, Cursor};
use crate::geom::{intersect, Line, Point};

/// A finite point set and a finite line set, both duplicate free and kept in
/// insertion order.
#[derive(Clone, Debug, Default)]
pub struct Arrangement {
    points: Vec<Point>,
    lines: Vec<Line>,
    point_index: HashMap<Point, usize>,
    line_index: HashMap<Line, usize>,
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.lines == other.lines
    }
}

impl Eq for Arrangement {}

impl Arrangement {
    /// Rejects duplicate points and duplicate canonical lines.
    pub fn new(points: Vec<Point>, lines: Vec<Line>) -> Result<Self> {
        let mut point_index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if point_index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(Box::new(p.clone())));
            }
        }
        let mut line_index = HashMap::with_capacity(lines.len());
        for (i, l) in lines.iter().enumerate() {
            if line_index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLine(l.clone()));
            }
        }
        Ok(Arrangement {
            points,
            lines,
            point_index,
            line_index,
        })
    }

    pub fn empty() -> Self {
        Arrangement::default()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn point_id(&self, p: &Point) -> Option<usize> {
        self.point_index.get(p).copied()
    }

    pub fn line_id(&self, l: &Line) -> Option<usize> {
        self.line_index.get(l).copied()
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.point_index.contains_key(p)
    }

    pub fn contains_line(&self, l: &Line) -> bool {
        self.line_index.contains_key(l)
    }
}

/// The bipartite incidence relation between point ids and line ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    point_lines: Vec<Vec<usize>>,
    line_points: Vec<Vec<usize>>,
    edges: usize,
}

impl IncidenceGraph {
    pub fn lines_through(&self, point: usize) -> &[usize] {
        &self.point_lines[point]
    }

    pub fn points_on(&self, line: usize) -> &[usize] {
        &self.line_points[line]
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, point: usize, line: usize) -> bool {
        self.point_lines[point].binary_search(&line).is_ok()
    }

    /// All `(point, line)` pairs, ordered by point then line.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.point_lines
            .iter()
            .enumerate()
            .flat_map(|(p, ls)| ls.iter().map(move |&l| (p, l)))
    }

    /// Number of points on each line.
    pub fn line_degrees(&self) -> Vec<usize> {
        self.line_points.iter().map(Vec::len).collect()
    }
}

/// Groups line ids by direction `(a, b)` so that each class needs one pass
/// over the points.
fn direction_classes(lines: &[Line]) -> BTreeMap<(BigInt, BigInt), Vec<usize>> {
    let mut classes: BTreeMap<(BigInt, BigInt), Vec<usize>> = BTreeMap::new();
    for (i, l) in lines.iter().enumerate() {
        classes.entry(l.direction()).or_default().push(i);
    }
    classes
}

const SMALL_CLASS: usize = 4;

/// Calls `f(point, line)` once per incidence, class by class.
fn for_each_incidence(arr: &Arrangement, mut f: impl FnMut(usize, usize)) {
    let small: Vec<Option<SmallPoint>> = arr.points.iter().map(SmallPoint::of).collect();
    for ((a, b), ids) in direction_classes(&arr.lines) {
        // Hashing every point costs several direct tests, so small classes
        // are tested line by line.
        if ids.len() <= SMALL_CLASS {
            for &li in &ids {
                let l = &arr.lines[li];
                let sl = SmallLine::of(l);
                for (pi, p) in arr.points.iter().enumerate() {
                    if incident(l, sl, p, small[pi]) {
                        f(pi, li);
                    }
                }
            }
            continue;
        }
        // Lines in one class are parallel and distinct, so their right-hand
        // sides are distinct and each point lies on at most one of them.
        let by_rhs: HashMap<Key, usize> = ids.iter().map(|&i| (Key::integer(arr.lines[i].c()), i)).collect();
        for (pi, p) in arr.points.iter().enumerate() {
            if let Some(&li) = by_rhs.get(&functional_key(&a, &b, p, small[pi])) {
                f(pi, li);
            }
        }
    }
}

pub fn build_incidence_graph(arr: &Arrangement) -> IncidenceGraph {
    let mut point_lines = vec![Vec::new(); arr.num_points()];
    let mut line_points = vec![Vec::new(); arr.num_lines()];
    let mut edges = 0;
    for_each_incidence(arr, |p, l| {
        point_lines[p].push(l);
        line_points[l].push(p);
        edges += 1;
    });
    for v in point_lines.iter_mut() {
        v.sort_unstable();
    }
    for v in line_points.iter_mut() {
        v.sort_unstable();
    }
    IncidenceGraph {
        point_lines,
        line_points,
        edges,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountStrategy {
    /// Exact test of every point against every line.
    Naive,
    /// Points bucketed by the value of each direction class's functional.
    Grouped,
}

impl FromStr for CountStrategy {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(CountStrategy::Naive),
            "grouped" => Ok(CountStrategy::Grouped),
            _ => Err(ParseError::new(0, s, "unknown counting strategy")),
        }
    }
}

pub fn count_incidences(arr: &Arrangement, strategy: CountStrategy) -> u64 {
    match strategy {
        CountStrategy::Naive => {
            let small_pts: Vec<Option<SmallPoint>> = arr.points.iter().map(SmallPoint::of).collect();
            let mut total = 0u64;
            for l in &arr.lines {
                let sl = SmallLine::of(l);
                for (p, sp) in arr.points.iter().zip(&small_pts) {
                    total += incident(l, sl, p, *sp) as u64;
                }
            }
            total
        }
        CountStrategy::Grouped => {
            let mut total = 0u64;
            for_each_incidence(arr, |_, _| total += 1);
            total
        }
    }
}

/// Distinct cross-intersections of two line families, sorted, and whether
/// all `|L1|·|L2|` crossings exist and are pairwise distinct.
pub fn intersection_points(l1: &[Line], l2: &[Line]) -> (Vec<Point>, bool) {
    let mut pts = Vec::with_capacity(l1.len() * l2.len());
    let mut parallel = false;
    for a in l1 {
        for b in l2 {
            match intersect(a, b) {
                Some(p) => pts.push(p),
                None => parallel = true,
            }
        }
    }
    pts.sort();
    pts.dedup();
    let all_distinct = !parallel && pts.len() == l1.len() * l2.len();
    (pts, all_distinct)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub m: usize,
    pub n: usize,
    pub incidences: u64,
    pub strategy: CountStrategy,
    pub elapsed_ms: u64,
}

pub fn format_arrangement(arr: &Arrangement) -> String {
    let mut s = String::new();
    writeln!(s, "points {}", arr.num_points()).unwrap();
    for p in &arr.points {
        writeln!(s, "{p}").unwrap();
    }
    writeln!(s, "lines {}", arr.num_lines()).unwrap();
    for l in &arr.lines {
        writeln!(s, "{l}").unwrap();
    }
    s
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    let mut cur = Cursor::new(text);
    if cur.is_done() {
        return Ok(Arrangement::empty());
    }
    let m = cur.header("points")?;
    let points = cur.items::<Point>(m)?;
    let n = cur.header("lines")?;
    let lines = cur.items::<Line>(n)?;
    cur.expect_end()?;

    let mut seen_pts = HashSet::with_capacity(points.len());
    for (ln, p) in &points {
        if !seen_pts.insert(p) {
            return Err(ParseError::new(*ln, &p.to_string(), "duplicate point").into());
        }
    }
    let mut seen_lines = HashSet::with_capacity(lines.len());
    for (ln, l) in &lines {
        if !seen_lines.insert(l) {
            return Err(ParseError::new(*ln, &l.to_string(), "duplicate canonical line").into());
        }
    }
    Arrangement::new(
        points.into_iter().map(|(_, p)| p).collect(),
        lines.into_iter().map(|(_, l)| l).collect(),
    )
}

pub fn read_arrangement(path: &Path) -> Result<Arrangement> {
    parse_arrangement(&read_text(path)?)
}

pub fn write_arrangement(arr: &Arrangement, path: &Path) -> Result<()> {
    write_text(path, &format_arrangement(arr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AffineMap;
    use crate::rational::Rational;
    use proptest::prelude::*;

    fn line(a: i64, b: i64, c: i64) -> Line {
        Line::new(a, b, c).unwrap()
    }

    fn grid3() -> Arrangement {
        let pts = (0..3).flat_map(|x| (0..3).map(move |y| Point::from_ints(x, y))).collect();
        Arrangement::new(pts, vec![line(0, 1, 0), line(0, 1, 1), line(0, 1, 2)]).unwrap()
    }

    fn unit_square() -> Arrangement {
        let pts = vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(0, 1),
            Point::from_ints(1, 1),
        ];
        let lines = vec![line(0, 1, 0), line(0, 1, 1), line(1, 0, 0), line(1, 0, 1)];
        Arrangement::new(pts, lines).unwrap()
    }

    #[test]
    fn incidence_graph_examples() {
        let arr = Arrangement::new(vec![Point::from_ints(0, 0)], vec![line(0, 1, 0), line(1, -1, 0)]).unwrap();
        let g = build_incidence_graph(&arr);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.lines_through(0), &[0, 1]);

        let arr = Arrangement::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 1)], vec![]).unwrap();
        assert_eq!(build_incidence_graph(&arr).num_edges(), 0);

        let g = build_incidence_graph(&grid3());
        assert_eq!(g.num_edges(), 9);
        assert_eq!(g.line_degrees(), vec![3, 3, 3]);
        assert!(g.has_edge(4, 1));
        assert!(!g.has_edge(4, 0));
        assert_eq!(g.edges().count(), 9);
    }

    #[test]
    fn counting_examples() {
        for s in [CountStrategy::Naive, CountStrategy::Grouped] {
            assert_eq!(count_incidences(&Arrangement::empty(), s), 0);
            assert_eq!(count_incidences(&grid3(), s), 9);
        }
        assert_eq!("GROUPED".parse::<CountStrategy>().unwrap(), CountStrategy::Grouped);
        assert!("fast".parse::<CountStrategy>().is_err());
    }

    #[test]
    fn intersection_point_examples() {
        let (pts, distinct) = intersection_points(&[line(0, 1, 0), line(0, 1, 1)], &[line(1, 0, 0), line(1, 0, 1)]);
        assert_eq!(pts.len(), 4);
        assert!(distinct);

        let (pts, distinct) = intersection_points(&[line(0, 1, 0), line(0, 1, 1)], &[line(0, 1, 2)]);
        assert!(pts.is_empty());
        assert!(!distinct);

        // y = x and y = -x both meet y = 0 at the origin.
        let (pts, distinct) = intersection_points(&[line(1, -1, 0), line(1, 1, 0)], &[line(0, 1, 0)]);
        assert_eq!(pts, vec![Point::from_ints(0, 0)]);
        assert!(!distinct);
    }

    #[test]
    fn duplicates_rejected() {
        let p = Point::from_ints(1, 2);
        assert!(matches!(
            Arrangement::new(vec![p.clone(), p], vec![]),
            Err(Error::DuplicatePoint(_))
        ));
        assert!(matches!(
            Arrangement::new(vec![], vec![line(1, 1, 1), line(2, 2, 2)]),
            Err(Error::DuplicateLine(_))
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("square.txt");
        let arr = unit_square();
        write_arrangement(&arr, &path).unwrap();
        assert_eq!(read_arrangement(&path).unwrap(), arr);
        assert_eq!(parse_arrangement("").unwrap(), Arrangement::empty());
        assert_eq!(parse_arrangement("# nothing\npoints 0\nlines 0\n").unwrap(), Arrangement::empty());
    }

    #[test]
    fn parse_errors_are_located() {
        let err = parse_arrangement("points 1\n1/0 2\nlines 0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2") && msg.contains("zero denominator") && msg.contains("1/0"), "{msg}");

        let err = parse_arrangement("points 0\nlines 2\n1 1 1\n# same line\n2 2 2\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 5") && msg.contains("duplicate canonical line"), "{msg}");

        let err = parse_arrangement("points 1\n0 0\nlines 1\n0 0 1\n").unwrap_err();
        assert!(err.to_string().contains("line 4"));
        assert!(parse_arrangement("points 2\n0 0\n").is_err());
        assert!(parse_arrangement("points 0\nlines 0\nextra\n").is_err());
    }

    #[test]
    fn lines_are_canonicalized_on_read() {
        let arr = parse_arrangement("points 0\nlines 1\n-2 -4 6\n").unwrap();
        assert_eq!(arr.lines()[0].to_string(), "1 2 -3");
    }

    fn small_arrangement() -> impl Strategy<Value = Arrangement> {
        let pts = prop::collection::btree_set((-4i64..5, -4i64..5), 0..30);
        let lines = prop::collection::btree_set((-2i64..3, -2i64..3, -4i64..5), 0..20);
        (pts, lines).prop_map(|(pts, lines)| {
            let pts: Vec<Point> = pts.into_iter().map(|(x, y)| Point::from_ints(x, y)).collect();
            let mut ls: Vec<Line> = lines
                .into_iter()
                .filter(|(a, b, _)| *a != 0 || *b != 0)
                .map(|(a, b, c)| line(a, b, c))
                .collect();
            ls.sort();
            ls.dedup();
            Arrangement::new(pts, ls).unwrap()
        })
    }

    fn affine() -> impl Strategy<Value = AffineMap> {
        let q = || (-6i64..7, 1i64..5).prop_map(|(n, d)| Rational::new(n, d).unwrap());
        (q(), q(), q(), q(), q(), q()).prop_filter_map("singular", |(a, b, c, d, e, f)| {
            AffineMap::new([[a, b], [c, d]], [e, f]).ok()
        })
    }

    proptest! {
        #[test]
        fn strategies_agree(arr in small_arrangement()) {
            let naive = count_incidences(&arr, CountStrategy::Naive);
            prop_assert_eq!(naive, count_incidences(&arr, CountStrategy::Grouped));
            prop_assert_eq!(naive as usize, build_incidence_graph(&arr).num_edges());
            let full = (arr.num_points() * arr.num_lines()) as u64;
            prop_assert!(naive <= full);
        }

        #[test]
        fn affine_invariance(arr in small_arrangement(), map in affine()) {
            let pts = arr.points().iter().map(|p| map.apply_point(p)).collect();
            let lines = arr.lines().iter().map(|l| map.apply_line(l)).collect();
            let image = Arrangement::new(pts, lines).unwrap();
            prop_assert_eq!(
                count_incidences(&arr, CountStrategy::Naive),
                count_incidences(&image, CountStrategy::Grouped)
            );
        }
    }
}
