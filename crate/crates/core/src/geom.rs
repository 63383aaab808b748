//! Points, lines and the exact planar predicates built on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, ParseError, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(x.into(), y.into())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl FromStr for Point {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut it = s.split_whitespace();
        let (Some(x), Some(y)) = (it.next(), it.next()) else {
            return Err(ParseError::new(0, s, "expected two coordinates"));
        };
        if let Some(extra) = it.next() {
            return Err(ParseError::new(0, extra, "unexpected token after point"));
        }
        Ok(Point::new(x.parse()?, y.parse()?))
    }
}

/// The line `a·x + b·y = c` with integer coefficients in canonical form:
/// `gcd(|a|, |b|, |c|) = 1` and the first nonzero of `(a, b)` positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl Line {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let (mut a, mut b, mut c) = (a.into(), b.into(), c.into());
        if a.is_zero() && b.is_zero() {
            return Err(Error::DegenerateLine);
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        let flip = if a.is_zero() { b.is_negative() } else { a.is_negative() };
        if flip {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(Line { a, b, c })
    }

    /// `y = slope·x + intercept`.
    pub fn from_slope_intercept(slope: &Rational, intercept: &Rational) -> Self {
        // -slope·x + y = intercept, scaled by the lcm of the denominators.
        let l = slope.denom().lcm(intercept.denom());
        let a = -(slope.numer() * (&l / slope.denom()));
        let c = intercept.numer() * (&l / intercept.denom());
        Line::new(a, l, c).expect("b is nonzero")
    }

    /// The vertical line `x = x0`.
    pub fn vertical(x0: &Rational) -> Self {
        Line::new(x0.denom().clone(), 0, x0.numer().clone()).expect("a is nonzero")
    }

    /// `a·x + b·y = c` with rational coefficients, cleared to integers.
    pub fn from_rational(a: &Rational, b: &Rational, c: &Rational) -> Result<Self> {
        let l = a.denom().lcm(b.denom()).lcm(c.denom());
        let scale = |r: &Rational| r.numer() * (&l / r.denom());
        Line::new(scale(a), scale(b), scale(c))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// `-a/b`, absent for vertical lines.
    pub fn slope(&self) -> Option<Rational> {
        if self.is_vertical() {
            None
        } else {
            Rational::new(-&self.a, self.b.clone())
        }
    }

    /// `c/b`, absent for vertical lines.
    pub fn intercept(&self) -> Option<Rational> {
        if self.is_vertical() {
            None
        } else {
            Rational::new(self.c.clone(), self.b.clone())
        }
    }

    /// The y-coordinate of the line above abscissa `x`.
    pub fn y_at(&self, x: &Rational) -> Option<Rational> {
        if self.is_vertical() {
            return None;
        }
        let b = Rational::from_integer(self.b.clone());
        let num = Rational::from_integer(self.c.clone()) - Rational::from_integer(self.a.clone()) * x;
        Some(num / b)
    }

    /// `a·x + b·y − c`; zero exactly on the line.
    pub fn eval(&self, p: &Point) -> Rational {
        Rational::from_integer(self.a.clone()) * &p.x + Rational::from_integer(self.b.clone()) * &p.y
            - Rational::from_integer(self.c.clone())
    }

    pub fn contains(&self, p: &Point) -> bool {
        // Cross-multiplied to stay in integers.
        let (xn, xd) = (p.x.numer(), p.x.denom());
        let (yn, yd) = (p.y.numer(), p.y.denom());
        &self.a * xn * yd + &self.b * yn * xd == &self.c * xd * yd
    }

    pub fn is_parallel(&self, other: &Line) -> bool {
        (&self.a * &other.b - &self.b * &other.a).is_zero()
    }

    /// Canonical direction class `(a, b)`; parallel lines share it.
    pub fn direction(&self) -> (BigInt, BigInt) {
        (self.a.clone(), self.b.clone())
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x + {}y = {}]", self.a, self.b, self.c)
    }
}

impl FromStr for Line {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(ParseError::new(0, s, "expected three integers `a b c`"));
        }
        let mut v = Vec::with_capacity(3);
        for t in &toks {
            let n: BigInt = t
                .parse()
                .map_err(|_| ParseError::new(0, t, "line coefficient is not an integer"))?;
            v.push(n);
        }
        let [a, b, c]: [BigInt; 3] = v.try_into().unwrap();
        Line::new(a, b, c).map_err(|_| ParseError::new(0, s, "a and b are both zero"))
    }
}

/// The canonical line through two distinct points.
pub fn line_through(p: &Point, q: &Point) -> Result<Line> {
    if p == q {
        return Err(Error::IdenticalPoints);
    }
    // (y_q - y_p)·x − (x_q − x_p)·y = (y_q − y_p)·x_p − (x_q − x_p)·y_p
    let dy = &q.y - &p.y;
    let dx = &q.x - &p.x;
    let c = &dy * &p.x - &dx * &p.y;
    Line::from_rational(&dy, &(-dx), &c)
}

/// The unique crossing point, absent for parallel or identical lines.
pub fn intersect(l1: &Line, l2: &Line) -> Option<Point> {
    let det = &l1.a * &l2.b - &l1.b * &l2.a;
    if det.is_zero() {
        return None;
    }
    let x = &l1.c * &l2.b - &l1.b * &l2.c;
    let y = &l1.a * &l2.c - &l1.c * &l2.a;
    Some(Point::new(
        Rational::new(x, det.clone()).unwrap(),
        Rational::new(y, det).unwrap(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn reverse(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

fn cross(p: &Point, q: &Point, r: &Point) -> Rational {
    (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x)
}

/// Sign of the determinant in floating point when it clears a conservative
/// error bound covering both coordinate rounding and arithmetic.
fn cross_sign_f64(p: &Point, q: &Point, r: &Point) -> Option<i32> {
    let [px, py, qx, qy, rx, ry] = [&p.x, &p.y, &q.x, &q.y, &r.x, &r.y].map(Rational::to_f64);
    let det = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    let mag = (qx.abs() + px.abs()) * (ry.abs() + py.abs()) + (qy.abs() + py.abs()) * (rx.abs() + px.abs());
    if !mag.is_finite() || mag < 1e-200 {
        return None;
    }
    if det.abs() > 1e-12 * mag {
        Some(if det > 0.0 { 1 } else { -1 })
    } else {
        None
    }
}

/// Sign of `det(q − p, r − p)`.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    let sign = cross_sign_f64(p, q, r).unwrap_or_else(|| cross(p, q, r).signum());
    match sign {
        1 => Orientation::Ccw,
        -1 => Orientation::Cw,
        _ => Orientation::Collinear,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerticalSide {
    Above,
    On,
    Below,
}

/// Position of `p` relative to a non-vertical line.
pub fn point_above_line(p: &Point, l: &Line) -> Result<VerticalSide> {
    let y = l.y_at(&p.x).ok_or_else(|| Error::VerticalLine(l.clone()))?;
    Ok(match p.y.cmp(&y) {
        Ordering::Greater => VerticalSide::Above,
        Ordering::Equal => VerticalSide::On,
        Ordering::Less => VerticalSide::Below,
    })
}

/// Convex hull in counter-clockwise order starting at the lexicographically
/// smallest point. Vertices only: points in the interior of hull edges are
/// dropped. Collinear input yields its two extreme points.
pub fn convex_hull(pts: &[Point]) -> Vec<Point> {
    let mut pts: Vec<&Point> = pts.iter().collect();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts.into_iter().cloned().collect();
    }

    // Andrew's monotone chain; non-left turns are popped.
    let mut hull: Vec<&Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && orientation(hull[hull.len() - 2], hull[hull.len() - 1], p) != Orientation::Ccw
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    hull.into_iter().cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HullPosition {
    Inside,
    Boundary,
    Outside,
}

/// Classifies `p` against a hull as produced by [`convex_hull`].
pub fn in_convex_hull(p: &Point, hull: &[Point]) -> Result<HullPosition> {
    match hull {
        [] => Err(Error::MalformedHull("empty hull".into())),
        [q] => Ok(if p == q {
            HullPosition::Boundary
        } else {
            HullPosition::Outside
        }),
        [a, b] => {
            if a == b {
                return Err(Error::MalformedHull("repeated vertex".into()));
            }
            let on_segment = orientation(a, b, p) == Orientation::Collinear
                && p.x >= a.x.clone().min(b.x.clone())
                && p.x <= a.x.clone().max(b.x.clone())
                && p.y >= a.y.clone().min(b.y.clone())
                && p.y <= a.y.clone().max(b.y.clone());
            Ok(if on_segment {
                HullPosition::Boundary
            } else {
                HullPosition::Outside
            })
        }
        _ => {
            let n = hull.len();
            for i in 0..n {
                let turn = orientation(&hull[i], &hull[(i + 1) % n], &hull[(i + 2) % n]);
                if turn != Orientation::Ccw {
                    return Err(Error::MalformedHull(format!(
                        "vertices {} .. {} are not a strict counter-clockwise turn",
                        i,
                        (i + 2) % n
                    )));
                }
            }
            let mut on_edge = false;
            for i in 0..n {
                match orientation(&hull[i], &hull[(i + 1) % n], p) {
                    Orientation::Cw => return Ok(HullPosition::Outside),
                    Orientation::Collinear => on_edge = true,
                    Orientation::Ccw => {}
                }
            }
            Ok(if on_edge {
                HullPosition::Boundary
            } else {
                HullPosition::Inside
            })
        }
    }
}

/// An invertible affine map `p ↦ M·p + v` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    m: [[Rational; 2]; 2],
    v: [Rational; 2],
}

impl AffineMap {
    pub fn new(m: [[Rational; 2]; 2], v: [Rational; 2]) -> Result<Self> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return Err(Error::InvalidParams("affine map is singular".into()));
        }
        Ok(AffineMap { m, v })
    }

    /// `(x, y) ↦ (x + dx, y + dy)`.
    pub fn translation(dx: Rational, dy: Rational) -> Self {
        AffineMap {
            m: [[Rational::one(), Rational::zero()], [Rational::zero(), Rational::one()]],
            v: [dx, dy],
        }
    }

    /// `(x, y) ↦ (x, y + s·x)`; preserves verticality and y-intercepts.
    pub fn vertical_shear(s: Rational) -> Self {
        AffineMap {
            m: [[Rational::one(), Rational::zero()], [s, Rational::one()]],
            v: [Rational::zero(), Rational::zero()],
        }
    }

    /// `(x, y) ↦ (x + s·y, y)`.
    pub fn horizontal_shear(s: Rational) -> Self {
        AffineMap {
            m: [[Rational::one(), s], [Rational::zero(), Rational::one()]],
            v: [Rational::zero(), Rational::zero()],
        }
    }

    pub fn det(&self) -> Rational {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let m = &self.m;
        Point::new(
            &m[0][0] * &p.x + &m[0][1] * &p.y + self.v[0].clone(),
            &m[1][0] * &p.x + &m[1][1] * &p.y + self.v[1].clone(),
        )
    }

    /// Image of a line: `{ n·p = c }` maps to `{ (M⁻ᵀn)·p' = c + (M⁻ᵀn)·v }`.
    pub fn apply_line(&self, l: &Line) -> Line {
        let det = self.det();
        let m = &self.m;
        let (a, b) = (Rational::from_integer(l.a.clone()), Rational::from_integer(l.b.clone()));
        // M⁻ᵀ = (1/det)·[[m11, −m10], [−m01, m00]]
        let na = (&m[1][1] * &a - &m[1][0] * &b) / &det;
        let nb = (&m[0][0] * &b - &m[0][1] * &a) / &det;
        let nc = Rational::from_integer(l.c.clone()) + &na * &self.v[0] + &nb * &self.v[1];
        Line::from_rational(&na, &nb, &nc).expect("invertible map keeps lines nondegenerate")
    }

    pub fn inverse(&self) -> AffineMap {
        let det = self.det();
        let m = &self.m;
        let inv = [
            [&m[1][1] / &det, -(&m[0][1] / &det)],
            [-(&m[1][0] / &det), &m[0][0] / &det],
        ];
        let v = [
            -(&inv[0][0] * &self.v[0] + &inv[0][1] * &self.v[1]),
            -(&inv[1][0] * &self.v[0] + &inv[1][1] * &self.v[1]),
        ];
        AffineMap { m: inv, v }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &AffineMap) -> AffineMap {
        let (a, b) = (&self.m, &first.m);
        let m = [
            [
                &a[0][0] * &b[0][0] + &a[0][1] * &b[1][0],
                &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1],
            ],
            [
                &a[1][0] * &b[0][0] + &a[1][1] * &b[1][0],
                &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1],
            ],
        ];
        let v = [
            &a[0][0] * &first.v[0] + &a[0][1] * &first.v[1] + self.v[0].clone(),
            &a[1][0] * &first.v[0] + &a[1][1] * &first.v[1] + self.v[1].clone(),
        ];
        AffineMap { m, v }
    }
}
