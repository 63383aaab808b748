use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, Line, Point};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeSign {
    Positive,
    Negative,
}

/// A line `y = s·x + c` with `s` of the requested sign, every point of
/// `above` strictly above it and every point of `below` strictly below.
///
/// For `p` above and `q` below the requirement is `p.y − q.y > s·(p.x − q.x)`,
/// so the feasible slopes form an open interval determined by hull vertices.
pub fn separator_line(above: &[Point], below: &[Point], sign: SlopeSign) -> Result<Line> {
    let ha = convex_hull(above);
    let hb = convex_hull(below);
    // (bound, witness pair)
    let mut lo: Option<(Rational, (Point, Point))> = None;
    let mut hi: Option<(Rational, (Point, Point))> = None;
    for p in &ha {
        for q in &hb {
            let dx = &p.x - &q.x;
            let dy = &p.y - &q.y;
            let pair = || (p.clone(), q.clone());
            match dx.signum() {
                0 => {
                    if dy.signum() <= 0 {
                        return Err(Error::NotSeparable { witness: vec![pair()] });
                    }
                }
                1 => {
                    let b = &dy / &dx;
                    if hi.as_ref().is_none_or(|h| b < h.0) {
                        hi = Some((b, pair()));
                    }
                }
                _ => {
                    let b = &dy / &dx;
                    if lo.as_ref().is_none_or(|l| b > l.0) {
                        lo = Some((b, pair()));
                    }
                }
            }
        }
    }
    let zero = Rational::zero();
    let (lo_v, hi_v) = match sign {
        SlopeSign::Positive => (Some(lo.as_ref().map_or(zero.clone(), |l| l.0.clone().max(zero.clone()))), hi.as_ref().map(|h| h.0.clone())),
        SlopeSign::Negative => (lo.as_ref().map(|l| l.0.clone()), Some(hi.as_ref().map_or(zero.clone(), |h| h.0.clone().min(zero.clone())))),
    };
    let s = match (&lo_v, &hi_v) {
        (Some(l), Some(h)) if l >= h => {
            let witness = [lo.map(|l| l.1), hi.map(|h| h.1)].into_iter().flatten().collect();
            return Err(Error::NotSeparable { witness });
        }
        (Some(l), Some(h)) => l.midpoint(h),
        (Some(l), None) => l + &Rational::one(),
        (None, Some(h)) => h - &Rational::one(),
        (None, None) => unreachable!("one bound is always the sign constraint"),
    };
    let offset = |p: &Point| &p.y - &(&s * &p.x);
    let min_above = ha.iter().map(offset).min();
    let max_below = hb.iter().map(offset).max();
    let c = match (min_above, max_below) {
        (Some(a), Some(b)) => a.midpoint(&b),
        (Some(a), None) => a - Rational::one(),
        (None, Some(b)) => b + Rational::one(),
        (None, None) => zero,
    };
    Ok(Line::from_slope_intercept(&s, &c))
}

/// Whether `l` strictly separates the two sets with `above` on top.
pub fn separates(l: &Line, above: &[Point], below: &[Point]) -> bool {
    let val = |p: &Point| {
        let y = l.y_at(&p.x).expect("separator is not vertical");
        (&p.y - &y).signum()
    };
    above.iter().all(|p| val(p) > 0) && below.iter().all(|p| val(p) < 0)
}
