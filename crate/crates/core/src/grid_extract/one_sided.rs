use num_bigint::Sign;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{AffineMap, Line};
use crate::rational::Rational;

/// Side of a reference line `a·x + b·y = c`: `Left` is `a·x + b·y < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// Whether this side is the upper half-plane of a non-vertical `ref`.
    pub fn is_above(self, reference: &Line) -> bool {
        (self == Side::Right) == (reference.b().sign() == Sign::Plus)
    }
}

/// The map sending `reference` to the y-axis, `Right` to `x > 0`, with
/// positive determinant.
pub fn frame_of(reference: &Line) -> AffineMap {
    let a = Rational::from_integer(reference.a().clone());
    let b = Rational::from_integer(reference.b().clone());
    let c = Rational::from_integer(reference.c().clone());
    AffineMap::new([[a.clone(), b.clone()], [-b, a]], [-c, Rational::zero()]).expect("a² + b² > 0")
}

/// Longest subsequence, by index, whose keys are monotone under `ok(prev, next)`.
fn longest_chain(keys: &[Rational], ok: impl Fn(&Rational, &Rational) -> bool) -> Vec<usize> {
    let n = keys.len();
    let mut len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for j in 0..n {
        for i in 0..j {
            if ok(&keys[i], &keys[j]) && len[i] + 1 > len[j] {
                len[j] = len[i] + 1;
                prev[j] = i;
            }
        }
    }
    let Some(mut end) = (0..n).max_by_key(|&j| (len[j], std::cmp::Reverse(j))) else {
        return Vec::new();
    };
    let mut out = vec![end];
    while prev[end] != usize::MAX {
        end = prev[end];
        out.push(end);
    }
    out.reverse();
    out
}

/// A largest subset of `lines` whose pairwise crossings all lie strictly on
/// one side of `reference`, by a longest monotone slope run in the order the
/// lines cross `reference`. Returns indices in that order. Parallel pairs
/// never cross and may appear in either run.
pub fn one_sided_subset(lines: &[Line], reference: &Line) -> Result<(Vec<usize>, Side)> {
    if lines.is_empty() {
        return Err(Error::InvalidInput("one-sided subset of an empty line set".into()));
    }
    let frame = frame_of(reference);
    let mut keyed = Vec::with_capacity(lines.len());
    for (i, l) in lines.iter().enumerate() {
        let img = frame.apply_line(l);
        let (Some(slope), Some(icpt)) = (img.slope(), img.intercept()) else {
            return Err(Error::InvalidInput(format!("line {l} is parallel to the reference line {reference}")));
        };
        keyed.push((icpt, slope, i));
    }
    keyed.sort();
    for w in keyed.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateIntercept(Box::new([lines[w[0].2].clone(), lines[w[1].2].clone()])));
        }
    }
    let slopes: Vec<Rational> = keyed.iter().map(|k| k.1.clone()).collect();
    let up = longest_chain(&slopes, |a, b| a <= b);
    let down = longest_chain(&slopes, |a, b| a >= b);
    let (run, side) = if up.len() >= down.len() { (up, Side::Left) } else { (down, Side::Right) };
    Ok((run.into_iter().map(|k| keyed[k].2).collect(), side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::intersect;
    use proptest::prelude::*;

    fn si(s: i64, c: i64) -> Line {
        Line::from_slope_intercept(&Rational::from(s), &Rational::from(c))
    }

    fn side_of(p: &crate::geom::Point, reference: &Line) -> Option<Side> {
        match reference.eval(p).signum() {
            -1 => Some(Side::Left),
            1 => Some(Side::Right),
            _ => None,
        }
    }

    fn all_on_side(lines: &[Line], idx: &[usize], reference: &Line, side: Side) -> bool {
        idx.iter().enumerate().all(|(k, &i)| {
            idx[k + 1..]
                .iter()
                .all(|&j| intersect(&lines[i], &lines[j]).is_none_or(|p| side_of(&p, reference) == Some(side)))
        })
    }

    #[test]
    fn increasing_slopes_cross_left() {
        let y_axis = Line::new(1, 0, 0).unwrap();
        let lines: Vec<Line> = (1..=4).map(|k| si(k, k)).collect();
        let (idx, side) = one_sided_subset(&lines, &y_axis).unwrap();
        assert_eq!(idx, vec![0, 1, 2, 3]);
        assert_eq!(side, Side::Left);
        assert!(all_on_side(&lines, &idx, &y_axis, side));
    }

    #[test]
    fn mixed_slopes() {
        let y_axis = Line::new(1, 0, 0).unwrap();
        let lines: Vec<Line> = [3, 1, 2, 5, 4].iter().enumerate().map(|(i, &s)| si(s, i as i64)).collect();
        let (idx, side) = one_sided_subset(&lines, &y_axis).unwrap();
        assert_eq!(idx.len(), 3);
        assert_eq!(side, Side::Left);
        assert!(all_on_side(&lines, &idx, &y_axis, side));
    }

    #[test]
    fn single_line_and_errors() {
        let y_axis = Line::new(1, 0, 0).unwrap();
        assert_eq!(one_sided_subset(&[si(1, 0)], &y_axis).unwrap().0, vec![0]);
        assert!(matches!(
            one_sided_subset(&[si(1, 0), si(2, 0)], &y_axis),
            Err(Error::DuplicateIntercept(_))
        ));
        assert!(one_sided_subset(&[Line::new(1, 0, 3).unwrap()], &y_axis).is_err());
        assert!(one_sided_subset(&[], &y_axis).is_err());
    }

    #[test]
    fn above_side_matches_line_sign() {
        let neg = Line::from_slope_intercept(&Rational::from(-1), &Rational::zero());
        let pos = Line::from_slope_intercept(&Rational::from(1), &Rational::zero());
        let up = crate::geom::Point::from_ints(0, 5);
        for reference in [neg, pos] {
            let s = side_of(&up, &reference).unwrap();
            assert!(s.is_above(&reference));
            assert!(!s.opposite().is_above(&reference));
        }
    }

    proptest! {
        #[test]
        fn erdos_szekeres_guarantee(
            n in 2usize..5,
            raw in prop::collection::vec((-40i64..40, -400i64..400), 25),
            refs in (-3i64..=3, 1i64..=3, -5i64..5),
        ) {
            let reference = Line::new(refs.0, refs.1, refs.2).unwrap();
            let mut lines: Vec<Line> = Vec::new();
            let frame = frame_of(&reference);
            for (s, c) in raw {
                let l = Line::from_slope_intercept(&Rational::new(s, 7).unwrap(), &Rational::new(c, 3).unwrap());
                let img = frame.apply_line(&l);
                if img.is_vertical() || lines.contains(&l) {
                    continue;
                }
                if lines.iter().any(|m| frame.apply_line(m).intercept() == img.intercept()) {
                    continue;
                }
                lines.push(l);
                if lines.len() == n * n {
                    break;
                }
            }
            prop_assume!(lines.len() == n * n);
            let (idx, side) = one_sided_subset(&lines, &reference).unwrap();
            prop_assert!(idx.len() >= n);
            prop_assert!(all_on_side(&lines, &idx, &reference, side));
        }
    }
}
