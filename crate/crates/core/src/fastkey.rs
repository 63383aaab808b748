//! Machine-word fast paths for incidence evaluation. Every routine here falls
//! back to big-integer arithmetic on overflow, so results stay exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::geom::{Line, Point};

/// A reduced rational value usable as a hash key. Values whose reduced
/// numerator and denominator fit in `i128` are always `Small`, so equal
/// values always produce equal keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Key {
    Small(i128, i128),
    Big(BigRational),
}

impl Key {
    fn from_big(num: BigInt, den: BigInt) -> Key {
        let r = BigRational::new(num, den);
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) => Key::Small(n, d),
            _ => Key::Big(r),
        }
    }

    fn from_small(num: i128, den: i128) -> Key {
        debug_assert!(den > 0);
        let g = num.gcd(&den);
        if g > 1 {
            Key::Small(num / g, den / g)
        } else {
            Key::Small(num, den)
        }
    }

    pub(crate) fn integer(c: &BigInt) -> Key {
        match c.to_i128() {
            Some(n) => Key::Small(n, 1),
            None => Key::Big(BigRational::from_integer(c.clone())),
        }
    }
}

/// A point whose coordinates all fit in `i64`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SmallPoint {
    xn: i128,
    xd: i128,
    yn: i128,
    yd: i128,
    fx: f64,
    fy: f64,
}

impl SmallPoint {
    pub(crate) fn of(p: &Point) -> Option<SmallPoint> {
        let (xn, xd) = (p.x.numer().to_i64()?, p.x.denom().to_i64()?);
        let (yn, yd) = (p.y.numer().to_i64()?, p.y.denom().to_i64()?);
        Some(SmallPoint {
            xn: xn as i128,
            xd: xd as i128,
            yn: yn as i128,
            yd: yd as i128,
            fx: xn as f64 / xd as f64,
            fy: yn as f64 / yd as f64,
        })
    }
}

/// Integer coefficients of a line when they fit in `i64`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SmallLine {
    a: i128,
    b: i128,
    c: i128,
}

impl SmallLine {
    pub(crate) fn of(l: &Line) -> Option<SmallLine> {
        Some(SmallLine {
            a: l.a().to_i64()? as i128,
            b: l.b().to_i64()? as i128,
            c: l.c().to_i64()? as i128,
        })
    }
}

/// `a·x + b·y` as a key, for grouping points by a line direction.
pub(crate) fn functional_key(a: &BigInt, b: &BigInt, p: &Point, sp: Option<SmallPoint>) -> Key {
    if let (Some(sp), Some(a), Some(b)) = (sp, a.to_i64(), b.to_i64()) {
        let (a, b) = (a as i128, b as i128);
        if sp.xd == 1 && sp.yd == 1 {
            if let Some(v) = a.checked_mul(sp.xn).and_then(|u| b.checked_mul(sp.yn).and_then(|w| u.checked_add(w))) {
                return Key::Small(v, 1);
            }
        } else {
            let num = a
                .checked_mul(sp.xn)
                .and_then(|u| u.checked_mul(sp.yd))
                .and_then(|u| b.checked_mul(sp.yn).and_then(|w| w.checked_mul(sp.xd)).and_then(|w| u.checked_add(w)));
            if let (Some(num), Some(den)) = (num, sp.xd.checked_mul(sp.yd)) {
                return Key::from_small(num, den);
            }
        }
    }
    let (xn, xd) = (p.x.numer(), p.x.denom());
    let (yn, yd) = (p.y.numer(), p.y.denom());
    Key::from_big(a * xn * yd + b * yn * xd, xd * yd)
}

/// Exact incidence test with a machine-word fast path.
#[inline]
pub(crate) fn incident(l: &Line, sl: Option<SmallLine>, p: &Point, sp: Option<SmallPoint>) -> bool {
    if let (Some(l), Some(p)) = (sl, sp) {
        // Inputs fit in i64, so two products and their sum fit in i128.
        if p.xd == 1 && p.yd == 1 {
            return l.a * p.xn + l.b * p.yn == l.c;
        }
        // Each float term carries a relative error of a few ulps, far below
        // the 1e-12 margin, so a larger residual proves non-incidence.
        let (ax, by, c) = (l.a as f64 * p.fx, l.b as f64 * p.fy, l.c as f64);
        if (ax + by - c).abs() > 1e-12 * (ax.abs() + by.abs() + c.abs()) {
            return false;
        }
        let lhs = l
            .a
            .checked_mul(p.xn)
            .and_then(|u| u.checked_mul(p.yd))
            .and_then(|u| l.b.checked_mul(p.yn).and_then(|w| w.checked_mul(p.xd)).and_then(|w| u.checked_add(w)));
        let rhs = l.c.checked_mul(p.xd).and_then(|u| u.checked_mul(p.yd));
        if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
            return lhs == rhs;
        }
    }
    l.contains(p)
}
