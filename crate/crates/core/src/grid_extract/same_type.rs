use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{intersect, point_above_line, Line, Point, VerticalSide};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    /// Every `b1 ∩ b2` lies strictly above every `r`.
    AllAbove,
    /// No `b1 ∩ b2` lies strictly above any `r`; parallel pairs count here.
    AllBelow,
}

/// Parts are indices into the input slices, ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SameTypeResult {
    pub r: Vec<usize>,
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
    pub polarity: Polarity,
    pub achieved_fraction: f64,
}

/// Part sizes up to this are solved exactly.
pub const EXHAUSTIVE_LIMIT: usize = 6;

struct Table {
    nr: usize,
    n1: usize,
    n2: usize,
    /// `above[r·n1·n2 + i·n2 + j]`
    above: Vec<bool>,
}

impl Table {
    fn build(r: &[Line], b1: &[Line], b2: &[Line]) -> Result<Table> {
        for l in r.iter().chain(b1).chain(b2) {
            if l.is_vertical() {
                return Err(Error::VerticalLine(l.clone()));
            }
        }
        let pts: Vec<Option<(Point, f64, f64)>> = b1
            .iter()
            .flat_map(|x| b2.iter().map(move |y| intersect(x, y)))
            .map(|p| p.map(|p| {
                let (fx, fy) = (p.x.to_f64(), p.y.to_f64());
                (p, fx, fy)
            }))
            .collect();
        let mut above = Vec::with_capacity(r.len() * pts.len());
        for line in r {
            let (s, c) = (line.slope().unwrap(), line.intercept().unwrap());
            let (fs, fc) = (s.to_f64(), c.to_f64());
            for p in &pts {
                above.push(match p {
                    Some((p, fx, fy)) => {
                        let d = fy - (fs * fx + fc);
                        let err = 1e-9 * (fy.abs() + (fs * fx).abs() + fc.abs() + 1.0);
                        if d.is_finite() && d.abs() > err {
                            d > 0.0
                        } else {
                            point_above_line(p, line)? == VerticalSide::Above
                        }
                    }
                    None => false,
                });
            }
        }
        Ok(Table {
            nr: r.len(),
            n1: b1.len(),
            n2: b2.len(),
            above,
        })
    }

    fn edge(&self, r: usize, i: usize, j: usize) -> bool {
        self.above[(r * self.n1 + i) * self.n2 + j]
    }

    fn consistent(&self, pol: Polarity, r: usize, i: usize, j: usize) -> bool {
        self.edge(r, i, j) == (pol == Polarity::AllAbove)
    }
}

/// `min(a/|R|, b/|B1|, c/|B2|)` as an exact fraction `(num, den)`.
fn min_fraction(t: &Table, sizes: [usize; 3]) -> (u64, u64) {
    let totals = [t.nr, t.n1, t.n2];
    (0..3)
        .map(|k| (sizes[k] as u64, totals[k] as u64))
        .min_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)))
        .unwrap()
}

fn better(t: &Table, a: [usize; 3], b: [usize; 3]) -> bool {
    let (fa, fb) = (min_fraction(t, a), min_fraction(t, b));
    match (fa.0 * fb.1).cmp(&(fb.0 * fa.1)) {
        std::cmp::Ordering::Equal => a.iter().sum::<usize>() > b.iter().sum::<usize>(),
        o => o.is_gt(),
    }
}

type Parts = (Vec<usize>, Vec<usize>, Vec<usize>);

fn exhaustive(t: &Table) -> (Parts, Polarity) {
    let mut best: Option<(Parts, Polarity)> = None;
    for pol in [Polarity::AllAbove, Polarity::AllBelow] {
        for m1 in 1u32..1 << t.n1 {
            for m2 in 1u32..1 << t.n2 {
                let s1: Vec<usize> = (0..t.n1).filter(|i| m1 >> i & 1 == 1).collect();
                let s2: Vec<usize> = (0..t.n2).filter(|j| m2 >> j & 1 == 1).collect();
                let r: Vec<usize> = (0..t.nr)
                    .filter(|&r| s1.iter().all(|&i| s2.iter().all(|&j| t.consistent(pol, r, i, j))))
                    .collect();
                if r.is_empty() {
                    continue;
                }
                let sizes = [r.len(), s1.len(), s2.len()];
                let improves = match &best {
                    None => true,
                    Some(((br, b1, b2), _)) => better(t, sizes, [br.len(), b1.len(), b2.len()]),
                };
                if improves {
                    best = Some(((r, s1, s2), pol));
                }
            }
        }
    }
    best.expect("a single triple is homogeneous for one polarity")
}

/// Greedy removal of the element whose remaining triples violate `pol` most
/// often, then re-admission of removed elements that fit.
fn peel(t: &Table, pol: Polarity) -> Option<Parts> {
    let sizes = [t.nr, t.n1, t.n2];
    let mut alive: [Vec<bool>; 3] = [vec![true; t.nr], vec![true; t.n1], vec![true; t.n2]];
    let mut count = sizes;
    let mut viol: [Vec<u64>; 3] = [vec![0; t.nr], vec![0; t.n1], vec![0; t.n2]];
    let mut total = 0u64;
    for r in 0..t.nr {
        for i in 0..t.n1 {
            for j in 0..t.n2 {
                if !t.consistent(pol, r, i, j) {
                    viol[0][r] += 1;
                    viol[1][i] += 1;
                    viol[2][j] += 1;
                    total += 1;
                }
            }
        }
    }
    let mut removed = Vec::new();
    while total > 0 {
        // Score v / (product of the other two live part sizes).
        let mut pick: Option<(usize, usize, u64, u64)> = None;
        for part in 0..3 {
            if count[part] <= 1 {
                continue;
            }
            let den = (count[(part + 1) % 3] * count[(part + 2) % 3]) as u64;
            for e in 0..sizes[part] {
                if !alive[part][e] || viol[part][e] == 0 {
                    continue;
                }
                let v = viol[part][e];
                if pick.is_none_or(|(_, _, pv, pd)| v * pd > pv * den) {
                    pick = Some((part, e, v, den));
                }
            }
        }
        let (part, e, _, _) = pick?;
        alive[part][e] = false;
        count[part] -= 1;
        removed.push((part, e));
        for_each_triple_with(&alive, part, e, |r, i, j| {
            if !t.consistent(pol, r, i, j) {
                viol[0][r] -= 1;
                viol[1][i] -= 1;
                viol[2][j] -= 1;
                total -= 1;
            }
        });
    }
    for &(part, e) in removed.iter().rev() {
        let mut fits = true;
        for_each_triple_with(&alive, part, e, |r, i, j| fits &= t.consistent(pol, r, i, j));
        if fits {
            alive[part][e] = true;
        }
    }
    let live = |v: &Vec<bool>| v.iter().enumerate().filter(|(_, a)| **a).map(|(i, _)| i).collect::<Vec<_>>();
    Some((live(&alive[0]), live(&alive[1]), live(&alive[2])))
}

/// Calls `f` on every live triple that uses element `e` of `part`, where
/// `e` itself need not be live.
fn for_each_triple_with(alive: &[Vec<bool>; 3], part: usize, e: usize, mut f: impl FnMut(usize, usize, usize)) {
    let live = |p: usize| -> Vec<usize> {
        if p == part {
            vec![e]
        } else {
            (0..alive[p].len()).filter(|&x| alive[p][x]).collect()
        }
    };
    let (rs, is, js) = (live(0), live(1), live(2));
    for &r in &rs {
        for &i in &is {
            for &j in &js {
                f(r, i, j);
            }
        }
    }
}

fn verify(t: &Table, parts: &Parts, pol: Polarity) -> bool {
    parts
        .0
        .iter()
        .all(|&r| parts.1.iter().all(|&i| parts.2.iter().all(|&j| t.consistent(pol, r, i, j))))
}

/// Homogeneous sub-triple of `(R, B1, B2)` for the relation "b1 ∩ b2 lies
/// strictly above r". Exact for part sizes up to [`EXHAUSTIVE_LIMIT`],
/// greedy above that.
pub fn same_type_triple(r: &[Line], b1: &[Line], b2: &[Line]) -> Result<SameTypeResult> {
    if r.is_empty() || b1.is_empty() || b2.is_empty() {
        return Err(Error::InvalidInput("same-type selection needs three nonempty parts".into()));
    }
    let t = Table::build(r, b1, b2)?;
    let (parts, polarity) = if [t.nr, t.n1, t.n2].iter().all(|&n| n <= EXHAUSTIVE_LIMIT) {
        exhaustive(&t)
    } else {
        let mut best: Option<(Parts, Polarity)> = None;
        for pol in [Polarity::AllAbove, Polarity::AllBelow] {
            if let Some(p) = peel(&t, pol) {
                let improves = match &best {
                    None => true,
                    Some((b, _)) => better(&t, [p.0.len(), p.1.len(), p.2.len()], [b.0.len(), b.1.len(), b.2.len()]),
                };
                if improves {
                    best = Some((p, pol));
                }
            }
        }
        best.unwrap_or_else(|| {
            let pol = if t.edge(0, 0, 0) { Polarity::AllAbove } else { Polarity::AllBelow };
            ((vec![0], vec![0], vec![0]), pol)
        })
    };
    assert!(verify(&t, &parts, polarity), "same-type parts are not homogeneous");
    let (num, den) = min_fraction(&t, [parts.0.len(), parts.1.len(), parts.2.len()]);
    Ok(SameTypeResult {
        r: parts.0,
        b1: parts.1,
        b2: parts.2,
        polarity,
        achieved_fraction: num as f64 / den as f64,
    })
}
