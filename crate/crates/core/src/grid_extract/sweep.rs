use crate::error::{Error, Result};
use crate::geom::Line;
use crate::rational::Rational;

/// Lines kept by the y-axis sweep, as indices into the input slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSplit {
    pub red: Vec<usize>,
    pub blue: Vec<usize>,
    pub y1: Rational,
    /// Whether the kept reds cross the y-axis below `y1` (otherwise blues do).
    pub red_below: bool,
}

fn intercept(l: &Line) -> Result<Rational> {
    l.intercept().ok_or_else(|| Error::VerticalLine(l.clone()))
}

/// Sweeps up the y-axis until half of one color has been passed, then
/// raises `y1` as far as the next intercept of the other color allows.
/// Lines of the first color above `y1` and of the other color below are
/// dropped.
pub fn split_by_sweep(red: &[Line], blue: &[Line]) -> Result<SweepSplit> {
    if red.is_empty() || blue.is_empty() {
        return Err(Error::InvalidInput("both colors need at least one line".into()));
    }
    // (intercept, is_red, index)
    let mut events = Vec::with_capacity(red.len() + blue.len());
    for (i, l) in red.iter().enumerate() {
        events.push((intercept(l)?, true, i));
    }
    for (i, l) in blue.iter().enumerate() {
        events.push((intercept(l)?, false, i));
    }
    events.sort();
    for w in events.windows(2) {
        if w[0].0 == w[1].0 {
            let pick = |e: &(Rational, bool, usize)| if e.1 { red[e.2].clone() } else { blue[e.2].clone() };
            return Err(Error::DuplicateIntercept(Box::new([pick(&w[0]), pick(&w[1])])));
        }
    }
    let need_red = red.len().div_ceil(2);
    let need_blue = blue.len().div_ceil(2);
    let (mut reds, mut blues) = (0, 0);
    let mut stop = 0;
    let mut red_below = true;
    for (pos, e) in events.iter().enumerate() {
        if e.1 {
            reds += 1;
        } else {
            blues += 1;
        }
        if reds >= need_red || blues >= need_blue {
            stop = pos;
            red_below = e.1;
            break;
        }
    }
    // Extend through the run of first-color intercepts.
    while stop + 1 < events.len() && events[stop + 1].1 == red_below {
        stop += 1;
    }
    let y1 = match events.get(stop + 1) {
        Some(next) => events[stop].0.midpoint(&next.0),
        None => &events[stop].0 + &Rational::one(),
    };
    let mut kept_red = Vec::new();
    let mut kept_blue = Vec::new();
    for (pos, (_, is_red, i)) in events.iter().enumerate() {
        let below = pos <= stop;
        if *is_red && below == red_below {
            kept_red.push(*i);
        } else if !*is_red && below != red_below {
            kept_blue.push(*i);
        }
    }
    kept_red.sort_unstable();
    kept_blue.sort_unstable();
    Ok(SweepSplit {
        red: kept_red,
        blue: kept_blue,
        y1,
        red_below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn flat(intercepts: &[i64], slope: i64) -> Vec<Line> {
        intercepts
            .iter()
            .map(|&c| Line::from_slope_intercept(&Rational::from(slope), &Rational::from(c)))
            .collect()
    }

    #[test]
    fn separated_intercepts_keep_everything() {
        let s = split_by_sweep(&flat(&[1, 2], 1), &flat(&[3, 4], -1)).unwrap();
        assert_eq!(s.red, vec![0, 1]);
        assert_eq!(s.blue, vec![0, 1]);
        assert_eq!(s.y1, Rational::new(5, 2).unwrap());
        assert!(s.red_below);
    }

    #[test]
    fn interleaved_intercepts() {
        let s = split_by_sweep(&flat(&[1, 3], 1), &flat(&[2, 4], -1)).unwrap();
        assert_eq!(s.red, vec![0]);
        assert_eq!(s.blue, vec![0, 1]);
        assert_eq!(s.y1, Rational::new(3, 2).unwrap());
        let s = split_by_sweep(&flat(&[2, 4], 1), &flat(&[1, 3], -1)).unwrap();
        assert!(!s.red_below);
        assert_eq!(s.blue, vec![0]);
        assert_eq!(s.red, vec![0, 1]);
    }

    #[test]
    fn duplicate_intercepts_are_refused() {
        assert!(matches!(
            split_by_sweep(&flat(&[1, 2], 1), &flat(&[2], -1)),
            Err(Error::DuplicateIntercept(_))
        ));
    }

    proptest! {
        #[test]
        fn kept_halves(perm in Just((0..20i64).collect::<Vec<_>>()).prop_shuffle()) {
            let red = flat(&perm[..10], 1);
            let blue = flat(&perm[10..], -1);
            let s = split_by_sweep(&red, &blue).unwrap();
            prop_assert!(s.red.len() >= 5 && s.blue.len() >= 5);
            for &i in &s.red {
                let below = red[i].intercept().unwrap() < s.y1;
                prop_assert_eq!(below, s.red_below);
            }
            for &i in &s.blue {
                let below = blue[i].intercept().unwrap() < s.y1;
                prop_assert_eq!(below, !s.red_below);
            }
            // Maximal: no dropped line is on its color's side of y1.
            for i in 0..10 {
                if !s.red.contains(&i) {
                    prop_assert_ne!(red[i].intercept().unwrap() < s.y1, s.red_below);
                }
                if !s.blue.contains(&i) {
                    prop_assert_eq!(blue[i].intercept().unwrap() < s.y1, s.red_below);
                }
            }
            // Brute force over cut positions: our split reaches the guarantee.
            let best = (0..=20).map(|cut| {
                let r = perm[..10].iter().filter(|&&c| c < cut).count();
                let b = perm[10..].iter().filter(|&&c| c >= cut).count();
                r.min(b).max(perm[..10].iter().filter(|&&c| c >= cut).count().min(perm[10..].iter().filter(|&&c| c < cut).count()))
            }).max().unwrap();
            prop_assert!(best >= 5);
        }
    }
}
