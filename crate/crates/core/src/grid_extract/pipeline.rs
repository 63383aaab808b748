use serde::Serialize;

use super::input::RedBlueInput;
use super::one_sided::one_sided_subset;
use super::same_type::{same_type_triple, Polarity};
use super::separator::{separator_line, SlopeSign};
use super::sweep::split_by_sweep;
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::geom::{intersect, AffineMap, Line, Point};
use crate::grid_detect::{is_natural, GridWitness, NaturalGridWitness};
use crate::rational::Rational;

pub const DEFAULT_CAPACITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageSizes {
    pub stage: &'static str,
    pub sizes: Vec<usize>,
}

/// Stage-by-stage account of one extraction. Lines are in input
/// coordinates; `y1` is on the y-axis of the translated frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionReport {
    pub t: usize,
    pub stages: Vec<StageSizes>,
    pub translation_dx: Option<String>,
    pub y1: Option<String>,
    pub lower_color: Option<&'static str>,
    pub shear: Option<String>,
    pub polarity: Option<Polarity>,
    pub achieved_fraction: Option<f64>,
    pub separator1: Option<String>,
    pub separator2: Option<String>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub witness: Option<NaturalGridWitness>,
    pub report: ExtractionReport,
}

/// Lines of one role, as input indices plus their working-frame images.
#[derive(Clone)]
struct Fam {
    orig: Vec<usize>,
    work: Vec<Line>,
}

impl Fam {
    fn pick(&self, idx: &[usize]) -> Fam {
        Fam {
            orig: idx.iter().map(|&i| self.orig[i]).collect(),
            work: idx.iter().map(|&i| self.work[i].clone()).collect(),
        }
    }

    fn map(&mut self, f: &AffineMap) {
        for l in &mut self.work {
            *l = f.apply_line(l);
        }
    }

    fn len(&self) -> usize {
        self.orig.len()
    }
}

fn crossings(a: &Fam, b: &Fam) -> Vec<Point> {
    a.work
        .iter()
        .flat_map(|x| b.work.iter().map(move |y| intersect(x, y).expect("red/blue pairs cross")))
        .collect()
}

struct Run {
    report: ExtractionReport,
}

impl Run {
    fn stage(&mut self, stage: &'static str, sizes: &[usize]) {
        self.report.stages.push(StageSizes {
            stage,
            sizes: sizes.to_vec(),
        });
    }

    fn fail(mut self, why: impl Into<String>) -> Result<Extraction> {
        self.report.failure = Some(why.into());
        Ok(Extraction {
            witness: None,
            report: self.report,
        })
    }
}

/// Runs the natural-grid extraction on `input`: translate so every crossing
/// has `x > 0`, split by a y-axis sweep, halve the upper color into `B1` and
/// `B2`, shear slopes apart, take a same-type triple, then cut twice with a
/// separator line and a one-sided subset. The emitted witness uses input
/// lines and has been checked for naturality.
pub fn extract_natural_grid(input: &RedBlueInput, t: usize) -> Result<Extraction> {
    if t < 2 {
        return Err(Error::InvalidParams(format!("grid size t must be at least 2, got {t}")));
    }
    let mut run = Run {
        report: ExtractionReport {
            t,
            stages: Vec::new(),
            translation_dx: None,
            y1: None,
            lower_color: None,
            shear: None,
            polarity: None,
            achieved_fraction: None,
            separator1: None,
            separator2: None,
            failure: None,
        },
    };
    let (red, blue) = (input.red(), input.blue());
    run.stage("input", &[red.len(), blue.len()]);
    if red.len() < t || blue.len() < t {
        return run.fail("fewer than t lines of a color");
    }

    // Any shift that puts every crossing right of the y-axis works, so the
    // leftmost crossing is located in floating point and padded by 1.
    let sc: Vec<(f64, f64)> = red
        .iter()
        .chain(blue)
        .map(|l| (l.slope().unwrap().to_f64(), l.intercept().unwrap().to_f64()))
        .collect();
    let mut min_x = f64::INFINITY;
    for i in 0..sc.len() {
        for j in i + 1..sc.len() {
            if sc[i].0 != sc[j].0 {
                min_x = min_x.min((sc[j].1 - sc[i].1) / (sc[i].0 - sc[j].0));
            }
        }
    }
    let dx = if min_x.is_finite() {
        Rational::from(2 - min_x.floor() as i64)
    } else {
        Rational::zero()
    };
    run.report.translation_dx = Some(dx.to_string());
    let mut to_work = AffineMap::translation(dx, Rational::zero());
    let red_w: Vec<Line> = red.iter().map(|l| to_work.apply_line(l)).collect();
    let blue_w: Vec<Line> = blue.iter().map(|l| to_work.apply_line(l)).collect();

    let split = split_by_sweep(&red_w, &blue_w)?;
    run.stage("sweep", &[split.red.len(), split.blue.len()]);
    run.report.y1 = Some(split.y1.to_string());
    run.report.lower_color = Some(if split.red_below { "red" } else { "blue" });
    let fam = |idx: &[usize], w: &[Line]| Fam {
        orig: idx.to_vec(),
        work: idx.iter().map(|&i| w[i].clone()).collect(),
    };
    let (mut r, b) = if split.red_below {
        (fam(&split.red, &red_w), fam(&split.blue, &blue_w))
    } else {
        (fam(&split.blue, &blue_w), fam(&split.red, &red_w))
    };

    if b.len() < 2 {
        return run.fail("upper color has fewer than two lines after the sweep");
    }
    let mut order: Vec<usize> = (0..b.len()).collect();
    order.sort_by_key(|&i| b.work[i].intercept());
    let half = b.len().div_ceil(2);
    let mut b1 = b.pick(&order[..half]);
    let mut b2 = b.pick(&order[half..]);
    run.stage("halve", &[r.len(), b1.len(), b2.len()]);

    // Every lower line is below every upper line at x = 0 and meets it at
    // x > 0, so lower slopes all exceed upper slopes.
    let max_b = b.work.iter().map(|l| l.slope().unwrap()).max().unwrap();
    let min_r = r.work.iter().map(|l| l.slope().unwrap()).min().unwrap();
    let sigma = -max_b.midpoint(&min_r);
    run.report.shear = Some(sigma.to_string());
    let shear = AffineMap::vertical_shear(sigma);
    to_work = shear.after(&to_work);
    for f in [&mut r, &mut b1, &mut b2] {
        f.map(&shear);
    }

    let st = same_type_triple(&r.work, &b1.work, &b2.work)?;
    run.report.polarity = Some(st.polarity);
    run.report.achieved_fraction = Some(st.achieved_fraction);
    let (r1, b1, b2) = (r.pick(&st.r), b1.pick(&st.b1), b2.pick(&st.b2));
    run.stage("same_type", &[r1.len(), b1.len(), b2.len()]);

    let (x1, x2) = (crossings(&r1, &b1), crossings(&r1, &b2));
    let tries = if st.polarity == Polarity::AllAbove {
        [(true, &x1, &x2), (false, &x2, &x1)]
    } else {
        [(false, &x2, &x1), (true, &x1, &x2)]
    };
    let Some((b1_above, l1)) = tries
        .iter()
        .find_map(|(b1_above, above, below)| separator_line(above, below, SlopeSign::Negative).ok().map(|l| (*b1_above, l)))
    else {
        return run.fail("no negative-slope line separates the two blue halves' crossings");
    };
    let inverse = to_work.inverse();
    run.report.separator1 = Some(inverse.apply_line(&l1).to_string());

    let (ridx, rside) = match one_sided_subset(&r1.work, &l1) {
        Ok(x) => x,
        Err(e) => return run.fail(format!("one-sided red subset: {e}")),
    };
    let r2 = r1.pick(&ridx);
    let keep = if r2.len() == 1 {
        if b1.len() >= b2.len() { b1 } else { b2 }
    } else {
        let reds_above = rside.is_above(&l1);
        // Keep the blue half on the other side of l1 from red/red crossings.
        if reds_above != b1_above { b1 } else { b2 }
    };
    run.stage("one_sided_red", &[r2.len(), keep.len()]);

    // Reds ordered by where they cross the first kept blue.
    let mut rorder: Vec<usize> = (0..r2.len()).collect();
    rorder.sort_by_key(|&i| intersect(&r2.work[i], &keep.work[0]).unwrap().x);
    let r2 = r2.pick(&rorder);

    // (score, reds kept, blues kept, separator)
    let mut best: Option<(usize, Vec<usize>, Vec<usize>, Line)> = None;
    'split: for k in 1..r2.len() {
        let lo: Vec<usize> = (0..k).collect();
        let hi: Vec<usize> = (k..r2.len()).collect();
        let (y_lo, y_hi) = (crossings(&keep, &r2.pick(&lo)), crossings(&keep, &r2.pick(&hi)));
        for (lo_above, above, below) in [(true, &y_lo, &y_hi), (false, &y_hi, &y_lo)] {
            let Ok(l2) = separator_line(above, below, SlopeSign::Positive) else {
                continue;
            };
            let Ok((bidx, bside)) = one_sided_subset(&keep.work, &l2) else {
                continue;
            };
            let group = if bidx.len() == 1 {
                if lo.len() >= hi.len() { &lo } else { &hi }
            } else {
                let blues_above = bside.is_above(&l2);
                // Keep the red group on the other side of l2 from blue/blue crossings.
                if blues_above != lo_above { &lo } else { &hi }
            };
            let score = bidx.len().min(group.len());
            if best.as_ref().is_none_or(|b| score > b.0) {
                best = Some((score, group.clone(), bidx, l2));
                if score >= t {
                    break 'split;
                }
            }
        }
    }
    let Some((_, rgroup, bstar, l2)) = best else {
        return run.fail("no positive-slope separator for the kept reds");
    };
    run.report.separator2 = Some(inverse.apply_line(&l2).to_string());
    run.stage("one_sided_blue", &[rgroup.len(), bstar.len()]);
    if rgroup.len() < t || bstar.len() < t {
        return run.fail("too few lines survive the one-sided cuts");
    }

    let reds_final = r2.pick(&rgroup[..t]);
    let blues_final = keep.pick(&bstar[..t]);
    run.stage("final", &[t, t]);
    let (red_idx, blue_idx) = if split.red_below {
        (reds_final.orig, blues_final.orig)
    } else {
        (blues_final.orig, reds_final.orig)
    };
    let l1_lines: Vec<Line> = red_idx.iter().map(|&i| red[i].clone()).collect();
    let l2_lines: Vec<Line> = blue_idx.iter().map(|&i| blue[i].clone()).collect();
    let w = GridWitness::from_families(l1_lines.clone(), l2_lines.clone())?;
    let host = Arrangement::new(w.points.clone(), [l1_lines, l2_lines].concat())?;
    match is_natural(&host, &w)? {
        Some(nw) => Ok(Extraction {
            witness: Some(nw),
            report: run.report,
        }),
        None => run.fail("final grid is not natural"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_detect::verify_natural_witness;

    #[test]
    fn pencils_at_capacity_16() {
        let mut found = 0;
        for seed in 0..10 {
            let input = RedBlueInput::random_pencils_seeded(DEFAULT_CAPACITY * 4, seed);
            let out = extract_natural_grid(&input, 2).unwrap();
            if let Some(w) = &out.witness {
                found += 1;
                assert_eq!(verify_natural_witness(&input.arrangement(), w), Ok(()));
            }
            assert_eq!(out, extract_natural_grid(&input, 2).unwrap());
        }
        assert!(found >= 5, "only {found} of 10 extractions succeeded");
    }

    #[test]
    fn starved_input_and_bad_t() {
        let input = RedBlueInput::random_pencils_seeded(1, 3);
        let out = extract_natural_grid(&input, 2).unwrap();
        assert!(out.witness.is_none());
        assert!(out.report.failure.is_some());
        assert!(extract_natural_grid(&input, 1).is_err());
    }
}
