use std::collections::HashSet;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::format::{read_text, write_text, Cursor};
use crate::geom::{intersect, Line, Point};
use crate::rational::Rational;

/// Two colored line families whose red/blue crossings are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedBlueInput {
    red: Vec<Line>,
    blue: Vec<Line>,
}

impl RedBlueInput {
    /// Rejects vertical lines, repeated lines, parallel red/blue pairs and
    /// coinciding red/blue crossings.
    pub fn new(red: Vec<Line>, blue: Vec<Line>) -> Result<Self> {
        let mut seen = HashSet::new();
        for l in red.iter().chain(&blue) {
            if l.is_vertical() {
                return Err(Error::VerticalLine(l.clone()));
            }
            if !seen.insert(l) {
                return Err(Error::DuplicateLine(l.clone()));
            }
        }
        let mut crossings = HashSet::with_capacity(red.len() * blue.len());
        for r in &red {
            for b in &blue {
                let p = intersect(r, b)
                    .ok_or_else(|| Error::InvalidInput(format!("red line {r} and blue line {b} are parallel")))?;
                if crossings.contains(&p) {
                    return Err(Error::InvalidInput(format!("two red/blue crossings coincide at ({p})")));
                }
                crossings.insert(p);
            }
        }
        Ok(RedBlueInput { red, blue })
    }

    pub fn red(&self) -> &[Line] {
        &self.red
    }

    pub fn blue(&self) -> &[Line] {
        &self.blue
    }

    /// All red/blue crossings, red-major.
    pub fn crossings(&self) -> Vec<Point> {
        self.red
            .iter()
            .flat_map(|r| self.blue.iter().map(move |b| intersect(r, b).unwrap()))
            .collect()
    }

    /// The host arrangement: every red/blue crossing, reds then blues.
    pub fn arrangement(&self) -> Arrangement {
        let lines = self.red.iter().chain(&self.blue).cloned().collect();
        Arrangement::new(self.crossings(), lines).expect("validated on construction")
    }

    /// Keeps `count` lines of each color chosen by `seed`, in input order.
    pub fn sample(&self, count: usize, seed: u64) -> Result<RedBlueInput> {
        if count > self.red.len() || count > self.blue.len() {
            return Err(Error::InvalidInput(format!(
                "need {count} lines per color, have {} red and {} blue",
                self.red.len(),
                self.blue.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = |lines: &[Line]| {
            let mut idx = sample(&mut rng, lines.len(), count).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| lines[i].clone()).collect::<Vec<_>>()
        };
        let red = pick(&self.red);
        let blue = pick(&self.blue);
        Ok(RedBlueInput { red, blue })
    }

    /// Random pencils: red slopes in [1, 2], blue slopes in [−2, −1].
    pub fn random_pencils(count: usize, rng: &mut impl Rng) -> RedBlueInput {
        RedBlueInput::random_with_slopes(count, 1000..=2000, -2000..=-1000, rng)
    }

    /// Both colors with slopes anywhere in [−2, 2].
    pub fn random_general(count: usize, rng: &mut impl Rng) -> RedBlueInput {
        RedBlueInput::random_with_slopes(count, -2000..=2000, -2000..=2000, rng)
    }

    /// Slopes are drawn in thousandths from the given ranges and intercepts
    /// from [−100, 100] in tenths. Lines that would repeat, be parallel to
    /// the other color, or create a coinciding crossing are redrawn.
    fn random_with_slopes(
        count: usize,
        red_slopes: RangeInclusive<i64>,
        blue_slopes: RangeInclusive<i64>,
        rng: &mut impl Rng,
    ) -> RedBlueInput {
        let draw = |slopes: &RangeInclusive<i64>, rng: &mut dyn rand::RngCore| {
            let slope = Rational::new(rng.gen_range(slopes.clone()), 1000).unwrap();
            let intercept = Rational::new(rng.gen_range(-1000..=1000), 10).unwrap();
            Line::from_slope_intercept(&slope, &intercept)
        };
        let mut red: Vec<Line> = Vec::with_capacity(count);
        while red.len() < count {
            let l = draw(&red_slopes, rng);
            if !red.contains(&l) {
                red.push(l);
            }
        }
        let mut blue: Vec<Line> = Vec::with_capacity(count);
        let mut crossings = HashSet::new();
        while blue.len() < count {
            let l = draw(&blue_slopes, rng);
            let Some(pts) = red.iter().map(|r| intersect(r, &l)).collect::<Option<Vec<Point>>>() else {
                continue;
            };
            let fresh: HashSet<&Point> = pts.iter().collect();
            if blue.contains(&l) || red.contains(&l) || fresh.len() < pts.len() || pts.iter().any(|p| crossings.contains(p)) {
                continue;
            }
            crossings.extend(pts);
            blue.push(l);
        }
        RedBlueInput { red, blue }
    }

    pub fn random_pencils_seeded(count: usize, seed: u64) -> RedBlueInput {
        RedBlueInput::random_pencils(count, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn random_general_seeded(count: usize, seed: u64) -> RedBlueInput {
        RedBlueInput::random_general(count, &mut ChaCha8Rng::seed_from_u64(seed))
    }
}

pub fn format_redblue(input: &RedBlueInput) -> String {
    let mut s = String::new();
    for (name, lines) in [("red", &input.red), ("blue", &input.blue)] {
        writeln!(s, "{name} {}", lines.len()).unwrap();
        for l in lines {
            writeln!(s, "{l}").unwrap();
        }
    }
    s
}

pub fn parse_redblue(text: &str) -> Result<RedBlueInput> {
    let mut cur = Cursor::new(text);
    let n = cur.header("red")?;
    let red = cur.items::<Line>(n)?.into_iter().map(|(_, l)| l).collect();
    let n = cur.header("blue")?;
    let blue = cur.items::<Line>(n)?.into_iter().map(|(_, l)| l).collect();
    cur.expect_end()?;
    RedBlueInput::new(red, blue)
}

pub fn read_redblue(path: &Path) -> Result<RedBlueInput> {
    parse_redblue(&read_text(path)?)
}

pub fn write_redblue(input: &RedBlueInput, path: &Path) -> Result<()> {
    write_text(path, &format_redblue(input))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(a: i64, b: i64, c: i64) -> Line {
        Line::new(a, b, c).unwrap()
    }

    #[test]
    fn validation() {
        assert!(RedBlueInput::new(vec![line(1, -1, 0)], vec![line(1, 1, 0)]).is_ok());
        assert!(matches!(
            RedBlueInput::new(vec![line(1, 0, 0)], vec![line(1, 1, 0)]),
            Err(Error::VerticalLine(_))
        ));
        assert!(matches!(
            RedBlueInput::new(vec![line(1, -1, 0)], vec![line(1, -1, 3)]),
            Err(Error::InvalidInput(_))
        ));
        // Red y = x and y = −x both meet blue y = 0 at the origin.
        let err = RedBlueInput::new(vec![line(1, -1, 0), line(1, 1, 0)], vec![line(0, 1, 0)]).unwrap_err();
        assert!(err.to_string().contains("coincide"), "{err}");
        assert!(matches!(
            RedBlueInput::new(vec![line(1, -1, 0)], vec![line(1, -1, 0)]),
            Err(Error::DuplicateLine(_))
        ));
    }

    #[test]
    fn random_pencils_are_valid_and_seeded() {
        let a = RedBlueInput::random_pencils_seeded(20, 7);
        assert_eq!(a, RedBlueInput::random_pencils_seeded(20, 7));
        assert_ne!(a, RedBlueInput::random_pencils_seeded(20, 8));
        let checked = RedBlueInput::new(a.red.clone(), a.blue.clone()).unwrap();
        assert_eq!(checked.arrangement().num_points(), 400);
        let s = a.sample(5, 1).unwrap();
        assert_eq!((s.red.len(), s.blue.len()), (5, 5));
        assert_eq!(s, a.sample(5, 1).unwrap());
        assert!(a.sample(21, 1).is_err());
        let g = RedBlueInput::random_general_seeded(20, 7);
        assert!(RedBlueInput::new(g.red.clone(), g.blue.clone()).is_ok());
    }

    #[test]
    fn file_round_trip() {
        let a = RedBlueInput::random_pencils_seeded(4, 3);
        assert_eq!(parse_redblue(&format_redblue(&a)).unwrap(), a);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rb.txt");
        write_redblue(&a, &path).unwrap();
        assert_eq!(read_redblue(&path).unwrap(), a);
        assert!(parse_redblue("red 1\n1 0 0\nblue 1\n1 1 0\n").is_err());
        assert!(parse_redblue("blue 0\n").is_err());
    }
}
