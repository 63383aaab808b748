//! Extremal arrangement generators and the incidence bound formulas.

use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::format::read_int_set;
use crate::geom::{Line, Point};
use crate::rational::Rational;
use crate::sidon::{greedy_kfold_upto, greedy_sidon_upto, is_kfold_sidon, is_sidon};

/// The `s × 2s²` integer lattice with the `s³` lines `y = c·x + d`,
/// `1 ≤ c ≤ s`, `1 ≤ d ≤ s²`. Every line meets exactly `s` lattice points.
pub fn lattice_rich_lines(s: u64) -> Arrangement {
    assert!(s >= 1, "s must be positive");
    let si = s as i64;
    let mut points = Vec::with_capacity((2 * s * s * s) as usize);
    for x in 1..=si {
        for y in 1..=2 * si * si {
            points.push(Point::from_ints(x, y));
        }
    }
    let mut lines = Vec::with_capacity((s * s * s) as usize);
    for c in 1..=si {
        for d in 1..=si * si {
            lines.push(Line::from_slope_intercept(&c.into(), &d.into()));
        }
    }
    Arrangement::new(points, lines).expect("lattice points and lines are distinct")
}

/// Parameters of the grid-free construction: points `A × {1..h}` and lines
/// `y = m·x + b` with `m ∈ M`, `1 ≤ b ≤ ⌊h/2⌋`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFreeParams {
    /// k-fold Sidon set of abscissae.
    pub a: Vec<u64>,
    /// Sidon set of slopes.
    pub m: Vec<u64>,
    pub h: u64,
    pub k: u32,
}

impl GridFreeParams {
    /// Checks every precondition, naming the first that fails.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        if self.a.is_empty() {
            return fail("A is empty".into());
        }
        if self.m.is_empty() {
            return fail("M is empty".into());
        }
        if self.h == 0 {
            return fail("h must be positive".into());
        }
        if !self.a.windows(2).all(|w| w[0] < w[1]) || self.a[0] == 0 {
            return fail("A must be strictly increasing positive integers".into());
        }
        if !self.m.windows(2).all(|w| w[0] < w[1]) || self.m[0] == 0 {
            return fail("M must be strictly increasing positive integers".into());
        }
        let max_m = *self.m.last().unwrap();
        let max_a = *self.a.last().unwrap();
        if (self.k as u64) < max_m {
            return fail(format!("k = {} is below max(M) = {max_m}", self.k));
        }
        if !is_sidon(&self.m) {
            return fail("M is not a Sidon set".into());
        }
        if let Err(cex) = is_kfold_sidon(&self.a, self.k) {
            return fail(format!(
                "A is not {}-fold Sidon: u = {}, x = {:?}",
                self.k, cex.u, cex.x
            ));
        }
        let top = max_m as u128 * max_a as u128 + (self.h / 2) as u128;
        if top > self.h as u128 {
            return fail(format!(
                "range condition fails: max(M)·max(A) + ⌊h/2⌋ = {top} > h = {}",
                self.h
            ));
        }
        Ok(())
    }

    pub fn num_points(&self) -> u64 {
        self.a.len() as u64 * self.h
    }

    pub fn num_lines(&self) -> u64 {
        self.m.len() as u64 * (self.h / 2)
    }

    /// `|M|·⌊h/2⌋·|A|`.
    pub fn expected_incidences(&self) -> u64 {
        self.num_lines() * self.a.len() as u64
    }
}

pub fn generate_grid_free(p: &GridFreeParams) -> Result<Arrangement> {
    p.validate()?;
    let mut points = Vec::with_capacity(p.num_points() as usize);
    for &x in &p.a {
        for y in 1..=p.h {
            points.push(Point::from_ints(x as i64, y as i64));
        }
    }
    let mut lines = Vec::with_capacity(p.num_lines() as usize);
    for &m in &p.m {
        for b in 1..=p.h / 2 {
            lines.push(Line::from_slope_intercept(&(m as i64).into(), &(b as i64).into()));
        }
    }
    Arrangement::new(points, lines)
}

/// Grid-free parameters as a file: set-file paths plus `h` and `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFreeParamFile {
    pub a_file: PathBuf,
    pub m_file: PathBuf,
    pub h: u64,
    pub k: u32,
}

impl GridFreeParamFile {
    /// Loads the sets; relative paths resolve against `base`.
    pub fn load(&self, base: &Path) -> Result<GridFreeParams> {
        let resolve = |p: &PathBuf| if p.is_absolute() { p.clone() } else { base.join(p) };
        Ok(GridFreeParams {
            a: read_int_set(&resolve(&self.a_file))?,
            m: read_int_set(&resolve(&self.m_file))?,
            h: self.h,
            k: self.k,
        })
    }
}

/// Largest `r` with `r^q ≤ n^p`.
fn floor_pow(n: u64, p: u32, q: u32) -> u64 {
    BigUint::from(n).pow(p).nth_root(q).to_u64().expect("root fits in u64")
}

/// Parameters following the asymptotic schedule for `n`, together with the
/// cap `N` used for `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsymptoticParams {
    pub n: u64,
    /// `⌊n^(11/14) / 4⌋`
    pub a_cap: u64,
    pub params: GridFreeParams,
}

/// `k = ⌊n^(1/7)⌋`, `M` greedy Sidon inside `[1..k]`, `A` greedy k-fold
/// Sidon inside `[1..⌊n^(11/14)/4⌋]`, `h = ⌊n^(13/14)⌋`.
pub fn asymptotic_params(n: u64) -> Result<AsymptoticParams> {
    let k = floor_pow(n, 1, 7);
    let a_cap = floor_pow(n, 11, 14) / 4;
    let h = floor_pow(n, 13, 14);
    let m = greedy_sidon_upto(k);
    if m.is_empty() {
        return Err(Error::NTooSmall {
            n,
            reason: "slope set M inside [1..n^(1/7)] is empty".into(),
        });
    }
    let a = greedy_kfold_upto(k as u32, a_cap);
    if a.is_empty() {
        return Err(Error::NTooSmall {
            n,
            reason: format!("abscissa set A inside [1..{a_cap}] is empty"),
        });
    }
    let params = GridFreeParams { a, m, h, k: k as u32 };
    params.validate()?;
    Ok(AsymptoticParams { n, a_cap, params })
}

/// `m^α · n^β` with rational exponents and unit constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerTerm {
    pub m_exp: Rational,
    pub n_exp: Rational,
}

impl PowerTerm {
    fn new(m_exp: Rational, n_exp: Rational) -> Self {
        PowerTerm { m_exp, n_exp }
    }
}

impl fmt::Display for PowerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (sym, e) in [("m", &self.m_exp), ("n", &self.n_exp)] {
            if e.is_zero() {
                continue;
            }
            if *e == Rational::one() {
                parts.push(sym.to_string());
            } else {
                parts.push(format!("{sym}^({e})"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// A sum of power terms evaluated at concrete `(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundValue {
    pub m: u64,
    pub n: u64,
    pub terms: Vec<PowerTerm>,
}

/// Fractional bits kept when approximating irrational powers.
pub const BOUND_PRECISION_BITS: u32 = 64;

/// `⌊x^(e) · 2^bits⌋ / 2^bits` for a nonnegative rational exponent.
fn pow_lower(x: u64, e: &Rational, bits: u32) -> Rational {
    let p = e.numer().to_u32().expect("exponent numerator fits in u32");
    let q = e.denom().to_u32().expect("exponent denominator fits in u32");
    let scaled = BigUint::from(x).pow(p) << (bits as usize * q as usize);
    let root = scaled.nth_root(q);
    Rational::new(
        num_bigint::BigInt::from(root),
        num_bigint::BigInt::from(BigUint::one() << bits as usize),
    )
    .unwrap()
}

impl BoundValue {
    /// Lower approximation within `terms.len()·2^(-bits)` of the true value.
    pub fn approx(&self, bits: u32) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, t| {
            acc + pow_lower(self.m, &t.m_exp, bits) * pow_lower(self.n, &t.n_exp, bits)
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.approx(BOUND_PRECISION_BITS).to_f64()
    }

    pub fn formula(&self) -> String {
        self.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" + ")
    }
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn check_mn(m: u64, n: u64) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParams("m and n must be positive".into()));
    }
    Ok(())
}

/// `m^(2/3)·n^(2/3) + m + n`.
pub fn st_bound(m: u64, n: u64) -> Result<BoundValue> {
    check_mn(m, n)?;
    Ok(BoundValue {
        m,
        n,
        terms: vec![
            PowerTerm::new(ratio(2, 3), ratio(2, 3)),
            PowerTerm::new(Rational::one(), Rational::zero()),
            PowerTerm::new(Rational::zero(), Rational::one()),
        ],
    })
}

fn check_t(t: u32) -> Result<i64> {
    if t < 2 {
        return Err(Error::InvalidParams(format!("t must be at least 2, got {t}")));
    }
    Ok(t as i64)
}

/// `m^((2t−2)/(3t−2))·n^((2t−1)/(3t−2)) + m^(1+1/(6t−3)) + n`.
pub fn thm_bound(t: u32, m: u64, n: u64) -> Result<BoundValue> {
    let t = check_t(t)?;
    check_mn(m, n)?;
    Ok(BoundValue {
        m,
        n,
        terms: vec![
            PowerTerm::new(ratio(2 * t - 2, 3 * t - 2), ratio(2 * t - 1, 3 * t - 2)),
            PowerTerm::new(ratio(6 * t - 2, 6 * t - 3), Rational::zero()),
            PowerTerm::new(Rational::zero(), Rational::one()),
        ],
    })
}

/// `4/3 − 1/(9t−6)`.
pub fn cor_exponent(t: u32) -> Result<Rational> {
    let t = check_t(t)?;
    Ok(ratio(4, 3) - ratio(1, 9 * t - 6))
}

/// Exponent `1 + 1/14` of the grid-free lower bound.
pub fn lower_bound_exponent() -> Rational {
    ratio(15, 14)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub m: u64,
    pub n: u64,
    pub t: u32,
    pub st_bound: f64,
    pub thm_bound: f64,
    pub cor_exponent: String,
    pub measured_incidences: Option<u64>,
    /// `measured / st_bound`, constant 1.
    pub st_ratio: Option<f64>,
    /// `measured / thm_bound`, constant 1.
    pub thm_ratio: Option<f64>,
}

pub fn bound_report(m: u64, n: u64, t: u32, measured: Option<u64>) -> Result<BoundReport> {
    let st = st_bound(m, n)?.approx(BOUND_PRECISION_BITS);
    let thm = thm_bound(t, m, n)?.approx(BOUND_PRECISION_BITS);
    let ratio_of = |b: &Rational| measured.map(|i| (Rational::from_integer(i) / b).to_f64());
    Ok(BoundReport {
        m,
        n,
        t,
        st_bound: st.to_f64(),
        thm_bound: thm.to_f64(),
        cor_exponent: cor_exponent(t)?.to_string(),
        measured_incidences: measured,
        st_ratio: ratio_of(&st),
        thm_ratio: ratio_of(&thm),
    })
}

/// Least-squares slope of `ln y` against `ln x`; absent with fewer than two
/// distinct abscissae.
pub fn loglog_slope(samples: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
