//! Complete enumeration of `0 < |F_{n,a}(x, y)| <= m` over boxes.
//!
//! Two strategies produce the same sets on common boxes: an exhaustive scan,
//! and a proximity scan that for each `y` only tests `x` near one of the
//! `λ_i^a y`. At least one factor `|x - λ_i^a y|` of `F` is at most `m^(1/3)`,
//! so the windows miss nothing.

mod checkpoint;
mod table;

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{coeffs, FormCoefficients};
use crate::interval::{Dyadic, Interval};
use crate::roots::isolate_roots;
use crate::util::{cbrt_ceil, with_precision, START_PREC};

pub use checkpoint::{CheckpointRecord, CheckpointWriter};
pub use table::{expected_table, reproduce_table, TableConfig, TableEntry, TableReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionClass {
    Trivial,
    UnitPm,
    Diagonal,
    Exotic,
}

impl SolutionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SolutionClass::Trivial => "trivial",
            SolutionClass::UnitPm => "unit_pm",
            SolutionClass::Diagonal => "diagonal",
            SolutionClass::Exotic => "exotic",
        }
    }
}

impl fmt::Display for SolutionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    pub n: i64,
    pub a: i64,
    #[serde(with = "crate::util::bigint_str")]
    pub x: BigInt,
    #[serde(with = "crate::util::bigint_str")]
    pub y: BigInt,
    #[serde(with = "crate::util::bigint_str")]
    pub value: BigInt,
    pub class: SolutionClass,
}

impl Solution {
    pub fn new(n: i64, a: i64, x: BigInt, y: BigInt, value: BigInt) -> Self {
        let class = classify(n, a, &x, &y, &value);
        Solution { n, a, x, y, value, class }
    }

    /// `(-x, -y)`, whose value is `-value`.
    pub fn negated(&self) -> Solution {
        Solution::new(self.n, self.a, -&self.x, -&self.y, -&self.value)
    }

    /// Representative of `{(x, y), (-x, -y)}` with `y > 0`, or `y = 0, x > 0`.
    pub fn canonical(&self) -> Solution {
        if self.y.is_negative() || (self.y.is_zero() && self.x.is_negative()) {
            self.negated()
        } else {
            self.clone()
        }
    }

    fn sort_key(&self) -> (i64, i64, &BigInt, &BigInt) {
        (self.n, self.a, &self.y, &self.x)
    }
}

/// Class of a solution of `F_{n,a}(x, y) = value`.
pub fn classify(n: i64, a: i64, x: &BigInt, y: &BigInt, value: &BigInt) -> SolutionClass {
    let one = BigInt::one();
    if value.abs() == one && ((y.is_zero() && x == value) || (x.is_zero() && *y == -value)) {
        return SolutionClass::Trivial;
    }
    if x.abs() == one && y.abs() == one && value.abs() == one {
        // F_{0,1}(-c,-c) = c, F_{0,2}(c,c) = c, F_{n,1}(-c,c) = c for n >= 0
        let c = value;
        let listed = (n == 0 && a == 1 && x == y && *x == -c)
            || (n == 0 && a == 2 && x == y && x == c)
            || (n >= 0 && a == 1 && *x == -c && y == c);
        if listed {
            return SolutionClass::UnitPm;
        }
    }
    if x == y || *x == -y {
        return SolutionClass::Diagonal;
    }
    SolutionClass::Exotic
}

/// Bring any `(n, a, x, y, value)` with `a != 0` to `n >= 0`, `a >= 1` and a
/// canonical sign, using `F_{n,-a}(X, Y) = -F_{n,a}(Y, X)`,
/// `F_{-n-1,a}(X, Y) = F_{n,a}(-Y, -X)` and oddness.
pub fn normalize(n: i64, a: i64, x: &BigInt, y: &BigInt, value: &BigInt) -> Solution {
    let (mut n, mut a, mut x, mut y, mut value) = (n, a, x.clone(), y.clone(), value.clone());
    if a < 0 {
        (a, x, y, value) = (-a, y, x, -value);
    }
    if n < 0 {
        (n, x, y) = (-n - 1, -y, -x);
    }
    Solution::new(n, a, x, y, value).canonical()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Naive,
    Proximity,
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Strategy::Naive),
            "proximity" => Ok(Strategy::Proximity),
            _ => Err(Error::Precondition(format!("unknown strategy {s:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Naive => "naive",
            Strategy::Proximity => "proximity",
        })
    }
}

/// A sweep over `(n, a)` cells. Every cell covers `0 <= y <= y_max`; the
/// naive strategy scans `|x| <= x_max` (default `y_max`), the proximity
/// strategy finds every `x` and then applies `x_max` if given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n_min: i64,
    pub n_max: i64,
    pub a_min: i64,
    pub a_max: i64,
    pub m: u64,
    pub y_max: u64,
    pub x_max: Option<u64>,
    pub strategy: Strategy,
    #[serde(skip)]
    pub checkpoint: Option<PathBuf>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n_min: 0,
            n_max: 10,
            a_min: 2,
            a_max: 70,
            m: 1,
            y_max: 1000,
            x_max: None,
            strategy: Strategy::Proximity,
            checkpoint: None,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min > self.n_max || self.a_min > self.a_max {
            return Err(Error::Precondition("empty n or a range".into()));
        }
        if self.m < 1 || self.y_max < 1 {
            return Err(Error::Precondition("m and y_max must be at least 1".into()));
        }
        if self.a_min <= 0 && self.a_max >= 0 {
            return Err(Error::DegenerateForm);
        }
        if self.strategy == Strategy::Proximity && self.a_min < 1 {
            return Err(Error::Precondition("the proximity strategy needs a >= 1".into()));
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<(i64, i64)> {
        (self.n_min..=self.n_max).flat_map(|n| (self.a_min..=self.a_max).map(move |a| (n, a))).collect()
    }

    fn x_bound(&self) -> u64 {
        self.x_max.unwrap_or(self.y_max)
    }
}

/// Evaluates `F_{n,a}(x, y)` for many `x` at a fixed `y`.
struct RowEval {
    uy: BigInt,
    svy2: BigInt,
    y3: BigInt,
}

impl RowEval {
    fn new(form: &FormCoefficients, y: &BigInt) -> Self {
        let y2 = y * y;
        RowEval { uy: &form.u * y, svy2: form.signed_v() * &y2, y3: y2 * y }
    }

    fn eval(&self, x: &BigInt) -> BigInt {
        ((x - &self.uy) * x + &self.svy2) * x - &self.y3
    }
}

fn keep(value: &BigInt, m: &BigInt) -> bool {
    !value.is_zero() && value.abs() <= *m
}

/// Exhaustive scan of a box, sorted by `(y, x)`.
pub fn search_naive(
    n: i64,
    a: i64,
    m: u64,
    x_range: RangeInclusive<i64>,
    y_range: RangeInclusive<i64>,
) -> Result<Vec<Solution>> {
    if a == 0 {
        return Err(Error::DegenerateForm);
    }
    // negative a through F_{n,-a}(X, Y) = -F_{n,a}(Y, X)
    let form = coeffs(n, a.abs())?;
    let m = BigInt::from(m);
    let mut out = Vec::new();
    for y in y_range {
        let yb = BigInt::from(y);
        for x in x_range.clone() {
            let xb = BigInt::from(x);
            let value = if a > 0 { form.eval(&xb, &yb) } else { -form.eval(&yb, &xb) };
            if keep(&value, &m) {
                out.push(Solution::new(n, a, xb, yb.clone(), value));
            }
        }
    }
    Ok(out)
}

/// Every solution with `0 <= y <= y_max`, sorted by `(y, x)`.
pub fn search_proximity(n: i64, a: i64, m: u64, y_max: u64) -> Result<Vec<Solution>> {
    if a < 1 || m < 1 || y_max < 1 {
        return Err(Error::Precondition(format!("proximity search needs a, m, y_max >= 1 (a={a}, m={m}, y_max={y_max})")));
    }
    let form = coeffs(n, a)?;
    let mb = BigInt::from(m);
    let w = cbrt_ceil(&mb) + 1;
    let quarter = Dyadic::new(BigInt::one(), -2);
    let ymax_b = BigInt::from(y_max);
    let powers = with_precision(START_PREC, "enclosing root powers for the proximity windows", |prec| {
        let p = isolate_roots(n, prec)?.powers(a);
        let narrow = p.iter().all(|iv| iv.width().mul_exact(&Dyadic::from_int(ymax_b.clone())) < quarter);
        Ok(narrow.then_some(p))
    })?;

    let mut out = Vec::new();
    // y = 0: F(x, 0) = x^3
    let mut x = BigInt::one();
    while &x * &x * &x <= mb {
        out.push(Solution::new(n, a, -&x, BigInt::zero(), -(&x * &x * &x)));
        out.push(Solution::new(n, a, x.clone(), BigInt::zero(), &x * &x * &x));
        x += 1;
    }
    let mut xs: Vec<BigInt> = Vec::new();
    for y in 1..=y_max {
        let yb = BigInt::from(y);
        let row = RowEval::new(&form, &yb);
        xs.clear();
        for p in &powers {
            let c: Interval = p.mul_int(&yb);
            let lo: BigInt = c.lo().floor() - &w;
            let hi: BigInt = c.hi().ceil() + &w;
            let mut x = lo;
            while x <= hi {
                xs.push(x.clone());
                x += 1;
            }
        }
        xs.sort();
        xs.dedup();
        for x in &xs {
            let value = row.eval(x);
            if keep(&value, &mb) {
                out.push(Solution::new(n, a, x.clone(), yb.clone(), value));
            }
        }
    }
    out.sort_by(|s, t| s.sort_key().cmp(&t.sort_key()));
    Ok(out)
}

/// One `(n, a)` cell of a sweep.
pub fn search_cell(cfg: &SearchConfig, n: i64, a: i64) -> Result<Vec<Solution>> {
    match cfg.strategy {
        Strategy::Naive => {
            let xb = cfg.x_bound() as i64;
            search_naive(n, a, cfg.m, -xb..=xb, 0..=cfg.y_max as i64)
        }
        Strategy::Proximity => {
            let mut s = search_proximity(n, a, cfg.m, cfg.y_max)?;
            if let Some(xm) = cfg.x_max {
                let xm = BigInt::from(xm);
                s.retain(|s| s.x.abs() <= xm);
            }
            Ok(s)
        }
    }
}

/// Run a sweep in parallel over cells. With a checkpoint path, completed cells
/// are appended as they finish and cells already recorded are not recomputed.
/// The result is sorted by `(n, a, y, x)`.
pub fn run_search(cfg: &SearchConfig) -> Result<Vec<Solution>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let mut out: Vec<Solution> = match &cfg.checkpoint {
        None => {
            let per_cell: Result<Vec<Vec<Solution>>> = cells.par_iter().map(|&(n, a)| search_cell(cfg, n, a)).collect();
            per_cell?.into_iter().flatten().collect()
        }
        Some(path) => {
            let (writer, done) = CheckpointWriter::open(path, cfg)?;
            let todo: Vec<(i64, i64)> = cells.iter().copied().filter(|c| !done.contains_key(c)).collect();
            let fresh: Result<Vec<Vec<Solution>>> = todo
                .par_iter()
                .map(|&(n, a)| {
                    let s = search_cell(cfg, n, a)?;
                    writer.write_cell(n, a, &s)?;
                    Ok(s)
                })
                .collect();
            let mut all: Vec<Solution> = done.into_values().flatten().collect();
            all.extend(fresh?.into_iter().flatten());
            writer.finish(cells.len(), all.len())?;
            all
        }
    };
    out.sort_by(|s, t| s.sort_key().cmp(&t.sort_key()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn has(s: &[Solution], x: i64, y: i64, value: i64) -> bool {
        s.iter().any(|s| s.x == b(x) && s.y == b(y) && s.value == b(value))
    }

    #[test]
    fn classes() {
        assert_eq!(classify(3, 4, &b(1), &b(0), &b(1)), SolutionClass::Trivial);
        assert_eq!(classify(3, 4, &b(0), &b(1), &b(-1)), SolutionClass::Trivial);
        assert_eq!(classify(0, 2, &b(1), &b(1), &b(1)), SolutionClass::UnitPm);
        assert_eq!(classify(0, 1, &b(1), &b(1), &b(-1)), SolutionClass::UnitPm);
        assert_eq!(classify(5, 1, &b(-1), &b(1), &b(1)), SolutionClass::UnitPm);
        assert_eq!(classify(3, 1, &b(-7), &b(-2), &b(1)), SolutionClass::Exotic);
        assert_eq!(classify(3, 1, &b(2), &b(2), &b(-56)), SolutionClass::Diagonal);
    }

    #[test]
    fn naive_examples() {
        let s = search_naive(0, 3, 1, -10..=10, -10..=10).unwrap();
        assert!(has(&s, 2, 1, 1) && has(&s, -2, -1, -1));
        assert!(has(&s, 1, 0, 1) && has(&s, 0, -1, 1));
        let s = search_naive(2, 2, 1, -10..=10, -10..=10).unwrap();
        assert!(has(&s, -7, -1, 1) && has(&s, -2, -1, 1));
    }

    #[test]
    fn proximity_n0_a5() {
        let s = search_proximity(0, 5, 1, 3).unwrap();
        assert!(has(&s, 3, 1, -1));
        assert!(has(&s, -19, 1, -1));
        let y0: Vec<_> = s.iter().filter(|s| s.y.is_zero()).map(|s| s.x.clone()).collect();
        assert_eq!(y0, vec![b(-1), b(1)]);
    }

    #[test]
    fn proximity_matches_naive_small() {
        for n in 0..3 {
            for a in 1..4 {
                let mut p = search_proximity(n, a, 3, 12).unwrap();
                p.retain(|s| s.x.abs() <= b(12));
                let q = search_naive(n, a, 3, -12..=12, 0..=12).unwrap();
                assert_eq!(p, q, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn normalize_orbit() {
        let s = Solution::new(0, 2, b(13), b(4), b(1));
        for which in crate::forms::Symmetry::ALL {
            let img = crate::forms::symmetry_image(s.n, s.a, &s.x, &s.y, which);
            let v = &s.value * img.sign;
            assert_eq!(normalize(img.n, img.a, &img.x, &img.y, &v), s.canonical());
        }
    }

    #[test]
    fn config_validation() {
        let mut c = SearchConfig::default();
        assert!(c.validate().is_ok());
        c.a_min = 0;
        assert!(c.validate().is_err());
        c.a_min = 3;
        c.a_max = 2;
        assert!(c.validate().is_err());
    }
}
