//! Grid verification of the inequalities satisfied by `(u_a, v_a)`, of the
//! list of `F_{n,a}(±1, ±1) = ±1` cases, and of the lower bounds on the
//! diagonal `F_{n,a}(x, ±x)`.
//!
//! Expected exceptions are data: `data/recurrence_exceptions.txt` for the
//! inequalities, [`PM_ONE_CASES`] for the unit inputs. Verifiers report what
//! they find and diff it against that data.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{CoeffIter, FormCoefficients};

const RECURRENCE_EXCEPTIONS: &str = include_str!("../data/recurrence_exceptions.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaPart {
    /// `u_a > 0` for `n >= 1`, `a >= 1`.
    I,
    /// `2 u_a > n u_{a-1}` for `n >= 1`, `a >= 2`.
    II,
    /// `v_a > u_a + v_{a-1}` for `n >= 1`, `a >= 2`.
    III,
    /// `v_1 = u_1 + v_0` for `n >= 0`.
    IiiBase,
    /// `|u_a| <= v_a` for `n >= 0`, `a >= 1`.
    IiiAbs,
    /// `v_a > 2 v_{a-1}` for `n >= 0`, `a >= 1`.
    Iv,
    /// `0 < (-1)^a u_a <= v_a / 2` for `n = 0`, `a >= 1`.
    V,
}

impl LemmaPart {
    pub const ALL: [LemmaPart; 7] =
        [LemmaPart::I, LemmaPart::II, LemmaPart::III, LemmaPart::IiiBase, LemmaPart::IiiAbs, LemmaPart::Iv, LemmaPart::V];
}

impl fmt::Display for LemmaPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaPart::I => "i",
            LemmaPart::II => "ii",
            LemmaPart::III => "iii",
            LemmaPart::IiiBase => "iii_base",
            LemmaPart::IiiAbs => "iii_abs",
            LemmaPart::Iv => "iv",
            LemmaPart::V => "v",
        })
    }
}

impl FromStr for LemmaPart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LemmaPart::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown lemma part {s:?}")))
    }
}

/// One stated exception with the values the statement gives for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatedException {
    pub part: LemmaPart,
    pub n: i64,
    pub a: i64,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub rhs: BigInt,
}

pub fn stated_exceptions() -> Vec<StatedException> {
    RECURRENCE_EXCEPTIONS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let int = |s: &str| s.parse::<i64>().expect("malformed exception line");
            StatedException {
                part: f[0].parse().expect("malformed exception part"),
                n: int(f[1]),
                a: int(f[2]),
                lhs: BigInt::from(int(f[3])),
                rhs: BigInt::from(int(f[4])),
            }
        })
        .collect()
}

/// Both sides of the inequality of `part` at `(n, a)`, or `None` outside its
/// range. `prev` holds the coefficients at `a - 1`.
fn sides(part: LemmaPart, cur: &FormCoefficients, prev: &FormCoefficients) -> Option<(BigInt, BigInt)> {
    let (n, a) = (cur.n, cur.a);
    match part {
        LemmaPart::I if n >= 1 && a >= 1 => Some((cur.u.clone(), BigInt::zero())),
        LemmaPart::II if n >= 1 && a >= 2 => Some((2 * &cur.u, n * &prev.u)),
        LemmaPart::III if n >= 1 && a >= 2 => Some((cur.v.clone(), &cur.u + &prev.v)),
        LemmaPart::IiiBase if n >= 0 && a == 1 => Some((cur.v.clone(), &cur.u + &prev.v)),
        LemmaPart::IiiAbs if n >= 0 && a >= 1 => Some((cur.v.clone(), cur.u.abs())),
        LemmaPart::Iv if n >= 0 && a >= 1 => Some((cur.v.clone(), 2 * &prev.v)),
        LemmaPart::V if n == 0 && a >= 1 => {
            let s = if a % 2 == 0 { cur.u.clone() } else { -&cur.u };
            Some((s, cur.v.clone()))
        }
        _ => None,
    }
}

fn holds(part: LemmaPart, lhs: &BigInt, rhs: &BigInt) -> bool {
    match part {
        LemmaPart::IiiBase => lhs == rhs,
        LemmaPart::IiiAbs => rhs <= lhs,
        LemmaPart::V => lhs.is_positive() && 2 * lhs <= *rhs,
        _ => lhs > rhs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartReport {
    pub part: LemmaPart,
    /// Stated exceptions inside the grid.
    pub expected: Vec<(i64, i64)>,
    /// Grid points where the inequality fails.
    pub found: Vec<(i64, i64)>,
    pub unexpected: Vec<(i64, i64)>,
    pub missing: Vec<(i64, i64)>,
    /// Stated exceptions whose stated values differ from the computed ones.
    pub wrong_values: Vec<(i64, i64)>,
}

impl PartReport {
    pub fn matches(&self) -> bool {
        self.unexpected.is_empty() && self.missing.is_empty() && self.wrong_values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceReport {
    pub n_max: i64,
    pub a_max: i64,
    pub parts: Vec<PartReport>,
}

impl RecurrenceReport {
    pub fn matches(&self) -> bool {
        self.parts.iter().all(PartReport::matches)
    }

    pub fn part(&self, p: LemmaPart) -> &PartReport {
        self.parts.iter().find(|r| r.part == p).expect("every part is reported")
    }
}

/// Check every inequality on `0 <= n <= n_max`, `1 <= a <= a_max`.
pub fn verify_recurrence_lemma(n_max: i64, a_max: i64) -> Result<RecurrenceReport> {
    if n_max < 5 || a_max < 5 {
        return Err(Error::Precondition("the recurrence grid must reach n, a >= 5".into()));
    }
    // (part, n, a, lhs, rhs) for every failure
    let failures: Vec<(LemmaPart, i64, i64, BigInt, BigInt)> = (0..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let terms: Vec<FormCoefficients> = CoeffIter::new(n).take(a_max as usize + 1).collect();
            let mut out = Vec::new();
            for a in 1..=a_max as usize {
                for part in LemmaPart::ALL {
                    if let Some((l, r)) = sides(part, &terms[a], &terms[a - 1]) {
                        if !holds(part, &l, &r) {
                            out.push((part, n, a as i64, l, r));
                        }
                    }
                }
            }
            out
        })
        .collect();

    let stated = stated_exceptions();
    let parts = LemmaPart::ALL
        .into_iter()
        .map(|part| {
            let in_grid = |n: i64, a: i64| (0..=n_max).contains(&n) && (1..=a_max).contains(&a);
            let exp: Vec<&StatedException> =
                stated.iter().filter(|e| e.part == part && in_grid(e.n, e.a)).collect();
            let found: BTreeSet<(i64, i64)> = failures.iter().filter(|f| f.0 == part).map(|f| (f.1, f.2)).collect();
            let expected: BTreeSet<(i64, i64)> = exp.iter().map(|e| (e.n, e.a)).collect();
            let wrong_values = exp
                .iter()
                .filter(|e| !failures.iter().any(|f| f.0 == part && (f.1, f.2) == (e.n, e.a) && f.3 == e.lhs && f.4 == e.rhs))
                .map(|e| (e.n, e.a))
                .collect();
            PartReport {
                part,
                unexpected: found.difference(&expected).copied().collect(),
                missing: expected.difference(&found).copied().collect(),
                expected: expected.into_iter().collect(),
                found: found.into_iter().collect(),
                wrong_values,
            }
        })
        .collect();
    Ok(RecurrenceReport { n_max, a_max, parts })
}

/// Unit inputs with `F_{n,a}(c1, c2) = c`, as `(n, a, s1, s2)` meaning
/// `(c1, c2) = (s1 c, s2 c)` for both signs of `c`; `n = None` stands for
/// every `n >= 0`.
pub const PM_ONE_CASES: [(Option<i64>, i64, i64, i64); 3] = [(Some(0), 1, -1, -1), (Some(0), 2, 1, 1), (None, 1, -1, 1)];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PmOneCase {
    pub n: i64,
    pub a: i64,
    pub c1: i64,
    pub c2: i64,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PmOneReport {
    pub n_max: i64,
    pub a_max: i64,
    pub found: Vec<PmOneCase>,
    pub unexpected: Vec<PmOneCase>,
    pub missing: Vec<PmOneCase>,
}

impl PmOneReport {
    pub fn matches(&self) -> bool {
        self.unexpected.is_empty() && self.missing.is_empty()
    }
}

fn expected_pm_one(n_max: i64, a_max: i64) -> BTreeSet<PmOneCase> {
    let mut out = BTreeSet::new();
    for (n, a, s1, s2) in PM_ONE_CASES {
        if a > a_max {
            continue;
        }
        let ns: Vec<i64> = match n {
            Some(n) if n <= n_max => vec![n],
            Some(_) => vec![],
            None => (0..=n_max).collect(),
        };
        for n in ns {
            for c in [-1, 1] {
                out.insert(PmOneCase { n, a, c1: s1 * c, c2: s2 * c, value: c });
            }
        }
    }
    out
}

/// All `(n, a, c1, c2)` on `[0, n_max] x [1, a_max] x {±1}^2` with
/// `F_{n,a}(c1, c2) = ±1`, diffed against [`PM_ONE_CASES`].
pub fn verify_pm_one_inputs(n_max: i64, a_max: i64) -> Result<PmOneReport> {
    if n_max < 10 || a_max < 10 {
        return Err(Error::Precondition("the unit-input grid must reach n, a >= 10".into()));
    }
    let found: BTreeSet<PmOneCase> = (0..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let mut out = Vec::new();
            for c in CoeffIter::new(n).skip(1).take(a_max as usize) {
                let sv = c.signed_v();
                for (c1, c2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                    // c1^3 = c1, c1^2 = 1
                    let value = BigInt::from(c1) - &c.u * c2 + &sv * c1 - c2;
                    if value.abs().is_one() {
                        let value = if value.is_positive() { 1 } else { -1 };
                        out.push(PmOneCase { n, a: c.a, c1, c2, value });
                    }
                }
            }
            out
        })
        .collect();
    let expected = expected_pm_one(n_max, a_max);
    Ok(PmOneReport {
        n_max,
        a_max,
        unexpected: found.difference(&expected).cloned().collect(),
        missing: expected.difference(&found).cloned().collect(),
        found: found.into_iter().collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalLaw {
    /// `8 |F_{n,a}(x, cx)| >= |x|^3 a n^(a-1)` for `n >= 1`, `a >= 2`.
    Growth,
    /// `F_{n,1}(x, x) = -(2n+1) x^3` for `n >= 0`.
    FirstPower,
    /// `|F_{0,a}(x, cx)| >= |x|^3 2^(a-1)` for `a >= 3`.
    NZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalViolation {
    pub law: DiagonalLaw,
    pub n: i64,
    pub a: i64,
    pub x: i64,
    pub c: i64,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalReport {
    pub n_max: i64,
    pub a_max: i64,
    pub x_max: i64,
    pub checked: u64,
    pub violations: Vec<DiagonalViolation>,
}

impl DiagonalReport {
    pub fn matches(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the diagonal laws on `0 <= n <= n_max`, `1 <= a <= a_max`,
/// `|x| <= x_max`, `c = ±1`.
pub fn verify_diagonal_bounds(n_max: i64, a_max: i64, x_max: i64) -> Result<DiagonalReport> {
    if n_max < 5 || a_max < 5 || x_max < 5 {
        return Err(Error::Precondition("the diagonal grid must reach n, a, |x| >= 5".into()));
    }
    let per_n: Vec<(u64, Vec<DiagonalViolation>)> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut checked = 0;
            let mut bad = Vec::new();
            for form in CoeffIter::new(n).skip(1).take(a_max as usize) {
                let a = form.a;
                let growth = BigInt::from(a) * BigInt::from(n).pow((a - 1) as u32);
                let two_pow = BigInt::one() << (a - 1) as usize;
                for x in -x_max..=x_max {
                    let xb = BigInt::from(x);
                    let x3 = xb.pow(3).abs();
                    for c in [1i64, -1] {
                        let value = form.eval(&xb, &(&xb * c));
                        let mut check = |law: DiagonalLaw, ok: bool| {
                            checked += 1;
                            if !ok {
                                bad.push(DiagonalViolation { law, n, a, x, c, value: value.clone() });
                            }
                        };
                        if n >= 1 && a >= 2 {
                            check(DiagonalLaw::Growth, 8 * value.abs() >= &x3 * &growth);
                        }
                        if a == 1 && c == 1 {
                            check(DiagonalLaw::FirstPower, value == -(2 * n + 1) * xb.pow(3));
                        }
                        if n == 0 && a >= 3 {
                            check(DiagonalLaw::NZero, value.abs() >= &x3 * &two_pow);
                        }
                    }
                }
            }
            (checked, bad)
        })
        .collect();
    let checked = per_n.iter().map(|p| p.0).sum();
    let violations = per_n.into_iter().flat_map(|p| p.1).collect();
    Ok(DiagonalReport { n_max, a_max, x_max, checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exception_data_parses() {
        let e = stated_exceptions();
        assert_eq!(e.len(), 7);
        assert_eq!(e.iter().filter(|e| e.part == LemmaPart::Iv).count(), 3);
    }

    #[test]
    fn stated_values_are_computed_values() {
        let r = verify_recurrence_lemma(6, 6).unwrap();
        for p in &r.parts {
            assert!(p.wrong_values.is_empty(), "{p:?}");
            assert!(p.missing.is_empty(), "{p:?}");
        }
        assert_eq!(r.part(LemmaPart::II).found, vec![(1, 3)]);
        assert_eq!(r.part(LemmaPart::V).found, vec![(0, 2)]);
    }

    #[test]
    fn pm_one_small() {
        let r = verify_pm_one_inputs(12, 12).unwrap();
        assert!(r.matches(), "{r:?}");
        assert!(r.found.contains(&PmOneCase { n: 0, a: 1, c1: -1, c2: -1, value: 1 }));
        assert!(!r.found.iter().any(|c| c.n == 5 && c.a == 2));
    }

    #[test]
    fn diagonal_small() {
        let r = verify_diagonal_bounds(6, 6, 6).unwrap();
        assert!(r.matches(), "{r:?}");
        assert!(r.checked > 0);
    }

    #[test]
    fn grids_too_small() {
        assert!(verify_recurrence_lemma(4, 10).is_err());
        assert!(verify_pm_one_inputs(9, 10).is_err());
        assert!(verify_diagonal_bounds(5, 5, 4).is_err());
    }
}
