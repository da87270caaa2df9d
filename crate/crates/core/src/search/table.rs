//! Reproduction of the table of exotic solutions of `F_{n,a}(x, y) = 1`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{run_search, SearchConfig, Solution, SolutionClass, Strategy};
use crate::error::{Error, Result};

const EXPECTED: &str = include_str!("../../data/exotic_table.txt");

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TableEntry {
    pub n: i64,
    pub a: i64,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub y: BigInt,
}

impl TableEntry {
    /// The representative of a unit solution with value `+1`.
    fn from_solution(s: &Solution) -> Self {
        let s = if s.value.is_negative() { s.negated() } else { s.clone() };
        TableEntry { n: s.n, a: s.a, x: s.x, y: s.y }
    }
}

/// The tabulated exotic solutions.
pub fn expected_table() -> Vec<TableEntry> {
    EXPECTED
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<i64> = l.split_whitespace().map(|t| t.parse().expect("malformed table line")).collect();
            TableEntry { n: f[0], a: f[1], x: BigInt::from(f[2]), y: BigInt::from(f[3]) }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct TableConfig {
    pub n_min: i64,
    pub n_max: i64,
    pub a_min: i64,
    pub a_max: i64,
    pub y_max: u64,
    /// Exotic solutions with `|x|` or `|y|` above this are reported apart.
    pub box_bound: u64,
    pub checkpoint: Option<PathBuf>,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig { n_min: 0, n_max: 10, a_min: 1, a_max: 70, y_max: 1000, box_bound: 1000, checkpoint: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub expected: Vec<TableEntry>,
    pub found: Vec<TableEntry>,
    pub missing: Vec<TableEntry>,
    pub extra: Vec<TableEntry>,
    pub outside_box: Vec<TableEntry>,
    /// Every solution of `|F| = 1` in the box with `y >= 0`.
    #[serde(skip)]
    pub solutions: Vec<Solution>,
}

impl TableReport {
    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn reproduce_table(cfg: &TableConfig) -> Result<TableReport> {
    if cfg.a_min < 1 {
        return Err(Error::Precondition("the table covers a >= 1 only".into()));
    }
    let search = SearchConfig {
        n_min: cfg.n_min,
        n_max: cfg.n_max,
        a_min: cfg.a_min,
        a_max: cfg.a_max,
        m: 1,
        y_max: cfg.y_max,
        x_max: None,
        strategy: Strategy::Proximity,
        checkpoint: cfg.checkpoint.clone(),
    };
    let all = run_search(&search)?;
    let bound = BigInt::from(cfg.box_bound);
    let in_box = |s: &Solution| s.x.abs() <= bound && s.y.abs() <= bound;

    let mut found = BTreeSet::new();
    let mut outside = BTreeSet::new();
    for s in all.iter().filter(|s| s.class == SolutionClass::Exotic) {
        debug_assert!(s.value.abs() == BigInt::one());
        let e = TableEntry::from_solution(s);
        if in_box(s) {
            found.insert(e);
        } else {
            outside.insert(e);
        }
    }
    let in_range = |e: &TableEntry| (cfg.n_min..=cfg.n_max).contains(&e.n) && (cfg.a_min..=cfg.a_max).contains(&e.a);
    let expected: BTreeSet<TableEntry> = expected_table().into_iter().filter(in_range).collect();
    Ok(TableReport {
        missing: expected.difference(&found).cloned().collect(),
        extra: found.difference(&expected).cloned().collect(),
        expected: expected.into_iter().collect(),
        found: found.into_iter().collect(),
        outside_box: outside.into_iter().collect(),
        solutions: all.into_iter().filter(in_box).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::eval_form;

    #[test]
    fn expected_rows_have_value_one() {
        let t = expected_table();
        assert_eq!(t.len(), 27);
        for e in &t {
            assert_eq!(eval_form(e.n, e.a, &e.x, &e.y).unwrap(), BigInt::one(), "{e:?}");
        }
        let rows: BTreeSet<(i64, i64)> = t.iter().map(|e| (e.n, e.a)).collect();
        assert_eq!(rows.len(), 9);
    }

    #[test]
    fn small_slice() {
        let cfg = TableConfig { n_min: 1, n_max: 2, a_min: 2, a_max: 2, y_max: 50, box_bound: 1000, checkpoint: None };
        let r = reproduce_table(&cfg).unwrap();
        assert!(r.matches(), "{r:?}");
        assert_eq!(r.found.len(), 6);
    }
}
