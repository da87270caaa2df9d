//! The forms `F_{n,a}(X, Y) = X^3 - u_a X^2 Y + (-1)^a v_a X Y^2 - Y^3`.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FormCoefficients {
    pub n: i64,
    pub a: i64,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub u: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub v: BigInt,
}

impl FormCoefficients {
    /// Coefficient of `X Y^2`, i.e. `(-1)^a v_a`.
    pub fn signed_v(&self) -> BigInt {
        if self.a % 2 == 0 {
            self.v.clone()
        } else {
            -&self.v
        }
    }

    /// `F_{n,a}(x, y)` for the stored `a >= 0`.
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let sv = self.signed_v();
        // x^3 - u x^2 y + sv x y^2 - y^3 in Horner form on x
        let t = x - &self.u * y;
        let t = &t * x + sv * y * y;
        t * x - y * y * y
    }
}

/// Coefficients by the three-term recurrences.
pub fn coeffs(n: i64, a: i64) -> Result<FormCoefficients> {
    if a < 0 {
        return Err(Error::Precondition(format!("coeffs needs a >= 0, got {a}")));
    }
    let mut it = CoeffIter::new(n);
    Ok(it.nth(a as usize).expect("infinite iterator"))
}

/// Iterator over `(u_a, v_a)` for `a = 0, 1, 2, ...`.
#[derive(Clone, Debug)]
pub struct CoeffIter {
    n: i64,
    a: i64,
    u: [BigInt; 3],
    v: [BigInt; 3],
}

impl CoeffIter {
    pub fn new(n: i64) -> Self {
        let nb = BigInt::from(n);
        let u = [BigInt::from(3), &nb - 1, &nb * &nb + 5];
        let v = [BigInt::from(3), &nb + 2, &nb * &nb + 2 * &nb + 6];
        CoeffIter { n, a: 0, u, v }
    }
}

impl Iterator for CoeffIter {
    type Item = FormCoefficients;

    fn next(&mut self) -> Option<FormCoefficients> {
        let out = FormCoefficients { n: self.n, a: self.a, u: self.u[0].clone(), v: self.v[0].clone() };
        let p = BigInt::from(self.n - 1);
        let q = BigInt::from(self.n + 2);
        let u3 = &p * &self.u[2] + &q * &self.u[1] + &self.u[0];
        let v3 = &q * &self.v[2] - &p * &self.v[1] - &self.v[0];
        self.u.rotate_left(1);
        self.v.rotate_left(1);
        self.u[2] = u3;
        self.v[2] = v3;
        self.a += 1;
        Some(out)
    }
}

type Mat = [[BigInt; 3]; 3];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &x[i][k] * &y[k][j]).sum()))
}

fn mat_pow(m: &Mat, mut e: u64) -> Mat {
    let mut r: Mat = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
    let mut b = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            r = mat_mul(&r, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mat_mul(&b, &b);
        }
    }
    r
}

fn trace(m: &Mat) -> BigInt {
    &m[0][0] + &m[1][1] + &m[2][2]
}

/// Coefficients from traces of powers of the companion matrix of `f_n` and of
/// its inverse, without using the recurrences.
pub fn coeffs_oracle(n: i64, a: i64) -> Result<FormCoefficients> {
    if a < 0 {
        return Err(Error::Precondition(format!("coeffs_oracle needs a >= 0, got {a}")));
    }
    let z = BigInt::zero;
    let i = |k: i64| BigInt::from(k);
    let m: Mat = [[z(), z(), i(1)], [i(1), z(), i(n + 2)], [z(), i(1), i(n - 1)]];
    // det m = 1, so the inverse is the adjugate
    let m_inv: Mat = [[i(-(n + 2)), i(1), z()], [i(-(n - 1)), z(), i(1)], [i(1), z(), z()]];
    debug_assert_eq!(mat_mul(&m, &m_inv), mat_pow(&m, 0));
    let u = trace(&mat_pow(&m, a as u64));
    let t = trace(&mat_pow(&m_inv, a as u64));
    let v = if a % 2 == 0 { t } else { -t };
    Ok(FormCoefficients { n, a, u, v })
}

/// Exact `F_{n,a}(x, y)`; `a < 0` goes through `F_{n,-a}(X, Y) = -F_{n,a}(Y, X)`.
pub fn eval_form(n: i64, a: i64, x: &BigInt, y: &BigInt) -> Result<BigInt> {
    if a == 0 {
        return Err(Error::DegenerateForm);
    }
    eval_form_allow_degenerate(n, a, x, y)
}

/// As [`eval_form`] but also accepts `a = 0`, where the form is `(X - Y)^3`.
pub fn eval_form_allow_degenerate(n: i64, a: i64, x: &BigInt, y: &BigInt) -> Result<BigInt> {
    if a < 0 {
        let c = coeffs(n, -a)?;
        return Ok(-c.eval(y, x));
    }
    Ok(coeffs(n, a)?.eval(x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// `F(X, Y) = -F(-X, -Y)`.
    Neg,
    /// `F_{-n-1,a}(X, Y) = F_{n,a}(-Y, -X)`.
    FlipN,
    /// `F_{n,-a}(X, Y) = -F_{n,a}(Y, X)`.
    FlipA,
}

impl Symmetry {
    pub const ALL: [Symmetry; 3] = [Symmetry::Neg, Symmetry::FlipN, Symmetry::FlipA];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryImage {
    pub n: i64,
    pub a: i64,
    pub x: BigInt,
    pub y: BigInt,
    /// `F_{n',a'}(x', y') = sign * F_{n,a}(x, y)`.
    pub sign: i32,
}

pub fn symmetry_image(n: i64, a: i64, x: &BigInt, y: &BigInt, which: Symmetry) -> SymmetryImage {
    match which {
        Symmetry::Neg => SymmetryImage { n, a, x: -x, y: -y, sign: -1 },
        Symmetry::FlipN => SymmetryImage { n: -n - 1, a, x: -y, y: -x, sign: 1 },
        Symmetry::FlipA => SymmetryImage { n, a: -a, x: y.clone(), y: x.clone(), sign: -1 },
    }
}

pub const DEFAULT_MEMO_LIMIT: usize = 1_000_000;

/// Thread-safe memo of coefficients. Once `limit` entries are stored, further
/// lookups are computed but not retained.
#[derive(Debug)]
pub struct CoeffCache {
    limit: usize,
    map: RwLock<HashMap<(i64, i64), FormCoefficients>>,
}

impl Default for CoeffCache {
    fn default() -> Self {
        Self::new(DEFAULT_MEMO_LIMIT)
    }
}

impl CoeffCache {
    pub fn new(limit: usize) -> Self {
        CoeffCache { limit, map: RwLock::new(HashMap::new()) }
    }

    pub fn get(&self, n: i64, a: i64) -> Result<FormCoefficients> {
        if let Some(c) = self.map.read().expect("coefficient cache poisoned").get(&(n, a)) {
            return Ok(c.clone());
        }
        let c = coeffs(n, a)?;
        let mut map = self.map.write().expect("coefficient cache poisoned");
        if map.len() < self.limit {
            map.insert((n, a), c.clone());
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("coefficient cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `F_{n,a}(x, y)` using cached coefficients; `a = 0` is rejected.
    pub fn eval(&self, n: i64, a: i64, x: &BigInt, y: &BigInt) -> Result<BigInt> {
        match a {
            0 => Err(Error::DegenerateForm),
            a if a < 0 => Ok(-self.get(n, -a)?.eval(y, x)),
            a => Ok(self.get(n, a)?.eval(x, y)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn n0_table() {
        let u: Vec<_> = (0..6).map(|a| coeffs(0, a).unwrap().u).collect();
        let v: Vec<_> = (0..6).map(|a| coeffs(0, a).unwrap().v).collect();
        assert_eq!(u, [3, -1, 5, -4, 13, -16].map(b));
        assert_eq!(v, [3, 2, 6, 11, 26, 57].map(b));
    }

    #[test]
    fn closed_forms_a3_a6() {
        for n in -20..40i64 {
            let c3 = coeffs(n, 3).unwrap();
            assert_eq!(c3.u, b(n.pow(3) + 6 * n - 4));
            assert_eq!(c3.v, b(n.pow(3) + 3 * n * n + 9 * n + 11));
            let c6 = coeffs(n, 6).unwrap();
            let u6 = n.pow(6) + 12 * n.pow(4) - 6 * n.pow(3) + 42 * n * n - 30 * n + 38;
            let v6 = n.pow(6) + 6 * n.pow(5) + 27 * n.pow(4) + 74 * n.pow(3) + 147 * n * n + 186 * n + 129;
            assert_eq!((c6.u, c6.v), (b(u6), b(v6)));
        }
    }

    #[test]
    fn oracle_small() {
        for n in -5..10 {
            let c = coeffs_oracle(n, 1).unwrap();
            assert_eq!((c.u, c.v), (b(n - 1), b(n + 2)));
        }
        let c = coeffs_oracle(0, 4).unwrap();
        assert_eq!((c.u, c.v), (b(13), b(26)));
        assert_eq!(coeffs_oracle(7, 20).unwrap(), coeffs(7, 20).unwrap());
    }

    #[test]
    fn degenerate_seed() {
        let x = b(5);
        let y = b(2);
        assert!(matches!(eval_form(3, 0, &x, &y), Err(Error::DegenerateForm)));
        assert_eq!(eval_form_allow_degenerate(3, 0, &x, &y).unwrap(), b(27));
    }

    #[test]
    fn negative_a_rejected_by_coeffs() {
        assert!(coeffs(1, -1).is_err());
        assert!(coeffs_oracle(1, -1).is_err());
    }

    #[test]
    fn sample_values() {
        for n in 0..30 {
            assert_eq!(eval_form(n, 1, &b(-1), &b(1)).unwrap(), b(1));
            assert_eq!(eval_form(n, 1, &b(1), &b(-1)).unwrap(), b(-1));
            for a in 1..8 {
                assert_eq!(eval_form(n, a, &b(1), &b(0)).unwrap(), b(1));
                assert_eq!(eval_form(n, a, &b(0), &b(-1)).unwrap(), b(1));
            }
        }
        assert_eq!(eval_form(0, 2, &b(13), &b(4)).unwrap(), b(1));
        assert_eq!(eval_form(4, 2, &b(3), &b(2)).unwrap(), b(1));
    }

    #[test]
    fn cache_respects_limit() {
        let cache = CoeffCache::new(3);
        for a in 1..10 {
            assert_eq!(cache.get(2, a).unwrap(), coeffs(2, a).unwrap());
        }
        assert_eq!(cache.len(), 3);
        assert_eq!(cache.eval(2, -3, &b(4), &b(1)).unwrap(), eval_form(2, -3, &b(4), &b(1)).unwrap());
    }
}
