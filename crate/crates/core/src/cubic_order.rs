//! Exact arithmetic in the order `Z[λ0]`, `λ0` the dominant root of
//! `f_n(X) = X^3 - (n-1) X^2 - (n+2) X - 1`.
//!
//! Elements are stored in the power basis `{1, λ0, λ0^2}`. `f_n` has no
//! rational root for any integer `n` (the only candidates are `±1`, and
//! `f_n(1) = -2n - 1`, `f_n(-1) = 1`), so it is irreducible and `Z[λ0]` is an
//! order in a cubic field; no runtime check is made. Whether `Z[λ0]` is the
//! maximal order is never needed here.
//!
//! The Galois group is cyclic, generated by `σ: λ0 ↦ λ1 = -1/(λ0 + 1)`, which
//! then sends `λ1 ↦ λ2 = -(λ0 + 1)/λ0` and `λ2 ↦ λ0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::roots::{isolate_roots, RootTriple};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderElement {
    n: i64,
    c: [BigInt; 3],
}

type Matrix3 = [[BigInt; 3]; 3];

impl OrderElement {
    pub fn new<T: Into<BigInt>>(n: i64, c0: T, c1: T, c2: T) -> Self {
        OrderElement { n, c: [c0.into(), c1.into(), c2.into()] }
    }

    pub fn from_coeffs(n: i64, c: [BigInt; 3]) -> Self {
        OrderElement { n, c }
    }

    pub fn from_int<T: Into<BigInt>>(n: i64, k: T) -> Self {
        OrderElement { n, c: [k.into(), BigInt::zero(), BigInt::zero()] }
    }

    pub fn zero(n: i64) -> Self {
        Self::from_int(n, 0)
    }

    pub fn one(n: i64) -> Self {
        Self::from_int(n, 1)
    }

    /// The generator `λ0`.
    pub fn lambda0(n: i64) -> Self {
        Self::new(n, 0, 1, 0)
    }

    /// `λ1 = -1/(λ0 + 1) = λ0^2 - n λ0 - 2`.
    pub fn lambda1(n: i64) -> Self {
        OrderElement { n, c: [BigInt::from(-2), BigInt::from(-n), BigInt::one()] }
    }

    /// `λ2 = -(λ0 + 1)/λ0 = -λ0^2 + (n-1) λ0 + (n+1)`.
    pub fn lambda2(n: i64) -> Self {
        OrderElement { n, c: [BigInt::from(n) + 1, BigInt::from(n) - 1, BigInt::from(-1)] }
    }

    /// `λ_i` for `i` in `0..3`.
    pub fn lambda(n: i64, i: usize) -> Self {
        match i % 3 {
            0 => Self::lambda0(n),
            1 => Self::lambda1(n),
            _ => Self::lambda2(n),
        }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt; 3] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.c[1].is_zero() && self.c[2].is_zero() {
            Some(&self.c[0])
        } else {
            None
        }
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ParameterMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        Ok(self.add_unchecked(&-other))
    }

    /// Product reduced modulo `f_n(λ0)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        OrderElement { n: self.n, c: [&self.c[0] + &other.c[0], &self.c[1] + &other.c[1], &self.c[2] + &other.c[2]] }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let [a0, a1, a2] = &self.c;
        let [b0, b1, b2] = &other.c;
        let p0 = a0 * b0;
        let p1 = a0 * b1 + a1 * b0;
        let p2 = a0 * b2 + a1 * b1 + a2 * b0;
        let p3 = a1 * b2 + a2 * b1;
        let p4 = a2 * b2;
        // λ^3 = α λ^2 + β λ + 1, λ^4 = (α^2 + β) λ^2 + (αβ + 1) λ + α
        let alpha = BigInt::from(self.n - 1);
        let beta = BigInt::from(self.n + 2);
        let c0 = p0 + &p3 + &alpha * &p4;
        let c1 = p1 + &beta * &p3 + (&alpha * &beta + 1) * &p4;
        let c2 = p2 + &alpha * &p3 + (&alpha * &alpha + &beta) * &p4;
        OrderElement { n: self.n, c: [c0, c1, c2] }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        OrderElement { n: self.n, c: [&self.c[0] * k, &self.c[1] * k, &self.c[2] * k] }
    }

    /// Matrix of multiplication by `self` on `{1, λ0, λ0^2}`; column `j` holds
    /// the coordinates of `self * λ0^j`.
    pub fn mul_matrix(&self) -> Matrix3 {
        let alpha = BigInt::from(self.n - 1);
        let beta = BigInt::from(self.n + 2);
        let times_lambda = |v: &[BigInt; 3]| -> [BigInt; 3] {
            [v[2].clone(), &v[0] + &beta * &v[2], &v[1] + &alpha * &v[2]]
        };
        let col0 = self.c.clone();
        let col1 = times_lambda(&col0);
        let col2 = times_lambda(&col1);
        let cols = [col0, col1, col2];
        std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()))
    }

    /// The product of the three conjugates, as the determinant of the
    /// multiplication matrix.
    pub fn norm(&self) -> BigInt {
        det3(&self.mul_matrix())
    }

    pub fn trace(&self) -> BigInt {
        let m = self.mul_matrix();
        &m[0][0] + &m[1][1] + &m[2][2]
    }

    /// `(e1, e2, e3)` with characteristic polynomial `X^3 - e1 X^2 + e2 X - e3`.
    pub fn char_poly(&self) -> (BigInt, BigInt, BigInt) {
        let m = self.mul_matrix();
        let minor = |i: usize, j: usize| &m[i][i] * &m[j][j] - &m[i][j] * &m[j][i];
        (self.trace(), minor(0, 1) + minor(0, 2) + minor(1, 2), det3(&m))
    }

    /// `σ(self)`, substituting `λ1` for `λ0`.
    pub fn galois(&self) -> Self {
        let l1 = Self::lambda1(self.n);
        let l1sq = l1.mul_unchecked(&l1);
        Self::from_int(self.n, self.c[0].clone())
            .add_unchecked(&l1.scale(&self.c[1]))
            .add_unchecked(&l1sq.scale(&self.c[2]))
    }

    /// `σ^k(self)`.
    pub fn galois_pow(&self, k: usize) -> Self {
        let mut g = self.clone();
        for _ in 0..k % 3 {
            g = g.galois();
        }
        g
    }

    /// Inverse of a unit, via the adjugate of the multiplication matrix.
    pub fn invert_unit(&self) -> Result<Self> {
        let m = self.mul_matrix();
        let det = det3(&m);
        if det.abs() != BigInt::one() {
            return Err(Error::NotAUnit { norm: det });
        }
        // first column of adj(M) = cofactors along the first row
        let cof = |r: usize, c: usize| {
            let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
            let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
            let minor = &m[rows[0]][cols[0]] * &m[rows[1]][cols[1]] - &m[rows[0]][cols[1]] * &m[rows[1]][cols[0]];
            if (r + c).is_multiple_of(2) {
                minor
            } else {
                -minor
            }
        };
        let c = [cof(0, 0) * &det, cof(0, 1) * &det, cof(0, 2) * &det];
        Ok(OrderElement { n: self.n, c })
    }

    /// `self / k` when every coordinate is divisible by `k`.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut c = self.c.clone();
        for v in c.iter_mut() {
            let (q, r) = v.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            *v = q;
        }
        Some(OrderElement { n: self.n, c })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Integer power; negative exponents require a unit.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Ok(p)
        } else {
            p.invert_unit()
        }
    }

    /// The three real embeddings `λ0 ↦ λ_i`, using the given root enclosures.
    pub fn embed_with(&self, roots: &RootTriple) -> [Interval; 3] {
        assert_eq!(roots.n(), self.n, "root triple for a different n");
        let c: [Interval; 3] = std::array::from_fn(|k| Interval::from_int(self.c[k].clone()));
        roots.lams().clone().map(|l| &(&(&c[2] * &l + &c[1]) * &l) + &c[0])
    }

    /// Certified enclosures of the three embeddings at `prec` bits.
    pub fn embed(&self, prec: u32) -> Result<[Interval; 3]> {
        if prec < 32 {
            return Err(Error::Precondition(format!("precision {prec} < 32 bits")));
        }
        let roots = isolate_roots(self.n, prec)?;
        Ok(self.embed_with(&roots))
    }
}

fn det3(m: &Matrix3) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

// Operator forms panic on mismatched `n`; use the `checked_*` methods when the
// parameters come from outside.
impl Add for &OrderElement {
    type Output = OrderElement;
    fn add(self, rhs: &OrderElement) -> OrderElement {
        self.checked_add(rhs).expect("order elements for different n")
    }
}

impl Sub for &OrderElement {
    type Output = OrderElement;
    fn sub(self, rhs: &OrderElement) -> OrderElement {
        self.checked_sub(rhs).expect("order elements for different n")
    }
}

impl Mul for &OrderElement {
    type Output = OrderElement;
    fn mul(self, rhs: &OrderElement) -> OrderElement {
        self.checked_mul(rhs).expect("order elements for different n")
    }
}

impl Neg for &OrderElement {
    type Output = OrderElement;
    fn neg(self) -> OrderElement {
        OrderElement { n: self.n, c: [-&self.c[0], -&self.c[1], -&self.c[2]] }
    }
}

impl Neg for OrderElement {
    type Output = OrderElement;
    fn neg(self) -> OrderElement {
        -&self
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*l + {}*l^2", self.c[0], self.c[1], self.c[2])
    }
}

impl Serialize for OrderElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OrderElement", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("c", &self.c.iter().map(|v| v.to_string()).collect::<Vec<_>>())?;
        st.end()
    }
}
