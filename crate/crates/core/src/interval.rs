//! Outward-rounded interval arithmetic over dyadic rationals.
//!
//! Every [`Interval`] is guaranteed to contain the exact real value it stands
//! for. Endpoints are dyadic rationals `m * 2^e` with arbitrary-precision
//! mantissas; after each operation the lower endpoint is rounded towards
//! negative infinity and the upper endpoint towards positive infinity, keeping
//! at most `prec` significant bits. A precision of `0` means "exact": no
//! rounding is applied, which keeps integer arithmetic exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Working precision used when an operation that cannot be exact (division,
/// logarithm) is applied to intervals that are both exact.
pub const EXACT_FALLBACK_PREC: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
}

/// A dyadic rational `mant * 2^exp`, kept with an odd mantissa (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::new(v.into(), 0)
    }

    fn normalized(mut self) -> Self {
        match self.mant.trailing_zeros() {
            None => self.exp = 0,
            Some(0) => {}
            Some(tz) => {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// `self * 2^k`, exact.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    pub fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub_exact(&self, other: &Dyadic) -> Dyadic {
        self.add_exact(&-other)
    }

    pub fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }.normalized()
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    /// `prec == 0` returns the value unchanged.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if prec == 0 || bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        let mant = match dir {
            Round::Floor => floor_shr(&self.mant, shift),
            Round::Ceil => -floor_shr(&-&self.mant, shift),
        };
        Dyadic::new(mant, self.exp + shift as i64)
    }

    /// `self / other` rounded to `prec` bits in direction `dir`.
    pub fn div_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let prec = if prec == 0 { EXACT_FALLBACK_PREC } else { prec };
        let k = (prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let num = &self.mant << k as usize;
        let (num, den) = if other.mant.is_negative() {
            (-num, -&other.mant)
        } else {
            (num, other.mant.clone())
        };
        let q = match dir {
            Round::Floor => num.div_floor(&den),
            Round::Ceil => -((-num).div_floor(&den)),
        };
        Dyadic::new(q, self.exp - other.exp - k).round(prec, dir)
    }

    /// `p / q` rounded to `prec` bits in direction `dir`.
    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_int(p.clone()).div_round(&Dyadic::from_int(q.clone()), prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            floor_shr(&self.mant, (-self.exp) as usize)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_ratio(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn cmp_ratio(&self, r: &BigRational) -> Ordering {
        // r has a positive denominator after normalisation.
        let (p, q) = (r.numer(), r.denom());
        if self.exp >= 0 {
            ((&self.mant << self.exp as usize) * q).cmp(p)
        } else {
            (&self.mant * q).cmp(&(p << (-self.exp) as usize))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.mant >> shift as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    /// Decimal rendering with `digits` fractional digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.mul_exact(&Dyadic::from_int(scale));
        let v = match dir {
            Round::Floor => scaled.floor(),
            Round::Ceil => scaled.ceil(),
        };
        let neg = v.is_negative();
        let s = v.abs().to_string();
        let d = digits as usize;
        let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
        let (int, frac) = s.split_at(s.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

impl Dyadic {
    /// Scientific rendering `d.ddd...e±k` with `sig` significant digits,
    /// rounded in `dir`.
    pub fn to_sci(&self, sig: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let r = self.to_ratio();
        let ten = BigRational::from_integer(BigInt::from(10));
        let scale = |k: i64| if k >= 0 { &r * ten.pow(k as i32) } else { &r / ten.pow((-k) as i32) };
        let lo_mag = BigInt::from(10).pow(sig - 1);
        let hi_mag = BigInt::from(10).pow(sig);
        let log2 = self.mant.bits() as i64 + self.exp - 1;
        let mut e10 = (log2 as f64 * std::f64::consts::LOG10_2).floor() as i64;
        // pin down the decimal exponent from the truncated magnitude
        loop {
            let t = scale(sig as i64 - 1 - e10).abs().floor().to_integer();
            if t < lo_mag {
                e10 -= 1;
            } else if t >= hi_mag {
                e10 += 1;
            } else {
                break;
            }
        }
        let scaled = scale(sig as i64 - 1 - e10);
        let mut v = match dir {
            Round::Floor => scaled.floor(),
            Round::Ceil => scaled.ceil(),
        }
        .to_integer();
        if v.abs() == hi_mag {
            v /= 10;
            e10 += 1;
        }
        let sign = if v.is_negative() { "-" } else { "" };
        let digits = v.abs().to_string();
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

// num-bigint shifts negative values towards negative infinity, but spell the
// floor out so the rounding direction does not hinge on that detail.
fn floor_shr(v: &BigInt, shift: usize) -> BigInt {
    if shift == 0 {
        return v.clone();
    }
    if v.is_negative() {
        let m = v.magnitude();
        let q = m >> shift;
        let exact = (&q << shift) == *m;
        let q = BigInt::from(q);
        if exact {
            -q
        } else {
            -q - 1
        }
    } else {
        v >> shift
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.mant.sign() != other.mant.sign() || self.exp == other.exp {
            return sign_rank(self.mant.sign())
                .cmp(&sign_rank(other.mant.sign()))
                .then_with(|| self.mant.cmp(&other.mant));
        }
        sign_rank(self.sub_exact(other).mant.sign()).cmp(&0)
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// A closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo: lo.round(prec, Round::Floor), hi: hi.round(prec, Round::Ceil), prec }
    }

    pub fn point(d: Dyadic) -> Self {
        Interval { lo: d.clone(), hi: d, prec: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::point(Dyadic::from_int(v))
    }

    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_ratio(p, q, prec, Round::Floor),
            hi: Dyadic::from_ratio(p, q, prec, Round::Ceil),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same interval, rounded outward to `prec` bits and carrying that precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub_exact(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).shl(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains(&Dyadic::from_int(v.clone()))
    }

    pub fn contains_ratio(&self, r: &BigRational) -> bool {
        self.lo.cmp_ratio(r) != Ordering::Greater && self.hi.cmp_ratio(r) != Ordering::Less
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certainly `self < other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// Certainly `self <= other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    /// `Some(true)` if certainly `self <= other`, `Some(false)` if certainly
    /// `self > other`, `None` when the intervals overlap.
    pub fn decide_le(&self, other: &Interval) -> Option<bool> {
        if self.hi <= other.lo {
            Some(true)
        } else if self.lo > other.hi {
            Some(false)
        } else {
            None
        }
    }

    fn join_prec(&self, other: &Interval) -> u32 {
        self.prec.max(other.prec)
    }

    fn div_prec(&self) -> u32 {
        if self.prec == 0 {
            EXACT_FALLBACK_PREC
        } else {
            self.prec
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.sign() != Sign::Minus {
            self.clone()
        } else if self.hi.sign() != Sign::Plus {
            -self
        } else {
            let m = if self.lo.abs() > self.hi { self.lo.abs() } else { self.hi.clone() };
            Interval { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        let p = a.prec;
        Interval {
            lo: a.lo.mul_exact(&a.lo).round(p, Round::Floor),
            hi: a.hi.mul_exact(&a.hi).round(p, Round::Ceil),
            prec: p,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        self * &Interval::from_int(k.clone())
    }

    pub fn div_int(&self, k: &BigInt) -> Interval {
        assert!(!k.is_zero());
        let d = Dyadic::from_int(k.clone());
        let p = self.div_prec();
        let (a, b) = (
            self.lo.div_round(&d, p, if k.is_positive() { Round::Floor } else { Round::Ceil }),
            self.hi.div_round(&d, p, if k.is_positive() { Round::Ceil } else { Round::Floor }),
        );
        if k.is_positive() {
            Interval { lo: a, hi: b, prec: p }
        } else {
            Interval { lo: b, hi: a, prec: p }
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.div_prec();
        let one = Dyadic::from_int(1);
        Ok(Interval {
            lo: one.div_round(&self.hi, p, Round::Floor),
            hi: one.div_round(&self.lo, p, Round::Ceil),
            prec: p,
        })
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        let r = other.recip()?;
        let p = self.join_prec(other).max(r.prec);
        Ok((self * &r).with_prec(p))
    }

    /// `self^e` for `e >= 0`; tight for intervals containing zero.
    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::from_int(1);
        }
        let p = self.prec;
        let even = e.is_multiple_of(2);
        if self.lo.sign() != Sign::Minus {
            Interval { lo: pow_round(&self.lo, e, p, Round::Floor), hi: pow_round(&self.hi, e, p, Round::Ceil), prec: p }
        } else if self.hi.sign() != Sign::Plus {
            let (l, h) = (self.lo.abs(), self.hi.abs());
            if even {
                Interval { lo: pow_round(&h, e, p, Round::Floor), hi: pow_round(&l, e, p, Round::Ceil), prec: p }
            } else {
                Interval { lo: -pow_round(&l, e, p, Round::Ceil), hi: -pow_round(&h, e, p, Round::Floor), prec: p }
            }
        } else {
            let (l, h) = (self.lo.abs(), self.hi.clone());
            if even {
                let m = if l > h { l } else { h };
                Interval { lo: Dyadic::zero(), hi: pow_round(&m, e, p, Round::Ceil), prec: p }
            } else {
                Interval { lo: -pow_round(&l, e, p, Round::Ceil), hi: pow_round(&h, e, p, Round::Ceil), prec: p }
            }
        }
    }

    /// `self^e` for any integer `e`; negative powers need `self` to exclude zero.
    pub fn powi(&self, e: i64) -> Result<Interval> {
        let base = self.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Ok(base)
        } else {
            base.recip()
        }
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Result<Interval> {
        if !self.is_positive() {
            return Err(Error::LogDomain(self.to_string()));
        }
        let p = self.div_prec();
        let lo = ln_point(&self.lo, p);
        let hi = if self.hi == self.lo { lo.clone() } else { ln_point(&self.hi, p) };
        Ok(Interval { lo: lo.lo, hi: hi.hi, prec: p })
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// `[lo, hi]` with `digits` decimals, rounded outward.
    pub fn to_decimal(&self, digits: u32) -> String {
        format!("[{}, {}]", self.lo.to_decimal(digits, Round::Floor), self.hi.to_decimal(digits, Round::Ceil))
    }

    /// Intersection, if nonempty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        if !self.intersects(other) {
            return None;
        }
        let lo = if self.lo > other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi < other.hi { self.hi.clone() } else { other.hi.clone() };
        Some(Interval { lo, hi, prec: self.join_prec(other) })
    }

    /// Upper bound on `log2(width)`, or `None` for a point interval.
    pub fn width_log2(&self) -> Option<i64> {
        let w = self.width();
        if w.is_zero() {
            None
        } else {
            Some(w.bits() as i64 + w.exponent())
        }
    }

    /// Upper bound on `log2(|x|)` over the interval, or `None` if it is `[0, 0]`.
    pub fn mag_log2(&self) -> Option<i64> {
        let m = self.abs().hi;
        if m.is_zero() {
            None
        } else {
            Some(m.bits() as i64 + m.exponent())
        }
    }

    /// Whether the width is below `2^-bits` relative to the smallest magnitude
    /// in the interval. False for intervals containing zero.
    pub fn rel_width_below(&self, bits: i64) -> bool {
        if self.contains_zero() {
            return self.is_point();
        }
        let w = match self.width_log2() {
            None => return true,
            Some(w) => w,
        };
        let a = self.abs();
        // lower bound on log2 |lo|: bits + exp - 1
        let min_log2 = a.lo.bits() as i64 + a.lo.exponent() - 1;
        w <= min_log2 - bits
    }
}

fn pow_round(base: &Dyadic, e: u32, prec: u32, dir: Round) -> Dyadic {
    // base >= 0; repeated squaring with directed rounding stays monotone.
    let mut result = Dyadic::from_int(1);
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_exact(&b).round(prec, dir);
        }
        e >>= 1;
        if e > 0 {
            b = b.mul_exact(&b).round(prec, dir);
        }
    }
    result
}

impl serde::Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Interval", 2)?;
        st.serialize_field("lo", &self.lo.to_sci(20, Round::Floor))?;
        st.serialize_field("hi", &self.hi.to_sci(20, Round::Ceil))?;
        st.end()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(12))
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let p = self.join_prec(rhs);
        Interval {
            lo: self.lo.add_exact(&rhs.lo).round(p, Round::Floor),
            hi: self.hi.add_exact(&rhs.hi).round(p, Round::Ceil),
            prec: p,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        let p = self.join_prec(rhs);
        Interval {
            lo: self.lo.sub_exact(&rhs.hi).round(p, Round::Floor),
            hi: self.hi.sub_exact(&rhs.lo).round(p, Round::Ceil),
            prec: p,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let p = self.join_prec(rhs);
        if self.lo.sign() != Sign::Minus && rhs.lo.sign() != Sign::Minus {
            return Interval {
                lo: self.lo.mul_exact(&rhs.lo).round(p, Round::Floor),
                hi: self.hi.mul_exact(&rhs.hi).round(p, Round::Ceil),
                prec: p,
            };
        }
        let cands = [
            self.lo.mul_exact(&rhs.lo),
            self.lo.mul_exact(&rhs.hi),
            self.hi.mul_exact(&rhs.lo),
            self.hi.mul_exact(&rhs.hi),
        ];
        let lo = cands.iter().min().unwrap().round(p, Round::Floor);
        let hi = cands.iter().max().unwrap().round(p, Round::Ceil);
        Interval { lo, hi, prec: p }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: &Interval) -> Interval {
                (&self).$m(rhs)
            }
        }
        impl $tr<Interval> for &Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

static LN2_CACHE: Mutex<Option<Interval>> = Mutex::new(None);

/// `ln 2` to at least `prec` bits.
pub fn ln2(prec: u32) -> Interval {
    {
        let cache = LN2_CACHE.lock().unwrap();
        if let Some(c) = cache.as_ref() {
            if c.prec >= prec {
                return c.with_prec(prec);
            }
        }
    }
    let w = prec + 16;
    let third = Interval::from_ratio(&BigInt::one(), &BigInt::from(3), w + 8);
    let v = two_atanh(&third, w);
    *LN2_CACHE.lock().unwrap() = Some(v.clone());
    v.with_prec(prec)
}

/// `2 atanh(z)` for `|z| <= 1/3`, with a certified truncation bound.
fn two_atanh(z: &Interval, w: u32) -> Interval {
    let z2 = z.sqr();
    let mut term = z.clone();
    let mut sum = z.clone();
    let stop = Dyadic::new(BigInt::one(), -(w as i64) - 6);
    let mut k: u64 = 1;
    loop {
        term = &term * &z2;
        k += 2;
        sum = &sum + &term.div_int(&BigInt::from(k));
        if term.abs().hi < stop {
            break;
        }
    }
    // Remaining terms sum to at most |z|^(k+2) / (1 - z^2) <= 2 |z|^k.
    let tail = term.abs().hi.shl(1);
    let tail = Interval { lo: -&tail, hi: tail, prec: w };
    (&sum + &tail).mul_int(&BigInt::from(2))
}

fn ln_point(d: &Dyadic, prec: u32) -> Interval {
    debug_assert!(d.is_positive());
    let w = prec + 16;
    // d = y * 2^e2 with y in [3/4, 3/2)
    let b = d.bits() as i64;
    let mut e2 = b + d.exponent();
    let mut y = Dyadic::new(d.mantissa().clone(), -b);
    if y < Dyadic::new(BigInt::from(3), -2) {
        y = y.shl(1);
        e2 -= 1;
    }
    let one = Dyadic::from_int(1);
    let num = Interval::point(y.sub_exact(&one));
    let den = Interval::point(y.add_exact(&one)).with_prec(w);
    let z = num.with_prec(w).div(&den).expect("y + 1 > 0");
    let ln_y = two_atanh(&z, w);
    let r = if e2 == 0 { ln_y } else { &ln_y + &ln2(w).mul_int(&BigInt::from(e2)) };
    r.with_prec(prec)
}
