//! Continued fractions of certified intervals and small-value witnesses
//! `|F_{n,a}(x, y)| <= y (n+4)^a` built from convergents of `λ2^a`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::coeffs;
use crate::interval::{Dyadic, Interval};
use crate::roots::isolate_roots;
use crate::util::{with_precision, START_PREC};

/// Partial quotients certified by the interval, i.e. shared by every real in
/// it. The flag is set when the interval is a rational point whose expansion
/// has terminated.
pub fn partial_quotients(alpha: &Interval, max_terms: usize) -> (Vec<BigInt>, bool) {
    let mut lo = alpha.lo().to_ratio();
    let mut hi = alpha.hi().to_ratio();
    let mut out = Vec::new();
    while out.len() < max_terms {
        let fl = lo.floor();
        if fl != hi.floor() {
            break;
        }
        let t = fl.to_integer();
        if lo == hi {
            out.push(t);
            if lo.is_integer() {
                return (out, true);
            }
            lo = (&lo - &fl).recip();
            hi = lo.clone();
            continue;
        }
        out.push(t);
        if lo == fl {
            // the remainder may be 0, so the next quotient is unknown
            break;
        }
        let (nlo, nhi) = ((&hi - &fl).recip(), (&lo - &fl).recip());
        lo = nlo;
        hi = nhi;
    }
    (out, false)
}

/// Convergents `p_k / q_k` from partial quotients.
pub fn convergents_from_quotients(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    quotients
        .iter()
        .map(|a| {
            let p = a * &p1 + &p0;
            let q = a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p.clone());
            q0 = std::mem::replace(&mut q1, q.clone());
            (p, q)
        })
        .collect()
}

/// Up to `count` convergents certified by `alpha`.
pub fn convergents(alpha: &Interval, count: usize) -> Vec<(BigInt, BigInt)> {
    convergents_from_quotients(&partial_quotients(alpha, count).0)
}

/// `count` convergents of the real enclosed by `alpha_at(prec)`, raising the
/// precision until enough quotients are certified. Fewer are returned only
/// when the number is rational with a shorter expansion.
pub fn convergents_refined(
    count: usize,
    mut alpha_at: impl FnMut(u32) -> Result<Interval>,
) -> Result<Vec<(BigInt, BigInt)>> {
    with_precision(START_PREC, "certifying continued fraction quotients", |prec| {
        let (q, done) = partial_quotients(&alpha_at(prec)?, count);
        Ok((done || q.len() >= count).then(|| convergents_from_quotients(&q)))
    })
}

/// Convergents of `λ_i^a`.
pub fn lambda_power_convergents(n: i64, i: usize, a: i64, count: usize) -> Result<Vec<(BigInt, BigInt)>> {
    convergents_refined(count, |prec| Ok(isolate_roots(n, prec)?.powers(a)[i].clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: i64,
    pub a: i64,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub y: BigInt,
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub value: BigInt,
    /// `y (n+4)^a`.
    #[serde(serialize_with = "crate::util::ser_bigint")]
    pub bound: BigInt,
    /// `|value| <= (1/2) y (1 + ε) |λ2^a - λ1^a| |λ0^a - λ2^a|` with `ε = 1/8`.
    pub refined_bound: bool,
    /// `1/(2 y^2) <= (ε/3) min(|λ2^a - λ1^a|, |λ0^a - λ2^a|)`, the size
    /// condition under which the refined bound is guaranteed.
    pub y_condition: bool,
}

/// Slack `ε` in the refined bound, as `EPS_NUM / EPS_DEN`.
pub const EPS_NUM: i64 = 1;
pub const EPS_DEN: i64 = 8;

fn interval_min(x: &Interval, y: &Interval) -> Interval {
    let lo = x.lo().min(y.lo()).clone();
    let hi = x.hi().min(y.hi()).clone();
    Interval::new(lo, hi, x.prec().max(y.prec()))
}

/// The first `count` convergents `(x, y)` of `λ2^a` (strictly increasing `y`)
/// with `y |x - λ2^a y| <= 1/2` and `|F_{n,a}(x, y)| <= y (n+4)^a`.
pub fn small_value_witnesses(n: i64, a: i64, count: usize) -> Result<Vec<Witness>> {
    if a < 1 {
        return Err(Error::Precondition(format!("witnesses need a >= 1, got {a}")));
    }
    let form = coeffs(n, a)?;
    let base = BigInt::from(n + 4).pow(a as u32);
    let half = Interval::point(Dyadic::new(BigInt::one(), -1));
    with_precision(START_PREC, "certifying small-value witnesses", |prec| {
        let lam_a = isolate_roots(n, prec)?.powers(a);
        let alpha = &lam_a[2];
        let d21 = (&lam_a[2] - &lam_a[1]).abs();
        let d02 = (&lam_a[0] - &lam_a[2]).abs();
        let product = &d21 * &d02;
        let y_rhs = interval_min(&d21, &d02).mul_int(&BigInt::from(EPS_NUM)).div_int(&BigInt::from(3 * EPS_DEN));

        let mut out: Vec<Witness> = Vec::new();
        // a rational enclosure cannot terminate for an irrational λ2^a
        for (x, y) in convergents(alpha, usize::MAX) {
            if out.last().is_some_and(|w| y <= w.y) {
                continue;
            }
            let dist = (&Interval::from_int(x.clone()) - &alpha.mul_int(&y)).abs().mul_int(&y);
            match dist.decide_le(&half) {
                None => return Ok(None),
                Some(false) => continue,
                Some(true) => {}
            }
            let value = form.eval(&x, &y);
            let bound = &y * &base;
            if value.abs() > bound {
                continue;
            }
            let refined_rhs = product.mul_int(&(&y * (EPS_DEN + EPS_NUM))).div_int(&BigInt::from(2 * EPS_DEN));
            let Some(refined_bound) = Interval::from_int(value.abs()).decide_le(&refined_rhs) else {
                return Ok(None);
            };
            let y_lhs = Interval::from_ratio(&BigInt::one(), &(2 * &y * &y), prec);
            let Some(y_condition) = y_lhs.decide_le(&y_rhs) else {
                return Ok(None);
            };
            if y_condition && !refined_bound {
                return Err(Error::Invariant(format!(
                    "refined bound fails at n={n}, a={a}, (x, y) = ({x}, {y}) although y is large enough"
                )));
            }
            out.push(Witness { n, a, x, y, value, bound, refined_bound, y_condition });
            if out.len() == count {
                return Ok(Some(out));
            }
        }
        Ok(None)
    })
}

/// `|p/q - α| < 1/q^2`, certified.
pub fn classical_bound_holds(alpha: &Interval, p: &BigInt, q: &BigInt) -> Option<bool> {
    let prec = alpha.prec().max(64);
    let r = Interval::from_ratio(p, q, prec);
    let lhs = (&r - alpha).abs();
    let rhs = Interval::from_ratio(&BigInt::one(), &(q * q), prec);
    if lhs.certainly_lt(&rhs) {
        Some(true)
    } else if rhs.certainly_le(&lhs) {
        Some(false)
    } else {
        None
    }
}

/// Exact value of a finite continued fraction, for cross-checks.
pub fn quotients_value(quotients: &[BigInt]) -> Option<BigRational> {
    let mut it = quotients.iter().rev();
    let mut v = BigRational::from_integer(it.next()?.clone());
    for a in it {
        v = BigRational::from_integer(a.clone()) + v.recip();
    }
    Some(v)
}
