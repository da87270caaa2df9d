use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Default starting precision for certified computations.
pub(crate) const START_PREC: u32 = 128;

/// Hard cap on automatic precision growth.
pub(crate) const PREC_CAP: u32 = 100_000;

/// `ceil(m^(1/3))` for `m >= 0`.
pub(crate) fn cbrt_ceil(m: &BigInt) -> BigInt {
    let c = m.abs().cbrt();
    if &c * &c * &c < m.abs() {
        c + 1
    } else {
        c
    }
}

pub(crate) fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Serde adapter writing big integers as decimal strings.
pub(crate) mod bigint_str {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        super::ser_bigint(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| de::Error::custom(format!("not an integer: {s:?}")))
    }
}

/// Run `f` at doubling precisions from `start` until it returns `Some`.
pub(crate) fn with_precision<T>(
    start: u32,
    what: &str,
    mut f: impl FnMut(u32) -> Result<Option<T>>,
) -> Result<T> {
    let mut prec = start.max(32);
    loop {
        if let Some(v) = f(prec)? {
            return Ok(v);
        }
        if prec >= PREC_CAP {
            return Err(Error::PrecisionExhausted { cap: PREC_CAP, what: what.to_string() });
        }
        prec = (prec * 2).min(PREC_CAP);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_ceiling() {
        let cases = [(0, 0), (1, 1), (2, 2), (7, 2), (8, 2), (9, 3), (26, 3), (27, 3), (28, 4), (1000, 10)];
        for (m, c) in cases {
            assert_eq!(cbrt_ceil(&BigInt::from(m)), BigInt::from(c), "m={m}");
        }
    }
}
