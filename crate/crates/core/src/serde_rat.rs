//! Rationals serialize as `"p/q"` strings (integers as `"p/1"`), never as decimals.

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serializer};

pub fn render(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse().ok()?;
            let q: num_bigint::BigInt = q.trim().parse().ok()?;
            if q == 0.into() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&render(r))
}

/// Integers as JSON numbers when they fit in `i64`, strings otherwise.
pub fn serialize_int<S: Serializer>(n: &num_bigint::BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(n) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&n.to_string()),
    }
}

#[allow(dead_code)]
pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let r = BigRational::new((-6).into(), 4.into());
        assert_eq!(render(&r), "-3/2");
        assert_eq!(parse("-3/2"), Some(r));
        assert_eq!(parse("7"), Some(BigRational::from_integer(7.into())));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }
}
