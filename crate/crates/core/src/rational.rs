//! Exact rational scalars.
//!
//! Geometry and metric data use 64-bit rationals: curve vertices have integer
//! coordinates once heights are integral, and every other quantity is a
//! midpoint or barycenter of those. The exact LP runs on big rationals.

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Q = Rational64;

#[inline]
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

#[inline]
pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// `n/d`, or `n` when the denominator is one.
pub fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Parse {
        line: 0,
        msg: format!("not a rational number: {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter: rationals as `"n/d"` strings.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_q_vec {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Option<Q>`; `None` is `null`.
pub mod serde_opt_q {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(fmt_q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        let v = Option::<String>::deserialize(d)?;
        v.map(|s| parse_q(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(fmt_q(&q(6, 4)), "3/2");
        assert_eq!(fmt_q(&qi(-3)), "-3");
        assert_eq!(parse_q("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_q("-7").unwrap(), qi(-7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}
