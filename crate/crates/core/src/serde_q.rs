//! Serde adapters writing rationals as `"p/q"` strings (`"p"` when q = 1).

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{format_rational, parse_rational, Rational};

pub mod scalar {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        format_rational(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RawScalar::deserialize(d)?;
        raw.parse().map_err(D::Error::custom)
    }
}

pub mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<RawScalar>::deserialize(d)?;
        raw.iter()
            .map(|x| x.parse().map_err(D::Error::custom))
            .collect()
    }
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<RawScalar>>::deserialize(d)?;
        raw.iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.parse().map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Accepts `"p/q"` strings and plain JSON integers on input.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Text(String),
    Int(i64),
}

impl RawScalar {
    fn parse(&self) -> crate::Result<Rational> {
        match self {
            RawScalar::Text(t) => parse_rational(t),
            RawScalar::Int(i) => Ok(crate::linalg::int(*i)),
        }
    }
}

pub mod option_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let raw = Option::<RawScalar>::deserialize(d)?;
        raw.map(|x| x.parse().map_err(D::Error::custom)).transpose()
    }
}
