//! Serde adapters writing big integers as decimal strings.
//!
//! Exponents routinely exceed 64 bits, so every integer in every file format
//! is a JSON string holding its decimal expansion.

use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

fn parse<'de, D, T>(s: &str) -> Result<T, D::Error>
where
    D: Deserializer<'de>,
    T: FromStr,
{
    s.parse()
        .map_err(|_| D::Error::custom(format!("invalid decimal integer {s:?}")))
}

pub mod big {
    use super::*;

    pub fn serialize<T: ToString, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let s = String::deserialize(d)?;
        parse::<D, T>(&s)
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<T: ToString, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse::<D, T>(s))
            .collect()
    }
}

pub mod big_opt {
    use super::*;

    pub fn serialize<T: ToString, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(ToString::to_string).serialize(s)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<Option<T>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse::<D, T>(&s))
            .transpose()
    }
}
