//! Polynomial file format and expression parsing.
//!
//! The file format is a JSON object with a single key `"terms"` holding
//! `[coefficient, exponent]` pairs as decimal strings, exponents strictly
//! increasing:
//!
//! ```text
//! {"terms":[["1","0"],["-2","3"],["3","50"]]}
//! ```

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{SparsePoly, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub terms: Vec<(String, String)>,
}

impl From<&SparsePoly> for PolyFile {
    fn from(f: &SparsePoly) -> Self {
        PolyFile {
            terms: f
                .terms()
                .iter()
                .map(|t| (t.coeff.to_string(), t.exp.to_string()))
                .collect(),
        }
    }
}

impl TryFrom<PolyFile> for SparsePoly {
    type Error = Error;

    fn try_from(file: PolyFile) -> Result<SparsePoly> {
        let mut terms: Vec<Term> = Vec::with_capacity(file.terms.len());
        for (c, e) in &file.terms {
            let coeff: BigInt = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            let exp: BigUint = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            if coeff.is_zero() {
                return Err(Error::Parse(format!("zero coefficient at exponent {exp}")));
            }
            if terms.last().is_some_and(|prev| prev.exp >= exp) {
                return Err(Error::Parse("exponents must be strictly increasing".into()));
            }
            terms.push(Term { coeff, exp });
        }
        Ok(SparsePoly::from_sorted_unchecked(terms))
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = PolyFile::deserialize(d)?;
        SparsePoly::try_from(file).map_err(serde::de::Error::custom)
    }
}

impl SparsePoly {
    /// Canonical compact JSON encoding.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("string-only structure")
    }

    pub fn from_json(text: &str) -> Result<SparsePoly> {
        let file: PolyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        SparsePoly::try_from(file)
    }
}

/// Parses expressions such as `3*x^50 - 2*x^3 + 1`.
pub fn parse_expr(input: &str) -> Result<SparsePoly> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut pos = 0;
    let mut terms: Vec<(BigInt, BigUint)> = Vec::new();
    while pos < chars.len() {
        let mut sign = BigInt::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        } else if !terms.is_empty() {
            return Err(Error::Parse(format!("expected '+' or '-' at offset {pos}")));
        }
        let coeff = read_digits(&chars, &mut pos);
        let has_coeff = coeff.is_some();
        let mut coeff: BigInt = match coeff {
            Some(digits) => digits.parse().expect("digits only"),
            None => BigInt::one(),
        };
        let mut exp = BigUint::zero();
        if has_coeff && pos < chars.len() && chars[pos] == '*' {
            pos += 1;
            if pos >= chars.len() || chars[pos] != 'x' {
                return Err(Error::Parse(format!("expected 'x' at offset {pos}")));
            }
        }
        if pos < chars.len() && chars[pos] == 'x' {
            pos += 1;
            exp = BigUint::one();
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let digits = read_digits(&chars, &mut pos)
                    .ok_or_else(|| Error::Parse(format!("expected exponent at offset {pos}")))?;
                exp = digits.parse().expect("digits only");
            }
        } else if !has_coeff {
            return Err(Error::Parse(format!("expected a term at offset {pos}")));
        }
        coeff *= sign;
        terms.push((coeff, exp));
    }
    Ok(SparsePoly::from_terms(terms))
}

fn read_digits(chars: &[char], pos: &mut usize) -> Option<String> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    (start < *pos).then(|| chars[start..*pos].iter().collect())
}
