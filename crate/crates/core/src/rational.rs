//! Exact rational numbers used throughout the pipeline.
//!
//! Everything that is compared or certified goes through [`Rat`]; there is
//! no floating point anywhere on the checking path.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = Ratio<i128>;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n as i128)
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(n as i128, d as i128)
}

/// Renders `3`, `-1/2`, ...
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

/// Parses `7`, `-3`, `1/2`, `-1/2` and decimal literals such as `0.25`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: Rat = parse_rat(n)?;
        let d: Rat = parse_rat(d)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    if let Some((whole, fracpart)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches('-');
        if fracpart.is_empty() && whole_digits.is_empty() {
            return Err(err());
        }
        let w: i128 = if whole_digits.is_empty() {
            0
        } else {
            whole_digits.parse().map_err(|_| err())?
        };
        let mut value = Rat::from_integer(w);
        if !fracpart.is_empty() {
            if !fracpart.bytes().all(|b| b.is_ascii_digit()) || fracpart.len() > 30 {
                return Err(err());
            }
            let f: i128 = fracpart.parse().map_err(|_| err())?;
            value += Rat::new(f, 10i128.pow(fracpart.len() as u32));
        }
        return Ok(if neg { -value } else { value });
    }
    s.parse::<i128>().map(Rat::from_integer).map_err(|_| err())
}

/// Serde adapter storing a rational as its string form (`"1/2"`).
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`serde_rat`] for `Option<Rat>` (`null` for absent).
pub mod serde_opt_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse_rat(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Same as [`serde_rat`] for `Vec<Rat>`.
pub mod serde_vec_rat {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(fmt_rat).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rat(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Wrapper that prints a rational the way the reports do.
pub struct Show<'a>(pub &'a Rat);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(self.0))
    }
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}
