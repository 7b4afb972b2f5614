//! Values in the extended real line `[-inf, +inf]`.
//!
//! Every divergence returns an [`ExtendedReal`]. Arithmetic is deliberately
//! partial: `0 * (+-inf)` and `+inf + -inf` are errors rather than silent
//! zeros, so each caller has to spell out which convention applies.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Maps `f64` infinities onto the tagged variants. NaN is rejected.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::Domain("NaN is not an extended real".into()))
        } else if x == f64::INFINITY {
            Ok(Self::PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(Self::NegInf)
        } else {
            Ok(Self::Finite(x))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Self::NegInf => f64::NEG_INFINITY,
            Self::Finite(v) => v,
            Self::PosInf => f64::INFINITY,
        }
    }

    /// `c * self` with the sign rule `c * (+-inf) = +-inf * sign(c)`.
    pub fn scale(self, c: f64) -> Result<Self> {
        match self {
            Self::Finite(v) => Ok(Self::Finite(c * v)),
            _ if c == 0.0 => Err(Error::ZeroTimesInfinity),
            Self::PosInf if c > 0.0 => Ok(Self::PosInf),
            Self::PosInf => Ok(Self::NegInf),
            Self::NegInf if c > 0.0 => Ok(Self::NegInf),
            Self::NegInf => Ok(Self::PosInf),
        }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::InfiniteCancellation),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }

    /// Natural log of a nonnegative number with `log 0 = -inf`.
    pub fn ln(x: f64) -> Result<Self> {
        if x.is_nan() || x < 0.0 {
            Err(Error::Domain(format!("log of negative number {x}")))
        } else if x == 0.0 {
            Ok(Self::NegInf)
        } else {
            Self::from_f64(x.ln())
        }
    }

    /// Continuous extension of `exp` to `[-inf, +inf]`, with values in `[0, +inf]`.
    pub fn exp(self) -> Self {
        match self {
            Self::NegInf => Self::Finite(0.0),
            Self::Finite(v) => {
                let e = v.exp();
                if e.is_infinite() {
                    Self::PosInf
                } else {
                    Self::Finite(e)
                }
            }
            Self::PosInf => Self::PosInf,
        }
    }

    /// Distance used when comparing two extended values: equal infinities
    /// are at distance 0, anything else involving an infinity is `+inf`.
    pub fn distance(self, other: Self) -> f64 {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => (a - b).abs(),
            (PosInf, PosInf) | (NegInf, NegInf) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl From<f64> for ExtendedReal {
    /// Panics on NaN; use [`ExtendedReal::from_f64`] for fallible conversion.
    fn from(x: f64) -> Self {
        Self::from_f64(x).expect("NaN cannot be converted to ExtendedReal")
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInf => f.write_str("-inf"),
            Self::Finite(v) if *v != 0.0 && !(1e-4..1e16).contains(&v.abs()) => write!(f, "{v:e}"),
            Self::Finite(v) => write!(f, "{v}"),
            Self::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::NegInf => s.serialize_str("-inf"),
            Self::Finite(v) => s.serialize_f64(*v),
            Self::PosInf => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtendedReal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or one of \"+inf\", \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "+inf" => Ok(ExtendedReal::PosInf),
                    "-inf" => Ok(ExtendedReal::NegInf),
                    other => Err(E::custom(format!("unexpected string `{other}`"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Serde helpers for plain `f64` fields that may hold infinities.
pub mod f64_ext {
    use super::ExtendedReal;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        ExtendedReal::from_f64(*x)
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(ExtendedReal::deserialize(d)?.to_f64())
    }
}
