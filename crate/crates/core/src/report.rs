//! Verified-inequality records.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::Field;

/// A numeric side of an inequality: exact integer or floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Int(i128),
    Real(f64),
}

impl Quantity {
    pub fn as_f64(self) -> f64 {
        match self {
            Quantity::Int(v) => v as f64,
            Quantity::Real(v) => v,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Int(v) => write!(f, "{v}"),
            Quantity::Real(v) => write!(f, "{v:.6e}"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match *self {
            Quantity::Int(v) => match i64::try_from(v) {
                Ok(small) => serializer.serialize_i64(small),
                Err(_) => serializer.serialize_i128(v),
            },
            Quantity::Real(v) => serializer.serialize_f64(v),
        }
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct QuantityVisitor;

        impl Visitor<'_> for QuantityVisitor {
            type Value = Quantity;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Quantity, E> {
                Ok(Quantity::Int(v as i128))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Quantity, E> {
                Ok(Quantity::Int(v as i128))
            }

            fn visit_i128<E: de::Error>(self, v: i128) -> Result<Quantity, E> {
                Ok(Quantity::Int(v))
            }

            fn visit_u128<E: de::Error>(self, v: u128) -> Result<Quantity, E> {
                i128::try_from(v).map(Quantity::Int).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Quantity, E> {
                Ok(Quantity::Real(v))
            }
        }

        deserializer.deserialize_any(QuantityVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// One checked inequality `lhs <= rhs`.
///
/// In exact mode `pass` means `slack >= 0`; in float mode the slack may dip
/// below zero by the tolerance the report was built with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: String,
    pub q: u64,
    pub s: u32,
    pub d: usize,
    pub setsize: usize,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub slack: Quantity,
    pub pass: bool,
    pub mode: Mode,
    pub seed: Option<u64>,
}

impl BoundReport {
    pub fn exact(bound: &str, field: &Field, d: usize, setsize: usize, lhs: i128, rhs: i128) -> BoundReport {
        BoundReport {
            bound: bound.to_string(),
            q: field.q() as u64,
            s: field.s(),
            d,
            setsize,
            lhs: Quantity::Int(lhs),
            rhs: Quantity::Int(rhs),
            slack: Quantity::Int(rhs - lhs),
            pass: lhs <= rhs,
            mode: Mode::Exact,
            seed: None,
        }
    }

    /// `lhs <= rhs` up to an absolute `tolerance`.
    #[allow(clippy::too_many_arguments)]
    pub fn float(
        bound: &str,
        field: &Field,
        d: usize,
        setsize: usize,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> BoundReport {
        let slack = rhs - lhs;
        BoundReport {
            bound: bound.to_string(),
            q: field.q() as u64,
            s: field.s(),
            d,
            setsize,
            lhs: Quantity::Real(lhs),
            rhs: Quantity::Real(rhs),
            slack: Quantity::Real(slack),
            pass: slack >= -tolerance && slack.is_finite(),
            mode: Mode::Float,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> BoundReport {
        self.seed = seed;
        self
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} q={:<4} d={} |E|={:<6} lhs={} rhs={} slack={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.bound,
            self.q,
            self.d,
            self.setsize,
            self.lhs,
            self.rhs,
            self.slack
        )
    }
}

/// A measured quantity with no pass/fail semantics, for statements whose
/// constants are not fixed (uniformity constants, coverage below threshold).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    pub q: u64,
    pub d: usize,
    pub setsize: usize,
    pub value: f64,
    pub seed: Option<u64>,
}

impl Measurement {
    pub fn new(name: &str, field: &Field, d: usize, setsize: usize, value: f64) -> Measurement {
        Measurement { name: name.to_string(), q: field.q() as u64, d, setsize, value, seed: None }
    }
}
