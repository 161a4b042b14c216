//! Serde helpers: exact rationals and exponents travel as `"p/q"` strings.

use num_rational::Ratio;
use serde::Serializer;

use crate::qseries::{Exponent, Rat};

pub fn rat_str<S: Serializer>(value: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn ratio_str<S: Serializer>(value: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn exponent_str<S: Serializer>(value: &Exponent, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn rat_vec_str<S: Serializer>(values: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|v| v.to_string()))
}
