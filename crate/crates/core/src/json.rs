//! Serde helpers: every integer leaves the crate as a decimal string.

use num_bigint::BigUint;
use serde::ser::{SerializeSeq, Serializer};

pub(crate) fn int<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn ints<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub(crate) fn opt_ints<S: Serializer>(v: &Option<Vec<usize>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ints(v, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

pub(crate) fn u64_str<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Decimal strings for a list of big integers.
pub fn big_strings(v: &[BigUint]) -> Vec<String> {
    v.iter().map(|x| x.to_str_radix(10)).collect()
}
