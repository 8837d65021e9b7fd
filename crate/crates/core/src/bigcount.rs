//! Serializes big counts as JSON numbers when they fit in `u64`, and as
//! decimal strings otherwise.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match value.to_u64() {
        Some(small) => s.serialize_u64(small),
        None => s.serialize_str(&value.to_string()),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Small(u64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Small(v) => Ok(BigUint::from(v)),
        Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
    }
}
