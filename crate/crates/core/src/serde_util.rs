//! JSON encoding for big-integer vectors: each entry a plain number when it fits in
//! 64 bits, a decimal string otherwise. Both forms are accepted on input.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Int(i64),
    Uint(u64),
    Text(String),
}

fn to_repr(x: &BigInt) -> Repr {
    match (x.to_i64(), x.to_u64()) {
        (Some(v), _) => Repr::Int(v),
        (None, Some(v)) => Repr::Uint(v),
        _ => Repr::Text(x.to_string()),
    }
}

fn from_repr<E: serde::de::Error>(r: Repr) -> Result<BigInt, E> {
    match r {
        Repr::Int(v) => Ok(v.into()),
        Repr::Uint(v) => Ok(v.into()),
        Repr::Text(s) => BigInt::from_str(s.trim()).map_err(E::custom),
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(from_repr::<D::Error>)
            .collect()
    }
}
