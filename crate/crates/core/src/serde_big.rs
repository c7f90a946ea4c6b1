// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Big integers as decimal strings in configs. Plain JSON integers are also
//! accepted on input.

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Text(String),
    Int(u64),
}

fn parse<E: serde::de::Error>(r: Repr) -> Result<BigUint, E> {
    match r {
        Repr::Int(x) => Ok(BigUint::from(x)),
        Repr::Text(s) => s
            .trim()
            .parse()
            .map_err(|_| E::custom(format!("`{s}` is not a non-negative integer"))),
    }
}

pub mod single {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        x.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        parse(Repr::deserialize(d)?)
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(parse)
            .collect()
    }
}

pub mod pairs {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[(BigUint, BigUint)], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(BigUint, BigUint)>, D::Error> {
        Vec::<(Repr, Repr)>::deserialize(d)?
            .into_iter()
            .map(|(a, b)| Ok((parse(a)?, parse(b)?)))
            .collect()
    }
}
