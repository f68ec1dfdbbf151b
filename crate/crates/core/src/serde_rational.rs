//! Serde helpers writing rationals as `"num/den"` strings.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

use crate::scalar::ExactField;

pub fn serialize<S: Serializer>(value: &Ratio<BigInt>, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(value)
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Ratio<BigInt>, D::Error> {
    let text = String::deserialize(de)?;
    Ratio::<BigInt>::parse_exact(&text).map_err(D::Error::custom)
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<Ratio<BigInt>>, ser: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => ser.collect_str(v),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Ratio<BigInt>>, D::Error> {
        Option::<String>::deserialize(de)?
            .map(|text| Ratio::<BigInt>::parse_exact(&text).map_err(D::Error::custom))
            .transpose()
    }
}

/// Any [`ExactField`] value as its `Display` string.
pub mod exact {
    use std::fmt::Display;

    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::scalar::ExactField;

    pub fn serialize<F: Display, S: Serializer>(value: &F, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(value)
    }

    pub fn deserialize<'de, F: ExactField, D: Deserializer<'de>>(de: D) -> Result<F, D::Error> {
        let text = String::deserialize(de)?;
        F::parse_exact(&text).map_err(D::Error::custom)
    }
}
