//! Structured check results, serialized as `pindist-report/1` JSON documents.

use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::RationalParam;
use crate::geometry::Space;

pub const REPORT_SCHEMA: &str = "pindist-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub k: u32,
    pub d: usize,
}

impl From<&Space> for FieldParams {
    fn from(space: &Space) -> Self {
        FieldParams {
            p: space.field().characteristic(),
            k: space.field().degree(),
            d: space.dim(),
        }
    }
}

/// Integers that do not fit in 64 bits are written as decimal strings so
/// that every JSON reader can load them losslessly.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessValue {
    Integer(u128),
    Rational { num: u128, den: u128 },
    /// Informational floating-point diagnostics only.
    Real(f64),
}

struct WideInt(u128);

impl Serialize for WideInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(self.0) {
            Ok(v) => s.serialize_u64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for WideInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ValueVisitor).and_then(|v| match v {
            WitnessValue::Integer(i) => Ok(WideInt(i)),
            _ => Err(de::Error::custom("expected an integer")),
        })
    }
}

impl Serialize for WitnessValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            WitnessValue::Integer(v) => WideInt(*v).serialize(s),
            WitnessValue::Real(v) => s.serialize_f64(*v),
            WitnessValue::Rational { num, den } => {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("num", &WideInt(*num))?;
                map.serialize_entry("den", &WideInt(*den))?;
                map.end()
            }
        }
    }
}

struct ValueVisitor;

impl<'de> Visitor<'de> for ValueVisitor {
    type Value = WitnessValue;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer, a decimal string, a float, or {num, den}")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<WitnessValue, E> {
        Ok(WitnessValue::Integer(v as u128))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<WitnessValue, E> {
        u128::try_from(v).map(WitnessValue::Integer).map_err(E::custom)
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<WitnessValue, E> {
        Ok(WitnessValue::Real(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<WitnessValue, E> {
        v.parse().map(WitnessValue::Integer).map_err(E::custom)
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<WitnessValue, A::Error> {
        let (mut num, mut den) = (None, None);
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "num" => num = Some(map.next_value::<WideInt>()?.0),
                "den" => den = Some(map.next_value::<WideInt>()?.0),
                other => return Err(de::Error::unknown_field(other, &["num", "den"])),
            }
        }
        match (num, den) {
            (Some(num), Some(den)) => Ok(WitnessValue::Rational { num, den }),
            _ => Err(de::Error::custom("rational witness needs num and den")),
        }
    }
}

impl<'de> Deserialize<'de> for WitnessValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ValueVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: WitnessValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub check: String,
    pub field: FieldParams,
    pub set_spec: String,
    pub a: Option<RationalParam>,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    pub counterexample_pin: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// Run metadata (configuration, generator identity, timestamp).
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl VerificationReport {
    pub fn new(check: &str, field: FieldParams, set_spec: &str, a: Option<RationalParam>) -> Self {
        VerificationReport {
            schema: REPORT_SCHEMA.into(),
            check: check.into(),
            field,
            set_spec: set_spec.into(),
            a,
            passed: true,
            witnesses: Vec::new(),
            counterexample_pin: None,
            warning: None,
            metadata: serde_json::Map::new(),
        }
    }

    pub fn integer(&mut self, name: &str, value: impl Into<u128>) -> &mut Self {
        self.witnesses.push(Witness { name: name.into(), value: WitnessValue::Integer(value.into()) });
        self
    }

    /// Records num/den in lowest terms.
    pub fn rational(&mut self, name: &str, num: u128, den: u128) -> &mut Self {
        let g = num_integer::gcd(num, den).max(1);
        self.witnesses.push(Witness {
            name: name.into(),
            value: WitnessValue::Rational { num: num / g, den: den / g },
        });
        self
    }

    pub fn real(&mut self, name: &str, value: f64) -> &mut Self {
        self.witnesses.push(Witness { name: name.into(), value: WitnessValue::Real(value) });
        self
    }

    /// Marks the report failed; the first counterexample pin is kept.
    pub fn fail_at(&mut self, pin: u64) {
        self.passed = false;
        self.counterexample_pin.get_or_insert(pin);
    }

    /// Marks the report failed on a failing witness that is not tied to a pin.
    pub fn fail_on(&mut self, witness: &str) {
        self.passed = false;
        debug_assert!(self.witness(witness).is_some(), "failing witness `{witness}` not recorded");
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warning = Some(message.into());
    }

    pub fn witness(&self, name: &str) -> Option<&WitnessValue> {
        self.witnesses.iter().find(|w| w.name == name).map(|w| &w.value)
    }

    pub fn integer_witness(&self, name: &str) -> Option<u128> {
        match self.witness(name)? {
            WitnessValue::Integer(v) => Some(*v),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// SHA-256 over the JSON document without the `timestamp` and
    /// `content_hash` metadata entries.
    pub fn content_hash(&self) -> String {
        let mut stripped = self.clone();
        stripped.metadata.remove("timestamp");
        stripped.metadata.remove("content_hash");
        let bytes = serde_json::to_vec(&stripped).expect("reports always serialize");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_and_round_trip() {
        let mut r = VerificationReport::new(
            "main_theorem",
            FieldParams { p: 3, k: 1, d: 2 },
            "full",
            Some(RationalParam::new(2, 1).unwrap()),
        );
        r.integer("good_pins", 9u64).rational("bound", 6, 4).integer("big", u128::from(u64::MAX) * 4);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["schema"], "pindist-report/1");
        assert_eq!(json["field"]["p"], 3);
        assert_eq!(json["a"]["den"], 1);
        assert_eq!(json["witnesses"][1]["value"]["num"], 3);
        assert_eq!(json["witnesses"][2]["value"], (u128::from(u64::MAX) * 4).to_string());
        assert!(json["counterexample_pin"].is_null());
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn hash_ignores_timestamp() {
        let mut r = VerificationReport::new("x", FieldParams { p: 3, k: 1, d: 1 }, "full", None);
        let before = r.content_hash();
        r.metadata.insert("timestamp".into(), "2026-01-01T00:00:00Z".into());
        assert_eq!(r.content_hash(), before);
        r.integer("n", 1u32);
        assert_ne!(r.content_hash(), before);
    }
}
