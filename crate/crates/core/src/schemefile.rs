//! JSON persistence for certified schemes.
//!
//! Every integer is written as a decimal string and keys appear in a fixed
//! order, so loading and saving a canonical file reproduces it byte for byte.
//!
//! ```json
//! {
//!   "version": "1",
//!   "m": "3",
//!   "i": "0",
//!   "seed": "1",
//!   "e_num": [],
//!   "e_den": ["1"],
//!   "p": ["1", "2"],
//!   "provenance": {
//!     "s": "0",
//!     "r": "1/(1-q)",
//!     "f0": null,
//!     "a": "0",
//!     "g": "(1 + q + q^2)/(1 - q)"
//!   }
//! }
//! ```

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::derive::{Provenance, Scheme};
use crate::error::{Error, Result};
use crate::modular::ModRatFun;
use crate::parser::{parse_ratfun, render_ratfun};
use crate::poly::Rat;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceRecord {
    pub s: String,
    pub r: String,
    pub f0: Option<String>,
    pub a: String,
    pub g: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub version: String,
    pub m: String,
    pub i: String,
    pub seed: String,
    pub e_num: Vec<String>,
    pub e_den: Vec<String>,
    pub p: Vec<String>,
    pub provenance: Option<ProvenanceRecord>,
}

fn strings(v: &[u64]) -> Vec<String> {
    v.iter().map(u64::to_string).collect()
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(format!("scheme file: {}", msg.into()))
}

fn number<T: FromStr>(field: &str, s: &str) -> Result<T> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(format!("{field} = {s:?} is not a decimal integer")));
    }
    s.parse().map_err(|_| bad(format!("{field} = {s:?} out of range")))
}

fn numbers(field: &str, v: &[String]) -> Result<Vec<u64>> {
    v.iter().map(|s| number(field, s)).collect()
}

impl SchemeFile {
    pub fn from_scheme(scheme: &Scheme) -> Self {
        SchemeFile {
            version: FORMAT_VERSION.to_string(),
            m: scheme.m().to_string(),
            i: scheme.i().to_string(),
            seed: scheme.seed().to_string(),
            e_num: strings(scheme.e().num()),
            e_den: strings(scheme.e().den()),
            p: strings(scheme.p()),
            provenance: scheme.provenance().map(|p| ProvenanceRecord {
                s: p.s.clone(),
                r: p.r.clone(),
                f0: p.f0.as_ref().map(Rat::to_string),
                a: render_ratfun(&p.a),
                g: render_ratfun(&p.g),
            }),
        }
    }

    pub fn to_scheme(&self) -> Result<Scheme> {
        if self.version != FORMAT_VERSION {
            return Err(bad(format!(
                "unsupported version {:?}, expected {FORMAT_VERSION:?}",
                self.version
            )));
        }
        let m: usize = number("m", &self.m)?;
        let i: usize = number("i", &self.i)?;
        let seed: u64 = number("seed", &self.seed)?;
        if m < 2 {
            return Err(bad(format!("m = {m} must be at least 2")));
        }
        let e = ModRatFun::new(
            numbers("e_num", &self.e_num)?,
            numbers("e_den", &self.e_den)?,
            m as u64,
        )
        .map_err(|e| bad(e.to_string()))?;
        let provenance = match &self.provenance {
            None => None,
            Some(p) => Some(Provenance {
                s: p.s.clone(),
                r: p.r.clone(),
                f0: match &p.f0 {
                    None => None,
                    Some(t) => Some(t.parse::<Rat>().map_err(|_| bad(format!("f0 = {t:?}")))?),
                },
                a: parse_ratfun(&p.a, None)?,
                g: parse_ratfun(&p.g, None)?,
            }),
        };
        Scheme::new(m, i, e, numbers("p", &self.p)?, seed, provenance).map_err(|e| bad(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain strings serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }
}

/// Serialize a scheme in the canonical file format.
pub fn save_scheme(scheme: &Scheme) -> String {
    SchemeFile::from_scheme(scheme).to_json()
}

/// Parse and validate a scheme file.
pub fn load_scheme(text: &str) -> Result<Scheme> {
    SchemeFile::from_json(text)?.to_scheme()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known::{fixture, KnownLabel};
    use crate::derive::derive_scheme;

    fn prop_b_scheme(m: usize) -> Scheme {
        let (fe, i) = fixture(KnownLabel::PropB, m).unwrap();
        derive_scheme(&fe, i).unwrap().into_scheme().unwrap()
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = save_scheme(&prop_b_scheme(3));
        let again = save_scheme(&load_scheme(&text).unwrap());
        assert_eq!(text, again);
        assert!(text.contains("\"e_den\": [\n    \"1\",\n    \"2\"\n  ]"));
    }

    #[test]
    fn rejects_bad_files() {
        let text = save_scheme(&prop_b_scheme(3));
        let wrong_version = text.replace("\"version\": \"1\"", "\"version\": \"2\"");
        assert!(load_scheme(&wrong_version).is_err());
        let native_number = text.replace("\"m\": \"3\"", "\"m\": 3");
        assert!(load_scheme(&native_number).is_err());
        let out_of_range = text.replace("\"seed\": \"1\"", "\"seed\": \"7\"");
        assert!(load_scheme(&out_of_range).is_err());
        assert!(load_scheme("{").is_err());
    }
}
