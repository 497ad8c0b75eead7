//! Deterministic JSON output helpers.
//!
//! Floats are written with exactly 17 significant digits in scientific
//! notation so that identical inputs give byte-identical reports.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::series::CorrectionSeries;
use crate::spectral::CVector;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;

pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_owned()
    }
}

/// `f64` that serializes with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_f64(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub fn sig17<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    Sig17(*x).serialize(serializer)
}

pub fn sig17_opt<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    x.map(Sig17).serialize(serializer)
}

pub fn sig17_vec<S: Serializer>(xs: &[f64], serializer: S) -> Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(xs.len()))?;
    for &x in xs {
        seq.serialize_element(&Sig17(x))?;
    }
    seq.end()
}

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
    pub schema: u32,
}

pub fn tool_info() -> ToolInfo {
    ToolInfo {
        name: TOOL_NAME,
        version: TOOL_VERSION,
        schema: SCHEMA_VERSION,
    }
}

/// Hex SHA-256 of the raw input.
pub fn input_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Complex vector as `[[re, im], ...]`.
pub fn complex_vector(v: &CVector) -> Vec<[Sig17; 2]> {
    v.iter().map(|z| [Sig17(z.re), Sig17(z.im)]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesJson {
    pub route: String,
    pub order: usize,
    pub grouped: bool,
    pub method: Option<crate::coeff::Method>,
    pub energies: Vec<Sig17>,
    pub vectors: Vec<Vec<[Sig17; 2]>>,
    pub terms_evaluated: usize,
    pub diagnostics: Vec<String>,
}

impl From<&CorrectionSeries> for SeriesJson {
    fn from(s: &CorrectionSeries) -> Self {
        SeriesJson {
            route: s.route.to_string(),
            order: s.order,
            grouped: s.grouped,
            method: s.method,
            energies: s.energies.iter().copied().map(Sig17).collect(),
            vectors: s.vectors.iter().map(complex_vector).collect(),
            terms_evaluated: s.terms_evaluated,
            diagnostics: s.diagnostics.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(format_f64(-1.0), "-1.0000000000000000e0");
        assert_eq!(format_f64(f64::NAN), "null");
        let json = serde_json::to_string(&vec![Sig17(0.1), Sig17(0.0)]).unwrap();
        assert_eq!(json, "[1.0000000000000001e-1,0.0000000000000000e0]");
        let back: Vec<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![0.1, 0.0]);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(
            input_hash(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
