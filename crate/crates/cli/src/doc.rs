//! Problem and result documents: parsing, validation, and serialization.
//!
//! A problem document is UTF-8 JSON with a semifield tag, a matrix `A`, a
//! right-hand side `d`, optional constraint pair `C`/`b`, and optional
//! options. Numeric entries are JSON numbers or the tokens `"-inf"` and
//! `"+inf"`. Results are emitted with the same number encoding, so values
//! round-trip bit-stably.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::str::FromStr;
use tropic_core::linalg::IndexSet;
use tropic_core::solver::{FamilyMember, DEFAULT_ENUMERATION_CAP};
use tropic_core::{Matrix, Semifield, Tolerance, Vector};

/// A fully validated problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDocument {
    pub semifield: Semifield,
    pub a: Matrix,
    pub d: Vector,
    pub c: Option<Matrix>,
    pub b: Option<Vector>,
    pub tolerance: Tolerance,
    pub cap: usize,
    pub check_uniqueness: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawProblem {
    semifield: String,
    #[serde(rename = "A")]
    a: Vec<Vec<Entry>>,
    d: Vec<Entry>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    options: Option<RawOptions>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    check_uniqueness: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Number(f64),
    Token(String),
}

impl Entry {
    fn resolve(&self) -> Result<f64, CliError> {
        match self {
            Entry::Number(v) => Ok(*v),
            Entry::Token(t) => match t.as_str() {
                "-inf" => Ok(f64::NEG_INFINITY),
                "+inf" => Ok(f64::INFINITY),
                other => Err(CliError::InvalidToken(other.to_string())),
            },
        }
    }

    fn encode(v: f64) -> Entry {
        if v.is_finite() {
            Entry::Number(v)
        } else if v > 0.0 {
            Entry::Token("+inf".to_string())
        } else {
            Entry::Token("-inf".to_string())
        }
    }
}

fn resolve_vector(sf: Semifield, entries: &[Entry]) -> Result<Vector, CliError> {
    let values = entries
        .iter()
        .map(Entry::resolve)
        .collect::<Result<Vec<_>, _>>()?;
    Vector::new(sf, values).map_err(CliError::from)
}

fn resolve_matrix(sf: Semifield, rows: &[Vec<Entry>]) -> Result<Matrix, CliError> {
    let mut resolved = Vec::with_capacity(rows.len());
    for row in rows {
        resolved.push(
            row.iter()
                .map(Entry::resolve)
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Matrix::from_rows(sf, resolved).map_err(CliError::from)
}

/// Parse and validate a problem document from JSON text.
pub fn parse_problem(text: &str) -> Result<ProblemDocument, CliError> {
    let raw: RawProblem = serde_json::from_str(text)?;
    let semifield = Semifield::from_str(&raw.semifield)
        .map_err(|_| CliError::UnknownSemifield(raw.semifield.clone()))?;
    let a = resolve_matrix(semifield, &raw.a)?;
    let d = resolve_vector(semifield, &raw.d)?;
    if d.len() != a.rows() {
        return Err(CliError::Dimension(format!(
            "d has {} entries but A has {} rows",
            d.len(),
            a.rows()
        )));
    }
    let c = raw
        .c
        .as_ref()
        .map(|rows| resolve_matrix(semifield, rows))
        .transpose()?;
    let b = raw
        .b
        .as_ref()
        .map(|entries| resolve_vector(semifield, entries))
        .transpose()?;
    if let Some(c) = &c {
        if c.cols() != a.cols() {
            return Err(CliError::Dimension(format!(
                "C has {} columns but A has {}",
                c.cols(),
                a.cols()
            )));
        }
        if let Some(b) = &b {
            if b.len() != c.rows() {
                return Err(CliError::Dimension(format!(
                    "b has {} entries but C has {} rows",
                    b.len(),
                    c.rows()
                )));
            }
        }
    } else if let Some(b) = &b {
        if b.len() != a.rows() {
            return Err(CliError::Dimension(format!(
                "b has {} entries but A has {} rows",
                b.len(),
                a.rows()
            )));
        }
    }
    let options = raw.options.unwrap_or_default();
    let tolerance = match options.tolerance {
        Some(eps) => Tolerance::new(eps).map_err(|_| {
            CliError::InvalidOption(format!("tolerance {eps} must be finite and >= 0"))
        })?,
        None => Tolerance::default(),
    };
    Ok(ProblemDocument {
        semifield,
        a,
        d,
        c,
        b,
        tolerance,
        cap: options.cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
        check_uniqueness: options.check_uniqueness.unwrap_or(false),
    })
}

impl ProblemDocument {
    /// Serialize back to document JSON; parsing the output reproduces the
    /// document exactly.
    pub fn to_json(&self) -> Value {
        let encode_vec =
            |v: &Vector| -> Vec<Entry> { v.entries().iter().map(|&x| Entry::encode(x)).collect() };
        let encode_mat = |m: &Matrix| -> Vec<Vec<Entry>> {
            (0..m.rows())
                .map(|i| m.row_entries(i).iter().map(|&x| Entry::encode(x)).collect())
                .collect()
        };
        let raw = RawProblem {
            semifield: self.semifield.as_str().to_string(),
            a: encode_mat(&self.a),
            d: encode_vec(&self.d),
            c: self.c.as_ref().map(encode_mat),
            b: self.b.as_ref().map(encode_vec),
            options: Some(RawOptions {
                tolerance: Some(self.tolerance.eps()),
                cap: Some(self.cap),
                check_uniqueness: Some(self.check_uniqueness),
            }),
        };
        serde_json::to_value(raw).expect("documents serialize cleanly")
    }
}

/// Encode one carrier value: infinities become tokens, integral values plain
/// integers, everything else a shortest-round-trip float.
pub fn value_json(v: f64) -> Value {
    if v == f64::INFINITY {
        json!("+inf")
    } else if v == f64::NEG_INFINITY {
        json!("-inf")
    } else if v.fract() == 0.0 && v.abs() < 9.0e15 {
        json!(v as i64)
    } else {
        json!(v)
    }
}

pub fn vector_json(v: &Vector) -> Value {
    Value::Array(v.entries().iter().map(|&x| value_json(x)).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row_entries(i).iter().map(|&x| value_json(x)).collect()))
            .collect(),
    )
}

/// Index sets are rendered one-based.
pub fn index_set_json(s: &IndexSet) -> Value {
    Value::Array(s.one_based().into_iter().map(|i| json!(i)).collect())
}

pub fn family_json(family: &[FamilyMember]) -> Value {
    Value::Array(
        family
            .iter()
            .map(|member| {
                let mut fixed = Map::new();
                for (&j, &v) in &member.fixed {
                    fixed.insert((j + 1).to_string(), value_json(v));
                }
                let mut bounds = Map::new();
                for (&j, &v) in &member.bounded {
                    bounds.insert((j + 1).to_string(), value_json(v));
                }
                json!({
                    "I": index_set_json(&member.generators),
                    "fixed": Value::Object(fixed),
                    "bounds": Value::Object(bounds),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_plain_document() {
        let doc = parse_problem(r#"{"semifield":"max-plus","A":[[1,3],[2,1]],"d":[4,5]}"#).unwrap();
        assert_eq!(doc.semifield, Semifield::MaxPlus);
        assert_eq!(doc.a.rows(), 2);
        assert_eq!(doc.d.entries(), &[4.0, 5.0]);
        assert_eq!(doc.cap, DEFAULT_ENUMERATION_CAP);
        assert_eq!(doc.tolerance.eps(), 1e-9);
    }

    #[test]
    fn parses_tokens_and_rejects_bad_glyphs() {
        let doc =
            parse_problem(r#"{"semifield":"max-plus","A":[[1],["-inf"]],"d":[3,5]}"#).unwrap();
        assert_eq!(doc.a.get(1, 0), f64::NEG_INFINITY);
        // U+2212 minus is not the token
        let err =
            parse_problem("{\"semifield\":\"max-plus\",\"A\":[[1],[\"\u{2212}inf\"]],\"d\":[3,5]}")
                .unwrap_err();
        assert!(matches!(err, CliError::InvalidToken(_)));
    }

    #[test]
    fn rejects_carrier_violations_and_unknown_tags() {
        let err = parse_problem(r#"{"semifield":"max-times","A":[[-2]],"d":[1]}"#).unwrap_err();
        assert!(matches!(err, CliError::Carrier(_)));
        let err = parse_problem(r#"{"semifield":"max-min","A":[[1]],"d":[1]}"#).unwrap_err();
        assert!(matches!(err, CliError::UnknownSemifield(_)));
        let err = parse_problem(r#"{"semifield":"max-plus","A":[[1,2]],"d":[1,2]}"#).unwrap_err();
        assert!(matches!(err, CliError::Dimension(_)));
        let err = parse_problem("not json").unwrap_err();
        assert!(matches!(err, CliError::Json(_)));
    }

    #[test]
    fn document_round_trip() {
        let text = r#"{
            "semifield": "max-times",
            "A": [[1, 0.5], [0, 2]],
            "d": [1, "+inf"],
            "C": [[1, 1]],
            "b": [4],
            "options": {"tolerance": 1e-7, "cap": 12, "check_uniqueness": true}
        }"#;
        let doc = parse_problem(text).unwrap();
        let round = parse_problem(&doc.to_json().to_string()).unwrap();
        assert_eq!(doc, round);
    }

    #[test]
    fn values_render_as_integers_tokens_or_floats() {
        assert_eq!(value_json(3.0).to_string(), "3");
        assert_eq!(value_json(-2.5).to_string(), "-2.5");
        assert_eq!(value_json(f64::INFINITY).to_string(), "\"+inf\"");
        assert_eq!(value_json(f64::NEG_INFINITY).to_string(), "\"-inf\"");
    }
}
