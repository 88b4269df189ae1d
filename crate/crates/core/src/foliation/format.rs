//! JSON document format for foliations:
//!
//! ```json
//! { "name": "saddle", "P": [{"i": 0, "j": 1, "re": 1.0, "im": 0.0}],
//!   "Q": [{"i": 1, "j": 0, "re": 1.0, "im": 0.0}] }
//! ```
//!
//! Coefficients round-trip bit-exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Foliation, FoliationError};
use crate::cpoly::CpolyError;
use crate::Poly2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub i: u32,
    pub j: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoliationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "P")]
    pub p: Vec<TermRecord>,
    #[serde(rename = "Q")]
    pub q: Vec<TermRecord>,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid coefficient: {0}")]
    Coefficient(#[from] CpolyError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
}

pub fn poly_to_records(p: &Poly2) -> Vec<TermRecord> {
    p.terms()
        .map(|((i, j), c)| TermRecord { i, j, re: c.re, im: c.im })
        .collect()
}

/// Repeated exponent pairs are summed.
pub fn poly_from_records(records: &[TermRecord]) -> Result<Poly2, CpolyError> {
    Poly2::from_terms(records.iter().map(|t| (t.i, t.j, Complex64::new(t.re, t.im))))
}

impl FoliationDoc {
    pub fn from_foliation(f: &Foliation) -> Self {
        Self {
            name: f.name().map(str::to_owned),
            p: poly_to_records(f.p()),
            q: poly_to_records(f.q()),
        }
    }

    pub fn to_foliation(&self) -> Result<Foliation, FormatError> {
        let f = Foliation::new(poly_from_records(&self.p)?, poly_from_records(&self.q)?)?;
        Ok(match &self.name {
            Some(n) => f.with_name(n.clone()),
            None => f,
        })
    }
}

pub fn parse_foliation(text: &str) -> Result<Foliation, FormatError> {
    let doc: FoliationDoc = serde_json::from_str(text)?;
    doc.to_foliation()
}

pub fn emit_foliation(f: &Foliation) -> String {
    serde_json::to_string_pretty(&FoliationDoc::from_foliation(f)).expect("serialisable document")
}
