//! JSON format for jets and density inputs:
//!
//! ```json
//! { "coeffs": [{"re": 0.5, "im": 0.0}, {"re": 1.0, "im": 0.0}] }
//! { "generators": [{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 1.0}] }
//! { "germs": [{"coeffs": [{"re": 0.5, "im": 0.0}], "radius": 1.0}] }
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{GermError, Generator, Jet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexRecord {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexRecord> for Complex64 {
    fn from(r: ComplexRecord) -> Self {
        Complex64::new(r.re, r.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetDoc {
    /// `c₁, …, c_N`.
    pub coeffs: Vec<ComplexRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorsDoc {
    pub generators: Vec<ComplexRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GermDoc {
    pub coeffs: Vec<ComplexRecord>,
    /// Radius of the disk on which the germ is used.
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoGroupDoc {
    pub germs: Vec<GermDoc>,
}

#[derive(Debug, Error)]
pub enum GermFormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Germ(#[from] GermError),
}

pub fn parse_jet(text: &str) -> Result<Jet<f64>, GermFormatError> {
    let doc: JetDoc = serde_json::from_str(text)?;
    Ok(Jet::new(doc.coeffs.into_iter().map(Complex64::from).collect())?)
}

pub fn emit_jet(j: &Jet<f64>) -> String {
    let doc = JetDoc {
        coeffs: j.coeffs().iter().map(|&c| c.into()).collect(),
    };
    serde_json::to_string(&doc).expect("jet serialises")
}

pub fn parse_generators(text: &str) -> Result<Vec<Complex64>, GermFormatError> {
    let doc: GeneratorsDoc = serde_json::from_str(text)?;
    Ok(doc.generators.into_iter().map(Complex64::from).collect())
}

pub fn parse_pseudo_group(text: &str) -> Result<Vec<Generator>, GermFormatError> {
    let doc: PseudoGroupDoc = serde_json::from_str(text)?;
    doc.germs
        .into_iter()
        .map(|g| {
            if !(g.radius.is_finite() && g.radius > 0.0) {
                return Err(GermError::NonFinite.into());
            }
            let jet = Jet::new(g.coeffs.into_iter().map(Complex64::from).collect())?;
            Ok(Generator::new(jet, g.radius))
        })
        .collect()
}
