//! JSON model-file format consumed by the CLI.
//!
//! Complex numbers are two-element arrays [re, im]; matrices are nested
//! row-major arrays of such pairs. Example:
//!
//! ```json
//! {
//!   "model": "coupled_xy",
//!   "K": 2,
//!   "a": 2.0,
//!   "b": [0.0, 1.0],
//!   "symmetries": [
//!     { "kind": "antiunitary", "label": "PT",
//!       "matrix": [[[-1,0],[0,0],[0,0],[0,0]],
//!                  [[0,0],[-1,0],[0,0],[0,0]],
//!                  [[0,0],[0,0],[1,0],[0,0]],
//!                  [[0,0],[0,0],[0,0],[1,0]]] }
//!   ]
//! }
//! ```
//!
//! Custom models supply a 2K×2K `gamma` matrix instead of (a, b).

use crate::adjoint::GammaMatrix;
use crate::models::{ModelKind, ModelSpec};
use crate::symmetry::{SymmetryKind, SymmetrySpec};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("missing field '{0}'")]
    MissingField(&'static str),
    #[error("field K = {given} disagrees with model '{model}' (K = {expected})")]
    WrongModes { model: String, given: usize, expected: usize },
    #[error("{0}")]
    BadDimension(String),
    #[error("parameter out of range: {0}")]
    BadValue(String),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub model: String,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symmetries: Vec<SymmetryEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SymmetryEntry {
    pub kind: SymmetryKind,
    pub label: String,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug)]
pub struct ParsedModel {
    pub spec: ModelSpec,
    pub symmetries: Vec<SymmetrySpec>,
}

fn matrix_from_rows(
    rows: &[Vec<[f64; 2]>],
    what: &str,
) -> Result<DMatrix<Complex64>, ModelFileError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(ModelFileError::BadDimension(format!(
            "{what} must be a non-empty square matrix"
        )));
    }
    let mut m = DMatrix::from_element(n, n, Complex64::default());
    for (r, row) in rows.iter().enumerate() {
        for (c, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(ModelFileError::BadValue(format!(
                    "{what}[{r}][{c}] is not finite"
                )));
            }
            m[(r, c)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

pub fn parse_model_file(text: &str) -> Result<ParsedModel, ModelFileError> {
    let file: ModelFile = serde_json::from_str(text)?;
    let kind = ModelKind::parse(&file.model)
        .ok_or_else(|| ModelFileError::UnknownModel(file.model.clone()))?;

    let spec = if kind == ModelKind::Custom {
        let rows = file.gamma.as_ref().ok_or(ModelFileError::MissingField("gamma"))?;
        let m = matrix_from_rows(rows, "gamma")?;
        if m.nrows() % 2 != 0 {
            return Err(ModelFileError::BadDimension(
                "gamma must have even dimension 2K".to_string(),
            ));
        }
        let modes = m.nrows() / 2;
        if let Some(k) = file.k {
            if k != modes {
                return Err(ModelFileError::WrongModes {
                    model: file.model.clone(),
                    given: k,
                    expected: modes,
                });
            }
        }
        let gamma = GammaMatrix::new(modes, m)
            .map_err(|e| ModelFileError::BadDimension(e.to_string()))?;
        ModelSpec::custom(gamma, file.constant.unwrap_or(0.0))
    } else {
        let expected = kind.builtin_modes().unwrap();
        if let Some(k) = file.k {
            if k != expected {
                return Err(ModelFileError::WrongModes {
                    model: file.model.clone(),
                    given: k,
                    expected,
                });
            }
        }
        let a = file.a.unwrap_or(1.0);
        let b = file
            .b
            .map(|[re, im]| Complex64::new(re, im))
            .unwrap_or_default();
        if !a.is_finite() || !b.re.is_finite() || !b.im.is_finite() {
            return Err(ModelFileError::BadValue("a and b must be finite".to_string()));
        }
        let mut spec = ModelSpec::builtin(kind, a, b);
        spec.constant = file.constant.unwrap_or(0.0);
        spec
    };

    let n = 2 * spec.modes;
    let mut symmetries = Vec::with_capacity(file.symmetries.len());
    for entry in &file.symmetries {
        let m = matrix_from_rows(&entry.matrix, &format!("symmetry '{}'", entry.label))?;
        if m.nrows() != n {
            return Err(ModelFileError::BadDimension(format!(
                "symmetry '{}' must be {n}x{n}",
                entry.label
            )));
        }
        symmetries.push(SymmetrySpec::new(entry.kind, m, entry.label.clone()));
    }
    Ok(ParsedModel { spec, symmetries })
}
