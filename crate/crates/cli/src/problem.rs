//! The JSON problem-file format and its validation.
//!
//! A problem file is self describing: the ambient dimension, the
//! fundamental symmetry (diagonal signature or full matrix, row-major),
//! named weighted subspaces given by spanning vectors, and options.

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use krein_core::{Space, Subspace, DEFAULT_RANK_TOL, DEFAULT_TOL};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub symmetry: Symmetry,
    pub subspaces: Vec<SubspaceSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Symmetry {
    Diagonal { signs: Vec<i8> },
    Matrix { rows: Vec<Vec<f64>> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceSpec {
    pub name: String,
    pub span: Vec<Vec<f64>>,
    pub weight: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub variant: Variant,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tolerance: default_tolerance(),
            variant: Variant::default(),
        }
    }
}

fn default_tolerance() -> f64 {
    DEFAULT_TOL
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum, serde::Serialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Literal,
    #[default]
    Jsa,
}

impl Variant {
    pub fn to_core(self) -> krein_core::FrameVariant {
        match self {
            Variant::Literal => krein_core::FrameVariant::Literal,
            Variant::Jsa => krein_core::FrameVariant::Jsa,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Literal => "literal",
            Variant::Jsa => "jsa",
        }
    }
}

/// A parsed and validated problem: the space plus named weighted
/// subspaces, ready for family construction.
pub struct Problem {
    pub space: Space,
    pub subspaces: Vec<(String, Subspace, f64)>,
    pub tolerance: f64,
    pub variant: Variant,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::invalid(format!("problem file is not valid: {e}")))
}

pub fn validate(file: &ProblemFile) -> Result<Problem, CliError> {
    let n = file.dimension;
    if n == 0 {
        return Err(CliError::invalid("field `dimension` must be positive"));
    }
    let space = match &file.symmetry {
        Symmetry::Diagonal { signs } => {
            if signs.len() != n {
                return Err(CliError::invalid(format!(
                    "field `symmetry.signs` has {} entries, expected {n}",
                    signs.len()
                )));
            }
            Space::from_signs(signs)
                .map_err(|e| CliError::invalid(format!("field `symmetry.signs`: {e}")))?
        }
        Symmetry::Matrix { rows } => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CliError::invalid(
                    "field `symmetry.rows` must be an n×n matrix".to_string(),
                ));
            }
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            Space::from_matrix(DMatrix::from_row_slice(n, n, &flat))
                .map_err(|e| CliError::invalid(format!("field `symmetry.rows`: {e}")))?
        }
    };

    let mut names = std::collections::BTreeSet::new();
    let mut subspaces = Vec::with_capacity(file.subspaces.len());
    for (idx, spec) in file.subspaces.iter().enumerate() {
        if spec.name.is_empty() {
            return Err(CliError::invalid(format!(
                "subspace {idx}: field `name` must be nonempty"
            )));
        }
        if !names.insert(spec.name.clone()) {
            return Err(CliError::invalid(format!(
                "subspace `{}`: duplicate name",
                spec.name
            )));
        }
        if !(spec.weight > 0.0) {
            return Err(CliError::invalid(format!(
                "subspace `{}`: field `weight` must be positive",
                spec.name
            )));
        }
        if spec.span.is_empty() {
            return Err(CliError::invalid(format!(
                "subspace `{}`: field `span` must be nonempty",
                spec.name
            )));
        }
        let mut vectors = Vec::with_capacity(spec.span.len());
        for (vi, v) in spec.span.iter().enumerate() {
            if v.len() != n {
                return Err(CliError::invalid(format!(
                    "subspace `{}`: span vector {vi} has length {}, expected {n}",
                    spec.name,
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(CliError::invalid(format!(
                    "subspace `{}`: span vector {vi} has a non-finite entry",
                    spec.name
                )));
            }
            vectors.push(DVector::from_column_slice(v));
        }
        let subspace = Subspace::span(&space, &vectors, DEFAULT_RANK_TOL)
            .map_err(|e| CliError::invalid(format!("subspace `{}`: {e}", spec.name)))?;
        subspaces.push((spec.name.clone(), subspace, spec.weight));
    }

    if !(file.options.tolerance > 0.0 && file.options.tolerance.is_finite()) {
        return Err(CliError::invalid(
            "field `options.tolerance` must be a positive number",
        ));
    }

    Ok(Problem {
        space,
        subspaces,
        tolerance: file.options.tolerance,
        variant: file.options.variant,
    })
}

/// Operator file: a dense square matrix, row-major.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub rows: Vec<Vec<f64>>,
}

pub fn parse_operator(text: &str) -> Result<DMatrix<f64>, CliError> {
    let file: OperatorFile = serde_json::from_str(text)
        .map_err(|e| CliError::invalid(format!("operator file is not valid: {e}")))?;
    let n = file.rows.len();
    if n == 0 || file.rows.iter().any(|r| r.len() != n) {
        return Err(CliError::invalid(
            "field `rows` must be a nonempty square matrix",
        ));
    }
    let flat: Vec<f64> = file.rows.iter().flatten().copied().collect();
    if flat.iter().any(|x| !x.is_finite()) {
        return Err(CliError::invalid("field `rows` has a non-finite entry"));
    }
    Ok(DMatrix::from_row_slice(n, n, &flat))
}
