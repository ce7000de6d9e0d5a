//! JSON encodings of matrices, vectors, complex numbers and quadrature rules.

use cimmino_core::linalg::{Matrix, SpdForm, SymMatrix};
use cimmino_core::spherequad::{Method, QuadratureSpec};
use cimmino_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `{"n": 2, "rows": [[1, 0], [0, 1]]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> Self {
        Self { n: m.dim(), rows: m.to_rows() }
    }

    pub fn to_matrix(&self, name: &str) -> Result<Matrix, CliError> {
        if self.n == 0 || self.rows.len() != self.n || self.rows.iter().any(|r| r.len() != self.n) {
            return Err(CliError::Validation(format!(
                "{name}: expected {n} rows of length {n}",
                n = self.n
            )));
        }
        Matrix::from_rows(&self.rows).map_err(|e| CliError::Validation(format!("{name}: {e}")))
    }

    pub fn to_sym(&self, name: &str) -> Result<SymMatrix, CliError> {
        SymMatrix::new(self.to_matrix(name)?).map_err(|e| CliError::Validation(format!("{name}: {e}")))
    }

    pub fn to_form(&self, name: &str) -> Result<SpdForm, CliError> {
        SpdForm::new(self.to_sym(name)?).map_err(|e| CliError::Validation(format!("{name}: {e}")))
    }
}

/// `{"v": [1, 2, 3]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    pub v: Vec<f64>,
}

/// A complex number written either as a bare number or as `{"re", "im"}`.
/// Real values serialize as bare numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexJson {
    Real(f64),
    Complex(ReIm),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReIm {
    pub re: f64,
    pub im: f64,
}

impl ComplexJson {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexJson::Real(x) => Complex64::new(x, 0.0),
            ComplexJson::Complex(ReIm { re, im }) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            ComplexJson::Real(z.re)
        } else {
            ComplexJson::Complex(ReIm { re: z.re, im: z.im })
        }
    }
}

/// `{"start": 2, "end": 4, "steps": 5}`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SRange {
    pub start: ComplexJson,
    pub end: ComplexJson,
    pub steps: usize,
}

impl SRange {
    pub fn points(&self) -> Result<Vec<Complex64>, CliError> {
        let (a, b) = (self.start.value(), self.end.value());
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(CliError::Validation("s_range: endpoints must be finite".into()));
        }
        match self.steps {
            0 => Err(CliError::Validation("s_range: steps must be at least 1".into())),
            1 if a != b => Err(CliError::Validation("s_range: a single step needs start == end".into())),
            1 => Ok(vec![a]),
            k => Ok((0..k).map(|i| a + (b - a) * (i as f64 / (k - 1) as f64)).collect()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodJson {
    CircleTrapezoid,
    ProductGauss,
    MonteCarlo,
}

/// `{"method": "monte_carlo", "nodes": 1000000, "seed": 42}`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureJson {
    pub method: MethodJson,
    pub nodes: usize,
    #[serde(default)]
    pub seed: u64,
}

impl QuadratureJson {
    pub fn to_spec(self) -> QuadratureSpec {
        match self.method {
            MethodJson::CircleTrapezoid => QuadratureSpec::circle_trapezoid(self.nodes),
            MethodJson::ProductGauss => QuadratureSpec::product_gauss(self.nodes),
            MethodJson::MonteCarlo => QuadratureSpec::monte_carlo(self.nodes, self.seed),
        }
    }

    pub fn from_spec(spec: &QuadratureSpec) -> Self {
        let method = match spec.method {
            Method::CircleTrapezoid => MethodJson::CircleTrapezoid,
            Method::ProductGauss => MethodJson::ProductGauss,
            Method::MonteCarlo => MethodJson::MonteCarlo,
        };
        Self { method, nodes: spec.nodes, seed: spec.seed }
    }
}
