//! The input file shared by all commands.

use cimmino_core::linalg::{Lattice, Matrix, SpdForm, SymMatrix};
use cimmino_core::solver::Route;
use cimmino_core::spherequad::QuadratureSpec;
use cimmino_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::formats::{ComplexJson, MatrixJson, QuadratureJson, SRange, VectorJson};

pub const MIN_TOLERANCE: f64 = 1e-14;
pub const MAX_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteJson {
    Residues,
    Integrals,
    NumericResidues,
}

impl RouteJson {
    pub fn route(self) -> Route {
        match self {
            RouteJson::Residues => Route::Residues,
            RouteJson::Integrals => Route::Integrals,
            RouteJson::NumericResidues => Route::NumericResidues,
        }
    }
}

/// Checks a case in a user-supplied verification file can ask for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckJson {
    Funceq,
    Residue,
    Overlap,
    ThetaTransform,
    Solve,
}

/// Every field is optional; each command checks for the ones it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixJson>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<MatrixJson>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<VectorJson>,
    /// Test vector of the vector functional equation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<VectorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_list: Option<Vec<ComplexJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_range: Option<SRange>,
    /// Theta scale parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<RouteJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckJson>,
}

/// Which zeta function the matrices in an input describe.
#[derive(Debug, Clone)]
pub enum Family {
    /// `ζ_L(Q, s)`; `L = Zⁿ` when no lattice is given.
    Epstein { lattice: Lattice, form: SpdForm },
    /// `ζ_L(Q, B, s)`.
    Weighted { lattice: Lattice, form: SpdForm, weight: SymMatrix },
    /// `ζ(A, b, s)`, with an optional test vector `c`.
    Vector { a: Matrix, b: Vec<f64>, c: Option<Vec<f64>> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Epstein { .. } => "epstein",
            Family::Weighted { .. } => "weighted",
            Family::Vector { .. } => "vector",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Family::Epstein { form, .. } | Family::Weighted { form, .. } => form.dim(),
            Family::Vector { a, .. } => a.dim(),
        }
    }
}

fn missing(what: &str) -> CliError {
    CliError::Validation(format!("missing field {what}"))
}

impl Input {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let input: Input = serde_json::from_str(text)?;
        input.validate()?;
        Ok(input)
    }

    /// Checks that do not depend on the command.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.tolerance {
            if !(MIN_TOLERANCE..=MAX_TOLERANCE).contains(&t) {
                return Err(CliError::Validation(format!(
                    "tolerance {t:e} outside [{MIN_TOLERANCE:e}, {MAX_TOLERANCE:e}]"
                )));
            }
        }
        let given = [self.s.is_some(), self.s_list.is_some(), self.s_range.is_some()];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(CliError::Validation("give at most one of s, s_list, s_range".into()));
        }
        if self.t.is_some() && self.t_list.is_some() {
            return Err(CliError::Validation("give at most one of t, t_list".into()));
        }
        Ok(())
    }

    pub fn tolerance_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    /// The requested `s` values, in order.
    pub fn s_values(&self) -> Result<Vec<Complex64>, CliError> {
        let pts = if let Some(s) = self.s {
            vec![s.value()]
        } else if let Some(list) = &self.s_list {
            if list.is_empty() {
                return Err(CliError::Validation("s_list is empty".into()));
            }
            list.iter().map(|z| z.value()).collect()
        } else if let Some(r) = &self.s_range {
            r.points()?
        } else {
            return Err(missing("s, s_list or s_range"));
        };
        if pts.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(CliError::Validation("s must be finite".into()));
        }
        Ok(pts)
    }

    pub fn t_values(&self) -> Result<Vec<f64>, CliError> {
        let ts = match (&self.t, &self.t_list) {
            (Some(t), _) => vec![*t],
            (None, Some(list)) if !list.is_empty() => list.clone(),
            _ => return Err(missing("t or t_list")),
        };
        if ts.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(CliError::Validation("t must be positive and finite".into()));
        }
        Ok(ts)
    }

    pub fn matrix_a(&self) -> Result<Matrix, CliError> {
        self.a.as_ref().ok_or_else(|| missing("A"))?.to_matrix("A")
    }

    pub fn vector_b(&self) -> Result<Vec<f64>, CliError> {
        let b = self.b.as_ref().ok_or_else(|| missing("b"))?.v.clone();
        if b.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Validation("b: non-finite entry".into()));
        }
        Ok(b)
    }

    /// `Q`, defaulting to the identity when only a lattice is given.
    pub fn form(&self) -> Result<SpdForm, CliError> {
        match (&self.q, &self.lattice) {
            (Some(q), _) => q.to_form("Q"),
            (None, Some(l)) => Ok(SpdForm::identity(l.n)),
            (None, None) => Err(missing("Q")),
        }
    }

    pub fn lattice(&self, n: usize) -> Result<Lattice, CliError> {
        match &self.lattice {
            None => Ok(Lattice::integer(n)),
            Some(l) => {
                if l.n != n {
                    return Err(CliError::Validation(format!("lattice has dimension {}, Q has {n}", l.n)));
                }
                Ok(Lattice::new(l.to_matrix("lattice")?)?)
            }
        }
    }

    /// Resolves the zeta family: `A` with `b` is the vector family, `Q` or
    /// `lattice` with `B` the weighted one, `Q` or `lattice` alone Epstein.
    pub fn family(&self) -> Result<Family, CliError> {
        if self.a.is_some() {
            if self.q.is_some() || self.weight.is_some() || self.lattice.is_some() {
                return Err(CliError::Validation("A cannot be combined with Q, B or lattice".into()));
            }
            let a = self.matrix_a()?;
            let b = self.vector_b()?;
            let c = self.c.as_ref().map(|c| c.v.clone());
            for v in std::iter::once(&b).chain(c.as_ref()) {
                if v.len() != a.dim() {
                    return Err(CliError::Validation(format!("vector length {} does not match A ({})", v.len(), a.dim())));
                }
            }
            if Lattice::new(a.clone()).is_err() {
                return Err(CliError::Singular("A is singular".into()));
            }
            return Ok(Family::Vector { a, b, c });
        }
        let form = self.form()?;
        let lattice = self.lattice(form.dim())?;
        match &self.weight {
            None => Ok(Family::Epstein { lattice, form }),
            Some(w) => {
                let weight = w.to_sym("B")?;
                if weight.dim() != form.dim() {
                    return Err(CliError::Validation("B and Q differ in dimension".into()));
                }
                Ok(Family::Weighted { lattice, form, weight })
            }
        }
    }

    /// The quadrature rule, with the seed replaced by `seed` when given.
    pub fn quadrature(&self, seed: Option<u64>) -> Option<QuadratureSpec> {
        self.quadrature.map(|q| {
            let mut spec = q.to_spec();
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            spec
        })
    }
}
