//! Solving `Ax = b` through sphere integrals and zeta residues.
//!
//! With `u` ranging over the unit sphere `S^{n-1}`,
//!
//! ```text
//! R   = ∫ ‖Aᵀu‖^{-n} du                                = n V_n / |det A|
//! R_i = n ∫ ‖Aᵀu‖^{-n-2} ⟨b, u⟩ ⟨Aᵀu, e_i⟩ du          = n V_n x_i / |det A|
//! ```
//!
//! (`V_n` the volume of the unit ball), so `x_i = R_i / R`. The same two
//! numbers are residues: `R = Res_{s=n} ζ_{AᵀZⁿ}(I, s/2)` and
//! `R_i = n Res_{s=n+2} ⟨ζ(Aᵀ, b, s/2), e_i⟩`. Substituting `s/2` doubles the
//! residues of the zeta functions at `n/2` and `n/2 + 1`.
//!
//! Every route is compared against a direct LU solve.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{gram_transform, Lattice, Matrix, SpdForm, SymMatrix};
use crate::spherequad::{sphere_integrate, sphere_integrate_raw, QuadratureSpec, SphereIntegralResult};
use crate::tolerances::{CONDITION_WARNING, MIN_ABS_DET, RESIDUE_NODES, RESIDUE_RHO};
use crate::zeta::{epstein_continued, residue_epstein, residue_numeric, residue_numeric_vector, residue_vector, vector_zeta};

/// A square system `Ax = b` with `A` nonsingular to working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    a: Matrix,
    b: Vec<f64>,
}

impl LinearSystem {
    pub fn new(a: Matrix, b: Vec<f64>) -> Result<Self> {
        if b.len() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.len() });
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(a.det().abs() > MIN_ABS_DET) {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { a, b })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Closed-form residues.
    Residues,
    /// Sphere quadrature of `R` and `R_i`.
    Integrals,
    /// Contour integrals of the continued zeta functions.
    NumericResidues,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Residues => "residues",
            Route::Integrals => "integrals",
            Route::NumericResidues => "numeric_residues",
        }
    }
}

/// How a [`SolveReport`] was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodInfo {
    pub route: Route,
    pub quadrature: Option<QuadratureSpec>,
    /// Contour radius and node count of the numeric residues.
    pub contour: Option<(f64, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub x_reference: Vec<f64>,
    pub r: f64,
    pub ri: Vec<f64>,
    /// `|x_i - x_ref,i| / max(|x_ref,i|, ‖x_ref‖_∞)`.
    pub per_component_rel_err: Vec<f64>,
    /// Error bars on `x` (quadrature route only): `3σ` for Monte Carlo.
    pub x_error_estimate: Option<Vec<f64>>,
    pub method: MethodInfo,
    /// `‖A‖₁ ‖A⁻¹‖₁`.
    pub condition_estimate: f64,
    pub warning: Option<&'static str>,
}

impl SolveReport {
    fn assemble(sys: &LinearSystem, r: f64, ri: Vec<f64>, method: MethodInfo, x_err: Option<Vec<f64>>) -> Result<Self> {
        let x_reference = solve_direct(&sys.a, &sys.b)?;
        let x: Vec<f64> = ri.iter().map(|v| v / r).collect();
        let scale = x_reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let per_component_rel_err = x
            .iter()
            .zip(&x_reference)
            .map(|(a, b)| {
                let d = (a - b).abs();
                let denom = b.abs().max(scale);
                if denom > 0.0 {
                    d / denom
                } else {
                    d
                }
            })
            .collect();
        let condition_estimate = sys.a.condition_1()?;
        let warning = (condition_estimate > CONDITION_WARNING)
            .then_some("condition number above 1e6: quadrature and residue routes are unreliable");
        Ok(Self {
            x,
            x_reference,
            r,
            ri,
            per_component_rel_err,
            x_error_estimate: x_err,
            method,
            condition_estimate,
            warning,
        })
    }

    pub fn max_rel_err(&self) -> f64 {
        self.per_component_rel_err.iter().fold(0.0, |m, &v| m.max(v))
    }
}

fn det2(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule `x_i = D_i / D` by cofactor expansion, `n <= 3`.
fn cramer(a: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = a.dim();
    let mut m = [[0.0; 3]; 3];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = a.get(i, j);
        }
    }
    let det = |m: &[[f64; 3]; 3]| match n {
        1 => m[0][0],
        2 => det2(m),
        _ => det3(m),
    };
    let d = det(&m);
    (0..n)
        .map(|k| {
            let mut mk = m;
            for i in 0..n {
                mk[i][k] = b[i];
            }
            det(&mk) / d
        })
        .collect()
}

/// `x = A⁻¹b` by LU with partial pivoting. For `n <= 3` the result is
/// checked against Cramer's rule (relative agreement `1e-12`, scaled by the
/// condition number).
pub fn solve_direct(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.len() });
    }
    let lu = a.lu()?;
    if !(lu.det().abs() > MIN_ABS_DET) {
        return Err(Error::SingularMatrix);
    }
    let x = lu.solve(b)?;
    if a.dim() <= 3 {
        let y = cramer(a, b);
        let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale > 0.0 {
            let diff = x.iter().zip(&y).fold(0.0f64, |m, (p, q)| m.max((p - q).abs())) / scale;
            let cond = a.condition_1()?;
            if diff > 1e-12 * cond.max(1.0) {
                return Err(Error::CrossCheckFailed(diff));
            }
        }
    }
    Ok(x)
}

fn norm_at(a: &Matrix, u: &[f64], v: &mut [f64]) -> f64 {
    // v = Aᵀu
    let n = a.dim();
    for j in 0..n {
        v[j] = (0..n).map(|i| a.get(i, j) * u[i]).sum();
    }
    v.iter().map(|x| x * x).sum::<f64>()
}

/// `R = ∫_{S^{n-1}} ‖Aᵀu‖^{-n} du`.
pub fn cimmino_r_integral(a: &Matrix, spec: &QuadratureSpec) -> Result<SphereIntegralResult> {
    let n = a.dim();
    let mut v = vec![0.0; n];
    sphere_integrate(|u| norm_at(a, u, &mut v).powf(-(n as f64) / 2.0), n, spec)
}

/// `R_i = n ∫_{S^{n-1}} ‖Aᵀu‖^{-n-2} ⟨b, u⟩ ⟨Aᵀu, e_i⟩ du` (`i` zero-based).
pub fn cimmino_ri_integral(a: &Matrix, b: &[f64], i: usize, spec: &QuadratureSpec) -> Result<SphereIntegralResult> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if i >= n {
        return Err(Error::InvalidArgument("component index out of range"));
    }
    let mut v = vec![0.0; n];
    let r = sphere_integrate(
        |u| {
            let q = norm_at(a, u, &mut v);
            let bu: f64 = b.iter().zip(u).map(|(x, y)| x * y).sum();
            q.powf(-(n as f64) / 2.0 - 1.0) * bu * v[i]
        },
        n,
        spec,
    )?;
    Ok(SphereIntegralResult { value: n as f64 * r.value, error_estimate: n as f64 * r.error_estimate })
}

/// `x_i = R_i / R` with `R` and all `R_i` from the same quadrature nodes.
pub fn solve_via_integrals(a: &Matrix, b: &[f64], spec: &QuadratureSpec) -> Result<SolveReport> {
    let sys = LinearSystem::new(a.clone(), b.to_vec())?;
    let n = sys.dim();
    let nf = n as f64;
    let mut v = vec![0.0; n];
    let raw = sphere_integrate_raw(
        |u, out| {
            let q = norm_at(a, u, &mut v);
            let base = q.powf(-nf / 2.0);
            out[0] = base;
            let bu: f64 = b.iter().zip(u).map(|(x, y)| x * y).sum();
            let w = nf * base / q * bu;
            for i in 0..n {
                out[i + 1] = w * v[i];
            }
        },
        n + 1,
        n,
        spec,
    )?;
    let vals = raw.values();
    let r = vals[0];
    if !(r > 0.0) {
        return Err(Error::DegenerateQuadrature);
    }
    let ri = vals[1..].to_vec();
    let mut x_err = Vec::with_capacity(n);
    for i in 0..n {
        let mut grad = vec![0.0; n + 1];
        grad[0] = -ri[i] / (r * r);
        grad[i + 1] = 1.0 / r;
        x_err.push(raw.derived_error(&|v: &[f64]| v[i + 1] / v[0], &grad));
    }
    let method = MethodInfo { route: Route::Integrals, quadrature: Some(*spec), contour: None };
    SolveReport::assemble(&sys, r, ri, method, Some(x_err))
}

/// `R = 2 Res_{n/2} ζ_{AᵀZⁿ}(I, ·)`, `R_i = 2n Res_{n/2+1} ζ(Aᵀ, b, ·)_i`,
/// both in closed form.
pub fn solve_via_residues(a: &Matrix, b: &[f64]) -> Result<SolveReport> {
    let sys = LinearSystem::new(a.clone(), b.to_vec())?;
    let n = sys.dim();
    let at = a.transpose();
    let lattice = Lattice::new(at.clone())?;
    let r = 2.0 * residue_epstein(&lattice, &SpdForm::identity(n))?.residue.components()[0].re;
    let rv = residue_vector(&at, b)?;
    let ri = rv.residue.components().iter().map(|z| 2.0 * n as f64 * z.re).collect();
    let method = MethodInfo { route: Route::Residues, quadrature: None, contour: None };
    SolveReport::assemble(&sys, r, ri, method, None)
}

/// `R` and `R_i` as contour-integral residues of `s ↦ ζ(AAᵀ, s/2)` at
/// `s = n` and `s ↦ ζ(Aᵀ, b, s/2)` at `s = n + 2`; `x_i = n · res_i / R`.
/// Restricted to `n <= 3` for cost.
pub fn numeric_residue_solve(a: &Matrix, b: &[f64]) -> Result<SolveReport> {
    let sys = LinearSystem::new(a.clone(), b.to_vec())?;
    let n = sys.dim();
    if n > 3 {
        return Err(Error::InvalidArgument("numeric residue solve is limited to n <= 3"));
    }
    let at = a.transpose();
    let form = SpdForm::new(gram_transform(&SymMatrix::identity(n), &at)?)?;
    let nf = n as f64;
    let r = residue_numeric(|s| Ok(epstein_continued(&form, s / 2.0)?.value), nf, RESIDUE_RHO, RESIDUE_NODES)?
        .residue
        .components()[0]
        .re;
    let rv = residue_numeric_vector(
        |s| Ok(vector_zeta(&at, b, s / 2.0)?.iter().map(|z| z.value).collect::<Vec<Complex64>>()),
        nf + 2.0,
        RESIDUE_RHO,
        RESIDUE_NODES,
    )?;
    let ri = rv.residue.components().iter().map(|z| nf * z.re).collect();
    let method = MethodInfo { route: Route::NumericResidues, quadrature: None, contour: Some((RESIDUE_RHO, RESIDUE_NODES)) };
    SolveReport::assemble(&sys, r, ri, method, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn close(x: &[f64], y: &[f64], tol: f64) -> bool {
        x.iter().zip(y).all(|(a, b)| (a - b).abs() <= tol * b.abs().max(1.0))
    }

    #[test]
    fn direct_examples() {
        assert_eq!(solve_direct(&Matrix::identity(3), &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(close(&solve_direct(&Matrix::diagonal(&[2.0, 3.0]), &[2.0, 3.0]).unwrap(), &[1.0, 1.0], 1e-15));
        let a = m(&[&[2.0, 1.0], &[1.0, 3.0]]);
        assert!(close(&solve_direct(&a, &[5.0, 10.0]).unwrap(), &[1.0, 3.0], 1e-15));
        assert_eq!(cramer(&a, &[5.0, 10.0]), vec![1.0, 3.0]);
        assert_eq!(solve_direct(&m(&[&[1.0, 1.0], &[1.0, 1.0]]), &[1.0, 2.0]), Err(Error::SingularMatrix));
    }

    #[test]
    fn integral_examples() {
        let spec = QuadratureSpec::circle_trapezoid(512);
        assert!((cimmino_r_integral(&Matrix::identity(2), &spec).unwrap().value - 2.0 * PI).abs() < 1e-13);
        let d = Matrix::diagonal(&[2.0, 3.0]);
        assert!((cimmino_r_integral(&d, &spec).unwrap().value - PI / 3.0).abs() < 1e-12);
        let g = QuadratureSpec::product_gauss(12);
        assert!((cimmino_r_integral(&Matrix::identity(3), &g).unwrap().value - 4.0 * PI).abs() < 1e-12);

        let e1 = [1.0, 0.0];
        assert!((cimmino_ri_integral(&Matrix::identity(2), &e1, 0, &spec).unwrap().value - 2.0 * PI).abs() < 1e-12);
        assert!(cimmino_ri_integral(&Matrix::identity(2), &e1, 1, &spec).unwrap().value.abs() < 1e-13);
        assert!((cimmino_ri_integral(&d, &[2.0, 3.0], 0, &spec).unwrap().value - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn integral_solve_examples() {
        let r = solve_via_integrals(&Matrix::identity(2), &[0.3, -2.0], &QuadratureSpec::circle_trapezoid(256)).unwrap();
        assert!(close(&r.x, &[0.3, -2.0], 1e-12));
        let a = m(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let r = solve_via_integrals(&a, &[5.0, 10.0], &QuadratureSpec::circle_trapezoid(1024)).unwrap();
        assert!(r.max_rel_err() < 1e-8);
        assert_eq!(r.method.route, Route::Integrals);
        let r = solve_via_integrals(&m(&[&[2.0, 0.5, 0.0], &[0.3, 1.5, 0.2], &[0.0, -0.4, 1.0]]), &[1.0, 2.0, 3.0], &QuadratureSpec::product_gauss(48)).unwrap();
        assert!(r.max_rel_err() < 1e-8, "{}", r.max_rel_err());
    }

    #[test]
    fn monte_carlo_solve() {
        let a = m(&[
            &[3.0, 0.5, 0.2, 0.0],
            &[0.1, 2.5, 0.3, 0.4],
            &[0.0, 0.2, 2.0, 0.1],
            &[0.3, 0.0, 0.4, 3.5],
        ]);
        let b = [1.0, -2.0, 0.5, 3.0];
        let r = solve_via_integrals(&a, &b, &QuadratureSpec::monte_carlo(1_000_000, 42)).unwrap();
        assert!(r.max_rel_err() < 1e-2, "{}", r.max_rel_err());
        let err = r.x_error_estimate.as_ref().unwrap();
        for i in 0..4 {
            assert!((r.x[i] - r.x_reference[i]).abs() <= err[i]);
        }
    }

    #[test]
    fn residue_examples() {
        let r = solve_via_residues(&Matrix::diagonal(&[2.0, 3.0]), &[2.0, 3.0]).unwrap();
        assert!((r.r - PI / 3.0).abs() < 1e-15);
        assert!(r.ri.iter().all(|v| (v - PI / 3.0).abs() < 1e-15));
        assert!(close(&r.x, &[1.0, 1.0], 1e-15));
        let r = solve_via_residues(&Matrix::identity(2), &[7.0, -4.0]).unwrap();
        assert!(close(&r.x, &[7.0, -4.0], 1e-15));
        let r = solve_via_residues(&m(&[&[2.0, 1.0], &[1.0, 3.0]]), &[5.0, 10.0]).unwrap();
        assert!(r.max_rel_err() < 1e-12);
        assert_eq!(solve_via_residues(&m(&[&[1.0, 1.0], &[1.0, 1.0]]), &[1.0, 1.0]), Err(Error::SingularMatrix));
    }

    #[test]
    fn numeric_residue_examples() {
        let r = numeric_residue_solve(&Matrix::identity(2), &[1.0, 0.0]).unwrap();
        assert!(close(&r.x, &[1.0, 0.0], 1e-8));
        let r = numeric_residue_solve(&Matrix::diagonal(&[2.0, 3.0]), &[2.0, 3.0]).unwrap();
        assert!(r.max_rel_err() < 1e-8);
        let r = numeric_residue_solve(&m(&[&[2.0, 1.0], &[1.0, 3.0]]), &[5.0, 10.0]).unwrap();
        assert!(r.max_rel_err() < 1e-7);
    }

    #[test]
    fn condition_warning() {
        let a = m(&[&[1.0, 1.0], &[1.0, 1.0 + 1e-7]]);
        let r = solve_via_residues(&a, &[1.0, 2.0]).unwrap();
        assert!(r.condition_estimate > 1e6);
        assert!(r.warning.is_some());
    }
}
