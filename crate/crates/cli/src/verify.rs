//! The `verify` command: a built-in suite of identity checks, or the cases
//! of a user file.

use std::collections::BTreeSet;

use cimmino_core::linalg::{Lattice, Matrix, SpdForm, SymMatrix};
use cimmino_core::solver::{numeric_residue_solve, solve_direct, solve_via_integrals, solve_via_residues, Route};
use cimmino_core::specfun::{gamma, upper_incomplete_gamma};
use cimmino_core::spherequad::{QuadratureSpec, SphereRng};
use cimmino_core::solver::{cimmino_r_integral, cimmino_ri_integral};
use cimmino_core::theta::{enumerate_ellipsoid, theta_asymptotic_fit, theta_transform_residual};
use cimmino_core::zeta::{epstein_continued, epstein_direct, residue_epstein, residue_vector, weighted_continued, weighted_direct};
use cimmino_core::{Complex64, Error};

use crate::commands::{funceq_residual, residue_record, solve};
use crate::error::CliError;
use crate::input::{CheckJson, Family, Input};
use crate::output::{json_lines, verify_csv, verify_table, Format, VerifyRow};

/// Whether a failing tolerance override applies to a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Floating-point error measure; `tolerance` replaces the bound.
    Numeric,
    /// Count of mismatches; the bound stays at zero.
    Exact,
}

struct Check {
    name: String,
    measured: f64,
    bound: f64,
    kind: Kind,
}

impl Check {
    fn new(name: &str, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), measured, bound, kind: Kind::Numeric }
    }

    fn row(self, tolerance: Option<f64>) -> VerifyRow {
        let bound = match (self.kind, tolerance) {
            (Kind::Numeric, Some(t)) => t,
            _ => self.bound,
        };
        VerifyRow { name: self.name, measured: self.measured, bound, pass: self.measured <= bound }
    }
}

fn forms() -> Vec<SpdForm> {
    vec![
        SpdForm::identity(1),
        SpdForm::identity(2),
        SpdForm::from_rows(&[[2.0, 0.5], [0.5, 1.0]]).unwrap(),
        SpdForm::from_rows(&[[2.0, 0.5, 0.0], [0.5, 1.5, 0.2], [0.0, 0.2, 1.0]]).unwrap(),
    ]
}

fn weight_for(n: usize) -> SymMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1.0 + 0.5 * i as f64;
        if i + 1 < n {
            row[i + 1] = 0.2;
        }
        if i > 0 {
            row[i - 1] = 0.2;
        }
    }
    SymMatrix::from_rows(&rows).unwrap()
}

fn systems() -> Vec<(Matrix, Vec<f64>)> {
    vec![
        (Matrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap(), vec![5.0, 10.0]),
        (Matrix::diagonal(&[2.0, 3.0]), vec![2.0, 3.0]),
        (Matrix::from_rows(&[[1.5, -0.4], [0.3, 0.8]]).unwrap(), vec![-1.0, 2.0]),
        (Matrix::from_rows(&[[2.0, 0.5, 0.0], [0.3, 1.5, 0.2], [0.0, -0.4, 1.0]]).unwrap(), vec![1.0, 2.0, 3.0]),
    ]
}

const FUNCEQ_POINTS: [(f64, f64); 5] = [(0.3, 0.7), (1.7, -0.4), (-0.6, 1.1), (0.45, 0.0), (2.2, 2.5)];

fn max_of<I: IntoIterator<Item = Result<f64, Error>>>(it: I) -> Result<f64, Error> {
    let mut m = 0.0f64;
    for v in it {
        let v = v?;
        m = if v.is_nan() { f64::NAN } else { m.max(v) };
    }
    Ok(m)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn brute_force(form: &SpdForm, radius: f64) -> Result<BTreeSet<Vec<i64>>, Error> {
    let n = form.dim();
    let inv = form.inverse();
    let bounds: Vec<i64> = (0..n).map(|i| (radius * inv.get(i, i)).sqrt().ceil() as i64).collect();
    let mut out = BTreeSet::new();
    let mut w: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let x: Vec<f64> = w.iter().map(|&c| c as f64).collect();
        if w.iter().any(|&c| c != 0) && form.qeval(&x)? <= radius {
            out.insert(w.clone());
        }
        let mut k = 0;
        while k < n {
            w[k] += 1;
            if w[k] <= bounds[k] {
                break;
            }
            w[k] = -bounds[k];
            k += 1;
        }
        if k == n {
            return Ok(out);
        }
    }
}

fn builtin_checks() -> Result<Vec<Check>, Error> {
    let forms = forms();
    let lattice_of = |f: &SpdForm| Lattice::integer(f.dim());
    let mut checks = Vec::new();

    let t_grid = [0.05, 0.3, 1.0, 3.0, 20.0];
    checks.push(Check::new(
        "theta_transform",
        max_of(forms.iter().flat_map(|f| t_grid.iter().map(move |&t| theta_transform_residual(f, t))))?,
        1e-12,
    ));
    let fit_grid = [0.1, 0.05, 0.02, 0.01];
    let mut alpha_err = 0.0f64;
    let mut r_err = 0.0f64;
    for f in &forms {
        let (alpha, r) = theta_asymptotic_fit(f, &fit_grid)?;
        alpha_err = alpha_err.max((alpha - f.dim() as f64 / 2.0).abs());
        r_err = r_err.max((r - 1.0 / f.det().sqrt()).abs());
    }
    checks.push(Check::new("theta_fit_alpha", alpha_err, 1e-3));
    checks.push(Check::new("theta_fit_R", r_err, 1e-3));

    let mut mismatches = 0usize;
    for f in &forms {
        for radius in [3.7, 11.3, 29.9] {
            let got: BTreeSet<Vec<i64>> = enumerate_ellipsoid(f, radius)?.iter().map(|(w, _)| w.to_vec()).collect();
            mismatches += got.symmetric_difference(&brute_force(f, radius)?).count();
        }
    }
    checks.push(Check { name: "enumerate_vs_brute_force".into(), measured: mismatches as f64, bound: 0.0, kind: Kind::Exact });

    checks.push(Check::new(
        "zeta_at_zero",
        max_of(forms.iter().map(|f| Ok((epstein_continued(f, Complex64::new(0.0, 0.0))?.value + 1.0).norm())))?,
        1e-10,
    ));

    let overlap_points = |f: &SpdForm| {
        let h = f.dim() as f64 / 2.0 + 2.0;
        [Complex64::new(h, 0.0), Complex64::new(h, 1.5)]
    };
    checks.push(Check::new(
        "overlap_epstein",
        max_of(forms.iter().flat_map(|f| {
            overlap_points(f).map(|s| Ok(rel(epstein_continued(f, s)?.value, epstein_direct(f, s, 1e-13)?.value)))
        }))?,
        1e-11,
    ));
    checks.push(Check::new(
        "overlap_weighted",
        max_of(forms.iter().flat_map(|f| {
            let b = weight_for(f.dim());
            overlap_points(f).map(move |s| {
                Ok(rel(weighted_continued(f, &b, s)?.value, weighted_direct(f, &b, s, 1e-13)?.value))
            })
        }))?,
        1e-11,
    ));

    let families: Vec<Family> = forms
        .iter()
        .flat_map(|f| {
            [
                Family::Epstein { lattice: lattice_of(f), form: f.clone() },
                Family::Weighted { lattice: lattice_of(f), form: f.clone(), weight: weight_for(f.dim()) },
            ]
        })
        .chain(systems().into_iter().map(|(a, b)| Family::Vector { c: Some(b.iter().rev().copied().collect()), a, b }))
        .collect();
    for name in ["epstein", "weighted", "vector"] {
        let fam = families.iter().filter(|f| f.name() == name);
        checks.push(Check::new(
            &format!("residue_{name}"),
            max_of(fam.clone().map(|f| Ok(residue_record(f)?.abs_diff)))?,
            1e-8,
        ));
        checks.push(Check::new(
            &format!("funceq_{name}"),
            max_of(fam.flat_map(|f| {
                FUNCEQ_POINTS.iter().map(move |&(re, im)| Ok(funceq_residual(f, Complex64::new(re, im))?.residual))
            }))?,
            1e-8,
        ));
    }

    // Sphere integrals against twice the residues.
    let mut n2 = 0.0f64;
    let mut n3 = 0.0f64;
    for (a, b) in systems() {
        let n = a.dim();
        let spec = if n == 2 { QuadratureSpec::circle_trapezoid(512) } else { QuadratureSpec::product_gauss(32) };
        let at = a.transpose();
        let r_exact = 2.0 * residue_epstein(&Lattice::new(at.clone())?, &SpdForm::identity(n))?.residue.components()[0].re;
        let ri_exact = residue_vector(&at, &b)?;
        let mut worst = (cimmino_r_integral(&a, &spec)?.value - r_exact).abs() / r_exact;
        for (i, z) in ri_exact.residue.components().iter().enumerate() {
            let exact = 2.0 * n as f64 * z.re;
            let got = cimmino_ri_integral(&a, &b, i, &spec)?.value;
            worst = worst.max((got - exact).abs() / exact.abs().max(r_exact));
        }
        if n == 2 {
            n2 = n2.max(worst);
        } else {
            n3 = n3.max(worst);
        }
    }
    checks.push(Check::new("integrals_n2_trapezoid", n2, 1e-10));
    checks.push(Check::new("integrals_n3_product_gauss", n3, 1e-8));

    checks.push(Check::new(
        "solve_residues",
        max_of(systems().iter().map(|(a, b)| Ok(solve_via_residues(a, b)?.max_rel_err())))?,
        1e-12,
    ));
    checks.push(Check::new(
        "solve_integrals",
        max_of(systems().iter().map(|(a, b)| {
            let spec = if a.dim() == 2 { QuadratureSpec::circle_trapezoid(1024) } else { QuadratureSpec::product_gauss(48) };
            Ok(solve_via_integrals(a, b, &spec)?.max_rel_err())
        }))?,
        1e-8,
    ));
    checks.push(Check::new(
        "solve_numeric_residues",
        max_of(systems().iter().map(|(a, b)| Ok(numeric_residue_solve(a, b)?.max_rel_err())))?,
        1e-7,
    ));
    checks.push(Check::new(
        "solve_direct_residual",
        max_of(systems().iter().map(|(a, b)| {
            let x = solve_direct(a, b)?;
            let ax = a.mul_vec(&x)?;
            Ok(ax.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / b.iter().fold(0.0f64, |m, v| m.max(v.abs())))
        }))?,
        1e-14,
    ));

    let mut rng = SphereRng::new(7, 0);
    let mut gamma_res = 0.0f64;
    let mut inc_res = 0.0f64;
    for _ in 0..200 {
        let s = Complex64::new(40.0 * rng.uniform() - 20.0, 40.0 * rng.uniform() - 20.0);
        let s = if s.norm() > 20.0 { s * (20.0 / s.norm()) * rng.uniform() } else { s };
        if let (Ok(g1), Ok(g0)) = (gamma(s + 1.0), gamma(s)) {
            gamma_res = gamma_res.max(rel(s * g0, g1));
        }
        let a = Complex64::new(40.0 * rng.uniform() - 20.0, 40.0 * rng.uniform() - 20.0);
        let a = if a.norm() > 20.0 { a * (20.0 / a.norm()) * rng.uniform() } else { a };
        let x = 0.1 + 49.9 * rng.uniform();
        let lhs = upper_incomplete_gamma(a + 1.0, x)?;
        let t1 = a * upper_incomplete_gamma(a, x)?;
        let t2 = (a * x.ln() - x).exp();
        inc_res = inc_res.max((lhs - t1 - t2).norm() / (lhs.norm().max(t1.norm() + t2.norm())));
    }
    checks.push(Check::new("gamma_recurrence", gamma_res, 1e-12));
    checks.push(Check::new("incomplete_gamma_recurrence", inc_res, 1e-12));
    Ok(checks)
}

fn render(rows: &[VerifyRow], format: Format) -> String {
    match format {
        Format::Json => json_lines(rows),
        Format::Csv => verify_csv(rows),
        Format::Table => verify_table(rows),
    }
}

fn finish(rows: Vec<VerifyRow>, format: Format) -> crate::commands::Outcome {
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let failure = (!failed.is_empty()).then(|| CliError::Verification(format!("failed checks: {}", failed.join(", "))));
    crate::commands::Outcome { text: render(&rows, format), notes: Vec::new(), failure }
}

/// Runs the built-in suite. A given input may only set `tolerance`, which
/// replaces the bound of every floating-point check.
pub fn cmd_verify(input: Option<&Input>, format: Format, _seed: Option<u64>) -> Result<crate::commands::Outcome, CliError> {
    let tolerance = match input {
        None => None,
        Some(i) if *i == (Input { tolerance: i.tolerance, ..Input::default() }) => i.tolerance,
        Some(_) => return Err(CliError::Validation("a suite run accepts only a tolerance; give cases a \"check\"".into())),
    };
    let rows = builtin_checks()?.into_iter().map(|c| c.row(tolerance)).collect();
    Ok(finish(rows, format))
}

fn default_bound(input: &Input, check: CheckJson) -> f64 {
    match check {
        CheckJson::Funceq | CheckJson::Residue => 1e-8,
        CheckJson::Overlap => 1e-11,
        CheckJson::ThetaTransform => 1e-12,
        CheckJson::Solve => match input.route.map(|r| r.route()).unwrap_or(Route::Residues) {
            Route::Residues => 1e-12,
            Route::Integrals => 1e-8,
            Route::NumericResidues => 1e-7,
        },
    }
}

fn run_case(input: &Input, seed: Option<u64>) -> Result<Check, CliError> {
    let check = input.check.ok_or_else(|| CliError::Validation("case needs a \"check\" field".into()))?;
    let (name, measured) = match check {
        CheckJson::Funceq => {
            let fam = input.family()?;
            let mut worst = 0.0f64;
            for s in input.s_values()? {
                worst = worst.max(funceq_residual(&fam, s)?.residual);
            }
            (format!("funceq_{}", fam.name()), worst)
        }
        CheckJson::Residue => {
            let fam = input.family()?;
            (format!("residue_{}", fam.name()), residue_record(&fam)?.abs_diff)
        }
        CheckJson::Overlap => {
            let fam = input.family()?;
            let pts = match input.s_values() {
                Ok(p) => p,
                Err(_) => vec![Complex64::new(fam.dim() as f64 / 2.0 + 2.0, 0.0)],
            };
            let mut worst = 0.0f64;
            for s in pts {
                let d = match &fam {
                    Family::Epstein { lattice, form } if is_integer(lattice) => {
                        rel(epstein_continued(form, s)?.value, epstein_direct(form, s, 1e-13)?.value)
                    }
                    Family::Weighted { lattice, form, weight } if is_integer(lattice) => {
                        rel(weighted_continued(form, weight, s)?.value, weighted_direct(form, weight, s, 1e-13)?.value)
                    }
                    _ => return Err(CliError::Validation("overlap cases take Q and optional B, without lattice or A".into())),
                };
                worst = worst.max(d);
            }
            (format!("overlap_{}", fam.name()), worst)
        }
        CheckJson::ThetaTransform => {
            let form = input.form()?;
            let ts = input.t_values().unwrap_or_else(|_| vec![0.05, 0.3, 1.0, 3.0, 20.0]);
            let mut worst = 0.0f64;
            for t in ts {
                worst = worst.max(theta_transform_residual(&form, t)?);
            }
            ("theta_transform".to_string(), worst)
        }
        CheckJson::Solve => {
            let report = solve(input, seed)?;
            (format!("solve_{}", report.method.route.name()), report.max_rel_err())
        }
    };
    let bound = input.tolerance.unwrap_or_else(|| default_bound(input, check));
    Ok(Check { name, measured, bound, kind: Kind::Exact })
}

fn is_integer(l: &Lattice) -> bool {
    *l.generator() == Matrix::identity(l.dim())
}

/// Runs a file: a single case, an array of cases, or `{"tolerance": t}` for
/// the built-in suite with overridden bounds.
pub fn cmd_verify_file(text: &str, format: Format, seed: Option<u64>) -> Result<crate::commands::Outcome, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let cases: Vec<Input> = match value {
        serde_json::Value::Array(items) => {
            items.into_iter().map(serde_json::from_value).collect::<Result<_, _>>()?
        }
        other => vec![serde_json::from_value(other)?],
    };
    for c in &cases {
        c.validate()?;
    }
    if cases.len() == 1 && cases[0].check.is_none() {
        return cmd_verify(Some(&cases[0]), format, seed);
    }
    let mut rows = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        let mut check = run_case(case, seed)?;
        check.name = format!("case{i}:{}", check.name);
        rows.push(check.row(None));
    }
    Ok(finish(rows, format))
}
