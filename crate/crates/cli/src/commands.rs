//! One function per subcommand. Each returns the text to print and, for
//! checks that ran but did not pass, the error that sets the exit code.

use std::path::PathBuf;
use std::time::Instant;

use cimmino_core::linalg::{gram_transform, Lattice, SpdForm};
use cimmino_core::solver::{numeric_residue_solve, solve_via_integrals, solve_via_residues, Route, SolveReport};
use cimmino_core::theta::{theta_star_gaussian, theta_star_weighted};
use cimmino_core::tolerances::{RESIDUE_NODES, RESIDUE_RHO};
use cimmino_core::zeta::{
    epstein_continued, epstein_direct, funceq_residual_lattice, funceq_residual_vector, funceq_residual_weighted,
    lattice_weighted_zeta, lattice_zeta, residue_epstein, residue_numeric, residue_numeric_vector, residue_vector,
    residue_weighted, vector_zeta, FuncEqResidual, PoleReport, ZetaValue,
};
use cimmino_core::spherequad::{sphere_integrate, QuadratureSpec};
use cimmino_core::{Complex64, Error};

use crate::error::CliError;
use crate::formats::QuadratureJson;
use crate::input::{Family, Input};
use crate::output::{
    flagged_csv_row, json_lines, re_im, BenchRecord, Format, FuncEqRecord, MethodRecord, ResidueRecord, SolveRecord,
    ThetaRecord, ZetaRecord, ZETA_CSV_HEADER,
};
use crate::verify;

/// Absolute truncation target of theta sums when the input sets none.
pub const DEFAULT_THETA_TOLERANCE: f64 = 1e-14;
/// Solve acceptance threshold on the largest per-component relative error.
pub const DEFAULT_SOLVE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Zeta,
    Theta,
    Residue,
    Funceq,
    Solve,
    Verify,
    Bench,
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Table,
}

/// Command line: the subcommand, file paths, output format and seed. All
/// numerical settings come from the input file.
#[derive(Debug, Clone, clap::Parser)]
#[command(name = "cimmino", version, about = "Epstein zeta functions, their residues, and Cimmino solves of Ax = b")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Input JSON file.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(short, long, value_enum)]
    pub format: Option<FormatArg>,
    /// Overrides the Monte Carlo seed of the input's quadrature rule.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn format(&self) -> Format {
        match self.format {
            Some(FormatArg::Json) => Format::Json,
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Table) => Format::Table,
            None => match self.command {
                Command::Scan => Format::Csv,
                Command::Verify => Format::Table,
                _ => Format::Json,
            },
        }
    }
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    /// Messages for standard error.
    pub notes: Vec<String>,
    /// Set when the command completed but a check did not pass.
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, notes: Vec::new(), failure: None }
    }
}

/// Runs a command on already-parsed input.
pub fn execute(config: &RunConfig, input: Option<&Input>) -> Result<Outcome, CliError> {
    let format = config.format();
    let need = || input.ok_or_else(|| CliError::Validation("this command needs --input".into()));
    match config.command {
        Command::Zeta => cmd_zeta(need()?, format),
        Command::Theta => cmd_theta(need()?, format),
        Command::Residue => cmd_residue(need()?, format),
        Command::Funceq => cmd_funceq(need()?, format),
        Command::Solve => cmd_solve(need()?, format, config.seed),
        Command::Verify => verify::cmd_verify(input, format, config.seed),
        Command::Bench => cmd_bench(input, format),
        Command::Scan => cmd_scan(need()?, format),
    }
}

/// Reads and parses the input file, if any, then runs the command.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let input = match &config.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            Some(text)
        }
        None => None,
    };
    match (config.command, input) {
        (Command::Verify, Some(text)) => verify::cmd_verify_file(&text, config.format(), config.seed),
        (_, Some(text)) => execute(config, Some(&Input::parse(&text)?)),
        (_, None) => execute(config, None),
    }
}

fn require_scalar_format(format: Format, allowed: &[Format]) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Validation(format!("output format {format:?} is not available for this command")))
    }
}

/// Continued zeta value(s) of a family at `s`: one entry, or `n` for the
/// vector family.
pub fn zeta_values(family: &Family, s: Complex64) -> Result<Vec<ZetaValue>, Error> {
    match family {
        Family::Epstein { lattice, form } => Ok(vec![lattice_zeta(lattice, form, s)?]),
        Family::Weighted { lattice, form, weight } => Ok(vec![lattice_weighted_zeta(lattice, form, weight, s)?]),
        Family::Vector { a, b, .. } => vector_zeta(a, b, s),
    }
}

fn zeta_records(family: &Family, s: Complex64) -> Result<Vec<ZetaRecord>, Error> {
    let vector = matches!(family, Family::Vector { .. });
    Ok(zeta_values(family, s)?
        .into_iter()
        .enumerate()
        .map(|(i, z)| ZetaRecord {
            s: s.into(),
            value_re: z.value.re,
            value_im: z.value.im,
            abs_error: z.abs_error,
            component: vector.then_some(i),
        })
        .collect())
}

pub fn cmd_zeta(input: &Input, format: Format) -> Result<Outcome, CliError> {
    require_scalar_format(format, &[Format::Json, Format::Csv])?;
    let family = input.family()?;
    if format == Format::Csv && matches!(family, Family::Vector { .. }) {
        return Err(CliError::Validation("CSV output covers scalar zeta families only".into()));
    }
    let mut records = Vec::new();
    for s in input.s_values()? {
        records.extend(zeta_records(&family, s)?);
    }
    Ok(Outcome::ok(match format {
        Format::Csv => {
            let mut out = format!("{ZETA_CSV_HEADER}\n");
            for r in &records {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
        _ => json_lines(&records),
    }))
}

pub fn cmd_scan(input: &Input, format: Format) -> Result<Outcome, CliError> {
    require_scalar_format(format, &[Format::Csv])?;
    let range = input.s_range.ok_or_else(|| CliError::Validation("scan needs s_range".into()))?;
    let family = input.family()?;
    if matches!(family, Family::Vector { .. }) {
        return Err(CliError::Validation("scan covers scalar zeta families only".into()));
    }
    let mut out = format!("{ZETA_CSV_HEADER}\n");
    for s in range.points()? {
        match zeta_records(&family, s) {
            Ok(r) => out.push_str(&r[0].csv_row()),
            Err(Error::TooCloseToPole { .. }) | Err(Error::PoleOfGamma(_)) => out.push_str(&flagged_csv_row(s, "pole")),
            Err(e) => return Err(e.into()),
        }
        out.push('\n');
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_theta(input: &Input, format: Format) -> Result<Outcome, CliError> {
    require_scalar_format(format, &[Format::Json, Format::Csv])?;
    let tol = input.tolerance_or(DEFAULT_THETA_TOLERANCE);
    let family = input.family()?;
    let mut records = Vec::new();
    for t in input.t_values()? {
        let value = match &family {
            Family::Epstein { lattice, form } => {
                let g = SpdForm::new(gram_transform(form.base(), lattice.generator())?)?;
                theta_star_gaussian(&g, t, tol)?
            }
            Family::Weighted { lattice, form, weight } => {
                let g = SpdForm::new(gram_transform(form.base(), lattice.generator())?)?;
                theta_star_weighted(&g, &gram_transform(weight, lattice.generator())?, t, tol)?
            }
            Family::Vector { .. } => {
                return Err(CliError::Validation("theta needs Q or lattice, not A".into()));
            }
        };
        records.push(ThetaRecord { t, value, abs_error: tol });
    }
    Ok(Outcome::ok(match format {
        Format::Csv => {
            let mut out = String::from("t,theta,abs_err\n");
            for r in &records {
                out.push_str(&format!(
                    "{},{},{}\n",
                    crate::output::csv_number(r.t),
                    crate::output::csv_number(r.value),
                    crate::output::csv_number(r.abs_error)
                ));
            }
            out
        }
        _ => json_lines(&records),
    }))
}

/// Analytic residue of the family's continued zeta function next to a
/// contour-integral estimate.
pub fn residue_record(family: &Family) -> Result<ResidueRecord, Error> {
    let (analytic, numeric): (PoleReport, PoleReport) = match family {
        Family::Epstein { lattice, form } => {
            let a = residue_epstein(lattice, form)?;
            let n = residue_numeric(|s| Ok(lattice_zeta(lattice, form, s)?.value), a.location, RESIDUE_RHO, RESIDUE_NODES)?;
            (a, n)
        }
        Family::Weighted { lattice, form, weight } => {
            let a = residue_weighted(lattice, form, weight)?;
            let n = residue_numeric(
                |s| Ok(lattice_weighted_zeta(lattice, form, weight, s)?.value),
                a.location,
                RESIDUE_RHO,
                RESIDUE_NODES,
            )?;
            (a, n)
        }
        Family::Vector { a, b, .. } => {
            let an = residue_vector(a, b)?;
            let n = residue_numeric_vector(
                |s| Ok(vector_zeta(a, b, s)?.into_iter().map(|z| z.value).collect()),
                an.location,
                RESIDUE_RHO,
                RESIDUE_NODES,
            )?;
            (an, n)
        }
    };
    let ac = analytic.residue.components();
    let nc = numeric.residue.components();
    let abs_diff = ac.iter().zip(nc).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    Ok(ResidueRecord {
        family: family.name().into(),
        location: analytic.location,
        analytic: ac.iter().copied().map(re_im).collect(),
        numeric: nc.iter().copied().map(re_im).collect(),
        abs_diff,
    })
}

fn tolerance_failure(input: &Input, measured: f64, what: &str) -> Option<CliError> {
    match input.tolerance {
        Some(t) if !(measured <= t) => Some(CliError::Verification(format!("{what} {measured:e} exceeds tolerance {t:e}"))),
        _ => None,
    }
}

pub fn cmd_residue(input: &Input, format: Format) -> Result<Outcome, CliError> {
    require_scalar_format(format, &[Format::Json])?;
    let record = residue_record(&input.family()?)?;
    let failure = tolerance_failure(input, record.abs_diff, "residue difference");
    Ok(Outcome { text: json_lines(&[record]), notes: Vec::new(), failure })
}

pub fn funceq_residual(family: &Family, s: Complex64) -> Result<FuncEqResidual, Error> {
    match family {
        Family::Epstein { lattice, form } => funceq_residual_lattice(lattice, form, s),
        Family::Weighted { lattice, form, weight } => funceq_residual_weighted(lattice, form, weight, s),
        Family::Vector { a, b, c } => funceq_residual_vector(a, b, c.as_deref().unwrap_or(b), s),
    }
}

pub fn cmd_funceq(input: &Input, format: Format) -> Result<Outcome, CliError> {
    require_scalar_format(format, &[Format::Json])?;
    let family = input.family()?;
    let mut records = Vec::new();
    for s in input.s_values()? {
        let r = funceq_residual(&family, s)?;
        records.push(FuncEqRecord {
            family: family.name().into(),
            s: s.into(),
            lhs: re_im(r.lhs),
            rhs: re_im(r.rhs),
            residual: r.residual,
        });
    }
    let worst = records.iter().map(|r| r.residual).fold(0.0, f64::max);
    let failure = tolerance_failure(input, worst, "functional equation residual");
    Ok(Outcome { text: json_lines(&records), notes: Vec::new(), failure })
}

pub fn solve(input: &Input, seed: Option<u64>) -> Result<SolveReport, CliError> {
    let a = input.matrix_a()?;
    let b = input.vector_b()?;
    if b.len() != a.dim() {
        return Err(CliError::Validation(format!("b has length {}, A is {}×{}", b.len(), a.dim(), a.dim())));
    }
    let route = input.route.map(|r| r.route()).unwrap_or(Route::Residues);
    let report = match route {
        Route::Residues => solve_via_residues(&a, &b)?,
        Route::NumericResidues => numeric_residue_solve(&a, &b)?,
        Route::Integrals => {
            let spec = input
                .quadrature(seed)
                .ok_or_else(|| CliError::Validation("route integrals needs a quadrature rule".into()))?;
            spec.validate(a.dim())?;
            solve_via_integrals(&a, &b, &spec)?
        }
    };
    Ok(report)
}

pub fn solve_record(report: &SolveReport, tolerance: f64) -> SolveRecord {
    let max_rel_err = report.max_rel_err();
    SolveRecord {
        x: report.x.clone(),
        x_reference: report.x_reference.clone(),
        r: report.r,
        ri: report.ri.clone(),
        per_component_rel_err: report.per_component_rel_err.clone(),
        x_error_estimate: report.x_error_estimate.clone(),
        method: MethodRecord {
            route: report.method.route.name().into(),
            quadrature: report.method.quadrature.as_ref().map(QuadratureJson::from_spec),
            contour_radius: report.method.contour.map(|c| c.0),
            contour_nodes: report.method.contour.map(|c| c.1),
        },
        condition_estimate: report.condition_estimate,
        warning: report.warning.map(String::from),
        max_rel_err,
        tolerance,
        pass: max_rel_err < tolerance,
    }
}

pub fn cmd_solve(input: &Input, format: Format, seed: Option<u64>) -> Result<Outcome, CliError> {
    require_scalar_format(format, &[Format::Json, Format::Csv])?;
    let tolerance = input.tolerance_or(DEFAULT_SOLVE_TOLERANCE);
    let report = solve(input, seed)?;
    let record = solve_record(&report, tolerance);
    let text = match format {
        Format::Csv => {
            let mut out = String::from("i,x,x_reference,rel_err\n");
            for i in 0..record.x.len() {
                out.push_str(&format!(
                    "{i},{},{},{}\n",
                    crate::output::csv_number(record.x[i]),
                    crate::output::csv_number(record.x_reference[i]),
                    crate::output::csv_number(record.per_component_rel_err[i])
                ));
            }
            out
        }
        _ => json_lines(&[&record]),
    };
    let notes = report.warning.map(|w| vec![format!("warning: {w}")]).unwrap_or_default();
    let failure = (!record.pass).then(|| {
        CliError::Verification(format!("max relative error {:e} not below tolerance {tolerance:e}", record.max_rel_err))
    });
    Ok(Outcome { text, notes, failure })
}

fn time_it<F: FnMut() -> Result<(), Error>>(name: &str, iterations: usize, mut f: F) -> Result<BenchRecord, CliError> {
    f()?;
    let start = Instant::now();
    for _ in 0..iterations {
        f()?;
    }
    let mean_us = start.elapsed().as_secs_f64() * 1e6 / iterations as f64;
    Ok(BenchRecord { name: name.into(), iterations, mean_us })
}

/// Wall-clock timings of the main evaluators. With an input file the zeta
/// timings use its form and first `s`.
pub fn cmd_bench(input: Option<&Input>, format: Format) -> Result<Outcome, CliError> {
    require_scalar_format(format, &[Format::Json])?;
    let (form, s) = match input {
        Some(i) => (i.form()?, i.s_values()?[0]),
        None => (SpdForm::from_rows(&[[2.0, 0.5, 0.0], [0.5, 1.5, 0.2], [0.0, 0.2, 1.0]])?, Complex64::new(2.3, 1.0)),
    };
    let lattice = Lattice::integer(form.dim());
    let mut records = vec![
        time_it("epstein_continued", 20, || epstein_continued(&form, s).map(drop))?,
        time_it("epstein_direct", 3, || epstein_direct(&form, s + form.dim() as f64, 1e-12).map(drop))?,
        time_it("residue_numeric", 3, || {
            residue_numeric(|z| Ok(lattice_zeta(&lattice, &form, z)?.value), form.dim() as f64 / 2.0, RESIDUE_RHO, RESIDUE_NODES)
                .map(drop)
        })?,
        time_it("theta_star_gaussian", 20, || theta_star_gaussian(&form, 0.1, 1e-14).map(drop))?,
    ];
    let a = cimmino_core::linalg::Matrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]])?;
    let b = [5.0, 10.0];
    records.push(time_it("solve_via_residues", 100, || solve_via_residues(&a, &b).map(drop))?);
    records.push(time_it("solve_via_integrals_trapezoid_1024", 20, || {
        solve_via_integrals(&a, &b, &QuadratureSpec::circle_trapezoid(1024)).map(drop)
    })?);
    records.push(time_it("numeric_residue_solve", 2, || numeric_residue_solve(&a, &b).map(drop))?);
    records.push(time_it("sphere_monte_carlo_1e5_n4", 3, || {
        sphere_integrate(|u| u[0] * u[0], 4, &QuadratureSpec::monte_carlo(100_000, 1)).map(drop)
    })?);
    Ok(Outcome::ok(json_lines(&records)))
}
