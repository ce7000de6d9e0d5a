//! Epstein-type zeta functions of positive-definite quadratic forms.
//!
//! For a positive-definite `Q`, a symmetric `B` and `n = dim Q`:
//!
//! ```text
//! ζ(Q, s)    = Σ'_{ω ∈ Zⁿ} q_Q(ω)^{-s}                   Re s > n/2
//! ζ(Q, B, s) = Σ'_{ω ∈ Zⁿ} q_B(ω) q_Q(ω)^{-s}            Re s > n/2 + 1
//! ζ_L(Q, s)  = Σ'_{x ∈ L} q_Q(x)^{-s} = ζ(AᵀQA, s)        L = A·Zⁿ
//! ζ(A, b, s) = Σ'_{ω} ‖Aω‖^{-2s} ⟨b, ω⟩ Aω                (vector valued)
//! ```
//!
//! Two independent evaluators are provided.
//!
//! *Direct* ([`epstein_direct`], [`weighted_direct`]) works only where the
//! series converges. The lattice sum is split with a smooth radial cutoff
//! `χ(r) = erfc(κ(r₀ - r))/2` in the `Q`-radius `r = √q_Q(x)`:
//! `Σ' f = Σ' f·(1-χ) + Σ f·χ`. The first sum is finite; the second is a
//! sum of a smooth, rapidly decaying function and equals its integral up to
//! Poisson aliasing of size `exp(-π²/(κ²λ_max))`. The integral is radial
//! and done by Gauss–Legendre.
//!
//! *Continued* ([`epstein_continued`], [`weighted_continued`]) is the split
//! Mellin representation, valid on all of `C` except the single pole:
//!
//! ```text
//! ζ(Q, s) = π^s { [S₁(s) + D S₂(n/2 - s) + D/(s - n/2)] / Γ(s) - 1/Γ(s + 1) }
//! S₁(s)   = Σ'_{ω} (π q_Q(ω))^{-s} Γ(s, π q_Q(ω))
//! S₂(a)   = Σ'_{ω} (π q_{Q⁻¹}(ω))^{-a} Γ(a, π q_{Q⁻¹}(ω)),     D = (det Q)^{-1/2}
//! ```
//!
//! Multiplying by the entire `1/Γ` (rather than dividing by `Γ`) makes the
//! removable singularities at `s = 0, -1, -2, …` harmless: `ζ(Q, 0) = -1`
//! and `ζ(Q, -k) = 0` come out directly. It does not help for large
//! `|Im s|`: `1/Γ(s)` grows like `e^{π|Im s|/2}` and the bracket cancels
//! to match, so about `0.7|Im s|` digits are lost (1e-10 absolute near
//! `|Im s| = 10`). `abs_error` accounts for this. The weighted version uses the
//! Fourier transform from [`fourier_gaussian_weighted`]; see
//! [`weighted_continued`].
//!
//! [`fourier_gaussian_weighted`]: crate::theta::fourier_gaussian_weighted

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{dot, gram_transform, sym_outer, trace_product, unit_vector, Lattice, Matrix, SpdForm, SymMatrix};
use crate::specfun::{gamma, gamma_real, reciprocal_gamma, upper_incomplete_gamma};
use crate::spherequad::gauss_legendre;
use crate::sum::ComplexSum;
use crate::theta::{enumerate_ellipsoid, EllipsoidPoints};
use crate::tolerances::{CONTINUED_TAIL_TARGET, POLE_EXCLUSION, RESIDUE_NODES, RESIDUE_RHO, TERM_REL_ERR};

/// A zeta value with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: Complex64,
    pub abs_error: f64,
}

/// `G(s) = scalar · π^{-(s + pi_shift)} · Γ(s + gamma_shift)`, the gamma
/// factor that completes a zeta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactorSpec {
    pub scalar: f64,
    pub pi_shift: f64,
    pub gamma_shift: f64,
}

impl GammaFactorSpec {
    /// `π^{-s} Γ(s)`, completing `ζ(Q, s)`.
    pub const EPSTEIN: Self = Self { scalar: 1.0, pi_shift: 0.0, gamma_shift: 0.0 };

    /// `π^{-(s+1)} Γ(s + 1)`, completing `ζ(Q, B, s + 1)`.
    pub const WEIGHTED: Self = Self { scalar: 1.0, pi_shift: 1.0, gamma_shift: 1.0 };

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let pi_pow = (-(s + self.pi_shift) * PI.ln()).exp();
        Ok(self.scalar * pi_pow * gamma(s + self.gamma_shift)?)
    }

    /// Residue of `G` at its `k`-th pole `s = -gamma_shift - k`.
    pub fn residue_at_pole(&self, k: u32) -> f64 {
        let s = -self.gamma_shift - k as f64;
        let factorial: f64 = (1..=k).map(f64::from).product();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        self.scalar * PI.powf(-(s + self.pi_shift)) * sign / factorial
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueSource {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Residue {
    Scalar(Complex64),
    Vector(Vec<Complex64>),
}

impl Residue {
    /// Components as a slice (one entry for a scalar residue).
    pub fn components(&self) -> &[Complex64] {
        match self {
            Residue::Scalar(z) => core::slice::from_ref(z),
            Residue::Vector(v) => v,
        }
    }

    pub fn scalar(&self) -> Option<Complex64> {
        match self {
            Residue::Scalar(z) => Some(*z),
            Residue::Vector(_) => None,
        }
    }
}

/// A simple pole and its residue.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleReport {
    pub location: f64,
    pub residue: Residue,
    pub source: ResidueSource,
}

/// Both sides of a functional equation at `s` and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuncEqResidual {
    pub s: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

impl FuncEqResidual {
    fn new(s: Complex64, lhs: Complex64, rhs: Complex64) -> Self {
        Self { s, lhs, rhs, residual: (lhs - rhs).norm() }
    }
}

fn check_finite(s: Complex64) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn check_same_dim(form: &SpdForm, b: &SymMatrix) -> Result<()> {
    if form.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: form.dim(), found: b.dim() })
    }
}

/// `x^{-a}` for real `x > 0`.
fn rpow(x: f64, a: Complex64) -> Complex64 {
    (-a * x.ln()).exp()
}

/// Volume of the unit ball in `Rⁿ`.
fn unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    PI.powf(h) / gamma_real(h + 1.0).expect("positive argument")
}

// ---------------------------------------------------------------------------
// Direct evaluation
// ---------------------------------------------------------------------------

/// Cutoff geometry for one value of `κ`.
#[derive(Debug, Clone, Copy)]
struct Cutoff {
    kappa: f64,
    lo: f64,
    hi: f64,
    r0: f64,
}

impl Cutoff {
    fn new(kappa: f64) -> Self {
        let w = 6.5 / kappa;
        let r0 = w + 2.5 / kappa;
        Self { kappa, lo: r0 - w, hi: r0 + w, r0 }
    }

    /// `1 - χ(r)`.
    fn outer_weight(&self, r: f64) -> f64 {
        if r < self.lo {
            1.0
        } else {
            0.5 * libm::erfc(self.kappa * (r - self.r0))
        }
    }

    /// `∫₀^∞ r^{n-1-2p} χ(r) dr` with `χ = 0` below `lo` and `χ = 1` above `hi`.
    fn radial_integral(&self, n: usize, p: Complex64) -> Complex64 {
        let (x, w) = gauss_legendre(24);
        let panels = 40;
        let h = (self.hi - self.lo) / panels as f64;
        let e = p * 2.0 - (n as f64 - 1.0);
        let mut acc = ComplexSum::new();
        for k in 0..panels {
            let a = self.lo + h * k as f64;
            for (xi, wi) in x.iter().zip(&w) {
                let r = a + 0.5 * h * (xi + 1.0);
                let chi = 0.5 * libm::erfc(self.kappa * (self.r0 - r));
                acc += 0.5 * h * wi * chi * rpow(r, e);
            }
        }
        // ∫_hi^∞ r^{n-1-2p} dr = hi^{n-2p}/(2p-n)
        let tail = rpow(self.hi, p * 2.0 - n as f64) / (p * 2.0 - n as f64);
        acc.value() + tail
    }
}

/// `Σ'_{ω} w(ω) q_Q(ω)^{-p}` with `w = q_B` or `w = 1`, by the smoothed
/// splitting described in the module docs. `mean_weight` is the average of
/// `w(x)/q_Q(x)^{deg}` over ellipsoid shells, with `deg` the degree of `w`.
fn smoothed_sum(form: &SpdForm, weight: Option<&SymMatrix>, s: Complex64, tol: f64) -> Result<ZetaValue> {
    let n = form.dim();
    // exponent of q_Q in the radial integrand after averaging the weight
    let (p, mean_weight) = match weight {
        Some(b) => (s - 1.0, trace_product(form, b)? / n as f64),
        None => (s, 1.0),
    };
    let kappa0 = PI / (100.0 / tol.clamp(1e-300, 1e-3)).ln().sqrt();
    let scale = form.lambda_max().sqrt();
    let sharp = Cutoff::new(kappa0 / scale);
    let smooth = Cutoff::new(0.8 * kappa0 / scale);
    let pts = enumerate_ellipsoid(form, smooth.hi * smooth.hi)?;

    let shell_factor = n as f64 * unit_ball_volume(n) / form.det().sqrt() * mean_weight;
    let mut sum_sharp = ComplexSum::new();
    let mut sum_smooth = ComplexSum::new();
    for shell in pts.shells() {
        let q = pts.norm(shell.start);
        let base = rpow(q, s);
        let w: f64 = match weight {
            Some(b) => shell.clone().map(|k| b.qeval_int(pts.point(k))).sum(),
            None => shell.len() as f64,
        };
        let r = q.sqrt();
        let term = base * w;
        sum_sharp += term * sharp.outer_weight(r);
        sum_smooth += term * smooth.outer_weight(r);
    }
    let int_sharp = shell_factor * sharp.radial_integral(n, p);
    let int_smooth = shell_factor * smooth.radial_integral(n, p);
    let v_sharp = sum_sharp.value() + int_sharp;
    let v_smooth = sum_smooth.value() + int_smooth;
    let rounding = 8.0 * f64::EPSILON * (sum_smooth.magnitude() + int_smooth.norm());
    Ok(ZetaValue { value: v_smooth, abs_error: (v_sharp - v_smooth).norm() + rounding })
}

/// `ζ(Q, s) = Σ'_{ω} q_Q(ω)^{-s}` from the series, for `Re s >= n/2 + 1/2`.
///
/// The absolute error estimate compares two cutoff widths; `tol` sets the
/// cutoff sharpness (aliasing error about `tol/100`).
pub fn epstein_direct(form: &SpdForm, s: Complex64, tol: f64) -> Result<ZetaValue> {
    check_finite(s)?;
    let min = form.dim() as f64 / 2.0 + 0.5;
    if s.re < min {
        return Err(Error::OutsideConvergence { re: s.re, min });
    }
    smoothed_sum(form, None, s, tol)
}

/// `ζ(Q, B, s) = Σ'_{ω} q_B(ω) q_Q(ω)^{-s}` from the series, for
/// `Re s >= n/2 + 3/2`.
pub fn weighted_direct(form: &SpdForm, b: &SymMatrix, s: Complex64, tol: f64) -> Result<ZetaValue> {
    check_finite(s)?;
    check_same_dim(form, b)?;
    let min = form.dim() as f64 / 2.0 + 1.5;
    if s.re < min {
        return Err(Error::OutsideConvergence { re: s.re, min });
    }
    if b.is_zero() {
        return Ok(ZetaValue { value: Complex64::new(0.0, 0.0), abs_error: 0.0 });
    }
    smoothed_sum(form, Some(b), s, tol)
}

// ---------------------------------------------------------------------------
// Continued evaluation
// ---------------------------------------------------------------------------

/// Smallest `R` such that the lattice tail of `Σ' (πq)^{-a} Γ(a, πq)` (times
/// the weight) beyond `q > R` is below `target`.
///
/// For `x = πq >= 2(|Re a| + 1)`, `|x^{-a} Γ(a, x)| <= 2 e^{-x} / x`, and
/// `Σ_{q > R} e^{-πq} <= e^{-πR/2} (1 + √(2/λ_min))ⁿ`. A weight `q_B` adds
/// `‖B‖_F q / λ_min`.
fn continued_radius(form: &SpdForm, max_re: f64, weight_norm: Option<f64>, target: f64) -> f64 {
    let lmin = form.lambda_min();
    let c = (1.0 + (2.0 / lmin).sqrt()).powi(form.dim() as i32);
    let mut r = (2.0 * (max_re + 1.0) / PI).max(lmin);
    loop {
        let coef = match weight_norm {
            Some(b) => 2.0 * b / (PI * lmin),
            None => 2.0 / (PI * r),
        };
        if coef * (-PI * r / 2.0).exp() * c <= target {
            return r;
        }
        r *= 1.05;
    }
}

/// `Σ'_{shells} (π q)^{-a} Γ(a, π q) · shell weight`, for several weights at
/// once, plus the summed magnitude for error estimates.
struct ShellSums {
    sums: Vec<ComplexSum>,
}

fn incomplete_shell_sums(
    pts: &EllipsoidPoints,
    a: Complex64,
    weights: &[Option<&SymMatrix>],
) -> Result<ShellSums> {
    let mut sums = vec![ComplexSum::new(); weights.len()];
    for shell in pts.shells() {
        let x = PI * pts.norm(shell.start);
        let g = rpow(x, a) * upper_incomplete_gamma(a, x)?;
        for (acc, w) in sums.iter_mut().zip(weights) {
            let mult: f64 = match w {
                Some(b) => shell.clone().map(|k| b.qeval_int(pts.point(k))).sum(),
                None => shell.len() as f64,
            };
            *acc += g * mult;
        }
    }
    Ok(ShellSums { sums })
}

fn pole_check(s: Complex64, pole: f64) -> Result<()> {
    let distance = (s - pole).norm();
    if distance <= POLE_EXCLUSION {
        Err(Error::TooCloseToPole { s, pole, distance })
    } else {
        Ok(())
    }
}

/// `ζ(Q, s)` for all `s ≠ n/2` by the split Mellin representation (module
/// docs). Lattice sums are truncated where the incomplete gamma tails fall
/// below `10⁻¹⁷`.
pub fn epstein_continued(form: &SpdForm, s: Complex64) -> Result<ZetaValue> {
    check_finite(s)?;
    let n = form.dim();
    let half = n as f64 / 2.0;
    pole_check(s, half)?;
    let dual = form.inverse_form()?;
    let d = 1.0 / form.det().sqrt();
    let a2 = half - s;
    let max_re = s.re.abs().max(a2.re.abs());

    let p1 = enumerate_ellipsoid(form, continued_radius(form, max_re, None, CONTINUED_TAIL_TARGET))?;
    let p2 = enumerate_ellipsoid(&dual, continued_radius(&dual, max_re, None, CONTINUED_TAIL_TARGET))?;
    let s1 = &incomplete_shell_sums(&p1, s, &[None])?.sums[0];
    let s2 = &incomplete_shell_sums(&p2, a2, &[None])?.sums[0];

    let bracket = s1.value() + d * s2.value() + d / (s - half);
    let pi_s = (s * PI.ln()).exp();
    let rg = reciprocal_gamma(s);
    let value = pi_s * (rg * bracket - reciprocal_gamma(s + 1.0));
    // the second term is the relative error of 1/Γ times the uncancelled bracket
    let magnitude = s1.magnitude() + d * s2.magnitude();
    let abs_error = (pi_s * rg).norm() * ((1.0 + d) * CONTINUED_TAIL_TARGET + TERM_REL_ERR * magnitude)
        + TERM_REL_ERR * pi_s.norm() * ((rg * bracket).norm() + reciprocal_gamma(s + 1.0).norm())
        + 4.0 * f64::EPSILON * value.norm();
    Ok(ZetaValue { value, abs_error })
}

/// `ζ(Q, B, s)` for several weights `B_k` sharing the incomplete gamma
/// evaluations. With `σ = s - 1`, `C = Q⁻¹BQ⁻¹`, `T = Tr(Q⁻¹B)`:
///
/// ```text
/// ζ(Q, B, s) = π^s/Γ(s) · [ Σ' q_B (πq)^{-s} Γ(s, πq)
///                           - D Σ' q_C (πq*)^{-(n/2-σ+1)} Γ(n/2-σ+1, πq*)
///                           + (TD/2π) Σ' (πq*)^{-(n/2-σ)} Γ(n/2-σ, πq*)
///                           + (TD/2π)/(σ - n/2) ]
/// ```
///
/// where `q = q_Q(ω)` and `q* = q_{Q⁻¹}(ω)`. The weighted Gaussian
/// vanishes at the origin, so there is no pole at `σ = 0`.
fn weighted_continued_many(form: &SpdForm, bs: &[SymMatrix], s: Complex64) -> Result<Vec<ZetaValue>> {
    check_finite(s)?;
    for b in bs {
        check_same_dim(form, b)?;
    }
    let n = form.dim();
    let half = n as f64 / 2.0;
    pole_check(s, half + 1.0)?;
    let dual = form.inverse_form()?;
    let qinv = form.inverse().as_matrix();
    let d = 1.0 / form.det().sqrt();
    let sigma = s - 1.0;
    let a_c = half - sigma + 1.0;
    let a_t = half - sigma;
    let max_re = s.re.abs().max(a_c.re.abs()).max(a_t.re.abs());

    let cs: Vec<SymMatrix> = bs
        .iter()
        .map(|b| Ok(SymMatrix::symmetrized(qinv.matmul(b.as_matrix())?.matmul(qinv)?)))
        .collect::<Result<_>>()?;
    let traces: Vec<f64> = bs.iter().map(|b| trace_product(form, b)).collect::<Result<_>>()?;
    let b_norm = bs.iter().map(|b| b.as_matrix().frobenius_norm()).fold(0.0, f64::max);
    let c_norm = cs.iter().map(|c| c.as_matrix().frobenius_norm()).fold(0.0, f64::max);
    if b_norm == 0.0 {
        return Ok(vec![ZetaValue { value: Complex64::new(0.0, 0.0), abs_error: 0.0 }; bs.len()]);
    }

    let target = CONTINUED_TAIL_TARGET;
    let r1 = continued_radius(form, max_re, Some(b_norm), target);
    let r2 = continued_radius(&dual, max_re, Some(c_norm.max(1.0)), target).max(continued_radius(&dual, max_re, None, target));
    let p1 = enumerate_ellipsoid(form, r1)?;
    let p2 = enumerate_ellipsoid(&dual, r2)?;

    let w1: Vec<Option<&SymMatrix>> = bs.iter().map(Some).collect();
    let wc: Vec<Option<&SymMatrix>> = cs.iter().map(Some).collect();
    let s1 = incomplete_shell_sums(&p1, s, &w1)?;
    let s2c = incomplete_shell_sums(&p2, a_c, &wc)?;
    let s2t = incomplete_shell_sums(&p2, a_t, &[None])?;

    let pi_s = (s * PI.ln()).exp();
    let pre = pi_s * reciprocal_gamma(s);
    let mut out = Vec::with_capacity(bs.len());
    for k in 0..bs.len() {
        let c2 = traces[k] * d / (2.0 * PI);
        let bracket =
            s1.sums[k].value() - d * s2c.sums[k].value() + c2 * s2t.sums[0].value() + c2 / (sigma - half);
        let value = pre * bracket;
        let magnitude = s1.sums[k].magnitude() + d * s2c.sums[k].magnitude() + c2.abs() * s2t.sums[0].magnitude();
        let abs_error = pre.norm() * ((1.0 + 2.0 * d + c2.abs()) * target + TERM_REL_ERR * magnitude)
            + TERM_REL_ERR * value.norm().max(pre.norm() * bracket.norm())
            + 4.0 * f64::EPSILON * value.norm();
        out.push(ZetaValue { value, abs_error });
    }
    Ok(out)
}

/// `ζ(Q, B, s) = Σ'_{ω} q_B(ω) q_Q(ω)^{-s}` continued to all `s ≠ n/2 + 1`.
pub fn weighted_continued(form: &SpdForm, b: &SymMatrix, s: Complex64) -> Result<ZetaValue> {
    Ok(weighted_continued_many(form, core::slice::from_ref(b), s)?.remove(0))
}

/// The form `AᵀQA` that makes `ζ_L(Q, ·) = ζ(AᵀQA, ·)`.
fn lattice_form(lattice: &Lattice, form: &SpdForm) -> Result<SpdForm> {
    SpdForm::new(gram_transform(form.base(), lattice.generator())?)
}

/// `ζ_L(Q, s) = Σ'_{x ∈ L} q_Q(x)^{-s} = ζ(AᵀQA, s)`.
pub fn lattice_zeta(lattice: &Lattice, form: &SpdForm, s: Complex64) -> Result<ZetaValue> {
    epstein_continued(&lattice_form(lattice, form)?, s)
}

/// `ζ_L(Q, B, s) = ζ(AᵀQA, AᵀBA, s)`.
pub fn lattice_weighted_zeta(lattice: &Lattice, form: &SpdForm, b: &SymMatrix, s: Complex64) -> Result<ZetaValue> {
    let g = lattice_form(lattice, form)?;
    weighted_continued(&g, &gram_transform(b, lattice.generator())?, s)
}

/// Weights `B_j = sym(Âb ⊗ e_j)` whose lattice zeta over `A·Zⁿ` is the
/// `j`-th component of the vector zeta function.
fn vector_weights(lattice: &Lattice, b: &[f64]) -> Result<Vec<SymMatrix>> {
    let n = lattice.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let ab = lattice.dual_generator().mul_vec(b)?;
    (0..n).map(|j| sym_outer(&ab, &unit_vector(n, j))).collect()
}

/// `ζ(A, b, s) = Σ'_{ω} ‖Aω‖^{-2s} ⟨b, ω⟩ Aω`, continued to `s ≠ n/2 + 1`.
///
/// Since `⟨b, ω⟩ = ⟨Âb, Aω⟩` with `Â = (Aᵀ)⁻¹`, component `j` is the
/// weighted lattice zeta over `L = A·Zⁿ` with `Q = I` and weight
/// `sym(Âb ⊗ e_j)`.
pub fn vector_zeta(a: &Matrix, b: &[f64], s: Complex64) -> Result<Vec<ZetaValue>> {
    let lattice = Lattice::new(a.clone())?;
    let n = lattice.dim();
    let weights = vector_weights(&lattice, b)?;
    let g = lattice_form(&lattice, &SpdForm::identity(n))?;
    let transformed: Vec<SymMatrix> =
        weights.iter().map(|w| gram_transform(w, lattice.generator())).collect::<Result<_>>()?;
    weighted_continued_many(&g, &transformed, s)
}

// ---------------------------------------------------------------------------
// Residues
// ---------------------------------------------------------------------------

/// `Res_{s=n/2} ζ_L(Q, s) = π^{n/2} / (Γ(n/2) |L| √det Q)`.
pub fn residue_epstein(lattice: &Lattice, form: &SpdForm) -> Result<PoleReport> {
    check_lattice_dim(lattice, form)?;
    let n = form.dim();
    let h = n as f64 / 2.0;
    let r = PI.powf(h) / (gamma_real(h)? * lattice.volume() * form.det().sqrt());
    Ok(PoleReport { location: h, residue: Residue::Scalar(Complex64::new(r, 0.0)), source: ResidueSource::Analytic })
}

/// `Res_{s=n/2+1} ζ_L(Q, B, s) = (1/2) π^{n/2}/Γ(n/2+1) · Tr(Q⁻¹B)/(|L| √det Q)`.
pub fn residue_weighted(lattice: &Lattice, form: &SpdForm, b: &SymMatrix) -> Result<PoleReport> {
    check_lattice_dim(lattice, form)?;
    check_same_dim(form, b)?;
    let n = form.dim();
    let h = n as f64 / 2.0;
    let r = 0.5 * PI.powf(h) / gamma_real(h + 1.0)? * trace_product(form, b)? / (lattice.volume() * form.det().sqrt());
    Ok(PoleReport {
        location: h + 1.0,
        residue: Residue::Scalar(Complex64::new(r, 0.0)),
        source: ResidueSource::Analytic,
    })
}

/// `Res_{s=n/2+1} ζ(A, b, s) = (1/2) π^{n/2}/Γ(n/2+1) · Âb / |det A|`.
pub fn residue_vector(a: &Matrix, b: &[f64]) -> Result<PoleReport> {
    let lattice = Lattice::new(a.clone())?;
    let n = lattice.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let h = n as f64 / 2.0;
    let c = 0.5 * PI.powf(h) / gamma_real(h + 1.0)? / lattice.volume();
    let ab = lattice.dual_generator().mul_vec(b)?;
    Ok(PoleReport {
        location: h + 1.0,
        residue: Residue::Vector(ab.iter().map(|&x| Complex64::new(c * x, 0.0)).collect()),
        source: ResidueSource::Analytic,
    })
}

fn check_lattice_dim(lattice: &Lattice, form: &SpdForm) -> Result<()> {
    if lattice.dim() == form.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: form.dim(), found: lattice.dim() })
    }
}

/// Residue at `s0` by the trapezoid rule on `|s - s0| = rho`:
/// `(rho/m) Σ_k f(s0 + rho e^{iθ_k}) e^{iθ_k}`, `θ_k = 2πk/m`.
///
/// Exponentially accurate in `m` when `f` has no other singularity within a
/// neighbourhood of the circle.
pub fn residue_numeric<F>(mut f: F, s0: f64, rho: f64, m: usize) -> Result<PoleReport>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let r = residue_numeric_vector(|s| Ok(vec![f(s)?]), s0, rho, m)?;
    match r.residue {
        Residue::Vector(v) => Ok(PoleReport { residue: Residue::Scalar(v[0]), ..r }),
        Residue::Scalar(_) => unreachable!(),
    }
}

/// [`residue_numeric`] with the default circle `rho = 0.25`, `m = 16`.
pub fn residue_numeric_default<F>(f: F, s0: f64) -> Result<PoleReport>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    residue_numeric(f, s0, RESIDUE_RHO, RESIDUE_NODES)
}

/// Componentwise [`residue_numeric`] for a vector-valued function.
pub fn residue_numeric_vector<F>(mut f: F, s0: f64, rho: f64, m: usize) -> Result<PoleReport>
where
    F: FnMut(Complex64) -> Result<Vec<Complex64>>,
{
    if !(rho > 0.0) || m == 0 {
        return Err(Error::InvalidArgument("residue circle needs rho > 0 and at least one node"));
    }
    let mut acc: Vec<ComplexSum> = Vec::new();
    for k in 0..m {
        let th = 2.0 * PI * k as f64 / m as f64;
        let e = Complex64::new(th.cos(), th.sin());
        let v = f(s0 + rho * e).map_err(|err| Error::EvaluationFailure { node: k, message: err.to_string() })?;
        if acc.is_empty() {
            acc = vec![ComplexSum::new(); v.len()];
        }
        for (a, z) in acc.iter_mut().zip(v) {
            *a += z * e;
        }
    }
    let scale = rho / m as f64;
    Ok(PoleReport {
        location: s0,
        residue: Residue::Vector(acc.iter().map(|a| a.value() * scale).collect()),
        source: ResidueSource::Numeric,
    })
}

// ---------------------------------------------------------------------------
// Functional equations
// ---------------------------------------------------------------------------

fn pi_pow(e: Complex64) -> Complex64 {
    (e * PI.ln()).exp()
}

/// `π^{-(n/2-s)} Γ(n/2-s) ζ_L(Q, n/2-s)` against
/// `(|L|√det Q)⁻¹ π^{-s} Γ(s) ζ_{L̂}(Q⁻¹, s)`.
pub fn funceq_residual_lattice(lattice: &Lattice, form: &SpdForm, s: Complex64) -> Result<FuncEqResidual> {
    check_lattice_dim(lattice, form)?;
    let h = form.dim() as f64 / 2.0;
    let dual = lattice.dual();
    let inv = form.inverse_form()?;
    let lhs = pi_pow(-(h - s)) * gamma(h - s)? * lattice_zeta(lattice, form, h - s)?.value;
    let rhs = pi_pow(-s) * gamma(s)? * lattice_zeta(&dual, &inv, s)?.value / (lattice.volume() * form.det().sqrt());
    Ok(FuncEqResidual::new(s, lhs, rhs))
}

/// `π^{-(n/2-s)} Γ(n/2+1-s) ζ_L(Q, B, n/2+1-s)
///  + (|L|√det Q)⁻¹ π^{-s} Γ(s+1) ζ_{L̂}(Q⁻¹, Q⁻¹BQ⁻¹, s+1)` against
/// `Tr(Q⁻¹B)/(2|L|√det Q) · π^{-s} Γ(s) ζ_{L̂}(Q⁻¹, s)`.
pub fn funceq_residual_weighted(
    lattice: &Lattice,
    form: &SpdForm,
    b: &SymMatrix,
    s: Complex64,
) -> Result<FuncEqResidual> {
    check_lattice_dim(lattice, form)?;
    check_same_dim(form, b)?;
    let h = form.dim() as f64 / 2.0;
    let dual = lattice.dual();
    let inv = form.inverse_form()?;
    let qinv = form.inverse().as_matrix();
    let c = SymMatrix::symmetrized(qinv.matmul(b.as_matrix())?.matmul(qinv)?);
    let scale = 1.0 / (lattice.volume() * form.det().sqrt());
    let t = h + 1.0 - s;
    let lhs = pi_pow(-(h - s)) * gamma(t)? * lattice_weighted_zeta(lattice, form, b, t)?.value
        + scale * pi_pow(-s) * gamma(s + 1.0)? * lattice_weighted_zeta(&dual, &inv, &c, s + 1.0)?.value;
    let rhs = 0.5 * trace_product(form, b)? * scale * pi_pow(-s) * gamma(s)? * lattice_zeta(&dual, &inv, s)?.value;
    Ok(FuncEqResidual::new(s, lhs, rhs))
}

/// `π^{-(n/2-s)} Γ(n/2+1-s) ⟨ζ(A, b, n/2+1-s), Ac⟩
///  + π^{-s}/|det A| · Γ(s+1) ⟨Âb, ζ(Â, c, s+1)⟩` against
/// `⟨b, c⟩/(2|det A|) · π^{-s} Γ(s) ζ(Â, s)`, with `ζ(Â, s) = Σ'‖Âω‖^{-2s}`.
pub fn funceq_residual_vector(a: &Matrix, b: &[f64], c: &[f64], s: Complex64) -> Result<FuncEqResidual> {
    let lattice = Lattice::new(a.clone())?;
    let n = lattice.dim();
    for v in [b, c] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let h = n as f64 / 2.0;
    let ahat = lattice.dual_generator();
    let ac = a.mul_vec(c)?;
    let ab = ahat.mul_vec(b)?;
    let t = h + 1.0 - s;

    let z1 = vector_zeta(a, b, t)?;
    let first: Complex64 = z1.iter().zip(&ac).map(|(z, &w)| z.value * w).sum();
    let z2 = vector_zeta(ahat, c, s + 1.0)?;
    let second: Complex64 = z2.iter().zip(&ab).map(|(z, &w)| z.value * w).sum();
    let zhat = lattice_zeta(&lattice.dual(), &SpdForm::identity(n), s)?.value;

    let vol = lattice.volume();
    let lhs = pi_pow(-(h - s)) * gamma(t)? * first + pi_pow(-s) / vol * gamma(s + 1.0)? * second;
    let rhs = dot(b, c) / (2.0 * vol) * pi_pow(-s) * gamma(s)? * zhat;
    Ok(FuncEqResidual::new(s, lhs, rhs))
}
