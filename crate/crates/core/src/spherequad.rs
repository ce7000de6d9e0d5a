//! Integration over the unit sphere `S^{n-1} ⊂ Rⁿ` with its unnormalized
//! surface measure.
//!
//! Three rules:
//!
//!  - [`Method::CircleTrapezoid`] (`n = 2`): `N` equispaced angles. Exact for
//!    trigonometric polynomials of degree below `N`.
//!  - [`Method::ProductGauss`] (`3 <= n <= 5`): hyperspherical coordinates
//!    `u = (cos θ₁, sin θ₁ cos θ₂, …, sin θ₁⋯sin θ_{n-2} cos φ, … sin φ)`,
//!    Gauss–Legendre in each polar angle `θ_k ∈ [0, π]` with the Jacobian
//!    `sin^{n-1-k} θ_k` folded into the integrand, trapezoid in `φ`.
//!  - [`Method::MonteCarlo`] (any `n >= 2`): antithetic pairs `(u, -u)` of
//!    normalized Gaussian vectors.
//!
//! # Random stream
//!
//! Monte Carlo uses a fixed, portable generator so results can be
//! reproduced bit for bit in any language:
//!
//! ```text
//! splitmix64(z):  z += 0x9E3779B97F4A7C15
//!                 z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!                 z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!                 return z ^ (z >> 31)
//! state₀ = splitmix64(seed ^ (block * 0xD1B54A32D192ED03)), replaced by 1 if 0
//! next(): x ^= x >> 12; x ^= x << 25; x ^= x >> 27; return x * 0x2545F4914F6CDD1D
//! uniform = (next() >> 11) * 2^-53           in [0, 1)
//! gaussian pair (Box–Muller): r = sqrt(-2 ln(1 - u₁)), (r cos 2πu₂, r sin 2πu₂)
//! ```
//!
//! (all arithmetic wrapping mod 2⁶⁴). Samples are drawn in blocks of
//! [`MC_BLOCK`] pairs, each block from its own stream, and block sums are
//! reduced in block order. A sample count of `N` means `⌈N/2⌉` antithetic
//! pairs; the error bar is three standard errors of the pair average.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::specfun::gamma_real;

/// Antithetic pairs per Monte Carlo block.
pub const MC_BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    CircleTrapezoid,
    ProductGauss,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::CircleTrapezoid => "circle_trapezoid",
            Method::ProductGauss => "product_gauss",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// Rule and size: trapezoid points, Gauss order per polar angle (the
/// azimuth gets `2·nodes` points), or number of Monte Carlo samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub method: Method,
    pub nodes: usize,
    pub seed: u64,
}

impl QuadratureSpec {
    pub fn circle_trapezoid(nodes: usize) -> Self {
        Self { method: Method::CircleTrapezoid, nodes, seed: 0 }
    }

    pub fn product_gauss(nodes: usize) -> Self {
        Self { method: Method::ProductGauss, nodes, seed: 0 }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self { method: Method::MonteCarlo, nodes: samples, seed }
    }

    /// Checks that the rule exists for dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 1 {
            return Ok(());
        }
        match self.method {
            Method::CircleTrapezoid if n != 2 => Err(Error::UnsupportedQuadrature("circle_trapezoid")),
            Method::ProductGauss if !(3..=5).contains(&n) => Err(Error::UnsupportedQuadrature("product_gauss")),
            Method::MonteCarlo if n < 2 => Err(Error::UnsupportedQuadrature("monte_carlo")),
            _ if self.nodes < 2 => Err(Error::InvalidArgument("quadrature needs at least two nodes")),
            _ => Ok(()),
        }
    }
}

/// Estimate of `∫ f du` with an error estimate: `3·(standard error)` for
/// Monte Carlo, the difference to a coarser rule otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereIntegralResult {
    pub value: f64,
    pub error_estimate: f64,
}

/// `|S^{n-1}| = 2π^{n/2}/Γ(n/2)`; `2` for `n = 1`.
pub fn sphere_surface_measure(n: usize) -> f64 {
    assert!(n >= 1, "sphere dimension must be at least 1");
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma_real(h).expect("n/2 is positive")
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton iteration on
/// `P_m` from the Chebyshev guesses).
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                dp = legendre(m, z).1;
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_m(z), P_m'(z))`.
fn legendre(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, m as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// `∫_{S^{n-1}} f(u) du` for scalar `f`.
pub fn sphere_integrate<F>(mut f: F, n: usize, spec: &QuadratureSpec) -> Result<SphereIntegralResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let r = sphere_integrate_vec(|u, out| out[0] = f(u), 1, n, spec)?;
    Ok(r[0])
}

/// `∫_{S^{n-1}} f(u) du` for vector-valued `f: S^{n-1} → R^k`, all components
/// sharing the same nodes. `f` writes its value into the output slice.
pub fn sphere_integrate_vec<F>(f: F, k: usize, n: usize, spec: &QuadratureSpec) -> Result<Vec<SphereIntegralResult>>
where
    F: FnMut(&[f64], &mut [f64]),
{
    Ok(sphere_integrate_raw(f, k, n, spec)?.into_results())
}

/// Raw output of a vector quadrature: the estimate together with either a
/// coarser estimate or the sample moments of the antithetic pair averages,
/// from which errors of derived quantities can be formed.
#[derive(Debug, Clone)]
pub(crate) enum RawIntegral {
    Deterministic { fine: Vec<f64>, coarse: Vec<f64> },
    MonteCarlo { sums: Vec<f64>, cross: Vec<f64>, count: usize, measure: f64 },
}

impl RawIntegral {
    pub(crate) fn values(&self) -> Vec<f64> {
        match self {
            RawIntegral::Deterministic { fine, .. } => fine.clone(),
            RawIntegral::MonteCarlo { sums, count, measure, .. } => {
                sums.iter().map(|s| measure * s / *count as f64).collect()
            }
        }
    }

    /// Error estimate of `g(values)` given its gradient at the estimate:
    /// `|g(fine) - g(coarse)|` for deterministic rules, `3σ` of the
    /// linearization (delta method) for Monte Carlo.
    pub(crate) fn derived_error(&self, g: &dyn Fn(&[f64]) -> f64, grad: &[f64]) -> f64 {
        match self {
            RawIntegral::Deterministic { fine, coarse } => (g(fine) - g(coarse)).abs(),
            RawIntegral::MonteCarlo { sums, cross, count, measure } => {
                let k = sums.len();
                let m = *count as f64;
                if *count < 2 {
                    return f64::INFINITY;
                }
                let mut var = 0.0;
                for i in 0..k {
                    for j in 0..k {
                        let cov = (cross[i * k + j] - sums[i] * sums[j] / m) / (m - 1.0);
                        var += grad[i] * grad[j] * cov;
                    }
                }
                3.0 * measure * (var.max(0.0) / m).sqrt()
            }
        }
    }

    fn into_results(self) -> Vec<SphereIntegralResult> {
        let values = self.values();
        let k = values.len();
        (0..k)
            .map(|j| {
                let mut grad = vec![0.0; k];
                grad[j] = 1.0;
                SphereIntegralResult { value: values[j], error_estimate: self.derived_error(&|v: &[f64]| v[j], &grad) }
            })
            .collect()
    }
}

pub(crate) fn sphere_integrate_raw<F>(mut f: F, k: usize, n: usize, spec: &QuadratureSpec) -> Result<RawIntegral>
where
    F: FnMut(&[f64], &mut [f64]),
{
    spec.validate(n)?;
    let mut out = vec![0.0; k];
    let mut eval = |u: &[f64], out: &mut [f64]| -> Result<()> {
        f(u, out);
        if out.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFiniteIntegrand)
        }
    };
    if n == 1 {
        let mut acc = vec![0.0; k];
        for u in [1.0, -1.0] {
            eval(&[u], &mut out)?;
            for j in 0..k {
                acc[j] += out[j];
            }
        }
        return Ok(RawIntegral::Deterministic { fine: acc.clone(), coarse: acc });
    }
    match spec.method {
        Method::CircleTrapezoid => {
            let fine = circle(&mut eval, &mut out, k, spec.nodes)?;
            let coarse = circle(&mut eval, &mut out, k, spec.nodes.div_ceil(2))?;
            Ok(RawIntegral::Deterministic { fine, coarse })
        }
        Method::ProductGauss => {
            let fine = product_gauss(&mut eval, &mut out, k, n, spec.nodes)?;
            let coarse = product_gauss(&mut eval, &mut out, k, n, (spec.nodes * 3 / 4).max(1))?;
            Ok(RawIntegral::Deterministic { fine, coarse })
        }
        Method::MonteCarlo => monte_carlo(&mut eval, &mut out, k, n, spec),
    }
}

type Eval<'a> = dyn FnMut(&[f64], &mut [f64]) -> Result<()> + 'a;

fn circle(eval: &mut Eval<'_>, out: &mut [f64], k: usize, m: usize) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; k];
    let h = 2.0 * PI / m as f64;
    for i in 0..m {
        let th = h * i as f64;
        eval(&[th.cos(), th.sin()], out)?;
        for j in 0..k {
            acc[j] += out[j];
        }
    }
    Ok(acc.iter().map(|a| a * h).collect())
}

fn product_gauss(eval: &mut Eval<'_>, out: &mut [f64], k: usize, n: usize, order: usize) -> Result<Vec<f64>> {
    let (x, w) = gauss_legendre(order);
    let polar: Vec<(f64, f64, f64)> = x
        .iter()
        .zip(&w)
        .map(|(&xi, &wi)| {
            let th = PI / 2.0 * (xi + 1.0);
            (th.cos(), th.sin(), wi * PI / 2.0)
        })
        .collect();
    let m_phi = 2 * order;
    let h_phi = 2.0 * PI / m_phi as f64;
    let azimuth: Vec<(f64, f64)> = (0..m_phi).map(|i| ((h_phi * i as f64).cos(), (h_phi * i as f64).sin())).collect();

    let npolar = n - 2;
    let mut acc = vec![0.0; k];
    let mut idx = vec![0usize; npolar];
    let mut u = vec![0.0; n];
    loop {
        let mut weight = h_phi;
        let mut radius = 1.0;
        for (l, &i) in idx.iter().enumerate() {
            let (c, s, wq) = polar[i];
            u[l] = radius * c;
            weight *= wq * s.powi((n - 2 - l) as i32);
            radius *= s;
        }
        for &(c, s) in &azimuth {
            u[n - 2] = radius * c;
            u[n - 1] = radius * s;
            eval(&u, out)?;
            for j in 0..k {
                acc[j] += weight * out[j];
            }
        }
        let mut l = 0;
        while l < npolar {
            idx[l] += 1;
            if idx[l] < order {
                break;
            }
            idx[l] = 0;
            l += 1;
        }
        if l == npolar {
            return Ok(acc);
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The xorshift64* stream described in the module documentation.
#[derive(Debug, Clone)]
pub struct SphereRng {
    state: u64,
    spare: Option<f64>,
}

impl SphereRng {
    /// Stream `block` derived from `seed`.
    pub fn new(seed: u64, block: u64) -> Self {
        let s = splitmix64(seed ^ block.wrapping_mul(0xD1B5_4A32_D192_ED03));
        Self { state: if s == 0 { 1 } else { s }, spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by Box–Muller, using both values of each pair.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// Fills `u` with a uniformly distributed unit vector (normalized Gaussian;
/// the zero vector is redrawn).
pub fn gaussian_direction(rng: &mut SphereRng, u: &mut [f64]) {
    loop {
        let mut norm2 = 0.0;
        for x in u.iter_mut() {
            *x = rng.gaussian();
            norm2 += *x * *x;
        }
        if norm2 > 0.0 {
            let inv = 1.0 / norm2.sqrt();
            for x in u.iter_mut() {
                *x *= inv;
            }
            return;
        }
    }
}

fn monte_carlo(eval: &mut Eval<'_>, out: &mut [f64], k: usize, n: usize, spec: &QuadratureSpec) -> Result<RawIntegral> {
    let pairs = spec.nodes.div_ceil(2);
    let nblocks = pairs.div_ceil(MC_BLOCK);
    let mut sums = vec![0.0; k];
    let mut cross = vec![0.0; k * k];
    let mut u = vec![0.0; n];
    let mut neg = vec![0.0; n];
    let mut pair = vec![0.0; k];
    for b in 0..nblocks {
        let mut rng = SphereRng::new(spec.seed, b as u64);
        let count = MC_BLOCK.min(pairs - b * MC_BLOCK);
        let mut bs = vec![0.0; k];
        let mut bc = vec![0.0; k * k];
        for _ in 0..count {
            gaussian_direction(&mut rng, &mut u);
            eval(&u, out)?;
            pair.copy_from_slice(out);
            for (a, b) in neg.iter_mut().zip(&u) {
                *a = -b;
            }
            eval(&neg, out)?;
            for j in 0..k {
                pair[j] = 0.5 * (pair[j] + out[j]);
                bs[j] += pair[j];
            }
            for i in 0..k {
                for j in 0..k {
                    bc[i * k + j] += pair[i] * pair[j];
                }
            }
        }
        for j in 0..k {
            sums[j] += bs[j];
        }
        for j in 0..k * k {
            cross[j] += bc[j];
        }
    }
    Ok(RawIntegral::MonteCarlo { sums, cross, count: pairs, measure: sphere_surface_measure(n) })
}
