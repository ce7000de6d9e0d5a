//! Lattice points in ellipsoids and theta series of (weighted) Gaussians.
//!
//! For a positive-definite form `Q` the theta series of the Gaussian
//! `g_Q(x) = exp(-π q_Q(x))` at scale `t` is
//!
//! ```text
//! θ*(g_Q, t) = Σ'_{ω ∈ Zⁿ} exp(-π t q_Q(ω))
//! ```
//!
//! (the prime excludes `ω = 0`), and for a symmetric weight `B`
//!
//! ```text
//! θ*(g_{Q,B}, t) = Σ'_{ω} t q_B(ω) exp(-π t q_Q(ω)).
//! ```
//!
//! Both are summed over an ellipsoid `q_Q(ω) <= R` whose radius comes from an
//! explicit tail bound, in ascending order of `q_Q(ω)`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{SpdForm, SymMatrix};
use crate::sum::NeumaierSum;
use crate::tolerances::DEFAULT_POINT_CAP;

/// All nonzero `ω ∈ Zⁿ` with `q_Q(ω) <= radius`, sorted by `q_Q(ω)` and then
/// lexicographically by `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidPoints {
    n: usize,
    radius: f64,
    coords: Vec<i64>,
    q: Vec<f64>,
}

impl EllipsoidPoints {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn point(&self, k: usize) -> &[i64] {
        &self.coords[k * self.n..(k + 1) * self.n]
    }

    /// `q_Q` of the `k`-th point.
    pub fn norm(&self, k: usize) -> f64 {
        self.q[k]
    }

    pub fn norms(&self) -> &[f64] {
        &self.q
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], f64)> + '_ {
        self.coords.chunks_exact(self.n.max(1)).zip(self.q.iter().copied())
    }

    /// Index ranges of runs of points with bitwise equal `q`.
    pub fn shells(&self) -> impl Iterator<Item = core::ops::Range<usize>> + '_ {
        let mut start = 0;
        core::iter::from_fn(move || {
            if start >= self.q.len() {
                return None;
            }
            let q0 = self.q[start];
            let mut end = start + 1;
            while end < self.q.len() && self.q[end] == q0 {
                end += 1;
            }
            let r = start..end;
            start = end;
            Some(r)
        })
    }
}

/// [`enumerate_ellipsoid_capped`] with the default cap of `10⁸` points.
pub fn enumerate_ellipsoid(form: &SpdForm, radius: f64) -> Result<EllipsoidPoints> {
    enumerate_ellipsoid_capped(form, radius, DEFAULT_POINT_CAP)
}

/// Fincke–Pohst enumeration of the nonzero lattice points in the ellipsoid
/// `q_Q(ω) <= radius`.
///
/// Writes `q_Q(ω) = ‖Lᵀω‖²` with the Cholesky factor `L` and fixes the
/// coordinates from the last to the first, each within the interval still
/// admitted by the remaining budget. The intervals are widened slightly and
/// every candidate is checked against the exact form, so no boundary point
/// is lost to rounding.
pub fn enumerate_ellipsoid_capped(form: &SpdForm, radius: f64, cap: usize) -> Result<EllipsoidPoints> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument("ellipsoid radius must be positive and finite"));
    }
    let n = form.dim();
    let l = form.chol();
    let mut e = Enumerator {
        n,
        l_diag: (0..n).map(|i| l.get(i, i)).collect(),
        l_col: (0..n).map(|i| (0..n).map(|j| l.get(j, i)).collect()).collect(),
        radius,
        slack: 1e-9 * radius + 1e-12,
        form: form.base(),
        cap,
        w: alloc::vec![0i64; n],
        coords: Vec::new(),
        q: Vec::new(),
    };
    e.descend(n, 0.0)?;

    let Enumerator { coords, q, .. } = e;
    let mut order: Vec<usize> = (0..q.len()).collect();
    order.sort_by(|&a, &b| {
        q[a].partial_cmp(&q[b])
            .unwrap_or(Ordering::Equal)
            .then_with(|| coords[a * n..(a + 1) * n].cmp(&coords[b * n..(b + 1) * n]))
    });
    let mut sorted_coords = Vec::with_capacity(coords.len());
    let mut sorted_q = Vec::with_capacity(q.len());
    for &k in &order {
        sorted_coords.extend_from_slice(&coords[k * n..(k + 1) * n]);
        sorted_q.push(q[k]);
    }
    Ok(EllipsoidPoints { n, radius, coords: sorted_coords, q: sorted_q })
}

struct Enumerator<'a> {
    n: usize,
    l_diag: Vec<f64>,
    /// `l_col[i][j] = L[j][i]`, i.e. row `i` of `Lᵀ`.
    l_col: Vec<Vec<f64>>,
    radius: f64,
    slack: f64,
    form: &'a SymMatrix,
    cap: usize,
    w: Vec<i64>,
    coords: Vec<i64>,
    q: Vec<f64>,
}

impl Enumerator<'_> {
    /// Coordinates `level..n` are fixed and contribute `used` to the form.
    fn descend(&mut self, level: usize, used: f64) -> Result<()> {
        if level == 0 {
            if self.w.iter().all(|&c| c == 0) {
                return Ok(());
            }
            let q = self.form.qeval_int(&self.w);
            if q <= self.radius {
                if self.q.len() >= self.cap {
                    return Err(Error::TooManyPoints { cap: self.cap });
                }
                self.coords.extend_from_slice(&self.w);
                self.q.push(q);
            }
            return Ok(());
        }
        let i = level - 1;
        let lii = self.l_diag[i];
        let mut shift = 0.0;
        for j in level..self.n {
            shift += self.l_col[i][j] * self.w[j] as f64;
        }
        let center = -shift / lii;
        let budget = self.radius + self.slack - used;
        if budget < 0.0 {
            return Ok(());
        }
        let half = budget.sqrt() / lii;
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        for c in lo..=hi {
            self.w[i] = c;
            let y = lii * (c as f64 - center);
            self.descend(i, used + y * y)?;
        }
        self.w[i] = 0;
        Ok(())
    }
}

/// `Σ_{ω ∈ Zⁿ} exp(-π t q_Q(ω) / 2)` is at most `(1 + √(2/(t λ_min)))ⁿ`.
fn half_gaussian_mass(form: &SpdForm, t: f64) -> f64 {
    (1.0 + (2.0 / (t * form.lambda_min())).sqrt()).powi(form.dim() as i32)
}

/// Radius `R` with `Σ_{q > R} exp(-π t q) <= C exp(-π t R / 2) <= tol / 10`.
fn gaussian_radius(form: &SpdForm, t: f64, tol: f64) -> f64 {
    let c = half_gaussian_mass(form, t);
    let r = 2.0 / (PI * t) * (10.0 * c / tol).ln();
    r.max(form.lambda_min())
}

/// Radius for the weighted series. Past `R >= 2/(πt)`,
/// `q exp(-πtq) <= R exp(-πtR/2) exp(-πtq/2)`, and `|q_B| <= ‖B‖_F q / λ_min`.
fn weighted_radius(form: &SpdForm, b: &SymMatrix, t: f64, tol: f64) -> f64 {
    let c = half_gaussian_mass(form, t);
    let scale = t * b.as_matrix().frobenius_norm() / form.lambda_min();
    let mut r = gaussian_radius(form, t, tol).max(2.0 / (PI * t));
    while scale * r * (-PI * t * r / 2.0).exp() * c > tol / 10.0 {
        r *= 1.1;
    }
    r
}

fn check_scale(t: f64, tol: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument("theta scale t must be positive and finite"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    Ok(())
}

/// `θ*(g_Q, t) = Σ'_{ω} exp(-π t q_Q(ω))` with absolute truncation error
/// below `tol`.
pub fn theta_star_gaussian(form: &SpdForm, t: f64, tol: f64) -> Result<f64> {
    check_scale(t, tol)?;
    let pts = enumerate_ellipsoid(form, gaussian_radius(form, t, tol))?;
    let mut acc = NeumaierSum::new();
    for &q in pts.norms() {
        acc += (-PI * t * q).exp();
    }
    Ok(acc.value())
}

/// `θ*(g_{Q,B}, t) = Σ'_{ω} t q_B(ω) exp(-π t q_Q(ω))` with absolute
/// truncation error below `tol`.
pub fn theta_star_weighted(form: &SpdForm, b: &SymMatrix, t: f64, tol: f64) -> Result<f64> {
    check_scale(t, tol)?;
    if b.dim() != form.dim() {
        return Err(Error::DimensionMismatch { expected: form.dim(), found: b.dim() });
    }
    if b.is_zero() {
        return Ok(0.0);
    }
    let pts = enumerate_ellipsoid(form, weighted_radius(form, b, t, tol))?;
    let mut acc = NeumaierSum::new();
    for (w, q) in pts.iter() {
        acc += t * b.qeval_int(w) * (-PI * t * q).exp();
    }
    Ok(acc.value())
}

/// `x ↦ coeff · q_B(x) · exp(-π q_Q(x))`, or `coeff · exp(-π q_Q(x))` when
/// there is no weight.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolyFunction {
    pub coeff: f64,
    pub weight: Option<SymMatrix>,
    pub form: SpdForm,
}

impl GaussianPolyFunction {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let g = (-PI * self.form.qeval(x)?).exp();
        Ok(match &self.weight {
            Some(b) => self.coeff * b.qeval(x)? * g,
            None => self.coeff * g,
        })
    }

    /// Value at the origin: `coeff` without weight, `0` with one.
    pub fn at_zero(&self) -> f64 {
        if self.weight.is_some() {
            0.0
        } else {
            self.coeff
        }
    }
}

/// Fourier transform of `g_Q` or `g_{Q,B}` as a sum of Gaussian-polynomial
/// terms.
///
/// Without weight: `ĝ_Q = (det Q)^{-1/2} g_{Q⁻¹}`. With weight `B`:
///
/// ```text
/// ĝ_{Q,B}(ξ) = (det Q)^{-1/2} [Tr(Q⁻¹B)/(2π) - q_{Q⁻¹BQ⁻¹}(ξ)] exp(-π q_{Q⁻¹}(ξ))
/// ```
///
/// returned as `[(-(det Q)^{-1/2}, Q⁻¹BQ⁻¹, Q⁻¹), (Tr(Q⁻¹B)/(2π√det Q), -, Q⁻¹)]`.
pub fn fourier_gaussian_weighted(form: &SpdForm, b: Option<&SymMatrix>) -> Result<Vec<GaussianPolyFunction>> {
    let dual = form.inverse_form()?;
    let d = 1.0 / form.det().sqrt();
    let Some(b) = b else {
        return Ok(alloc::vec![GaussianPolyFunction { coeff: d, weight: None, form: dual }]);
    };
    let qinv = form.inverse().as_matrix();
    let c = qinv.matmul(b.as_matrix())?.matmul(qinv)?;
    let tr = crate::linalg::trace_product(form, b)?;
    Ok(alloc::vec![
        GaussianPolyFunction { coeff: -d, weight: Some(SymMatrix::symmetrized(c)), form: dual.clone() },
        GaussianPolyFunction { coeff: tr * d / (2.0 * PI), weight: None, form: dual },
    ])
}

/// Absolute defect of the theta transformation law
/// `θ(g_Q, t) = t^{-n/2} (det Q)^{-1/2} θ(g_{Q⁻¹}, 1/t)`, where `θ = θ* + 1`
/// includes the origin.
pub fn theta_transform_residual(form: &SpdForm, t: f64) -> Result<f64> {
    let n = form.dim() as f64;
    let dual = form.inverse_form()?;
    let lhs = 1.0 + theta_star_gaussian(form, t, 1e-17)?;
    let rhs_theta = 1.0 + theta_star_gaussian(&dual, 1.0 / t, 1e-17)?;
    let rhs = t.powf(-n / 2.0) / form.det().sqrt() * rhs_theta;
    Ok((lhs - rhs).abs())
}

/// Least-squares fit of `log θ(g_Q, t) ≈ log R - α log t` over the grid
/// points in `(0, 0.2]`, where `θ = θ* + 1`.
///
/// The transformation law gives `θ(g_Q, t) = R t^{-n/2} (1 + O(e^{-c/t}))`
/// with `R = (det Q)^{-1/2}`, while `θ*` alone carries an additional
/// constant `-1` that biases the fit. Returns `(α̂, R̂)`.
pub fn theta_asymptotic_fit(form: &SpdForm, t_grid: &[f64]) -> Result<(f64, f64)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &t in t_grid {
        if !(t > 0.0 && t <= 0.2) {
            continue;
        }
        let th = theta_star_gaussian(form, t, 1e-15)?;
        if th.is_finite() && th > 0.0 {
            xs.push(t.ln());
            ys.push((th + 1.0).ln());
        }
    }
    if xs.len() < 4 {
        return Err(Error::DegenerateGrid);
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if !(sxx > 0.0) {
        return Err(Error::DegenerateGrid);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Ok((-slope, intercept.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;
    use proptest::prelude::*;

    fn brute_force(form: &SpdForm, radius: f64, bound: i64) -> BTreeSet<Vec<i64>> {
        let n = form.dim();
        let mut out = BTreeSet::new();
        let mut w = vec![-bound; n];
        loop {
            if w.iter().any(|&c| c != 0) && form.base().qeval_int(&w) <= radius {
                out.insert(w.clone());
            }
            let mut k = 0;
            while k < n {
                w[k] += 1;
                if w[k] <= bound {
                    break;
                }
                w[k] = -bound;
                k += 1;
            }
            if k == n {
                return out;
            }
        }
    }

    fn as_set(p: &EllipsoidPoints) -> BTreeSet<Vec<i64>> {
        p.iter().map(|(w, _)| w.to_vec()).collect()
    }

    #[test]
    fn enumerate_examples() {
        let i2 = SpdForm::identity(2);
        assert_eq!(enumerate_ellipsoid(&i2, 1.0).unwrap().len(), 4);
        assert_eq!(enumerate_ellipsoid(&i2, 2.0).unwrap().len(), 8);
        let d = SpdForm::diagonal(&[1.0, 4.0]).unwrap();
        let pts = enumerate_ellipsoid(&d, 4.0).unwrap();
        let expect: BTreeSet<Vec<i64>> =
            [[1, 0], [-1, 0], [2, 0], [-2, 0], [0, 1], [0, -1]].iter().map(|p| p.to_vec()).collect();
        assert_eq!(as_set(&pts), expect);
    }

    #[test]
    fn enumerate_is_sorted_and_bounded() {
        let q = SpdForm::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let pts = enumerate_ellipsoid(&q, 40.0).unwrap();
        for k in 1..pts.len() {
            assert!(pts.norm(k - 1) <= pts.norm(k));
            if pts.norm(k - 1) == pts.norm(k) {
                assert!(pts.point(k - 1) < pts.point(k));
            }
        }
        assert!(pts.norms().iter().all(|&q| q <= 40.0));
    }

    #[test]
    fn enumerate_cap() {
        let i2 = SpdForm::identity(2);
        assert_eq!(enumerate_ellipsoid_capped(&i2, 100.0, 10), Err(Error::TooManyPoints { cap: 10 }));
    }

    #[test]
    fn enumerate_matches_brute_force() {
        let forms = [
            SpdForm::identity(1),
            SpdForm::diagonal(&[0.7]).unwrap(),
            SpdForm::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap(),
            SpdForm::from_rows(&[[1.0, 0.9], [0.9, 1.0]]).unwrap(),
            SpdForm::from_rows(&[[2.0, -0.5, 0.3], [-0.5, 1.5, 0.2], [0.3, 0.2, 1.0]]).unwrap(),
        ];
        for f in &forms {
            for r in [0.5, 3.0, 10.0, 30.0] {
                let bound = (r / f.lambda_min()).sqrt().ceil() as i64;
                assert_eq!(as_set(&enumerate_ellipsoid(f, r).unwrap()), brute_force(f, r, bound));
            }
        }
    }

    #[test]
    fn shells_group_equal_norms() {
        let pts = enumerate_ellipsoid(&SpdForm::identity(2), 5.0).unwrap();
        let sizes: Vec<usize> = pts.shells().map(|r| r.len()).collect();
        // norms 1, 2, 4, 5
        assert_eq!(sizes, vec![4, 4, 4, 8]);
    }

    /// `Σ_{m ≥ 1} exp(-π a m²)` by plain summation.
    fn one_dim(a: f64) -> f64 {
        (1..40).map(|m| (-PI * a * (m * m) as f64).exp()).sum()
    }

    #[test]
    fn theta_gaussian_examples() {
        let th1 = theta_star_gaussian(&SpdForm::identity(1), 1.0, 1e-15).unwrap();
        assert!((th1 - 2.0 * one_dim(1.0)).abs() < 1e-15);
        assert!((th1 - 0.086_434_811_3).abs() < 1e-10);
        let th2 = theta_star_gaussian(&SpdForm::identity(2), 1.0, 1e-15).unwrap();
        assert!((th2 - ((1.0 + th1) * (1.0 + th1) - 1.0)).abs() < 1e-14);
        let big = theta_star_gaussian(&SpdForm::identity(2), 50.0, 1e-300).unwrap();
        let lead = 4.0 * (-50.0 * PI).exp();
        assert!((big - lead).abs() / lead < 1e-10);
    }

    #[test]
    fn theta_weighted_examples() {
        let i1 = SpdForm::identity(1);
        assert_eq!(theta_star_weighted(&i1, &SymMatrix::zeros(1), 1.0, 1e-15).unwrap(), 0.0);
        let direct: f64 = 2.0 * (1..40).map(|m| ((m * m) as f64) * (-PI * (m * m) as f64).exp()).sum::<f64>();
        let w = theta_star_weighted(&i1, &SymMatrix::identity(1), 1.0, 1e-15).unwrap();
        assert!((w - direct).abs() < 1e-15);
        // 2e^{-π}(1 + 4e^{-3π} + 9e^{-8π} + ⋯)
        assert!((w - 0.086_455_735_275_854_0).abs() < 1e-15);

        let i2 = SpdForm::identity(2);
        let h = 1e-5;
        let fd = -(theta_star_gaussian(&i2, 1.0 + h, 1e-16).unwrap() - theta_star_gaussian(&i2, 1.0 - h, 1e-16).unwrap())
            / (2.0 * h * PI);
        let w2 = theta_star_weighted(&i2, &SymMatrix::identity(2), 1.0, 1e-15).unwrap();
        assert!((w2 - fd).abs() < 1e-6);
    }

    #[test]
    fn fourier_examples() {
        let i2 = SpdForm::identity(2);
        let g = fourier_gaussian_weighted(&i2, None).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].coeff, 1.0);
        assert_eq!(g[0].form.base(), &SymMatrix::identity(2));

        let g = fourier_gaussian_weighted(&i2, Some(&SymMatrix::identity(2))).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].coeff, -1.0);
        assert_eq!(g[0].weight.as_ref().unwrap(), &SymMatrix::identity(2));
        assert!((g[1].coeff - 1.0 / PI).abs() < 1e-15);
        assert!(g[1].weight.is_none());
        assert_eq!(g[0].at_zero(), 0.0);

        let g = fourier_gaussian_weighted(&SpdForm::diagonal(&[2.0, 2.0]).unwrap(), None).unwrap();
        assert_eq!(g[0].coeff, 0.5);
        let inv = g[0].form.base();
        for (i, j, v) in [(0, 0, 0.5), (0, 1, 0.0), (1, 1, 0.5)] {
            assert!((inv.get(i, j) - v).abs() < 1e-15);
        }
    }

    #[test]
    fn fourier_transform_of_one_dim_weighted_gaussian() {
        // x² e^{-π a x²} has transform a^{-1/2}(1/(2πa) - ξ²/a²) e^{-π ξ²/a};
        // checked against midpoint quadrature of ∫ x² e^{-π a x²} cos(2π x ξ) dx.
        let a = 1.7;
        let q = SpdForm::diagonal(&[a]).unwrap();
        let terms = fourier_gaussian_weighted(&q, Some(&SymMatrix::identity(1))).unwrap();
        for xi in [0.0, 0.3, 1.1] {
            let h = 1e-3;
            let mut quad = 0.0;
            let mut x = -12.0 + h / 2.0;
            while x < 12.0 {
                quad += x * x * (-PI * a * x * x).exp() * (2.0 * PI * x * xi).cos() * h;
                x += h;
            }
            let closed: f64 = terms.iter().map(|g| g.eval(&[xi]).unwrap()).sum();
            assert!((quad - closed).abs() < 1e-12, "xi = {xi}: {quad} vs {closed}");
        }
    }

    #[test]
    fn transform_law_holds() {
        let forms = [
            SpdForm::identity(1),
            SpdForm::identity(2),
            SpdForm::diagonal(&[1.0, 4.0]).unwrap(),
            SpdForm::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap(),
        ];
        for f in &forms {
            for t in [0.01, 0.5, 1.0, 2.0, 100.0] {
                let scale = (1.0 + theta_star_gaussian(f, t, 1e-16).unwrap()).max(1.0);
                assert!(theta_transform_residual(f, t).unwrap() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn asymptotic_fit_examples() {
        let grid = [0.1, 0.05, 0.02, 0.01];
        let (a, r) = theta_asymptotic_fit(&SpdForm::identity(2), &grid).unwrap();
        assert!((a - 1.0).abs() < 1e-3 && (r - 1.0).abs() < 1e-3);
        let (a, r) = theta_asymptotic_fit(&SpdForm::diagonal(&[4.0, 4.0]).unwrap(), &grid).unwrap();
        assert!((a - 1.0).abs() < 1e-3 && (r - 0.25).abs() < 1e-3, "{a} {r}");
        let (a, _) = theta_asymptotic_fit(&SpdForm::identity(1), &grid).unwrap();
        assert!((a - 0.5).abs() < 1e-3);
        assert_eq!(theta_asymptotic_fit(&SpdForm::identity(2), &[0.1, 0.05, 0.5, 1.0]), Err(Error::DegenerateGrid));
    }

    #[test]
    fn theta_monotone_and_scaling() {
        let q = SpdForm::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..30 {
            let t = 0.1 * k as f64;
            let v = theta_star_gaussian(&q, t, 1e-16).unwrap();
            assert!(v < prev);
            prev = v;
            let scaled = theta_star_gaussian(&q.scaled(t).unwrap(), 1.0, 1e-16).unwrap();
            assert!((v - scaled).abs() <= 1e-12 * v.max(1.0));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn enumeration_symmetric_under_negation(a in 0.5f64..3.0, b in -0.4f64..0.4, c in 0.5f64..3.0, r in 1.0f64..20.0) {
            let f = SpdForm::from_rows(&[[a, b], [b, c]]).unwrap();
            let pts = enumerate_ellipsoid(&f, r).unwrap();
            let set = as_set(&pts);
            for w in &set {
                let neg: Vec<i64> = w.iter().map(|&x| -x).collect();
                prop_assert!(set.contains(&neg));
            }
        }

        #[test]
        fn theta_invariant_under_permutation(a in 0.5f64..3.0, b in -0.4f64..0.4, c in 0.5f64..3.0, t in 0.2f64..3.0) {
            let f = SpdForm::from_rows(&[[a, b], [b, c]]).unwrap();
            let g = SpdForm::from_rows(&[[c, b], [b, a]]).unwrap();
            let w = SymMatrix::from_rows(&[[1.0, 0.3], [0.3, 2.0]]).unwrap();
            let wp = SymMatrix::from_rows(&[[2.0, 0.3], [0.3, 1.0]]).unwrap();
            let x = theta_star_gaussian(&f, t, 1e-16).unwrap();
            let y = theta_star_gaussian(&g, t, 1e-16).unwrap();
            prop_assert!((x - y).abs() <= 1e-13 * x.max(1.0));
            let x = theta_star_weighted(&f, &w, t, 1e-16).unwrap();
            let y = theta_star_weighted(&g, &wp, t, 1e-16).unwrap();
            prop_assert!((x - y).abs() <= 1e-13 * x.abs().max(1.0));
        }
    }
}
