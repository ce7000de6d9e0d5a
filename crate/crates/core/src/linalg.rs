//! Dense linear algebra for the small dimensions used here (n up to a few
//! dozen): square matrices, symmetric matrices, Cholesky and LU
//! factorizations, quadratic forms and lattices.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::tolerances::{CHOLESKY_PIVOT_TOL, LU_PIVOT_TOL, SYMMETRY_TOL};

/// Square real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from its rows. Rows must all have length `rows.len()`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidShape);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidShape);
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::InvalidShape);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| c * x).collect() }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.n, other.n)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n, x.len())?;
        Ok((0..self.n).map(|i| dot(self.row(i), x)).collect())
    }

    /// `Aᵀx` without forming the transpose.
    pub fn transpose_mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n, x.len())?;
        let n = self.n;
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.data[i * n + j] * xi;
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn lu(&self) -> Result<Lu> {
        Lu::new(self)
    }

    /// Determinant via LU with partial pivoting; exactly zero pivots give 0.
    pub fn det(&self) -> f64 {
        Lu::factor(self).det()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.lu()?.inverse()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.lu()?.solve(b)
    }

    /// `A^{-T}`, the generator of the dual lattice.
    pub fn inverse_transpose(&self) -> Result<Matrix> {
        Ok(self.inverse()?.transpose())
    }

    /// 1-norm condition number `‖A‖₁‖A⁻¹‖₁`.
    pub fn condition_1(&self) -> Result<f64> {
        Ok(self.norm1() * self.inverse()?.norm1())
    }
}

/// LU factorization with partial pivoting, `PA = LU`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    factors: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    fn factor(a: &Matrix) -> Self {
        let n = a.n;
        let mut f = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let threshold = n as f64 * LU_PIVOT_TOL * a.max_abs();
        let mut singular = a.max_abs() == 0.0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, f[i * n + k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= threshold {
                singular = true;
            }
            if p != k {
                for j in 0..n {
                    f.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = f[k * n + k];
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let l = f[i * n + k] / pivot;
                f[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        f[i * n + j] -= l * f[k * n + j];
                    }
                }
            }
        }
        Self { n, factors: f, perm, sign, singular }
    }

    /// Factors `a`, failing with [`Error::SingularMatrix`] when a pivot falls
    /// below `n * 1e-14 * max|a_ij|`.
    pub fn new(a: &Matrix) -> Result<Self> {
        let lu = Self::factor(a);
        if lu.singular {
            Err(Error::SingularMatrix)
        } else {
            Ok(lu)
        }
    }

    pub fn det(&self) -> f64 {
        (0..self.n).fold(self.sign, |d, i| d * self.factors[i * self.n + i])
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n, b.len())?;
        let n = self.n;
        let f = &self.factors;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| f[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| f[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / f[i * n + i];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        let mut inv = Matrix::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        Ok(inv)
    }
}

/// Real symmetric matrix. Symmetry is exact: accepted inputs are averaged
/// with their transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Accepts `m` if `|m_ij - m_ji| <= 1e-12 * max(1, max|m|)`, then
    /// symmetrizes it exactly.
    pub fn new(m: Matrix) -> Result<Self> {
        let n = m.n;
        let scale = m.max_abs().max(1.0);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((m.get(i, j) - m.get(j, i)).abs());
            }
        }
        if worst > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric(worst));
        }
        Ok(Self::symmetrized(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// `(m + mᵀ)/2`, with no tolerance check. For matrices that are
    /// symmetric by construction up to rounding.
    pub(crate) fn symmetrized(mut m: Matrix) -> Self {
        let n = m.n;
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (m.get(i, j) + m.get(j, i));
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self(Matrix::diagonal(d))
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.scaled(c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.data.iter().all(|&x| x == 0.0)
    }

    /// `q(x) = ⟨Mx, x⟩`.
    pub fn qeval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.qeval_unchecked(x))
    }

    #[inline]
    pub(crate) fn qeval_unchecked(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let d = &self.0.data;
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += d[i * n + j] * x[j];
            }
            acc += row * x[i];
        }
        acc
    }

    /// Quadratic form on an integer vector.
    #[inline]
    pub(crate) fn qeval_int(&self, w: &[i64]) -> f64 {
        let n = self.dim();
        let d = &self.0.data;
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += d[i * n + j] * w[j] as f64;
            }
            acc += row * w[i] as f64;
        }
        acc
    }

    /// Eigenvalues in ascending order (cyclic Jacobi rotations).
    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.0)
    }
}

/// Symmetric positive-definite matrix together with its Cholesky factor,
/// determinant, inverse and extreme eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdForm {
    base: SymMatrix,
    chol: Matrix,
    det: f64,
    inv: SymMatrix,
    lambda_min: f64,
    lambda_max: f64,
}

impl SpdForm {
    pub fn new(base: SymMatrix) -> Result<Self> {
        cholesky(&base)
    }

    pub fn identity(n: usize) -> Self {
        cholesky(&SymMatrix::identity(n)).expect("identity is positive definite")
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        cholesky(&SymMatrix::from_rows(rows)?)
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        cholesky(&SymMatrix::diagonal(d))
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &SymMatrix {
        &self.base
    }

    /// Lower-triangular `L` with `LLᵀ = Q`.
    pub fn chol(&self) -> &Matrix {
        &self.chol
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn inverse(&self) -> &SymMatrix {
        &self.inv
    }

    /// `Q⁻¹` as a form in its own right.
    pub fn inverse_form(&self) -> Result<SpdForm> {
        cholesky(&self.inv)
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn qeval(&self, x: &[f64]) -> Result<f64> {
        self.base.qeval(x)
    }

    pub fn scaled(&self, c: f64) -> Result<SpdForm> {
        cholesky(&self.base.scaled(c))
    }
}

/// Generator matrix `A` of the lattice `A·Zⁿ`, its volume `|det A|`, and
/// the dual generator `(Aᵀ)⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    gen: Matrix,
    volume: f64,
    dual_gen: Matrix,
}

impl Lattice {
    pub fn new(gen: Matrix) -> Result<Self> {
        let lu = gen.lu()?;
        let volume = lu.det().abs();
        if !(volume > crate::tolerances::MIN_ABS_DET) {
            return Err(Error::SingularMatrix);
        }
        let dual_gen = lu.inverse()?.transpose();
        Ok(Self { gen, volume, dual_gen })
    }

    /// The standard lattice `Zⁿ`.
    pub fn integer(n: usize) -> Self {
        Self { gen: Matrix::identity(n), volume: 1.0, dual_gen: Matrix::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.gen.n
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn dual_generator(&self) -> &Matrix {
        &self.dual_gen
    }

    pub fn dual(&self) -> Lattice {
        dual_lattice(self)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn unit_vector(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

/// `q_Q(x) = ⟨Qx, x⟩`.
pub fn qeval(q: &SymMatrix, x: &[f64]) -> Result<f64> {
    q.qeval(x)
}

/// Cholesky factorization `Q = LLᵀ`.
///
/// Fails with [`Error::NotPositiveDefinite`] if a pivot is at most
/// `n * 1e-14 * max|Q_ij|`.
pub fn cholesky(q: &SymMatrix) -> Result<SpdForm> {
    let n = q.dim();
    let a = q.as_matrix();
    let threshold = n as f64 * CHOLESKY_PIVOT_TOL * a.max_abs();
    let mut l = Matrix::zeros(n);
    let mut det = 1.0;
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if !(d > threshold) {
            return Err(Error::NotPositiveDefinite);
        }
        det *= d;
        let ljj = d.sqrt();
        l.set(j, j, ljj);
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    let inv = SymMatrix::symmetrized(cholesky_inverse(&l));
    let eig = q.eigenvalues();
    Ok(SpdForm {
        base: q.clone(),
        chol: l,
        det,
        inv,
        lambda_min: eig[0],
        lambda_max: eig[n - 1],
    })
}

/// `(LLᵀ)⁻¹` from the lower factor.
fn cholesky_inverse(l: &Matrix) -> Matrix {
    let n = l.n;
    // L⁻¹ by forward substitution, column by column.
    let mut linv = Matrix::zeros(n);
    for j in 0..n {
        linv.set(j, j, 1.0 / l.get(j, j));
        for i in j + 1..n {
            let s: f64 = (j..i).map(|k| l.get(i, k) * linv.get(k, j)).sum();
            linv.set(i, j, -s / l.get(i, i));
        }
    }
    // Q⁻¹ = L⁻ᵀ L⁻¹
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (i..n).map(|k| linv.get(k, i) * linv.get(k, j)).sum();
            out.set(i, j, s);
            out.set(j, i, s);
        }
    }
    out
}

/// `AᵀQA`, exactly symmetric.
pub fn gram_transform(q: &SymMatrix, a: &Matrix) -> Result<SymMatrix> {
    check_dim(q.dim(), a.dim())?;
    let qa = q.as_matrix().matmul(a)?;
    Ok(SymMatrix::symmetrized(a.transpose().matmul(&qa)?))
}

pub fn dual_lattice(l: &Lattice) -> Lattice {
    Lattice { gen: l.dual_gen.clone(), volume: 1.0 / l.volume, dual_gen: l.gen.clone() }
}

/// `Tr(Q⁻¹B)`.
pub fn trace_product(q: &SpdForm, b: &SymMatrix) -> Result<f64> {
    check_dim(q.dim(), b.dim())?;
    let n = q.dim();
    let qi = q.inverse();
    let mut t = 0.0;
    for i in 0..n {
        for k in 0..n {
            t += qi.get(i, k) * b.get(k, i);
        }
    }
    Ok(t)
}

/// Symmetrized outer product `(uvᵀ + vuᵀ)/2`.
///
/// Its quadratic form is `x ↦ ⟨u,x⟩⟨v,x⟩` and its trace is `⟨u,v⟩`.
pub fn sym_outer(u: &[f64], v: &[f64]) -> Result<SymMatrix> {
    check_dim(u.len(), v.len())?;
    let n = u.len();
    if n == 0 {
        return Err(Error::InvalidShape);
    }
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, 0.5 * (u[i] * v[j] + u[j] * v[i]));
        }
    }
    Ok(SymMatrix(m))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    let n = m.n;
    let mut a = m.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j) * a.get(i, j))
            .sum();
        let diag: f64 = (0..n).map(|i| a.get(i, i) * a.get(i, i)).sum();
        if off <= 1e-32 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(rows: &[[f64; 2]]) -> SymMatrix {
        SymMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn qeval_examples() {
        assert_eq!(qeval(&SymMatrix::identity(2), &[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(qeval(&SymMatrix::diagonal(&[2.0, 3.0]), &[1.0, 1.0]).unwrap(), 5.0);
        // 2·1 + 2·(1·1·2) + 3·4
        assert_eq!(qeval(&sym(&[[2.0, 1.0], [1.0, 3.0]]), &[1.0, 2.0]).unwrap(), 18.0);
        assert!(matches!(
            qeval(&SymMatrix::identity(2), &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cholesky_examples() {
        let f = cholesky(&SymMatrix::identity(2)).unwrap();
        assert_eq!(f.chol(), &Matrix::identity(2));
        assert_eq!(f.det(), 1.0);

        let f = cholesky(&SymMatrix::diagonal(&[4.0, 9.0])).unwrap();
        assert_eq!(f.chol(), &Matrix::diagonal(&[2.0, 3.0]));
        assert_eq!(f.det(), 36.0);

        assert_eq!(cholesky(&sym(&[[1.0, 2.0], [2.0, 1.0]])), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [2.1, 1.0]]).unwrap();
        assert!(matches!(SymMatrix::new(m), Err(Error::NotSymmetric(_))));
        let m = Matrix::from_rows(&[[1.0, 2.0], [2.0 + 1e-14, 1.0]]).unwrap();
        let s = SymMatrix::new(m).unwrap();
        assert_eq!(s.get(0, 1), s.get(1, 0));
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: [&[f64]; 2] = [&[1.0, 2.0], &[3.0]];
        assert_eq!(Matrix::from_rows(&rows), Err(Error::InvalidShape));
        assert_eq!(Matrix::from_rows(&[[f64::NAN]]), Err(Error::NonFinite));
    }

    #[test]
    fn gram_transform_examples() {
        let i2 = SymMatrix::identity(2);
        let a = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(gram_transform(&i2, &a).unwrap(), sym(&[[1.0, 1.0], [1.0, 2.0]]));
        let a = Matrix::diagonal(&[2.0, 3.0]);
        assert_eq!(gram_transform(&i2, &a).unwrap(), SymMatrix::diagonal(&[4.0, 9.0]));
        let p = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let q = SymMatrix::diagonal(&[2.0, 1.0]);
        assert_eq!(gram_transform(&q, &p).unwrap(), SymMatrix::diagonal(&[1.0, 2.0]));
    }

    #[test]
    fn dual_lattice_examples() {
        let l = Lattice::integer(2);
        assert_eq!(dual_lattice(&l).generator(), &Matrix::identity(2));

        let l = Lattice::new(Matrix::diagonal(&[2.0, 3.0])).unwrap();
        let d = dual_lattice(&l);
        assert!((d.generator().get(0, 0) - 0.5).abs() < 1e-15);
        assert!((d.generator().get(1, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.volume() - 1.0 / 6.0).abs() < 1e-15);

        let l = Lattice::new(Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap()).unwrap();
        let expect = Matrix::from_rows(&[[1.0, 0.0], [-1.0, 1.0]]).unwrap();
        let d = dual_lattice(&l);
        for i in 0..2 {
            for j in 0..2 {
                assert!((d.generator().get(i, j) - expect.get(i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn singular_lattice_rejected() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(Lattice::new(a), Err(Error::SingularMatrix));
    }

    #[test]
    fn trace_product_examples() {
        let i2 = SpdForm::identity(2);
        assert_eq!(trace_product(&i2, &sym(&[[5.0, 1.0], [1.0, 7.0]])).unwrap(), 12.0);
        let q = SpdForm::diagonal(&[2.0, 4.0]).unwrap();
        assert!((trace_product(&q, &SymMatrix::diagonal(&[2.0, 4.0])).unwrap() - 2.0).abs() < 1e-15);
        assert!((trace_product(&q, &SymMatrix::identity(2)).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn sym_outer_examples() {
        assert_eq!(sym_outer(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), sym(&[[1.0, 0.0], [0.0, 0.0]]));
        assert_eq!(sym_outer(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), sym(&[[0.0, 0.5], [0.5, 0.0]]));
        assert_eq!(sym_outer(&[1.0, 2.0], &[3.0, 4.0]).unwrap().trace(), 11.0);
    }

    #[test]
    fn scalar_matrices_supported() {
        let q = SpdForm::diagonal(&[3.0]).unwrap();
        assert_eq!(q.det(), 3.0);
        assert!((q.inverse().get(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(q.lambda_min(), 3.0);
    }

    #[test]
    fn eigenvalues_of_known_matrix() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let ev = sym(&[[2.0, 1.0], [1.0, 2.0]]).eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn lu_solve_and_det() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let x = a.solve(&[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 3.0).abs() < 1e-15);
        assert!((a.det() - 5.0).abs() < 1e-15);
        let s = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(s.solve(&[1.0, 1.0]), Err(Error::SingularMatrix));
        assert_eq!(s.det(), 0.0);
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-2.0f64..2.0, n * n)
            .prop_map(move |d| Matrix::from_row_major(n, d).unwrap())
    }

    /// Random SPD `MᵀM + I/2`, and a random well-conditioned `A = I + M/2n`.
    fn arb_case() -> impl Strategy<Value = (SymMatrix, Matrix, SymMatrix)> {
        (1usize..=6).prop_flat_map(|n| {
            (arb_matrix(n), arb_matrix(n), arb_matrix(n)).prop_map(move |(m, a, b)| {
                let mut spd = gram_transform(&SymMatrix::identity(n), &m).unwrap().into_matrix();
                for i in 0..n {
                    spd.data[i * n + i] += 0.5;
                }
                let mut gen = a.scaled(0.5 / n as f64);
                for i in 0..n {
                    gen.data[i * n + i] += 1.0;
                }
                (SymMatrix::symmetrized(spd), gen, SymMatrix::symmetrized(b))
            })
        })
    }

    proptest! {
        #[test]
        fn gram_transform_determinant((q, a, _b) in arb_case()) {
            let g = cholesky(&gram_transform(&q, &a).unwrap()).unwrap();
            let qd = cholesky(&q).unwrap().det();
            let expect = a.det().powi(2) * qd;
            prop_assert!((g.det() - expect).abs() <= 1e-10 * expect.abs());
        }

        #[test]
        fn trace_product_is_conjugation_invariant((q, a, b) in arb_case()) {
            let qa = cholesky(&gram_transform(&q, &a).unwrap()).unwrap();
            let ba = gram_transform(&b, &a).unwrap();
            let lhs = trace_product(&qa, &ba).unwrap();
            let rhs = trace_product(&cholesky(&q).unwrap(), &b).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
        }

        #[test]
        fn sym_outer_form_is_product_of_inner_products(
            uvx in (1usize..=6).prop_flat_map(|n| (
                proptest::collection::vec(-3.0f64..3.0, n),
                proptest::collection::vec(-3.0f64..3.0, n),
                proptest::collection::vec(-3.0f64..3.0, n),
            ))
        ) {
            let (u, v, x) = uvx;
            let b = sym_outer(&u, &v).unwrap();
            let lhs = b.qeval(&x).unwrap();
            let rhs = dot(&u, &x) * dot(&v, &x);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn dual_of_dual_is_identity((_q, a, _b) in arb_case()) {
            let l = Lattice::new(a.clone()).unwrap();
            let dd = dual_lattice(&dual_lattice(&l));
            for (x, y) in dd.generator().as_slice().iter().zip(a.as_slice()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }

        #[test]
        fn cholesky_reproduces_input((q, _a, _b) in arb_case()) {
            let f = cholesky(&q).unwrap();
            let l = f.chol();
            let llt = l.matmul(&l.transpose()).unwrap();
            let scale = q.as_matrix().max_abs();
            for (x, y) in llt.as_slice().iter().zip(q.as_matrix().as_slice()) {
                prop_assert!((x - y).abs() <= 1e-12 * scale);
            }
            let id = q.as_matrix().matmul(f.inverse().as_matrix()).unwrap();
            for i in 0..q.dim() {
                for j in 0..q.dim() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((id.get(i, j) - e).abs() <= 1e-10);
                }
            }
        }
    }
}
