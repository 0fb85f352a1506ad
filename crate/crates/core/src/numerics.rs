//! Dense small-matrix kernels.
//!
//! Everything here works on [`Matrix`], a square row-major array of `Complex64`. Orders in
//! scope are small (at most a few dozen), so the routines favour robustness over speed:
//! a cyclic complex Jacobi eigensolver and a partial-pivot LU determinant.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

/// Hermiticity tolerance accepted by [`eig_sym`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;
/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to `‖M‖_F`.
pub const JACOBI_RELATIVE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subsystem dimensions must be at least 2 (got {d1}x{d2})")]
    InvalidDims { d1: usize, d2: usize },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
}

/// Local dimensions of a bipartite system `A ⊗ B`.
///
/// Row index convention: `r = a·d2 + α` with `a` indexing A and `α` indexing B, i.e. B is
/// the fast index and a `d1·d2` matrix is a `d1 × d1` grid of `d2 × d2` blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    d1: usize,
    d2: usize,
}

impl BipartiteDims {
    pub fn new(d1: usize, d2: usize) -> Result<Self, NumericsError> {
        if d1 < 2 || d2 < 2 {
            return Err(NumericsError::InvalidDims { d1, d2 });
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn order(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn check_order(&self, n: usize) -> Result<(), NumericsError> {
        if self.order() != n {
            return Err(NumericsError::DimensionMismatch { expected: self.order(), found: n });
        }
        Ok(())
    }

    /// 2⊗2, 2⊗3 and 3⊗2: the dimensions where PPT is equivalent to separability.
    pub fn is_low_dimensional(&self) -> bool {
        matches!((self.d1, self.d2), (2, 2) | (2, 3) | (3, 2))
    }
}

impl core::fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}x{}", self.d1, self.d2)
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from rows, rejecting ragged input and non-finite entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, NumericsError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(NumericsError::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(NumericsError::NonFinite { row: i, col: j });
                }
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, NumericsError> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.n + j] = z;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    /// `max |m_ij − conj(m_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumericsError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NumericsError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NumericsError> {
        self.check_same_order(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z * c).collect() }
    }

    /// `max |m_ij − o_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, NumericsError> {
        self.check_same_order(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, NumericsError> {
        self.check_same_order(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    fn check_same_order(&self, other: &Self) -> Result<(), NumericsError> {
        if self.n != other.n {
            return Err(NumericsError::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

pub fn trace(m: &Matrix) -> Complex64 {
    m.trace()
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// `max_k ‖M v_k − λ_k v_k‖_∞` against the input matrix.
    pub residual: f64,
}

impl SpectralDecomposition {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.eigenvalues.len();
        Matrix::from_fn(n, |i, j| {
            self.eigenvalues
                .iter()
                .zip(&self.eigenvectors)
                .map(|(&l, v)| v[i] * v[j].conj() * l)
                .sum()
        })
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal unitary and then
/// applies the classical real rotation, so real symmetric input never leaves the reals.
/// Eigenvalues come back ascending; each eigenvector is phased so its first non-negligible
/// component is real and positive.
pub fn eig_sym(m: &Matrix) -> Result<SpectralDecomposition, NumericsError> {
    let n = m.order();
    let scale = m.max_abs().max(1.0);
    let asymmetry = m.hermitian_defect();
    if asymmetry > HERMITIAN_TOLERANCE * scale {
        return Err(NumericsError::NotHermitian { asymmetry });
    }
    let target = m.hermitian_part();
    let mut a = target.clone();
    let mut v = Matrix::identity(n);
    let threshold = JACOBI_RELATIVE_THRESHOLD * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a.get(k, k).re).collect();
    let eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| normalize_phase((0..n).map(|i| v.get(i, k)).collect()))
        .collect();

    let mut residual = 0.0f64;
    for (l, vec) in eigenvalues.iter().zip(&eigenvectors) {
        for i in 0..n {
            let mv: Complex64 = (0..n).map(|j| target.get(i, j) * vec[j]).sum();
            residual = residual.max((mv - vec[i] * *l).norm());
        }
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors, residual })
}

/// Ascending eigenvalues only.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<f64>, NumericsError> {
    eig_sym(m).map(|d| d.eigenvalues)
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.order();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iθ}
    let alpha = a.get(p, p).re;
    let beta = a.get(q, q).re;
    let tau = (beta - alpha) / (2.0 * r);
    let t = if tau == 0.0 { 1.0 } else { tau.signum() / (tau.abs() + libm::sqrt(1.0 + tau * tau)) };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;
    // J = diag(1, e^{-iθ}) · [[c, s], [-s, c]] on the (p, q) plane
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;
    let n = a.order();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * jpp + akq * jqp);
        a.set(k, q, akp * jpq + akq * jqq);
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * jpp + vkq * jqp);
        v.set(k, q, vkp * jpq + vkq * jqq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
        a.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
    }
    a.set(p, q, Complex64::zero());
    a.set(q, p, Complex64::zero());
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
}

fn normalize_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if norm == 0.0 {
        return v;
    }
    let lead = v.iter().copied().find(|z| z.norm() > 1e-12 * norm);
    if let Some(z) = lead {
        let fix = z.conj() / (z.norm() * norm);
        for x in v.iter_mut() {
            *x *= fix;
        }
    }
    v
}

/// Determinant by LU factorization with partial (row) pivoting.
pub fn determinant(m: &Matrix) -> Complex64 {
    let n = m.order();
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a.get(x, col).norm().total_cmp(&a.get(y, col).norm()))
            .expect("non-empty pivot range");
        let pv = a.get(pivot, col);
        if pv.is_zero() {
            return Complex64::zero();
        }
        if pivot != col {
            for k in 0..n {
                let tmp = a.get(col, k);
                a.set(col, k, a.get(pivot, k));
                a.set(pivot, k, tmp);
            }
            det = -det;
        }
        det *= pv;
        for row in (col + 1)..n {
            let factor = a.get(row, col) / pv;
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let x = a.get(row, k) - factor * a.get(col, k);
                a.set(row, k, x);
            }
        }
    }
    det
}

/// Partial transpose on subsystem B: `P[(a,α),(b,β)] = M[(a,β),(b,α)]`.
pub fn partial_transpose(m: &Matrix, dims: BipartiteDims) -> Result<Matrix, NumericsError> {
    dims.check_order(m.order())?;
    let d2 = dims.d2();
    Ok(Matrix::from_fn(m.order(), |r, c| {
        let (a, alpha) = (r / d2, r % d2);
        let (b, beta) = (c / d2, c % d2);
        m.get(a * d2 + beta, b * d2 + alpha)
    }))
}

/// Trace-based bracket `[m − s√(n−1), m − s/√(n−1)]` on the smallest eigenvalue of a matrix
/// with real spectrum, where `m = tr M / n` and `s² = tr M² / n − m²`.
pub fn wolkowicz_bounds(m: &Matrix) -> Result<(f64, f64), NumericsError> {
    let n = m.order();
    if n < 2 {
        return Err(NumericsError::DimensionMismatch { expected: 2, found: n });
    }
    let nf = n as f64;
    let mean = m.trace().re / nf;
    let tr_sq: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (m.get(i, j) * m.get(j, i)).re)
        .sum();
    let s = libm::sqrt((tr_sq / nf - mean * mean).max(0.0));
    let root = libm::sqrt(nf - 1.0);
    Ok((mean - s * root, mean - s / root))
}
