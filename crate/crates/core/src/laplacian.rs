//! The Laplacian `L_A` of a matrix and the unital map `φ(A) = L_A + A`.
//!
//! Off-diagonal entries of `L_A` are `−|a_ij|` (symmetrised as `−(|a_ij| + |a_ji|)/2` for a
//! general matrix), and each diagonal entry is the sum of the moduli in its row, so every
//! row sums to zero and the all-ones vector spans part of the kernel.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::exact::{Exact, ExactMatrix, Surd};
use crate::numerics::{eig_sym, Matrix, NumericsError};
use crate::qstate::DensityMatrix;

/// Real symmetric, zero-row-sum matrix built from another matrix's off-diagonal moduli.
#[derive(Clone, Debug, PartialEq)]
pub struct Laplacian {
    matrix: Matrix,
    exact: Option<ExactMatrix>,
}

impl Laplacian {
    /// Builds the Laplacian whose off-diagonal weights are `w(i, j) ≥ 0`; `w` must be
    /// symmetric.
    fn from_weights(n: usize, w: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            let mut degree = 0.0;
            for j in 0..n {
                if i != j {
                    let wij = w(i, j);
                    degree += wij;
                    m.set(i, j, Complex64::new(-wij, 0.0));
                }
            }
            m.set(i, i, Complex64::new(degree, 0.0));
        }
        Self { matrix: m, exact: None }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j).re
    }

    /// Exact entries, available when the source matrix was exact and every row sum is
    /// representable as a single surd.
    pub fn exact(&self) -> Option<&ExactMatrix> {
        self.exact.as_ref()
    }

    /// `Tr L`, the total degree of the associated graph.
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `max_i |Σ_j l_ij|`.
    pub fn row_sum_defect(&self) -> f64 {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// `max_i |(L·1)_i|`, zero when the all-ones vector is in the kernel.
    pub fn ones_residual(&self) -> f64 {
        self.row_sum_defect()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>, NumericsError> {
        eig_sym(&self.matrix).map(|d| d.eigenvalues)
    }
}

/// `L_ρ` with `l_ij = −|ρ_ij|`. Exact entries are carried over from `ρ` when present.
pub fn laplacian_of_density(rho: &DensityMatrix) -> Laplacian {
    let m = rho.matrix();
    let mut lap = Laplacian::from_weights(m.order(), |i, j| m.get(i, j).norm());
    lap.exact = rho.exact().and_then(exact_laplacian);
    lap
}

/// `L_A` for an arbitrary square matrix, with `l_ij = −(|a_ij| + |a_ji|)/2`.
pub fn laplacian_of_general(a: &Matrix) -> Laplacian {
    Laplacian::from_weights(a.order(), |i, j| (a.get(i, j).norm() + a.get(j, i).norm()) / 2.0)
}

/// Exact Laplacian of an exact Hermitian matrix, if every entry is expressible.
pub fn exact_laplacian(a: &ExactMatrix) -> Option<ExactMatrix> {
    let n = a.order();
    let mut weights: Vec<Surd> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            weights.push(if i == j { Surd::zero() } else { a.get(i, j).modulus()? });
        }
    }
    let mut degrees = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = Surd::zero();
        for w in &weights[i * n..(i + 1) * n] {
            d = d.checked_add(w)?;
        }
        degrees.push(d);
    }
    Some(ExactMatrix::from_fn(n, |i, j| {
        if i == j {
            Exact::real(degrees[i].clone())
        } else {
            Exact::real(weights[i * n + j].neg())
        }
    }))
}

/// `φ(A) = L_A + A`. Diagonal input gives `L_A = 0` exactly, so `φ(I) = I`.
pub fn phi(a: &Matrix) -> Matrix {
    laplacian_of_general(a).matrix.add(a).expect("same order")
}

/// `φ(ρ) = L_ρ + ρ`.
pub fn phi_density(rho: &DensityMatrix) -> Matrix {
    laplacian_of_density(rho).matrix.add(rho.matrix()).expect("same order")
}

/// l1-norm of coherence, `Σ_{i≠j} |ρ_ij|`; equal to `Tr L_ρ`.
pub fn coherence_l1(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.order();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m.get(i, j).norm();
            }
        }
    }
    s
}

/// `λ_min(φ(A²) − φ(A)²)` for Hermitian `A`; non-negative exactly when the Kadison-type
/// inequality `φ(A)² ≤ φ(A²)` holds.
pub fn kadison_gap(a: &Matrix) -> Result<f64, NumericsError> {
    let a2 = a.mul(a)?;
    let pa = phi(a);
    let gap = phi(&a2).sub(&pa.mul(&pa)?)?;
    Ok(eig_sym(&gap.hermitian_part())?.min())
}
