//! Density-matrix validation and purity functionals.

use alloc::vec::Vec;
use core::fmt;

use crate::exact::ExactMatrix;
use crate::fmt::format_decimal;
use crate::numerics::{eig_sym, BipartiteDims, Matrix, NumericsError, SpectralDecomposition};

/// Default tolerance for the Hermitian, trace and PSD checks.
pub const DEFAULT_VALIDATION_TOLERANCE: f64 = 1e-9;
/// Eigenvalues above this count toward the rank.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// A violated density-operator axiom together with the offending magnitude.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NotHermitian { asymmetry: f64 },
    TraceNotOne { trace: f64 },
    NotPsd { lambda_min: f64 },
    DimensionMismatch { expected: usize, found: usize },
    NoConvergence { sweeps: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { asymmetry } => {
                write!(f, "NotHermitian ({})", format_decimal(*asymmetry))
            }
            Violation::TraceNotOne { trace } => write!(f, "TraceNotOne ({})", format_decimal(*trace)),
            Violation::NotPsd { lambda_min } => write!(f, "NotPSD ({})", format_decimal(*lambda_min)),
            Violation::DimensionMismatch { expected, found } => {
                write!(f, "DimensionMismatch (expected {expected}, found {found})")
            }
            Violation::NoConvergence { sweeps } => write!(f, "NoConvergence ({sweeps} sweeps)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for ValidationError {}

impl From<Violation> for ValidationError {
    fn from(v: Violation) -> Self {
        Self { violations: alloc::vec![v] }
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix with bipartite dimensions.
///
/// The spectrum is computed once during validation and cached.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix,
    dims: BipartiteDims,
    tolerance: f64,
    spectrum: SpectralDecomposition,
    exact: Option<ExactMatrix>,
}

/// Scale factor in front of `1 − Tr ρ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EntropyNormalization {
    /// `n/(n−1)` with `n` the matrix order; reaches 1 exactly at `I/n`.
    #[default]
    MatrixOrder,
    /// `n²/(n²−1)`, reading `d` in `d²/(d²−1)` as the matrix order itself.
    SquaredOrder,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PurityReport {
    pub purity: f64,
    pub linear_entropy: f64,
    pub rank: usize,
}

/// Checks the density-operator axioms.
///
/// A matrix whose asymmetry is within `tol` is replaced by its Hermitian part, so the result
/// is exactly Hermitian. All failing axioms are reported together.
pub fn validate(raw: &Matrix, dims: BipartiteDims, tol: f64) -> Result<DensityMatrix, ValidationError> {
    if let Err(NumericsError::DimensionMismatch { expected, found }) = dims.check_order(raw.order()) {
        return Err(Violation::DimensionMismatch { expected, found }.into());
    }
    let mut violations = Vec::new();
    let asymmetry = raw.hermitian_defect();
    if asymmetry > tol {
        violations.push(Violation::NotHermitian { asymmetry });
    }
    let matrix = raw.hermitian_part();
    let trace = matrix.trace().re;
    if (trace - 1.0).abs() > tol {
        violations.push(Violation::TraceNotOne { trace });
    }
    let spectrum = if asymmetry > tol {
        None
    } else {
        match eig_sym(&matrix) {
            Ok(s) => Some(s),
            Err(NumericsError::NoConvergence { sweeps }) => {
                violations.push(Violation::NoConvergence { sweeps });
                None
            }
            Err(_) => None,
        }
    };
    if let Some(s) = &spectrum {
        if s.min() < -tol {
            violations.push(Violation::NotPsd { lambda_min: s.min() });
        }
    }
    match spectrum {
        Some(spectrum) if violations.is_empty() => {
            Ok(DensityMatrix { matrix, dims, tolerance: tol, spectrum, exact: None })
        }
        _ => Err(ValidationError { violations }),
    }
}

/// [`validate`] on the floating-point image of an exact matrix. The exact entries are kept
/// when the matrix is exactly Hermitian.
pub fn validate_exact(
    raw: &ExactMatrix,
    dims: BipartiteDims,
    tol: f64,
) -> Result<DensityMatrix, ValidationError> {
    let mut rho = validate(&raw.to_matrix(), dims, tol)?;
    if raw.is_hermitian() {
        rho.exact = Some(raw.clone());
    }
    Ok(rho)
}

impl DensityMatrix {
    /// [`validate`] at the default tolerance.
    pub fn new(raw: &Matrix, dims: BipartiteDims) -> Result<Self, ValidationError> {
        validate(raw, dims, DEFAULT_VALIDATION_TOLERANCE)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn lambda_min(&self) -> f64 {
        self.spectrum.min()
    }

    pub fn exact(&self) -> Option<&ExactMatrix> {
        self.exact.as_ref()
    }

    /// Number of eigenvalues above [`RANK_TOLERANCE`].
    pub fn rank(&self) -> usize {
        self.spectrum.eigenvalues.iter().filter(|&&l| l > RANK_TOLERANCE).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.order()
    }

    /// `Tr ρ² = Σ |ρ_ij|²`.
    pub fn purity(&self) -> f64 {
        self.matrix.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn linear_entropy(&self, normalization: EntropyNormalization) -> f64 {
        let n = self.order() as f64;
        let factor = match normalization {
            EntropyNormalization::MatrixOrder => n / (n - 1.0),
            EntropyNormalization::SquaredOrder => n * n / (n * n - 1.0),
        };
        factor * (1.0 - self.purity())
    }

    pub fn purity_report(&self) -> PurityReport {
        PurityReport {
            purity: self.purity(),
            linear_entropy: self.linear_entropy(EntropyNormalization::MatrixOrder),
            rank: self.rank(),
        }
    }
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    rho.linear_entropy(EntropyNormalization::MatrixOrder)
}
