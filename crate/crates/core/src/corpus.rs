//! Exact constructors for the reference states.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{parse_decimal, ratio, Exact, ExactMatrix, Surd};
use crate::fmt::format_decimal;
use crate::numerics::BipartiteDims;
use crate::qstate::{validate_exact, DensityMatrix, ValidationError, DEFAULT_VALIDATION_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateName {
    Psi,
    Rho1,
    RhoAb,
    Rho2,
    Rho3,
    Rho5,
    Rho6,
}

impl StateName {
    pub const ALL: [StateName; 7] = [
        StateName::Psi,
        StateName::Rho1,
        StateName::RhoAb,
        StateName::Rho2,
        StateName::Rho3,
        StateName::Rho5,
        StateName::Rho6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StateName::Psi => "psi",
            StateName::Rho1 => "rho1",
            StateName::RhoAb => "rho_ab",
            StateName::Rho2 => "rho2",
            StateName::Rho3 => "rho3",
            StateName::Rho5 => "rho5",
            StateName::Rho6 => "rho6",
        }
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StateName {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        StateName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| CorpusError::UnknownState(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorpusError {
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParameterOutOfDomain { name: &'static str, value: String, lo: String, hi: String },
    #[error("state {0} needs a parameter")]
    MissingParameter(StateName),
    #[error("state {0} takes no parameter")]
    UnexpectedParameter(StateName),
    #[error("parameter '{0}' is not a finite number")]
    BadParameter(String),
    #[error("built matrix is not a density matrix: {0}")]
    Invalid(ValidationError),
}

/// Closed interval of admissible parameter values.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterDomain {
    pub name: &'static str,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl ParameterDomain {
    pub fn contains(&self, v: &BigRational) -> bool {
        *v >= self.lo && *v <= self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: StateName,
    pub dims: BipartiteDims,
    pub parameter: Option<ParameterDomain>,
    pub provenance: &'static str,
}

pub fn entry(name: StateName) -> CorpusEntry {
    let dims = |d1, d2| BipartiteDims::new(d1, d2).expect("valid dims");
    let (d, parameter, provenance) = match name {
        StateName::Psi => (
            dims(2, 2),
            None,
            "two-qubit pure state with amplitudes 1/2, 1/2, 1/4, sqrt(7)/4; purity test, pure case",
        ),
        StateName::Rho1 => (dims(2, 4), None, "2x4 rank-7 state; purity test, mixed case"),
        StateName::RhoAb => (
            dims(2, 2),
            Some(ParameterDomain { name: "x", lo: BigRational::zero(), hi: ratio(283, 1000) }),
            "two-qubit family with coherence x between |01> and |10>; NPT for x > sqrt(3)/10",
        ),
        StateName::Rho2 => (
            dims(2, 4),
            None,
            "2x4 separable state invariant under partial transpose; spectral PPT criteria",
        ),
        StateName::Rho3 => (dims(2, 2), None, "two-qubit NPT state on a complete graph; graph bounds"),
        StateName::Rho5 => (dims(2, 2), None, "two-qubit separable state on a path graph; edge functional"),
        StateName::Rho6 => (
            dims(3, 3),
            Some(ParameterDomain { name: "a", lo: ratio(1, 100), hi: ratio(1, 1) }),
            "3x3 full-rank family, N = 400a+1; minimum eigenvalue against half the maximum edge functional",
        ),
    };
    CorpusEntry { name, dims: d, parameter, provenance }
}

/// Every reference state, in a fixed order.
pub fn list() -> Vec<CorpusEntry> {
    StateName::ALL.into_iter().map(entry).collect()
}

/// Exact matrix and dimensions of a reference state.
pub fn build_exact(
    name: StateName,
    param: Option<&BigRational>,
) -> Result<(ExactMatrix, BipartiteDims), CorpusError> {
    let e = entry(name);
    let value = match (&e.parameter, param) {
        (Some(domain), Some(v)) => {
            if !domain.contains(v) {
                return Err(CorpusError::ParameterOutOfDomain {
                    name: domain.name,
                    value: describe(v),
                    lo: describe(&domain.lo),
                    hi: describe(&domain.hi),
                });
            }
            Some(v.clone())
        }
        (Some(_), None) => return Err(CorpusError::MissingParameter(name)),
        (None, Some(_)) => return Err(CorpusError::UnexpectedParameter(name)),
        (None, None) => None,
    };
    let m = match name {
        StateName::Psi => psi(),
        StateName::Rho1 => rho1(),
        StateName::RhoAb => rho_ab(value.expect("checked")),
        StateName::Rho2 => rho2(),
        StateName::Rho3 => rho3(),
        StateName::Rho5 => rho5(),
        StateName::Rho6 => rho6(value.expect("checked")),
    };
    Ok((m, e.dims))
}

/// Validated reference state.
pub fn build(name: StateName, param: Option<&BigRational>) -> Result<DensityMatrix, CorpusError> {
    let (m, dims) = build_exact(name, param)?;
    validate_exact(&m, dims, DEFAULT_VALIDATION_TOLERANCE).map_err(CorpusError::Invalid)
}

/// [`build`] with a floating-point parameter, read through its shortest decimal form so
/// that `0.1` means exactly `1/10`.
pub fn build_f64(name: StateName, param: Option<f64>) -> Result<DensityMatrix, CorpusError> {
    let exact = param.map(rational_param).transpose()?;
    build(name, exact.as_ref())
}

/// Exact rational for a floating-point parameter, via its shortest round-trip decimal.
pub fn rational_param(v: f64) -> Result<BigRational, CorpusError> {
    if !v.is_finite() {
        return Err(CorpusError::BadParameter(format!("{v}")));
    }
    parse_decimal(&format!("{v:e}")).ok_or_else(|| CorpusError::BadParameter(format!("{v}")))
}

fn describe(v: &BigRational) -> String {
    format_decimal(v.to_f64().unwrap_or(f64::NAN))
}

fn from_ratios(n: usize, entries: &[(usize, usize, i64, i64)], diagonal: (i64, i64)) -> ExactMatrix {
    ExactMatrix::from_fn(n, |i, j| {
        if i == j {
            return Exact::from_ratio(diagonal.0, diagonal.1);
        }
        entries
            .iter()
            .find(|&&(a, b, _, _)| (a, b) == (i + 1, j + 1) || (b, a) == (i + 1, j + 1))
            .map(|&(_, _, p, q)| Exact::from_ratio(p, q))
            .unwrap_or_else(Exact::zero)
    })
}

fn psi() -> ExactMatrix {
    let amp = [
        Surd::from_ratio(1, 2),
        Surd::from_ratio(1, 2),
        Surd::from_ratio(1, 4),
        Surd::new(ratio(1, 4), 7),
    ];
    ExactMatrix::from_fn(4, |i, j| Exact::real(amp[i].mul(&amp[j])))
}

fn rho1() -> ExactMatrix {
    from_ratios(
        8,
        &[(1, 5, 1, 81), (1, 8, 1, 81), (2, 7, 1, 81), (3, 6, 1, 8), (4, 5, 1, 81), (4, 8, 1, 81)],
        (1, 8),
    )
}

fn rho2() -> ExactMatrix {
    from_ratios(8, &[(1, 5, 1, 81), (1, 8, 1, 81), (4, 5, 1, 81), (4, 8, 1, 81)], (1, 8))
}

fn rho_ab(x: BigRational) -> ExactMatrix {
    let diag = [ratio(1, 10), ratio(1, 5), ratio(2, 5), ratio(3, 10)];
    ExactMatrix::from_fn(4, |i, j| match (i, j) {
        _ if i == j => Exact::from_rational(diag[i].clone()),
        (1, 2) | (2, 1) => Exact::from_rational(x.clone()),
        _ => Exact::zero(),
    })
}

fn rho3() -> ExactMatrix {
    let tenths = [[4, 2, 1, 1], [2, 3, 2, 1], [1, 2, 2, 1], [1, 1, 1, 1]];
    ExactMatrix::from_fn(4, |i, j| Exact::from_ratio(tenths[i][j], 10))
}

fn rho5() -> ExactMatrix {
    from_ratios(4, &[(1, 2, 1, 20), (1, 4, 1, 20), (3, 4, 1, 20)], (1, 4))
}

/// `(1/N)·M(a)` with `N = 400a+1`, `x = 50a`, `y = (50a+1)/2`, `z = 1/100`.
fn rho6(a: BigRational) -> ExactMatrix {
    let n = ratio(400, 1) * &a + ratio(1, 1);
    let x = ratio(50, 1) * &a;
    let y = (ratio(50, 1) * &a + ratio(1, 1)) / ratio(2, 1);
    let z = ratio(1, 100);
    let diag = [&x, &x, &x, &x, &x, &x, &y, &x, &y];
    let z_pairs = [(1, 2), (2, 5), (3, 4), (4, 8), (5, 6), (6, 7), (7, 8)];
    let a_pairs = [(1, 9), (5, 9)];
    ExactMatrix::from_fn(9, |i, j| {
        let pair = (i.min(j) + 1, i.max(j) + 1);
        let v = if i == j {
            diag[i].clone()
        } else if z_pairs.contains(&pair) {
            z.clone()
        } else if a_pairs.contains(&pair) {
            a.clone()
        } else {
            BigRational::zero()
        };
        Exact::from_rational(v / &n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in StateName::ALL {
            assert_eq!(n.as_str().parse::<StateName>().unwrap(), n);
        }
        assert!(matches!("rho4".parse::<StateName>(), Err(CorpusError::UnknownState(_))));
    }

    #[test]
    fn listing() {
        let l = list();
        assert_eq!(l.len(), 7);
        let ab = l.iter().find(|e| e.name == StateName::RhoAb).unwrap();
        let d = ab.parameter.as_ref().unwrap();
        assert_eq!((d.lo_f64(), d.hi_f64()), (0.0, 0.283));
        let r6 = l.iter().find(|e| e.name == StateName::Rho6).unwrap();
        let d = r6.parameter.as_ref().unwrap();
        assert_eq!((d.lo_f64(), d.hi_f64()), (0.01, 1.0));
    }

    #[test]
    fn parameter_checks() {
        assert!(matches!(build_f64(StateName::Rho6, Some(2.0)), Err(CorpusError::ParameterOutOfDomain { .. })));
        assert!(matches!(build(StateName::RhoAb, None), Err(CorpusError::MissingParameter(_))));
        assert!(matches!(build_f64(StateName::Psi, Some(0.1)), Err(CorpusError::UnexpectedParameter(_))));
        assert!(matches!(build_f64(StateName::RhoAb, Some(f64::NAN)), Err(CorpusError::BadParameter(_))));
    }

    #[test]
    fn float_parameters_read_as_decimals() {
        assert_eq!(rational_param(0.1).unwrap(), ratio(1, 10));
        assert_eq!(rational_param(0.173).unwrap(), ratio(173, 1000));
        assert_eq!(rational_param(1.0).unwrap(), ratio(1, 1));
    }

    #[test]
    fn rho6_trace_is_one_at_lower_end() {
        let (m, _) = build_exact(StateName::Rho6, Some(&ratio(1, 100))).unwrap();
        // N = 5, x = 1/2
        assert_eq!(*m.get(0, 0), Exact::from_ratio(1, 10));
        let trace = (0..9).fold(BigRational::zero(), |s, i| s + m.get(i, i).as_rational().unwrap());
        assert_eq!(trace, ratio(1, 1));
    }

    #[test]
    fn rho_ab_at_zero_is_diagonal() {
        let (m, _) = build_exact(StateName::RhoAb, Some(&BigRational::zero())).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j).is_zero(), i != j);
            }
        }
    }

    #[test]
    fn psi_has_surd_entries() {
        let (m, _) = build_exact(StateName::Psi, None).unwrap();
        assert_eq!(m.get(0, 3).to_string(), "sqrt(7)/8");
        assert_eq!(m.get(3, 3).to_string(), "7/16");
    }
}
