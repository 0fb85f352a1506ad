//! Detection criteria, the partial-transpose oracle and the full classification.
//!
//! Every inequality is evaluated with a symmetric band of half-width `eps`: a non-strict
//! inequality `a ≥ b` holds when `a ≥ b − eps`, a strict one `a > b` only when `a > b + eps`.
//! A criterion only asserts what its logical strength allows; everything else comes back
//! `INCONCLUSIVE` with the scalars that were compared.

pub mod random;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::fmt;

use thiserror::Error;

use crate::graph::{graph_from_laplacian, WConvention, WeightedGraph, DEFAULT_EDGE_THRESHOLD};
use crate::laplacian::{laplacian_of_density, phi_density, Laplacian};
use crate::numerics::{
    determinant, eig_sym, partial_transpose, BipartiteDims, Matrix, NumericsError,
};
use crate::qstate::DensityMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CriterionId {
    Thm1Purity,
    Thm3Sep2x2,
    Cor4Nptes,
    Thm5Ppt,
    Thm6Ppt,
    Thm3aBounds,
    Thm3bNptesBound,
    Thm4aBound,
    Cor4aNptes,
    Cor6Ppt,
}

impl CriterionId {
    pub const ALL: [CriterionId; 10] = [
        CriterionId::Thm1Purity,
        CriterionId::Thm3Sep2x2,
        CriterionId::Cor4Nptes,
        CriterionId::Thm5Ppt,
        CriterionId::Thm6Ppt,
        CriterionId::Thm3aBounds,
        CriterionId::Thm3bNptesBound,
        CriterionId::Thm4aBound,
        CriterionId::Cor4aNptes,
        CriterionId::Cor6Ppt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::Thm1Purity => "THM1_PURITY",
            CriterionId::Thm3Sep2x2 => "THM3_SEP_2x2",
            CriterionId::Cor4Nptes => "COR4_NPTES",
            CriterionId::Thm5Ppt => "THM5_PPT",
            CriterionId::Thm6Ppt => "THM6_PPT",
            CriterionId::Thm3aBounds => "THM3A_BOUNDS",
            CriterionId::Thm3bNptesBound => "THM3B_NPTES_BOUND",
            CriterionId::Thm4aBound => "THM4A_BOUND",
            CriterionId::Cor4aNptes => "COR4A_NPTES",
            CriterionId::Cor6Ppt => "COR6_PPT",
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Separable,
    EntangledNpt,
    Ppt,
    Mixed,
    ConsistentWithPure,
    Inconclusive,
    PreconditionFailed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Separable => "SEPARABLE",
            Verdict::EntangledNpt => "ENTANGLED_NPT",
            Verdict::Ppt => "PPT",
            Verdict::Mixed => "MIXED",
            Verdict::ConsistentWithPure => "CONSISTENT_WITH_PURE",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::PreconditionFailed => "PRECONDITION_FAILED",
        }
    }

    /// Claims a positive partial transpose.
    pub fn asserts_ppt(self) -> bool {
        matches!(self, Verdict::Separable | Verdict::Ppt)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleVerdict {
    Ppt,
    Npt,
}

impl OracleVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleVerdict::Ppt => "PPT",
            OracleVerdict::Npt => "NPT",
        }
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of the brute-force Peres test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub verdict: OracleVerdict,
    pub lambda_min_ptb: f64,
}

/// Half-width of the indeterminate band around every threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecisionTolerance {
    eps: f64,
}

impl DecisionTolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    /// `None` unless `eps` is finite and positive.
    pub fn new(eps: f64) -> Option<Self> {
        (eps.is_finite() && eps > 0.0).then_some(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `lhs ≥ rhs`, satisfied inside the band.
    pub fn ge(&self, lhs: f64, rhs: f64) -> bool {
        lhs >= rhs - self.eps
    }

    /// `lhs > rhs`, which must clear the band.
    pub fn gt(&self, lhs: f64, rhs: f64) -> bool {
        lhs > rhs + self.eps
    }

    /// `lhs < rhs`, which must clear the band.
    pub fn lt(&self, lhs: f64, rhs: f64) -> bool {
        lhs < rhs - self.eps
    }
}

impl Default for DecisionTolerance {
    fn default() -> Self {
        Self { eps: Self::DEFAULT_EPS }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: CriterionId,
    pub verdict: Verdict,
    pub scalars: Vec<(&'static str, f64)>,
    pub caveat: Option<String>,
}

impl CriterionResult {
    fn new(id: CriterionId, verdict: Verdict, scalars: Vec<(&'static str, f64)>) -> Self {
        Self { id, verdict, scalars, caveat: None }
    }

    fn with_caveat(mut self, caveat: &str) -> Self {
        self.caveat = Some(caveat.to_string());
        self
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.scalars.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub state_id: String,
    pub dims: BipartiteDims,
    pub oracle: OracleResult,
    pub results: Vec<CriterionResult>,
    pub consistency_flags: Vec<CriterionId>,
}

impl ClassificationReport {
    pub fn result(&self, id: CriterionId) -> Option<&CriterionResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn verdict(&self, id: CriterionId) -> Option<Verdict> {
        self.result(id).map(|r| r.verdict)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriteriaError {
    #[error("criterion {id} needs a 2x2 system, got {dims}")]
    WrongDimensions { id: CriterionId, dims: BipartiteDims },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub const NOT_FULL_RANK: &str = "state is not full rank";
pub const DISCONNECTED: &str = "graph of the Laplacian is not connected";
pub const COR5_NOTE: &str = "inequality violated: the state may or may not be NPT";
pub const COR4A_DIRECTION: &str =
    "direction disputed: the inequality follows from a negative minimum eigenvalue, so it is necessary for NPT, not sufficient";
pub const COR4A_CONTRAPOSITIVE: &str =
    "inequality fails: by the contrapositive of its derivation the minimum eigenvalue of L + rho^TB is non-negative";
pub const THM3B_CONTRAPOSITIVE: &str =
    "inequality violated on a connected graph: the state is not NPT";
pub const THM3_NECESSARY_ONLY: &str =
    "outside 2x2 and 2x3 a non-negative minimum eigenvalue does not certify PPT";

/// Everything the criteria read off one state, computed on first use.
struct Analysis<'a> {
    rho: &'a DensityMatrix,
    conv: WConvention,
    lap: OnceCell<Laplacian>,
    rho_ptb: OnceCell<Vec<f64>>,
    lap_spectrum: OnceCell<Vec<f64>>,
    lap_ptb_spectrum: OnceCell<Vec<f64>>,
    mu: OnceCell<f64>,
    graph: OnceCell<WeightedGraph>,
}

impl<'a> Analysis<'a> {
    fn new(rho: &'a DensityMatrix, conv: WConvention) -> Self {
        Self {
            rho,
            conv,
            lap: OnceCell::new(),
            rho_ptb: OnceCell::new(),
            lap_spectrum: OnceCell::new(),
            lap_ptb_spectrum: OnceCell::new(),
            mu: OnceCell::new(),
            graph: OnceCell::new(),
        }
    }

    fn dims(&self) -> BipartiteDims {
        self.rho.dims()
    }

    fn lap(&self) -> &Laplacian {
        self.lap.get_or_init(|| laplacian_of_density(self.rho))
    }

    fn ptb(&self, m: &Matrix) -> Result<Matrix, NumericsError> {
        partial_transpose(m, self.dims())
    }

    fn cached(
        cell: &OnceCell<Vec<f64>>,
        f: impl FnOnce() -> Result<Vec<f64>, NumericsError>,
    ) -> Result<&Vec<f64>, NumericsError> {
        if let Some(v) = cell.get() {
            return Ok(v);
        }
        let v = f()?;
        Ok(cell.get_or_init(|| v))
    }

    /// Spectrum of `ρ^{T_B}`.
    fn rho_ptb(&self) -> Result<&Vec<f64>, NumericsError> {
        Self::cached(&self.rho_ptb, || Ok(eig_sym(&self.ptb(self.rho.matrix())?)?.eigenvalues))
    }

    fn lap_spectrum(&self) -> Result<&Vec<f64>, NumericsError> {
        Self::cached(&self.lap_spectrum, || Ok(eig_sym(self.lap().matrix())?.eigenvalues))
    }

    /// Spectrum of `L_ρ^{T_B}`.
    fn lap_ptb_spectrum(&self) -> Result<&Vec<f64>, NumericsError> {
        Self::cached(&self.lap_ptb_spectrum, || {
            Ok(eig_sym(&self.ptb(self.lap().matrix())?)?.eigenvalues)
        })
    }

    /// `μ = λ_min(L_ρ + ρ^{T_B})`.
    fn mu(&self) -> Result<f64, NumericsError> {
        if let Some(&m) = self.mu.get() {
            return Ok(m);
        }
        let sum = self.lap().matrix().add(&self.ptb(self.rho.matrix())?)?;
        let m = eig_sym(&sum)?.min();
        Ok(*self.mu.get_or_init(|| m))
    }

    fn graph(&self) -> &WeightedGraph {
        self.graph.get_or_init(|| graph_from_laplacian(self.lap(), DEFAULT_EDGE_THRESHOLD))
    }

    fn connected(&self) -> bool {
        let g = self.graph();
        g.vertex_count() > 1 && g.is_connected()
    }

    fn d_g(&self) -> f64 {
        self.lap().trace()
    }

    fn half_max_w(&self) -> f64 {
        self.graph().max_w_with(self.conv).map(|w| w / 2.0).unwrap_or(0.0)
    }
}

fn first(v: &[f64]) -> f64 {
    v.first().copied().unwrap_or(0.0)
}

fn last(v: &[f64]) -> f64 {
    v.last().copied().unwrap_or(0.0)
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Peres test: NPT iff `λ_min(ρ^{T_B}) < −eps`.
pub fn ppt_oracle(rho: &DensityMatrix, tol: DecisionTolerance) -> Result<OracleResult, CriteriaError> {
    oracle(&Analysis::new(rho, WConvention::default()), tol)
}

fn oracle(a: &Analysis, tol: DecisionTolerance) -> Result<OracleResult, CriteriaError> {
    let lambda_min_ptb = first(a.rho_ptb()?);
    let verdict = if tol.lt(lambda_min_ptb, 0.0) { OracleVerdict::Npt } else { OracleVerdict::Ppt };
    Ok(OracleResult { verdict, lambda_min_ptb })
}

/// Sign of `D = det(φ(ρ) − I)` and parity of its negative eigenvalues.
///
/// `D > 0` means mixed; `D < 0` with an odd count is consistent with a pure state. An even
/// count only decides when no eigenvalue sits inside the band, since a zero eigenvalue
/// leaves the sign of `D` undetermined.
pub fn purity_test(rho: &DensityMatrix, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    let n = rho.order();
    let op = phi_density(rho).sub(&Matrix::identity(n))?;
    let det = determinant(&op).re;
    let spectrum = eig_sym(&op)?.eigenvalues;
    let negative = spectrum.iter().filter(|&&l| l < -tol.eps()).count();
    let near_zero = spectrum.iter().filter(|&&l| l.abs() <= tol.eps()).count();
    let verdict = if tol.gt(det, 0.0) {
        Verdict::Mixed
    } else if tol.lt(det, 0.0) && negative % 2 == 1 {
        Verdict::ConsistentWithPure
    } else if near_zero == 0 && negative % 2 == 0 {
        Verdict::Mixed
    } else {
        Verdict::Inconclusive
    };
    Ok(CriterionResult::new(
        CriterionId::Thm1Purity,
        verdict,
        alloc::vec![("det", det), ("negative_eigenvalues", negative as f64)],
    ))
}

/// `μ = λ_min(L_ρ + ρ^{T_B}) ≥ 0`: an equivalence with separability in 2⊗2 and 2⊗3, only a
/// necessary condition for PPT elsewhere.
pub fn thm3_separability(
    rho: &DensityMatrix,
    tol: DecisionTolerance,
) -> Result<CriterionResult, CriteriaError> {
    thm3(&Analysis::new(rho, WConvention::default()), tol)
}

fn thm3(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    let mu = a.mu()?;
    let scalars = alloc::vec![("lambda_min_l_plus_ptb", mu)];
    if a.dims().is_low_dimensional() {
        let verdict = if tol.ge(mu, 0.0) { Verdict::Separable } else { Verdict::EntangledNpt };
        return Ok(CriterionResult::new(CriterionId::Thm3Sep2x2, verdict, scalars));
    }
    Ok(if tol.lt(mu, 0.0) {
        CriterionResult::new(CriterionId::Thm3Sep2x2, Verdict::EntangledNpt, scalars)
    } else {
        CriterionResult::new(CriterionId::Thm3Sep2x2, Verdict::Inconclusive, scalars)
            .with_caveat(THM3_NECESSARY_ONLY)
    })
}

/// `μ < 0 ⇒ NPT`, in any dimension.
pub fn cor4_nptes(rho: &DensityMatrix, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    cor4(&Analysis::new(rho, WConvention::default()), tol)
}

fn cor4(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    let mu = a.mu()?;
    let verdict = if tol.lt(mu, 0.0) { Verdict::EntangledNpt } else { Verdict::Inconclusive };
    Ok(CriterionResult::new(CriterionId::Cor4Nptes, verdict, alloc::vec![("lambda_min_l_plus_ptb", mu)]))
}

fn rank_precondition(a: &Analysis, id: CriterionId) -> Option<CriterionResult> {
    (!a.rho.is_full_rank()).then(|| {
        CriterionResult::new(id, Verdict::PreconditionFailed, alloc::vec![("rank", a.rho.rank() as f64)])
            .with_caveat(NOT_FULL_RANK)
    })
}

fn connectivity_precondition(a: &Analysis, id: CriterionId) -> Option<CriterionResult> {
    (!a.connected()).then(|| {
        CriterionResult::new(id, Verdict::PreconditionFailed, alloc::vec![("connected", 0.0)])
            .with_caveat(DISCONNECTED)
    })
}

/// `λ_min(ρ) ≥ λ_max(L^{T_B}) − λ_min(L^{T_B}) ⇒ PPT`, for full-rank `ρ`.
pub fn thm5_ppt(rho: &DensityMatrix, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    thm5(&Analysis::new(rho, WConvention::default()), tol)
}

fn thm5(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    if let Some(r) = rank_precondition(a, CriterionId::Thm5Ppt) {
        return Ok(r);
    }
    let lambda_min = a.rho.lambda_min();
    let s = a.lap_ptb_spectrum()?;
    let spread = last(s) - first(s);
    let scalars = alloc::vec![("lambda_min_rho", lambda_min), ("spread_l_ptb", spread)];
    Ok(if tol.ge(lambda_min, spread) {
        CriterionResult::new(CriterionId::Thm5Ppt, Verdict::Ppt, scalars)
    } else {
        CriterionResult::new(CriterionId::Thm5Ppt, Verdict::Inconclusive, scalars).with_caveat(COR5_NOTE)
    })
}

/// `λ_min(ρ) ≥ λ_max(L_ρ) ⇒ PPT`, for full-rank `ρ`; needs no partial transpose.
pub fn thm6_ppt(rho: &DensityMatrix, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    thm6(&Analysis::new(rho, WConvention::default()), tol)
}

fn thm6(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    if let Some(r) = rank_precondition(a, CriterionId::Thm6Ppt) {
        return Ok(r);
    }
    let lambda_min = a.rho.lambda_min();
    let lambda_max_l = last(a.lap_spectrum()?);
    let verdict = if tol.ge(lambda_min, lambda_max_l) { Verdict::Ppt } else { Verdict::Inconclusive };
    Ok(CriterionResult::new(
        CriterionId::Thm6Ppt,
        verdict,
        alloc::vec![("lambda_min_rho", lambda_min), ("lambda_max_l", lambda_max_l)],
    ))
}

/// 2⊗2 only: separable iff `0 ≤ μ ≤ 1 + d_G`.
pub fn thm3a_bounds(rho: &DensityMatrix, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    thm3a(&Analysis::new(rho, WConvention::default()), tol)
}

fn thm3a(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    let dims = a.dims();
    if (dims.d1(), dims.d2()) != (2, 2) {
        return Err(CriteriaError::WrongDimensions { id: CriterionId::Thm3aBounds, dims });
    }
    let mu = a.mu()?;
    let d_g = a.d_g();
    let inside = tol.ge(mu, 0.0) && tol.ge(1.0 + d_g, mu);
    let verdict = if inside { Verdict::Separable } else { Verdict::EntangledNpt };
    Ok(CriterionResult::new(
        CriterionId::Thm3aBounds,
        verdict,
        alloc::vec![("lambda_min_l_plus_ptb", mu), ("d_g", d_g)],
    ))
}

/// `μ ≤ ½ max W` on a connected graph, necessary for NPT. Reported, never decisive.
pub fn thm3b_check(
    rho: &DensityMatrix,
    tol: DecisionTolerance,
    conv: WConvention,
) -> Result<CriterionResult, CriteriaError> {
    thm3b(&Analysis::new(rho, conv), tol)
}

fn thm3b(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    if let Some(r) = connectivity_precondition(a, CriterionId::Thm3bNptesBound) {
        return Ok(r);
    }
    let mu = a.mu()?;
    let half = a.half_max_w();
    let r = CriterionResult::new(
        CriterionId::Thm3bNptesBound,
        Verdict::Inconclusive,
        alloc::vec![("lambda_min_l_plus_ptb", mu), ("half_max_w", half)],
    );
    Ok(if tol.gt(mu, half) { r.with_caveat(THM3B_CONTRAPOSITIVE) } else { r })
}

/// `μ ≤ 1 + d_G`, necessary for PPT; a violation certifies NPT.
pub fn thm4a_check(rho: &DensityMatrix, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    thm4a(&Analysis::new(rho, WConvention::default()), tol)
}

fn thm4a(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    let mu = a.mu()?;
    let bound = 1.0 + a.d_g();
    let verdict = if tol.gt(mu, bound) { Verdict::EntangledNpt } else { Verdict::Inconclusive };
    Ok(CriterionResult::new(
        CriterionId::Thm4aBound,
        verdict,
        alloc::vec![("one_plus_d_g", bound), ("lambda_min_l_plus_ptb", mu)],
    ))
}

/// `1 + d_G < (d1·d2 − 1)(½ max W + λ_max(ρ^{T_B}))`, stated as implying NPT.
///
/// The stated verdict is emitted with a caveat about its direction; when the inequality
/// fails the derivation-consistent reading is attached instead.
pub fn cor4a_nptes(
    rho: &DensityMatrix,
    tol: DecisionTolerance,
    conv: WConvention,
) -> Result<CriterionResult, CriteriaError> {
    cor4a(&Analysis::new(rho, conv), tol)
}

fn cor4a(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    if let Some(r) = connectivity_precondition(a, CriterionId::Cor4aNptes) {
        return Ok(r);
    }
    let lhs = 1.0 + a.d_g();
    let half = a.half_max_w();
    let lambda_max_ptb = last(a.rho_ptb()?);
    let rhs = (a.rho.order() as f64 - 1.0) * (half + lambda_max_ptb);
    let holds = tol.lt(lhs, rhs);
    let scalars = alloc::vec![
        ("lhs", lhs),
        ("rhs", rhs),
        ("half_max_w", half),
        ("lambda_max_rho_ptb", lambda_max_ptb),
        ("inequality_holds", flag(holds)),
    ];
    Ok(if holds {
        CriterionResult::new(CriterionId::Cor4aNptes, Verdict::EntangledNpt, scalars)
            .with_caveat(COR4A_DIRECTION)
    } else {
        CriterionResult::new(CriterionId::Cor4aNptes, Verdict::Inconclusive, scalars)
            .with_caveat(COR4A_CONTRAPOSITIVE)
    })
}

/// `λ_min(ρ) > ½ max W ⇒ PPT` for full-rank `ρ` on a connected graph; upgraded to
/// `SEPARABLE` in 2⊗2 and 2⊗3.
pub fn cor6_ppt(
    rho: &DensityMatrix,
    tol: DecisionTolerance,
    conv: WConvention,
) -> Result<CriterionResult, CriteriaError> {
    cor6(&Analysis::new(rho, conv), tol)
}

fn cor6(a: &Analysis, tol: DecisionTolerance) -> Result<CriterionResult, CriteriaError> {
    if let Some(r) = rank_precondition(a, CriterionId::Cor6Ppt) {
        return Ok(r);
    }
    if let Some(r) = connectivity_precondition(a, CriterionId::Cor6Ppt) {
        return Ok(r);
    }
    let lambda_min = a.rho.lambda_min();
    let half = a.half_max_w();
    let verdict = if !tol.gt(lambda_min, half) {
        Verdict::Inconclusive
    } else if a.dims().is_low_dimensional() {
        Verdict::Separable
    } else {
        Verdict::Ppt
    };
    Ok(CriterionResult::new(
        CriterionId::Cor6Ppt,
        verdict,
        alloc::vec![("lambda_min_rho", lambda_min), ("half_max_w", half)],
    ))
}

/// Runs the oracle and every criterion, in [`CriterionId`] order.
pub fn classify(rho: &DensityMatrix, tol: DecisionTolerance) -> Result<ClassificationReport, CriteriaError> {
    classify_with(rho, tol, WConvention::default())
}

pub fn classify_with(
    rho: &DensityMatrix,
    tol: DecisionTolerance,
    conv: WConvention,
) -> Result<ClassificationReport, CriteriaError> {
    let a = Analysis::new(rho, conv);
    let oracle = oracle(&a, tol)?;
    let thm3a_result = match thm3a(&a, tol) {
        Err(CriteriaError::WrongDimensions { .. }) => {
            CriterionResult::new(CriterionId::Thm3aBounds, Verdict::PreconditionFailed, Vec::new())
                .with_caveat("defined for 2x2 systems only")
        }
        other => other?,
    };
    let results = alloc::vec![
        purity_test(rho, tol)?,
        thm3(&a, tol)?,
        cor4(&a, tol)?,
        thm5(&a, tol)?,
        thm6(&a, tol)?,
        thm3a_result,
        thm3b(&a, tol)?,
        thm4a(&a, tol)?,
        cor4a(&a, tol)?,
        cor6(&a, tol)?,
    ];
    let pure = (rho.purity() - 1.0).abs() <= tol.eps();
    let consistency_flags = results
        .iter()
        .filter(|r| contradicts(r, oracle.verdict, pure))
        .map(|r| r.id)
        .collect();
    Ok(ClassificationReport {
        state_id: String::new(),
        dims: rho.dims(),
        oracle,
        results,
        consistency_flags,
    })
}

fn contradicts(r: &CriterionResult, oracle: OracleVerdict, pure: bool) -> bool {
    match r.verdict {
        Verdict::Separable | Verdict::Ppt => oracle == OracleVerdict::Npt,
        Verdict::EntangledNpt => oracle == OracleVerdict::Ppt,
        Verdict::Mixed => pure,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn dims22() -> BipartiteDims {
        BipartiteDims::new(2, 2).unwrap()
    }

    fn state(rows: &[&[f64]]) -> DensityMatrix {
        DensityMatrix::new(&Matrix::from_real_rows(rows).unwrap(), dims22()).unwrap()
    }

    fn maximally_mixed() -> DensityMatrix {
        DensityMatrix::new(&Matrix::identity(4).scale(Complex64::new(0.25, 0.0)), dims22()).unwrap()
    }

    fn bell() -> DensityMatrix {
        state(&[&[0.5, 0.0, 0.0, 0.5], &[0.0; 4], &[0.0; 4], &[0.5, 0.0, 0.0, 0.5]])
    }

    #[test]
    fn band_semantics() {
        let t = DecisionTolerance::default();
        assert!(t.ge(1.0, 1.0 + 5e-10));
        assert!(!t.gt(1.0 + 5e-10, 1.0));
        assert!(!t.lt(-5e-10, 0.0));
        assert!(DecisionTolerance::new(0.0).is_none());
        assert!(DecisionTolerance::new(f64::NAN).is_none());
    }

    #[test]
    fn oracle_on_bell_and_mixed() {
        let t = DecisionTolerance::default();
        let o = ppt_oracle(&bell(), t).unwrap();
        assert_eq!(o.verdict, OracleVerdict::Npt);
        assert!((o.lambda_min_ptb + 0.5).abs() < 1e-12);
        assert_eq!(ppt_oracle(&maximally_mixed(), t).unwrap().verdict, OracleVerdict::Ppt);
    }

    #[test]
    fn maximally_mixed_qubit_is_mixed() {
        let m = Matrix::identity(4).scale(Complex64::new(0.25, 0.0));
        let r = purity_test(&DensityMatrix::new(&m, dims22()).unwrap(), DecisionTolerance::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Mixed);
        assert!((r.scalar("det").unwrap() - 0.75f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn diagonal_full_rank_passes_thm6() {
        let r = thm6_ppt(&maximally_mixed(), DecisionTolerance::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Ppt);
        assert_eq!(r.scalar("lambda_max_l"), Some(0.0));
    }

    #[test]
    fn rank_deficient_fails_preconditions() {
        let t = DecisionTolerance::default();
        for r in [thm5_ppt(&bell(), t).unwrap(), thm6_ppt(&bell(), t).unwrap()] {
            assert_eq!(r.verdict, Verdict::PreconditionFailed);
        }
    }

    #[test]
    fn thm4a_on_maximally_mixed() {
        let r = thm4a_check(&maximally_mixed(), DecisionTolerance::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.scalar("one_plus_d_g"), Some(1.0));
        assert!((r.scalar("lambda_min_l_plus_ptb").unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn diagonal_state_graph_is_disconnected() {
        let t = DecisionTolerance::default();
        let r = cor6_ppt(&maximally_mixed(), t, WConvention::default()).unwrap();
        assert_eq!(r.verdict, Verdict::PreconditionFailed);
        assert_eq!(r.caveat.as_deref(), Some(DISCONNECTED));
    }

    #[test]
    fn thm3a_rejects_larger_systems() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let rho = DensityMatrix::new(&Matrix::identity(6).scale(Complex64::new(1.0 / 6.0, 0.0)), dims).unwrap();
        assert!(matches!(
            thm3a_bounds(&rho, DecisionTolerance::default()),
            Err(CriteriaError::WrongDimensions { .. })
        ));
        let report = classify(&rho, DecisionTolerance::default()).unwrap();
        assert_eq!(report.verdict(CriterionId::Thm3aBounds), Some(Verdict::PreconditionFailed));
    }

    #[test]
    fn classify_orders_results_by_id() {
        let report = classify(&bell(), DecisionTolerance::default()).unwrap();
        let ids: Vec<_> = report.results.iter().map(|r| r.id).collect();
        assert_eq!(ids, CriterionId::ALL.to_vec());
        assert_eq!(report.oracle.verdict, OracleVerdict::Npt);
    }

    #[test]
    fn names() {
        assert_eq!(CriterionId::Thm3Sep2x2.to_string(), "THM3_SEP_2x2");
        assert_eq!(Verdict::EntangledNpt.to_string(), "ENTANGLED_NPT");
        assert_eq!(OracleVerdict::Npt.to_string(), "NPT");
    }
}
