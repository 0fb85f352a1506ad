//! Parameter sweeps over a reference-state family, written as CSV.
//!
//! Grid points are `from + k·(to − from)/(steps − 1)` computed in exact rationals, so the
//! endpoints and every intermediate point are hit exactly. Points where the family stops
//! being a density matrix are kept as rows with `valid = false` and empty value cells.

use std::io::Write;

use lapent_core::corpus::{self, CorpusError, StateName};
use lapent_core::criteria::{classify_with, CriteriaError, CriterionId, DecisionTolerance};
use lapent_core::fmt::format_decimal;
use lapent_core::graph::{graph_from_laplacian, WConvention, DEFAULT_EDGE_THRESHOLD};
use lapent_core::laplacian::laplacian_of_density;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

/// Scalar columns a sweep can record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    LambdaMinRho,
    HalfMaxW,
    LambdaMinPtb,
    LambdaMinLPlusPtb,
    DG,
    LambdaMaxL,
}

impl Column {
    pub const ALL: [Column; 6] = [
        Column::LambdaMinRho,
        Column::HalfMaxW,
        Column::LambdaMinPtb,
        Column::LambdaMinLPlusPtb,
        Column::DG,
        Column::LambdaMaxL,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Column::LambdaMinRho => "lambda_min_rho",
            Column::HalfMaxW => "half_max_w",
            Column::LambdaMinPtb => "lambda_min_ptb",
            Column::LambdaMinLPlusPtb => "lambda_min_l_plus_ptb",
            Column::DG => "d_g",
            Column::LambdaMaxL => "lambda_max_l",
        }
    }

    pub fn parse(s: &str) -> Option<Column> {
        Column::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub state: StateName,
    pub from: BigRational,
    pub to: BigRational,
    pub steps: usize,
    pub columns: Vec<Column>,
    pub tol: DecisionTolerance,
    pub convention: WConvention,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl SweepSpec {
    pub fn check(&self) -> Result<(), SweepError> {
        if corpus::entry(self.state).parameter.is_none() {
            return Err(SweepError::Spec(format!("state {} takes no parameter", self.state.as_str())));
        }
        if self.from >= self.to {
            return Err(SweepError::Spec("--from must be less than --to".into()));
        }
        if self.steps < 2 {
            return Err(SweepError::Spec("--steps must be at least 2".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<BigRational> {
        let span = &self.to - &self.from;
        let last = BigInt::from(self.steps - 1);
        (0..self.steps)
            .map(|k| &self.from + &span * BigRational::new(BigInt::from(k), last.clone()))
            .collect()
    }
}

pub fn header(spec: &SweepSpec) -> Vec<String> {
    let mut h = vec!["param".to_string(), "valid".to_string()];
    h.extend(spec.columns.iter().map(|c| c.as_str().to_string()));
    h.push("oracle".into());
    h.extend(CriterionId::ALL.iter().map(|id| id.as_str().to_string()));
    h
}

/// One CSV row for the grid point `x`.
pub fn row(spec: &SweepSpec, x: &BigRational) -> Result<Vec<String>, SweepError> {
    let param = format_decimal(x.to_f64().unwrap_or(f64::NAN));
    let rho = match corpus::build(spec.state, Some(x)) {
        Ok(rho) => rho,
        Err(CorpusError::Invalid(_)) => {
            let mut r = vec![param, "false".into()];
            r.resize(header(spec).len(), String::new());
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    let report = classify_with(&rho, spec.tol, spec.convention)?;
    let lap = laplacian_of_density(&rho);
    let graph = graph_from_laplacian(&lap, DEFAULT_EDGE_THRESHOLD);
    let mut r = vec![param, "true".into()];
    for c in &spec.columns {
        let v = match c {
            Column::LambdaMinRho => Some(rho.lambda_min()),
            Column::HalfMaxW => graph.max_w_with(spec.convention).ok().map(|w| 0.5 * w),
            Column::LambdaMinPtb => Some(report.oracle.lambda_min_ptb),
            Column::LambdaMinLPlusPtb => report
                .result(CriterionId::Thm3Sep2x2)
                .and_then(|r| r.scalar("lambda_min_l_plus_ptb")),
            Column::DG => Some(lap.trace()),
            Column::LambdaMaxL => lap.eigenvalues().ok().and_then(|s| s.last().copied()),
        };
        r.push(v.map(format_decimal).unwrap_or_default());
    }
    r.push(report.oracle.verdict.as_str().into());
    r.extend(report.results.iter().map(|res| res.verdict.as_str().to_string()));
    Ok(r)
}

pub fn run(spec: &SweepSpec, out: impl Write) -> Result<usize, SweepError> {
    spec.check()?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(spec))?;
    let grid = spec.grid();
    for x in &grid {
        w.write_record(row(spec, x)?)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(grid.len())
}
