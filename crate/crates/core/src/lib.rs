//! Graph-theoretic entanglement detection for bipartite density matrices.
//!
//! A density matrix `ρ` is mapped to a Laplacian `L_ρ` built from the moduli of its
//! off-diagonal entries, and through it to a simple weighted graph. The spectra of `ρ`,
//! `L_ρ`, their partial transposes and a few graph functionals then drive a family of
//! purity and PPT/NPT criteria, each of which is cross-checked against the brute-force
//! partial-transpose (Peres) test.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, report rendering and the
//! command-line front end live in the companion `lapent` crate.
//!
//! Module map:
//!
//! * [`numerics`]: dense complex matrices, Jacobi eigensolver, determinant, partial transpose.
//! * [`exact`]: exact rational/radical scalars used by the corpus and the file grammar.
//! * [`qstate`]: density-matrix validation, purity and linear entropy.
//! * [`laplacian`]: the Laplacian construction, the unital map `φ(A) = L_A + A`, l1 coherence.
//! * [`graph`]: weighted graphs read off a Laplacian, the edge functional `W[i,j]`, DOT export.
//! * [`criteria`]: every detection criterion plus the oracle and the full classification.
//! * [`corpus`]: exact constructors for the reference states.

#![no_std]

extern crate alloc;

pub mod corpus;
pub mod criteria;
pub mod exact;
pub mod fmt;
pub mod graph;
pub mod laplacian;
pub mod numerics;
pub mod qstate;

pub use corpus::{CorpusEntry, CorpusError, StateName};
pub use criteria::{
    classify, ClassificationReport, CriterionId, CriterionResult, DecisionTolerance, OracleResult,
    OracleVerdict, Verdict,
};
pub use exact::{Exact, ExactMatrix, Surd};
pub use graph::{GraphError, WConvention, WeightedGraph};
pub use laplacian::Laplacian;
pub use numerics::{BipartiteDims, Matrix, NumericsError, SpectralDecomposition};
pub use qstate::{DensityMatrix, ValidationError, Violation};
