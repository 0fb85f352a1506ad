//! Simple weighted graphs read off a Laplacian, and the edge functional `W[i,j]`.
//!
//! Vertices are 0-based in the API and 1-based in DOT output.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::fmt::{format_decimal, format_rational};
use crate::laplacian::Laplacian;
use crate::numerics::Matrix;

/// Off-diagonal Laplacian entries at or below this modulus are not edges.
pub const DEFAULT_EDGE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("vertices {i} and {j} are not adjacent")]
    NotAnEdge { i: usize, j: usize },
    #[error("graph has no edges")]
    NoEdges,
}

/// Which vertices `k` the two one-sided sums of `W[i,j]` range over.
///
/// With `ExcludeEndpoints`, `k ∉ {i, j}`. With `SetDifference`, `k` ranges over every vertex,
/// so `j` itself counts as a neighbour of `i` that is not adjacent to `j` (no loops), which
/// adds `2·w_ij` and yields Rojo's bound `λ_max(L) ≤ ½ max W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WConvention {
    #[default]
    ExcludeEndpoints,
    SetDifference,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub exact: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

/// Edge `(i, j)` iff `|l_ij| > threshold`, with weight `−l_ij`.
pub fn graph_from_laplacian(lap: &Laplacian, threshold: f64) -> WeightedGraph {
    let n = lap.order();
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j && lap.get(i, j).abs() > threshold {
                weights[i * n + j] = -lap.get(i, j);
            }
        }
    }
    let exact = lap.exact().and_then(|e| e.rational_entries()).map(|entries| {
        let mut w = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j && weights[i * n + j] != 0.0 {
                    w[i * n + j] = -entries[i * n + j].clone();
                }
            }
        }
        w
    });
    WeightedGraph { n, weights, exact }
}

impl WeightedGraph {
    /// Graph with the given symmetric, non-negative dense weights (row-major, zero diagonal).
    pub fn from_dense(n: usize, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), n * n, "weight matrix must be n×n");
        Self { n, weights, exact: None }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut weights = vec![0.0; n * n];
        for &(i, j, w) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, order: n });
                }
            }
            weights[i * n + j] = w;
            weights[j * n + i] = w;
        }
        Ok(Self { n, weights, exact: None })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.weight(i, j) > 0.0
    }

    /// Edges with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adjacent(i, j) {
                    out.push(Edge {
                        i,
                        j,
                        weight: self.weight(i, j),
                        exact: self.exact.as_ref().map(|e| e[i * self.n + j].clone()),
                    });
                }
            }
        }
        out
    }

    pub fn has_exact_weights(&self) -> bool {
        self.exact.is_some()
    }

    /// Breadth-first reachability from vertex 0.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = alloc::collections::VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for u in 0..self.n {
                if !seen[u] && self.adjacent(v, u) {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `w_i = Σ_{k∼i} w_ki`.
    pub fn vertex_weight(&self, i: usize) -> Result<f64, GraphError> {
        self.check_vertex(i)?;
        Ok((0..self.n).filter(|&k| k != i).map(|k| self.weight(i, k)).sum())
    }

    /// `d_G = Σ_i w_i`.
    pub fn total_degree(&self) -> f64 {
        (0..self.n).map(|i| self.vertex_weight(i).expect("in range")).sum()
    }

    /// `W[i,j]` under the default convention.
    pub fn edge_w(&self, i: usize, j: usize) -> Result<f64, GraphError> {
        self.edge_w_with(i, j, WConvention::default())
    }

    /// `W[i,j] = w_i + w_j + Σ_{k∼i,k≁j} w_ik + Σ_{k∼j,k≁i} w_jk + Σ_{k∼i,k∼j} |w_ik − w_jk|`.
    pub fn edge_w_with(&self, i: usize, j: usize, conv: WConvention) -> Result<f64, GraphError> {
        self.check_edge(i, j)?;
        let mut w = self.vertex_weight(i)? + self.vertex_weight(j)?;
        for k in (0..self.n).filter(|&k| k != i && k != j) {
            let (ik, jk) = (self.adjacent(i, k), self.adjacent(j, k));
            match (ik, jk) {
                (true, false) => w += self.weight(i, k),
                (false, true) => w += self.weight(j, k),
                (true, true) => w += (self.weight(i, k) - self.weight(j, k)).abs(),
                (false, false) => {}
            }
        }
        if conv == WConvention::SetDifference {
            w += 2.0 * self.weight(i, j);
        }
        Ok(w)
    }

    /// Exact `W[i,j]` when the weights are exact rationals, else `None`.
    pub fn edge_w_exact(
        &self,
        i: usize,
        j: usize,
        conv: WConvention,
    ) -> Result<Option<BigRational>, GraphError> {
        self.check_edge(i, j)?;
        let Some(e) = &self.exact else { return Ok(None) };
        let n = self.n;
        let at = |a: usize, b: usize| &e[a * n + b];
        let degree = |v: usize| -> BigRational {
            (0..n).filter(|&k| k != v).fold(BigRational::zero(), |s, k| s + at(v, k))
        };
        let mut w = degree(i) + degree(j);
        for k in (0..n).filter(|&k| k != i && k != j) {
            match (self.adjacent(i, k), self.adjacent(j, k)) {
                (true, false) => w += at(i, k),
                (false, true) => w += at(j, k),
                (true, true) => w += (at(i, k) - at(j, k)).abs(),
                (false, false) => {}
            }
        }
        if conv == WConvention::SetDifference {
            w += at(i, j) * BigRational::from_integer(2.into());
        }
        Ok(Some(w))
    }

    pub fn max_w(&self) -> Result<f64, GraphError> {
        self.max_w_with(WConvention::default())
    }

    pub fn max_w_with(&self, conv: WConvention) -> Result<f64, GraphError> {
        self.edges()
            .iter()
            .map(|e| self.edge_w_with(e.i, e.j, conv).expect("edge exists"))
            .reduce(f64::max)
            .ok_or(GraphError::NoEdges)
    }

    /// The Laplacian with these edge weights.
    pub fn to_laplacian_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| {
            if i == j {
                Complex64::new(self.vertex_weight(i).expect("in range"), 0.0)
            } else {
                Complex64::new(-self.weight(i, j), 0.0)
            }
        })
    }

    /// Deterministic Graphviz rendering: vertices `1..n`, one line per edge.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 1..=self.n {
            let _ = writeln!(out, "  {v};");
        }
        for e in self.edges() {
            let label = match &e.exact {
                Some(r) => format_rational(r),
                None => format_decimal(e.weight),
            };
            let _ = writeln!(out, "  {} -- {} [label=\"{}\"];", e.i + 1, e.j + 1, label);
        }
        out.push_str("}\n");
        out
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, order: self.n });
        }
        Ok(())
    }

    fn check_edge(&self, i: usize, j: usize) -> Result<(), GraphError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if !self.adjacent(i, j) {
            return Err(GraphError::NotAnEdge { i, j });
        }
        Ok(())
    }
}

pub fn is_connected(g: &WeightedGraph) -> bool {
    g.is_connected()
}

pub fn vertex_weight(g: &WeightedGraph, i: usize) -> Result<f64, GraphError> {
    g.vertex_weight(i)
}

pub fn edge_w(g: &WeightedGraph, i: usize, j: usize) -> Result<f64, GraphError> {
    g.edge_w(i, j)
}

pub fn max_w(g: &WeightedGraph) -> Result<f64, GraphError> {
    g.max_w()
}

pub fn export_dot(g: &WeightedGraph) -> String {
    g.export_dot()
}
