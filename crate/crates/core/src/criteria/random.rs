//! Seeded random states for the property suites.
//!
//! Three families:
//! * Ginibre states `A·A†/Tr(A·A†)` with standard complex normal `A`;
//! * convex mixtures of random pure product and pure entangled states;
//! * white-noise mixtures `(1−p)·I/n + p·σ`, which are full rank with a sizeable `λ_min`
//!   and therefore reach the sufficient PPT criteria that the first two families never do.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{BipartiteDims, Matrix};
use crate::qstate::DensityMatrix;

pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }

    /// Random Hermitian matrix with standard normal entries (GUE up to scale).
    pub fn hermitian(&mut self, n: usize) -> Matrix {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(self.normal(), 0.0));
            for j in (i + 1)..n {
                let z = self.complex_normal();
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    /// Random complex square matrix (not Hermitian).
    pub fn general(&mut self, n: usize) -> Matrix {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.complex_normal());
            }
        }
        m
    }

    /// `A·A†` for a complex normal `A`; PSD, unnormalised.
    pub fn psd(&mut self, n: usize) -> Matrix {
        let a = self.general(n);
        a.mul(&a.adjoint()).expect("same order")
    }

    /// Unit vector with complex normal components.
    pub fn unit_vector(&mut self, n: usize) -> Vec<Complex64> {
        let v: Vec<Complex64> = (0..n).map(|_| self.complex_normal()).collect();
        normalize(v)
    }

    /// Unit vector with real normal components.
    pub fn real_unit_vector(&mut self, n: usize) -> Vec<Complex64> {
        let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(self.normal(), 0.0)).collect();
        normalize(v)
    }

    pub fn ginibre(&mut self, dims: BipartiteDims) -> DensityMatrix {
        let m = self.psd(dims.order());
        let tr = m.trace().re;
        valid(m.scale(Complex64::new(1.0 / tr, 0.0)), dims)
    }

    pub fn pure(&mut self, dims: BipartiteDims) -> DensityMatrix {
        valid(projector(&self.unit_vector(dims.order())), dims)
    }

    pub fn real_pure(&mut self, dims: BipartiteDims) -> DensityMatrix {
        valid(projector(&self.real_unit_vector(dims.order())), dims)
    }

    pub fn product_vector(&mut self, dims: BipartiteDims) -> Vec<Complex64> {
        let a = self.unit_vector(dims.d1());
        let b = self.unit_vector(dims.d2());
        a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
    }

    /// Convex mixture of `terms` pure states, each a product state with probability 1/2.
    pub fn mixture(&mut self, dims: BipartiteDims, terms: usize) -> DensityMatrix {
        let n = dims.order();
        let mut acc = Matrix::zeros(n);
        let weights: Vec<f64> = (0..terms).map(|_| self.uniform() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        for w in weights {
            let v = if self.uniform() < 0.5 { self.product_vector(dims) } else { self.unit_vector(n) };
            acc = acc.add(&projector(&v).scale(Complex64::new(w / total, 0.0))).expect("same order");
        }
        valid(acc, dims)
    }

    /// `(1−p)·I/n + p·σ` with `σ` from one of the other families and `p` uniform in (0, 1).
    pub fn noisy(&mut self, dims: BipartiteDims) -> DensityMatrix {
        let n = dims.order();
        let sigma = if self.uniform() < 0.5 { self.ginibre(dims) } else { self.pure(dims) };
        let p = self.uniform();
        let m = Matrix::identity(n)
            .scale(Complex64::new((1.0 - p) / n as f64, 0.0))
            .add(&sigma.matrix().scale(Complex64::new(p, 0.0)))
            .expect("same order");
        valid(m, dims)
    }

    /// Cycles through the three families.
    pub fn any_state(&mut self, dims: BipartiteDims, k: usize) -> DensityMatrix {
        match k % 3 {
            0 => self.ginibre(dims),
            1 => {
                let terms = 1 + (self.uniform() * 4.0) as usize;
                self.mixture(dims, terms)
            }
            _ => self.noisy(dims),
        }
    }
}

fn normalize(v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    v.into_iter().map(|z| z / norm).collect()
}

/// `|v⟩⟨v|`.
pub fn projector(v: &[Complex64]) -> Matrix {
    Matrix::from_fn(v.len(), |i, j| v[i] * v[j].conj())
}

fn valid(m: Matrix, dims: BipartiteDims) -> DensityMatrix {
    // sampled matrices are PSD with unit trace up to rounding
    crate::qstate::validate(&m.hermitian_part(), dims, 1e-8).expect("sampled state is a density matrix")
}
