//! Dense complex linear algebra sized for small multipartite states.
//!
//! Matrices are square, row-major `Complex64`. States carry a density matrix
//! together with the ordered local dimensions; party `A_1` is the most
//! significant tensor factor, so for qubits the basis label of `A_1` is the
//! leftmost bit of the computational-basis index.

mod eig;
mod random;

pub use eig::{hermitian_eigen, hermitian_eigenvalues};
pub use random::{
    apply_local_unitaries, random_local_unitaries, random_mixed_state, random_pure_state,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::subset::{self, Subset};

/// Entrywise tolerance under which a matrix counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on |Tr rho - 1| for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in [-EIG_CLAMP_TOL, 0) are clamped to 0; anything below is an error.
pub const EIG_CLAMP_TOL: f64 = 1e-10;

/// Dense square matrix of complex doubles, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Projector |psi><psi| from an (already normalized) state vector.
    pub fn projector(amplitudes: &[Complex64]) -> Self {
        let dim = amplitudes.len();
        Self::from_fn(dim, |i, j| amplitudes[i] * amplitudes[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == Complex64::ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    dst[j] += aik * row[j];
                }
            }
        }
        out
    }

    /// Largest entrywise deviation from the Hermitian transpose.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tr(M^power) by repeated multiplication; exact for integer powers.
    pub fn trace_power(&self, power: u32) -> Complex64 {
        assert!(power >= 1);
        if power == 1 {
            return self.trace();
        }
        if power == 2 {
            // Tr(M M) = sum_ij M_ij M_ji
            let n = self.dim;
            let mut acc = Complex64::ZERO;
            for i in 0..n {
                for j in 0..n {
                    acc += self.data[i * n + j] * self.data[j * n + i];
                }
            }
            return acc;
        }
        let mut acc = self.clone();
        for _ in 2..power {
            acc = acc.matmul(self);
        }
        // trace of acc * self without forming the product
        let n = self.dim;
        let mut tr = Complex64::ZERO;
        for i in 0..n {
            for k in 0..n {
                tr += acc.data[i * n + k] * self.data[k * n + i];
            }
        }
        tr
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Kronecker product; `a` is the left (more significant) factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(da * db);
    for ia in 0..da {
        for ja in 0..da {
            let aij = a[(ia, ja)];
            if aij == Complex64::ZERO {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out[(ia * db + ib, ja * db + jb)] = aij * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Kronecker product of state vectors, left factor most significant.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Density matrix with its party structure.
#[derive(Debug, Clone)]
pub struct MultipartiteState {
    rho: ComplexMatrix,
    dims: Vec<usize>,
    labels: Vec<String>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("A{i}")).collect()
}

impl MultipartiteState {
    /// Validating constructor: Hermitian, unit trace, positive semidefinite
    /// (within clamping tolerance), and matching dimensions.
    pub fn new(rho: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidParameter(
                "every local dimension must be at least 2".into(),
            ));
        }
        if rho.dim() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                actual: rho.dim(),
            });
        }
        let dev = rho.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidParameter(format!(
                "trace must be 1, got {tr}"
            )));
        }
        let eigs = hermitian_eigenvalues(&rho)?;
        let min = eigs.first().copied().unwrap_or(0.0);
        if min < -EIG_CLAMP_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(Self::from_valid_parts(rho, dims))
    }

    /// Build |psi><psi| from amplitudes, normalizing first.
    pub fn from_pure(amplitudes: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidParameter(
                "every local dimension must be at least 2".into(),
            ));
        }
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::ZeroState);
        }
        let normalized: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Ok(Self::from_valid_parts(
            ComplexMatrix::projector(&normalized),
            dims,
        ))
    }

    /// Internal constructor for states that are valid by construction.
    pub(crate) fn from_valid_parts(rho: ComplexMatrix, dims: Vec<usize>) -> Self {
        let labels = default_labels(dims.len());
        Self { rho, dims, labels }
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn full_subset(&self) -> Subset {
        subset::full(self.n_parties())
    }

    pub fn purity(&self) -> f64 {
        self.rho.trace_power(2).re
    }

    pub fn is_all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Labels of the parties in `mask`, ascending by party index.
    pub fn subset_labels(&self, mask: Subset) -> Vec<String> {
        subset::members(mask)
            .filter(|&i| i < self.n_parties())
            .map(|i| self.labels[i].clone())
            .collect()
    }

    /// Tensor-index stride of party `i` (A_1 most significant).
    fn strides(&self) -> Vec<usize> {
        let n = self.n_parties();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Flat index offsets covering the parties in `parties`, in ascending
    /// party order with A_1 most significant. The returned vector enumerates
    /// every joint basis label of those parties.
    fn base_offsets(&self, parties: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut bases = vec![0usize];
        for &p in parties {
            let d = self.dims[p];
            let mut next = Vec::with_capacity(bases.len() * d);
            for &b in &bases {
                for v in 0..d {
                    next.push(b + v * strides[p]);
                }
            }
            bases = next;
        }
        bases
    }

    /// Marginal density matrix on the parties in `keep`.
    pub fn partial_trace(&self, keep: Subset) -> Result<ComplexMatrix> {
        if keep == 0 {
            return Err(Error::EmptySubset);
        }
        let full = self.full_subset();
        if !subset::is_subset_of(keep, full) {
            return Err(Error::InvalidSubset(format!(
                "subset {keep:#b} is not within the {} parties",
                self.n_parties()
            )));
        }
        let kept: Vec<usize> = subset::members(keep & full).collect();
        let traced: Vec<usize> = subset::members(full & !keep).collect();
        let kept_bases = self.base_offsets(&kept);
        let traced_bases = self.base_offsets(&traced);
        let dk = kept_bases.len();
        let mut out = ComplexMatrix::zeros(dk);
        for (r, &rb) in kept_bases.iter().enumerate() {
            for (c, &cb) in kept_bases.iter().enumerate() {
                let mut acc = Complex64::ZERO;
                for &tb in &traced_bases {
                    acc += self.rho[(rb + tb, cb + tb)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(out)
    }

    /// Transpose the indices of the parties in `part`, leaving the rest fixed.
    pub fn partial_transpose(&self, part: Subset) -> Result<ComplexMatrix> {
        let full = self.full_subset();
        if part == 0 || !subset::is_subset_of(part, full) || part == full {
            return Err(Error::InvalidSubset(
                "partial transpose needs a nonempty proper subset".into(),
            ));
        }
        let transposed: Vec<usize> = subset::members(part).collect();
        let rest: Vec<usize> = subset::members(full & !part).collect();
        let t_bases = self.base_offsets(&transposed);
        let r_bases = self.base_offsets(&rest);
        let mut out = ComplexMatrix::zeros(self.dim());
        for &tr in &t_bases {
            for &tc in &t_bases {
                for &rr in &r_bases {
                    for &rc in &r_bases {
                        out[(tr + rr, tc + rc)] = self.rho[(tc + rr, tr + rc)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sorted eigenvalues of the marginal on `keep`.
    pub fn marginal_spectrum(&self, keep: Subset) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.partial_trace(keep)?)
    }
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|l| l.abs()).sum())
}
