//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! A two-sided unitary rotation on the (p,q) plane annihilates the pivot
//! entry A[p][q]; sweeping all pivots cyclically converges quadratically.
//! Convergence is declared when the off-diagonal Frobenius norm drops below
//! `1e-12` times the Frobenius norm of the input, with a cap of 100 sweeps.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const EIG_HERMITIAN_TOL: f64 = 1e-10;
const CONVERGENCE_FACTOR: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(m: &ComplexMatrix, with_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let dev = m.hermiticity_deviation();
    if dev > EIG_HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = m.dim();
    let mut a = m.clone();
    // symmetrize exactly so rounding in the input cannot bias the iteration
    for i in 0..n {
        for j in 0..i {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut vecs = with_vectors.then(|| ComplexMatrix::identity(n));

    let norm = a.frobenius_norm();
    let target = CONVERGENCE_FACTOR * norm;
    // skipping pivots below target/n still leaves the off-norm under target
    let pivot_skip = target / n.max(1) as f64;

    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigFailed {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let absb = b.norm();
                if absb <= pivot_skip {
                    continue;
                }
                let phase = b / absb;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (app - aqq) / (2.0 * absb);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    1.0 / (tau + tau.signum() * (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sigma = phase * s;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * sigma.conj();
                    a[(k, q)] = akq * c - akp * sigma;
                    a[(p, k)] = a[(k, p)].conj();
                    a[(q, k)] = a[(k, q)].conj();
                }
                a[(p, p)] = Complex64::new(app * c * c + 2.0 * c * s * absb + aqq * s * s, 0.0);
                a[(q, q)] = Complex64::new(app * s * s - 2.0 * c * s * absb + aqq * c * c, 0.0);
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;

                if let Some(v) = vecs.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c + vkq * sigma.conj();
                        v[(k, q)] = vkq * c - vkp * sigma;
                    }
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = vecs.map(|v| {
        ComplexMatrix::from_fn(n, |row, col| v[(row, order[col])])
    });
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    jacobi(m, false).map(|(values, _)| values)
}

/// Eigenvalues (ascending) and the unitary whose columns are the matching
/// eigenvectors, so that `M = V diag(values) V^dag`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    jacobi(m, true).map(|(values, vectors)| (values, vectors.unwrap()))
}
