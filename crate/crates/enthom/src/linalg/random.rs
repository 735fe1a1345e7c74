//! Seeded random states and local unitaries.
//!
//! All sampling is driven by a `ChaCha8Rng` seeded from the caller's integer,
//! so identical seeds reproduce identical states bit for bit.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{kron, ComplexMatrix, MultipartiteState};
use crate::error::{Error, Result};

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidParameter(
            "every local dimension must be at least 2".into(),
        ));
    }
    Ok(dims.iter().product())
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-distributed pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn random_pure_state(dims: &[usize], seed: u64) -> Result<MultipartiteState> {
    let total = check_dims(dims)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..total).map(|_| gaussian(&mut rng)).collect();
    MultipartiteState::from_pure(&amps, dims.to_vec())
}

/// Full-rank mixed state G G^dag / Tr(G G^dag) with square complex Gaussian G.
pub fn random_mixed_state(dims: &[usize], seed: u64) -> Result<MultipartiteState> {
    let total = check_dims(dims)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(total, |_, _| gaussian(&mut rng));
    let gram = g.matmul(&g.dagger());
    let tr = gram.trace().re;
    let rho = gram.scale(Complex64::new(1.0 / tr, 0.0));
    Ok(MultipartiteState::from_valid_parts(rho, dims.to_vec()))
}

/// Haar-distributed unitary: Gram-Schmidt on a Gaussian matrix with the
/// diagonal of R kept real positive, which fixes the column phases.
fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    // columns of g, orthonormalized in order
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let sub = proj * cols[k][i];
                cols[j][i] -= sub;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// One Haar unitary per party.
pub fn random_local_unitaries(dims: &[usize], seed: u64) -> Result<Vec<ComplexMatrix>> {
    check_dims(dims)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(dims.iter().map(|&d| haar_unitary(d, &mut rng)).collect())
}

/// rho -> U rho U^dag with U the tensor product of the given local unitaries.
pub fn apply_local_unitaries(
    state: &MultipartiteState,
    unitaries: &[ComplexMatrix],
) -> Result<MultipartiteState> {
    if unitaries.len() != state.n_parties() {
        return Err(Error::PartyCountMismatch {
            expected: state.n_parties(),
            actual: unitaries.len(),
        });
    }
    for (u, &d) in unitaries.iter().zip(state.dims()) {
        if u.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: u.dim(),
            });
        }
    }
    let mut u = unitaries[0].clone();
    for v in &unitaries[1..] {
        u = kron(&u, v);
    }
    let rho = u.matmul(state.rho()).matmul(&u.dagger());
    Ok(MultipartiteState::from_valid_parts(
        rho,
        state.dims().to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;

    #[test]
    fn same_seed_is_bit_identical() {
        let a = random_pure_state(&[2, 3], 99).unwrap();
        let b = random_pure_state(&[2, 3], 99).unwrap();
        assert_eq!(a.rho().entries(), b.rho().entries());
        let c = random_mixed_state(&[2, 2], 5).unwrap();
        let d = random_mixed_state(&[2, 2], 5).unwrap();
        assert_eq!(c.rho().entries(), d.rho().entries());
    }

    #[test]
    fn different_seeds_differ() {
        let a = random_pure_state(&[2, 2], 1).unwrap();
        let b = random_pure_state(&[2, 2], 2).unwrap();
        assert!(a.rho().max_abs_diff(b.rho()) > 1e-3);
    }

    #[test]
    fn pure_state_has_unit_purity() {
        let s = random_pure_state(&[2, 2, 2], 7).unwrap();
        assert!((s.purity() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mixed_state_is_valid_density() {
        let s = random_mixed_state(&[2, 3], 13).unwrap();
        assert!((s.rho().trace().re - 1.0).abs() <= 1e-12);
        assert!(s.rho().is_hermitian(1e-12));
        let eigs = hermitian_eigenvalues(s.rho()).unwrap();
        assert!(eigs[0] >= -1e-12);
        assert!(s.purity() < 1.0);
    }

    #[test]
    fn unitaries_are_unitary() {
        let us = random_local_unitaries(&[2, 3, 4], 3).unwrap();
        for u in &us {
            let gram = u.dagger().matmul(u);
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(u.dim())) < 1e-12);
        }
    }

    #[test]
    fn local_unitaries_preserve_marginal_spectra() {
        let s = random_mixed_state(&[2, 2, 3], 17).unwrap();
        let us = random_local_unitaries(&[2, 2, 3], 18).unwrap();
        let rotated = apply_local_unitaries(&s, &us).unwrap();
        for keep in 1..8u32 {
            let before = s.marginal_spectrum(keep).unwrap();
            let after = rotated.marginal_spectrum(keep).unwrap();
            for (x, y) in before.iter().zip(&after) {
                assert!((x - y).abs() <= 1e-9, "subset {keep:#b}: {x} vs {y}");
            }
        }
    }
}
