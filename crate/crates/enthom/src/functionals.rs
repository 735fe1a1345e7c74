//! Entropic and entanglement functionals, and the monotone set functional
//! that feeds the filtration.
//!
//! The Tsallis entropy S_q = (Tr rho^q - 1)/(1 - q) recovers the von Neumann
//! entropy (natural log) at q = 1 and the linear entropy 1 - Tr rho^2 at
//! q = 2. The q-deformed total correlation of a subset J is
//! sum_{v in J} S_q(v) - S_q(J); it vanishes on singletons and is monotone
//! under inclusion for q >= 1, which makes it a valid filtration functional.

use std::hash::{Hash, Hasher};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{trace_norm, ComplexMatrix, MultipartiteState, EIG_CLAMP_TOL};
use crate::subset::{self, Subset};

/// Slack allowed when checking inclusion-monotonicity.
pub const MONOTONICITY_TOL: f64 = 1e-9;

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0) {
        return Err(Error::InvalidParameter(format!("q must be > 0, got {q}")));
    }
    Ok(())
}

fn check_subset(s: &MultipartiteState, mask: Subset) -> Result<()> {
    if mask == 0 {
        return Err(Error::EmptySubset);
    }
    if !subset::is_subset_of(mask, s.full_subset()) {
        return Err(Error::InvalidSubset(format!(
            "subset {mask:#b} exceeds the {} parties",
            s.n_parties()
        )));
    }
    Ok(())
}

/// Entropy from a spectrum, clamping eigenvalues in [-1e-10, 0) to zero.
fn entropy_from_spectrum(eigs: &[f64], q: f64) -> Result<f64> {
    let mut clamped = Vec::with_capacity(eigs.len());
    for &l in eigs {
        if l < -EIG_CLAMP_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: l });
        }
        clamped.push(l.max(0.0));
    }
    if q == 1.0 {
        Ok(-clamped
            .iter()
            .map(|&l| if l > 0.0 { l * l.ln() } else { 0.0 })
            .sum::<f64>())
    } else {
        let power: f64 = clamped
            .iter()
            .map(|&l| if l > 0.0 { l.powf(q) } else { 0.0 })
            .sum();
        Ok((power - 1.0) / (1.0 - q))
    }
}

fn integer_power(q: f64) -> Option<u32> {
    (q.fract() == 0.0 && (2.0..=64.0).contains(&q)).then(|| q as u32)
}

fn entropy_of_matrix(m: &ComplexMatrix, q: f64) -> Result<f64> {
    if let Some(p) = integer_power(q) {
        // Tr rho^p by matrix products, no eigensolve
        let power = m.trace_power(p).re;
        return Ok((power - 1.0) / (1.0 - q));
    }
    entropy_from_spectrum(&crate::linalg::hermitian_eigenvalues(m)?, q)
}

/// Tsallis entropy S_q of the marginal on `subset`; q = 1 gives the von
/// Neumann entropy with natural logarithm.
pub fn tsallis_entropy(s: &MultipartiteState, mask: Subset, q: f64) -> Result<f64> {
    check_q(q)?;
    check_subset(s, mask)?;
    entropy_of_matrix(&s.partial_trace(mask)?, q)
}

/// S_q for every nonempty subset, indexed by bitmask (entry 0 is unused).
pub fn subset_entropies(s: &MultipartiteState, q: f64) -> Result<Vec<f64>> {
    check_q(q)?;
    let n = s.n_parties();
    let mut out = vec![0.0; 1 << n];
    for mask in subset::all_nonempty(n) {
        out[mask as usize] = entropy_of_matrix(&s.partial_trace(mask)?, q)?;
    }
    Ok(out)
}

/// q-deformed total correlation C_q(J) = sum_{v in J} S_q(v) - S_q(J).
pub fn total_correlation(s: &MultipartiteState, mask: Subset, q: f64) -> Result<f64> {
    check_q(q)?;
    check_subset(s, mask)?;
    let mut singles = 0.0;
    for v in subset::members(mask) {
        singles += tsallis_entropy(s, 1 << v, q)?;
    }
    Ok(singles - tsallis_entropy(s, mask, q)?)
}

/// Alternating-sign sum of precomputed subset entropies (see
/// [`subset_entropies`]).
pub fn interaction_information_from_entropies(entropies: &[f64], n_parties: usize) -> f64 {
    let mut acc = 0.0;
    for mask in subset::all_nonempty(n_parties) {
        let sign = if subset::size(mask) % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * entropies[mask as usize];
    }
    acc
}

/// q-deformed interaction information: the alternating-sign sum of subset
/// entropies over all nonempty subsets.
pub fn interaction_information(s: &MultipartiteState, q: f64) -> Result<f64> {
    let ents = subset_entropies(s, q)?;
    Ok(interaction_information_from_entropies(&ents, s.n_parties()))
}

/// I(A:B|R) = S(AR) + S(BR) - S(R) - S(ABR) for a tripartite state with
/// parties ordered (A, B, R). Non-negative by strong subadditivity.
pub fn conditional_mutual_information(s: &MultipartiteState) -> Result<f64> {
    if s.n_parties() != 3 {
        return Err(Error::PartyCountMismatch {
            expected: 3,
            actual: s.n_parties(),
        });
    }
    let ent = |mask: Subset| tsallis_entropy(s, mask, 1.0);
    Ok(ent(0b101)? + ent(0b110)? - ent(0b100)? - ent(0b111)?)
}

/// n-tangle Tr(rho sigma_y^(x)n rho^* sigma_y^(x)n) for qubit states.
///
/// sigma_y^(x)n maps |k> to i^n (-1)^|k| |~k>, so the trace collapses to a
/// double sum over matrix entries paired with their bitwise complements.
pub fn n_tangle_direct(s: &MultipartiteState) -> Result<f64> {
    if !s.is_all_qubits() {
        return Err(Error::InvalidParameter(
            "the n-tangle is defined for qubit parties only".into(),
        ));
    }
    let dim = s.dim();
    let comp = dim - 1;
    let rho = s.rho();
    let mut acc = Complex64::ZERO;
    for a in 0..dim {
        for b in 0..dim {
            let z = rho[(a, b)];
            if z == Complex64::ZERO {
                continue;
            }
            let sign = if ((a ^ b).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
            acc += z * sign * rho[(comp & !b, comp & !a)].conj();
        }
    }
    debug_assert!(acc.im.abs() <= 1e-10, "imaginary residue {}", acc.im);
    Ok(acc.re)
}

/// Coefficients of a qubit density matrix in the n-fold Pauli basis,
/// Q_iota = Tr(rho sigma_iota).
#[derive(Debug, Clone)]
pub struct BlochVector {
    n: usize,
    coeffs: Vec<f64>,
}

pub const MAX_BLOCH_QUBITS: usize = 8;

/// Interleave the n low bits of `x` into base-4 digit positions.
fn spread_bits(x: usize, n: usize) -> usize {
    let mut out = 0;
    for k in 0..n {
        out |= ((x >> k) & 1) << (2 * k);
    }
    out
}

/// Pauli coefficients via n successive single-qubit transforms of the density
/// matrix, costing O(4^n n) rather than O(16^n).
pub fn bloch_vector(s: &MultipartiteState) -> Result<BlochVector> {
    if !s.is_all_qubits() {
        return Err(Error::InvalidParameter(
            "Bloch coefficients are defined for qubit parties only".into(),
        ));
    }
    let n = s.n_parties();
    if n > MAX_BLOCH_QUBITS {
        return Err(Error::TooLarge {
            what: "qubit count for Bloch coefficients",
            limit: MAX_BLOCH_QUBITS,
            actual: n,
        });
    }
    let dim = s.dim();
    let mut buf = vec![Complex64::ZERO; dim * dim];
    for a in 0..dim {
        let row = spread_bits(a, n) << 1;
        for b in 0..dim {
            buf[row + spread_bits(b, n)] = s.rho()[(a, b)];
        }
    }
    // per-qubit map (m00, m01, m10, m11) -> traces against (I, sx, sy, sz)
    for k in 0..n {
        let stride = 1usize << (2 * k);
        let block = stride << 2;
        for base in (0..buf.len()).step_by(block) {
            for off in 0..stride {
                let i0 = base + off;
                let (c0, c1, c2, c3) = (
                    buf[i0],
                    buf[i0 + stride],
                    buf[i0 + 2 * stride],
                    buf[i0 + 3 * stride],
                );
                buf[i0] = c0 + c3;
                buf[i0 + stride] = c1 + c2;
                buf[i0 + 2 * stride] = Complex64::I * (c1 - c2);
                buf[i0 + 3 * stride] = c0 - c3;
            }
        }
    }
    let coeffs = buf
        .iter()
        .map(|z| {
            debug_assert!(z.im.abs() <= 1e-10, "non-real Pauli coefficient {z}");
            z.re
        })
        .collect();
    Ok(BlochVector { n, coeffs })
}

impl BlochVector {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Flat coefficient table; index digits are base-4 Pauli labels with
    /// party A_1 at the most significant digit.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient for the Pauli word given per party, e.g. [0,2,3].
    pub fn coefficient(&self, word: &[u8]) -> f64 {
        assert_eq!(word.len(), self.n);
        let mut idx = 0usize;
        for &d in word {
            assert!(d < 4);
            idx = idx * 4 + d as usize;
        }
        self.coeffs[idx]
    }

    /// Number of non-identity letters in the flat index.
    fn weight(&self, mut flat: usize) -> usize {
        let mut w = 0;
        for _ in 0..self.n {
            if flat & 3 != 0 {
                w += 1;
            }
            flat >>= 2;
        }
        w
    }
}

/// Minkowski length 2^-n sum_iota (-1)^|iota| Q_iota^2. Equals the n-tangle
/// for states on an even number of qubits.
pub fn minkowski_length(b: &BlochVector) -> f64 {
    let mut acc = 0.0;
    for (flat, &qc) in b.coefficients().iter().enumerate() {
        let sign = if b.weight(flat) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * qc * qc;
    }
    acc / (1u64 << b.n) as f64
}

/// Linear entropy of the marginal on `mask`, read off the Bloch coefficients:
/// S_2(J) = 1 - 2^-|J| sum over words supported inside J of Q^2.
pub fn linear_entropy_via_bloch(b: &BlochVector, mask: Subset) -> Result<f64> {
    if mask == 0 {
        return Err(Error::EmptySubset);
    }
    if !subset::is_subset_of(mask, subset::full(b.n)) {
        return Err(Error::InvalidSubset(format!(
            "subset {mask:#b} exceeds the {} qubits",
            b.n
        )));
    }
    // digit positions of the parties in J (party i sits at digit n-1-i)
    let positions: Vec<usize> = subset::members(mask).map(|i| b.n - 1 - i).collect();
    let k = positions.len();
    let mut sum = 0.0;
    for word in 0..(1usize << (2 * k)) {
        let mut flat = 0usize;
        for (j, &pos) in positions.iter().enumerate() {
            flat |= ((word >> (2 * j)) & 3) << (2 * pos);
        }
        let qc = b.coeffs[flat];
        sum += qc * qc;
    }
    Ok(1.0 - sum / (1u64 << k) as f64)
}

/// Distributed concurrence squared, 2 * I_2.
pub fn distributed_concurrence_squared(s: &MultipartiteState) -> Result<f64> {
    Ok(2.0 * interaction_information(s, 2.0)?)
}

/// Log-negativity ln ||rho^{T_Jc}||_1 across the bipartition (J, complement).
/// The caller supplies the state whose bipartition is probed, typically a
/// two-party marginal.
pub fn log_negativity(s: &MultipartiteState, mask: Subset) -> Result<f64> {
    let full = s.full_subset();
    if mask == 0 || mask == full || !subset::is_subset_of(mask, full) {
        return Err(Error::InvalidSubset(
            "log-negativity needs a nonempty proper subset".into(),
        ));
    }
    let pt = s.partial_transpose(full & !mask)?;
    Ok(trace_norm(&pt)?.ln())
}

/// Evaluations of a monotone functional on every nonempty subset of parties,
/// computed eagerly and immutable afterwards.
#[derive(Debug, Clone)]
pub struct SubsetFunctional {
    name: String,
    q: Option<f64>,
    fingerprint: u64,
    n_parties: usize,
    values: Vec<f64>,
}

fn hash_f64(h: &mut impl Hasher, x: f64) {
    x.to_bits().hash(h);
}

impl SubsetFunctional {
    /// Wrap externally computed values (indexed by bitmask, entry 0 ignored).
    /// The table is taken as-is; run [`SubsetFunctional::check_monotone`]
    /// before building a filtration from it.
    pub fn from_values(name: impl Into<String>, n_parties: usize, values: Vec<f64>) -> Result<Self> {
        if n_parties == 0 || n_parties > 31 {
            return Err(Error::InvalidParameter("party count out of range".into()));
        }
        if values.len() != 1 << n_parties {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_parties,
                actual: values.len(),
            });
        }
        if values[1..].iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "functional values must be finite".into(),
            ));
        }
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for &v in &values[1..] {
            hash_f64(&mut h, v);
        }
        Ok(Self {
            name: name.into(),
            q: None,
            fingerprint: h.finish(),
            n_parties,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn q(&self) -> Option<f64> {
        self.q
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn full_subset(&self) -> Subset {
        subset::full(self.n_parties)
    }

    /// Cached value on a nonempty subset.
    pub fn value(&self, mask: Subset) -> f64 {
        debug_assert!(mask != 0 && subset::is_subset_of(mask, self.full_subset()));
        self.values[mask as usize]
    }

    /// Largest filtration value, attained on the full set for monotone
    /// functionals.
    pub fn epsilon_max(&self) -> f64 {
        self.values[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest vertex value; the augmentation cell is born here.
    pub fn min_vertex_value(&self) -> f64 {
        (0..self.n_parties)
            .map(|i| self.values[1usize << i])
            .fold(f64::INFINITY, f64::min)
    }

    /// First covering pair (J \ {v}, J) violating monotonicity beyond the
    /// tolerance, if any.
    pub fn monotonicity_witness(&self) -> Option<(Subset, Subset)> {
        for mask in subset::all_nonempty(self.n_parties) {
            if subset::size(mask) < 2 {
                continue;
            }
            for facet in subset::facets(mask) {
                if self.values[facet as usize] > self.values[mask as usize] + MONOTONICITY_TOL {
                    return Some((facet, mask));
                }
            }
        }
        None
    }

    /// Exhaustive inclusion-monotonicity check over all covering pairs.
    pub fn check_monotone(&self) -> bool {
        self.monotonicity_witness().is_none()
    }
}

/// Worst inclusion-monotonicity violation of the raw (unclosed) C_q table:
/// the largest F(J \ {v}) - F(J) over covering pairs, clamped at zero. A
/// mathematically monotone functional yields at most rounding noise here.
pub fn total_correlation_monotonicity_margin(s: &MultipartiteState, q: f64) -> Result<f64> {
    let ents = subset_entropies(s, q)?;
    let n = s.n_parties();
    let mut values = vec![0.0; 1usize << n];
    for mask in subset::all_nonempty(n) {
        let mut singles = 0.0;
        for v in subset::members(mask) {
            singles += ents[1usize << v];
        }
        values[mask as usize] = singles - ents[mask as usize];
    }
    let mut worst = 0.0f64;
    for mask in subset::all_nonempty(n) {
        if subset::size(mask) < 2 {
            continue;
        }
        for facet in subset::facets(mask) {
            worst = worst.max(values[facet as usize] - values[mask as usize]);
        }
    }
    Ok(worst)
}

/// Build the sealed total-correlation functional C_q / rescale.
///
/// All 2^n - 1 values are computed up front. A final pass replaces each value
/// with the maximum over its faces, which leaves a mathematically monotone
/// functional unchanged up to the rounding already present in the entropies
/// and guarantees the stored table is exactly monotone, so the filtration
/// order never has to break ties against the subset lattice.
pub fn make_total_correlation_functional(
    s: &MultipartiteState,
    q: f64,
    rescale: f64,
) -> Result<SubsetFunctional> {
    check_q(q)?;
    let ents = subset_entropies(s, q)?;
    let mut h = std::collections::hash_map::DefaultHasher::new();
    s.dims().hash(&mut h);
    for z in s.rho().entries() {
        hash_f64(&mut h, z.re);
        hash_f64(&mut h, z.im);
    }
    hash_f64(&mut h, q);
    hash_f64(&mut h, rescale);
    total_correlation_functional_from_entropies(&ents, s.n_parties(), q, rescale, h.finish())
}

/// Same as [`make_total_correlation_functional`], but from subset entropies
/// that the caller already has.
pub fn total_correlation_functional_from_entropies(
    entropies: &[f64],
    n_parties: usize,
    q: f64,
    rescale: f64,
    fingerprint: u64,
) -> Result<SubsetFunctional> {
    check_q(q)?;
    if !(rescale > 0.0 && rescale.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "rescale must be a positive finite number, got {rescale}"
        )));
    }
    if entropies.len() != 1 << n_parties {
        return Err(Error::DimensionMismatch {
            expected: 1 << n_parties,
            actual: entropies.len(),
        });
    }
    let mut values = vec![0.0; 1usize << n_parties];
    for mask in subset::all_nonempty(n_parties) {
        let mut singles = 0.0;
        for v in subset::members(mask) {
            singles += entropies[1usize << v];
        }
        values[mask as usize] = (singles - entropies[mask as usize]) / rescale;
    }
    let mut masks: Vec<Subset> = subset::all_nonempty(n_parties).collect();
    masks.sort_by_key(|&m| subset::size(m));
    // Subadditivity proves monotonicity only for q >= 1; for smaller q the
    // raw values must pass the check before they may seed a filtration.
    if q < 1.0 {
        for &mask in &masks {
            for facet in subset::facets(mask) {
                if values[facet as usize] > values[mask as usize] + MONOTONICITY_TOL {
                    return Err(Error::MonotonicityViolation {
                        smaller: facet,
                        larger: mask,
                        smaller_value: values[facet as usize],
                        larger_value: values[mask as usize],
                    });
                }
            }
        }
    }
    // monotone closure in order of subset size
    for &mask in &masks {
        if subset::size(mask) < 2 {
            continue;
        }
        let mut floor = f64::NEG_INFINITY;
        for facet in subset::facets(mask) {
            floor = floor.max(values[facet as usize]);
        }
        if values[mask as usize] < floor {
            values[mask as usize] = floor;
        }
    }
    let name = if rescale == 1.0 {
        format!("C_{q}")
    } else {
        format!("C_{q}/{rescale}")
    };
    Ok(SubsetFunctional {
        name,
        q: Some(q),
        fingerprint,
        n_parties,
        values,
    })
}
