//! Topological summaries of barcodes and their closed-form counterparts,
//! plus executable checks of the identities that connect them to
//! correlation measures.
//!
//! The key identities, all exposed as residuals between independently
//! computed routes:
//! - reduced integrated Euler characteristic at the terminal filtration value
//!   = alternating subset sum of the functional = deformed interaction
//!   information I_q;
//! - at q = 2 on an even number of qubits these also equal the Minkowski
//!   length of the generalized Bloch vector and the n-tangle;
//! - the integrated Euler characteristic relative to the subcomplex on
//!   {A, B} of a tripartite state equals -I(A:B|R), hence is non-positive
//!   by strong subadditivity.

use crate::error::{Error, Result};
use crate::functionals::{
    self, SubsetFunctional,
};
use crate::linalg::MultipartiteState;
use crate::persistence::{build_filtration, compute_barcode, Barcode, Mode};
use crate::subset::{self, Subset};

/// Integrated Betti number: the measure of [0, upto] covered by dim-k bars,
/// truncating infinite bars at `upto`.
pub fn integrated_betti(bc: &Barcode, dim: usize, upto: f64) -> f64 {
    bc.intervals()
        .iter()
        .filter(|iv| iv.dim == dim)
        .map(|iv| iv.length_within(upto))
        .sum()
}

/// Total persistence: the sum of integrated Betti numbers over all dimensions.
pub fn total_persistence(bc: &Barcode, upto: f64) -> f64 {
    (0..=bc.max_dim()).map(|k| integrated_betti(bc, k, upto)).sum()
}

/// Integrated Euler characteristic: alternating sum of integrated Betti
/// numbers up to `upto`.
pub fn integrated_euler_characteristic(bc: &Barcode, upto: f64) -> f64 {
    (0..=bc.max_dim())
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * integrated_betti(bc, k, upto)
        })
        .sum()
}

/// The "at infinity" value: integration up to the terminal filtration value,
/// past which reduced and relative Betti curves vanish.
pub fn iec_at_epsilon_max(bc: &Barcode) -> f64 {
    integrated_euler_characteristic(bc, bc.epsilon_max())
}

/// Closed form of the reduced integrated Euler characteristic for any
/// monotone functional: sum over nonempty subsets of (-1)^|J| F(J).
pub fn closed_form_iec(f: &SubsetFunctional) -> f64 {
    let mut acc = 0.0;
    for mask in subset::all_nonempty(f.n_parties()) {
        let sign = if subset::size(mask) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * f.value(mask);
    }
    acc
}

/// Closed form of the relative integrated Euler characteristic: the same
/// alternating sum restricted to simplices outside the subcomplex on `s`
/// (the terminal-value terms cancel since the signed simplex counts inside
/// and outside both telescope to zero).
pub fn closed_form_relative_iec(f: &SubsetFunctional, s: Subset) -> Result<f64> {
    let full = f.full_subset();
    if s == 0 || s == full || !subset::is_subset_of(s, full) {
        return Err(Error::InvalidSubset(
            "relative mode needs a nonempty proper subset".into(),
        ));
    }
    let mut acc = 0.0;
    for mask in subset::all_nonempty(f.n_parties()) {
        if subset::is_subset_of(mask, s) {
            continue;
        }
        let sign = if subset::size(mask) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * f.value(mask);
    }
    Ok(acc)
}

/// Mode-consistent closed form at the terminal value. Absolute mode keeps the
/// epsilon_max contribution of the never-dying component, so unlike the
/// reduced and relative variants it depends on the truncation point.
pub fn closed_form_iec_for_mode(f: &SubsetFunctional, mode: Mode) -> Result<f64> {
    match mode {
        Mode::Reduced => Ok(closed_form_iec(f)),
        Mode::Relative(s) => closed_form_relative_iec(f, s),
        Mode::Absolute => Ok(f.epsilon_max() + closed_form_iec(f)),
    }
}

/// Both routes to the relative integrated Euler characteristic.
#[derive(Debug, Clone, Copy)]
pub struct RelativeIec {
    /// Barcode route: reduce the relative complex, integrate Betti curves.
    pub from_barcode: f64,
    /// Direct alternating sum over simplices outside the subcomplex.
    pub closed_form: f64,
}

impl RelativeIec {
    pub fn residual(&self) -> f64 {
        (self.from_barcode - self.closed_form).abs()
    }
}

/// Integrated Euler characteristic relative to the subcomplex generated by
/// `s`, via barcode integration and via the closed form.
pub fn relative_iec(f: &SubsetFunctional, s: Subset) -> Result<RelativeIec> {
    let bc = compute_barcode(&build_filtration(f, Mode::Relative(s))?);
    Ok(RelativeIec {
        from_barcode: iec_at_epsilon_max(&bc),
        closed_form: closed_form_relative_iec(f, s)?,
    })
}

/// Alternating sum of bar lengths, dimension-signed. Identical to the
/// integrated Euler characteristic at epsilon_max, traversed bar by bar.
/// Errors on infinite bars (absolute mode).
pub fn barcode_alternating_sum(bc: &Barcode) -> Result<f64> {
    let mut acc = 0.0;
    for iv in bc.intervals() {
        let death = iv.death.ok_or(Error::InfiniteBar)?;
        let sign = if iv.dim % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * (death - iv.birth);
    }
    Ok(acc)
}

/// Greedy tolerance matching of two barcodes, dimension by dimension.
/// Returns the largest endpoint deviation over the matching, or `None` if
/// the interval multisets cannot be matched within `tol` (including any
/// mismatch in counts or in finiteness).
pub fn barcode_deviation(a: &Barcode, b: &Barcode, tol: f64) -> Option<f64> {
    let max_dim = a.max_dim().max(b.max_dim());
    let mut worst = 0.0f64;
    for dim in 0..=max_dim {
        let bars_a: Vec<_> = a.intervals().iter().filter(|iv| iv.dim == dim).collect();
        let bars_b: Vec<_> = b.intervals().iter().filter(|iv| iv.dim == dim).collect();
        if bars_a.len() != bars_b.len() {
            return None;
        }
        let mut used = vec![false; bars_b.len()];
        for iv in bars_a {
            let mut best: Option<(usize, f64)> = None;
            for (j, cand) in bars_b.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let dev = match (iv.death, cand.death) {
                    (Some(x), Some(y)) => (iv.birth - cand.birth).abs().max((x - y).abs()),
                    (None, None) => (iv.birth - cand.birth).abs(),
                    _ => continue,
                };
                if dev <= tol && best.map_or(true, |(_, d)| dev < d) {
                    best = Some((j, dev));
                }
            }
            match best {
                Some((j, dev)) => {
                    used[j] = true;
                    worst = worst.max(dev);
                }
                None => return None,
            }
        }
    }
    Some(worst)
}

/// Whether two barcodes agree interval by interval within `tol`.
pub fn barcodes_match(a: &Barcode, b: &Barcode, tol: f64) -> bool {
    barcode_deviation(a, b, tol).is_some()
}

// --- theorem verifiers -------------------------------------------------------

fn max_abs_pairwise(values: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            worst = worst.max((values[i] - values[j]).abs());
        }
    }
    worst
}

/// Routes compared for the interaction-information identity.
#[derive(Debug, Clone, Copy)]
pub struct Thm1Report {
    pub iec_from_barcode: f64,
    pub closed_form: f64,
    pub interaction_information: f64,
    pub max_residual: f64,
}

/// Check that the reduced integrated Euler characteristic equals the
/// q-deformed interaction information, via barcode integration, the closed
/// form, and the direct entropy sum.
pub fn verify_thm1(s: &MultipartiteState, q: f64) -> Result<Thm1Report> {
    let ents = functionals::subset_entropies(s, q)?;
    let interaction =
        functionals::interaction_information_from_entropies(&ents, s.n_parties());
    let f = functionals::total_correlation_functional_from_entropies(
        &ents,
        s.n_parties(),
        q,
        1.0,
        0,
    )?;
    let bc = compute_barcode(&build_filtration(&f, Mode::Reduced)?);
    let iec = iec_at_epsilon_max(&bc);
    let closed = closed_form_iec(&f);
    Ok(Thm1Report {
        iec_from_barcode: iec,
        closed_form: closed,
        interaction_information: interaction,
        max_residual: max_abs_pairwise(&[iec, closed, interaction]),
    })
}

/// Routes compared for the n-tangle identity on an even number of qubits.
#[derive(Debug, Clone, Copy)]
pub struct Thm2Report {
    pub iec_from_barcode: f64,
    pub closed_form: f64,
    pub interaction_information: f64,
    pub minkowski_length: f64,
    pub n_tangle: f64,
    pub max_residual: f64,
}

/// Check the chain IEC = I_2 = Minkowski length = n-tangle for a state on an
/// even number of qubits.
pub fn verify_thm2(s: &MultipartiteState) -> Result<Thm2Report> {
    if !s.is_all_qubits() {
        return Err(Error::InvalidParameter(
            "the n-tangle identity needs qubit parties".into(),
        ));
    }
    if s.n_parties() % 2 != 0 {
        return Err(Error::InvalidParameter(
            "the n-tangle identity needs an even number of qubits".into(),
        ));
    }
    let base = verify_thm1(s, 2.0)?;
    let minkowski = functionals::minkowski_length(&functionals::bloch_vector(s)?);
    let tangle = functionals::n_tangle_direct(s)?;
    Ok(Thm2Report {
        iec_from_barcode: base.iec_from_barcode,
        closed_form: base.closed_form,
        interaction_information: base.interaction_information,
        minkowski_length: minkowski,
        n_tangle: tangle,
        max_residual: max_abs_pairwise(&[
            base.iec_from_barcode,
            base.closed_form,
            base.interaction_information,
            minkowski,
            tangle,
        ]),
    })
}

/// Relative IEC against the negated conditional mutual information.
#[derive(Debug, Clone, Copy)]
pub struct Thm3Report {
    pub relative_iec_from_barcode: f64,
    pub relative_iec_closed_form: f64,
    pub conditional_mutual_information: f64,
    pub max_residual: f64,
}

/// Check that the q -> 1 relative IEC over the subcomplex on {A, B} equals
/// -I(A:B|R) for a tripartite state. The value is non-positive by strong
/// subadditivity; the caller asserts the sign.
pub fn verify_thm3(s: &MultipartiteState) -> Result<Thm3Report> {
    if s.n_parties() != 3 {
        return Err(Error::PartyCountMismatch {
            expected: 3,
            actual: s.n_parties(),
        });
    }
    let f = functionals::make_total_correlation_functional(s, 1.0, 1.0)?;
    let rel = relative_iec(&f, 0b011)?;
    let cmi = functionals::conditional_mutual_information(s)?;
    Ok(Thm3Report {
        relative_iec_from_barcode: rel.from_barcode,
        relative_iec_closed_form: rel.closed_form,
        conditional_mutual_information: cmi,
        max_residual: max_abs_pairwise(&[rel.from_barcode, rel.closed_form, -cmi]),
    })
}

/// Relative IEC against the mutual information for a bipartite state.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryReport {
    pub relative_iec_from_barcode: f64,
    pub relative_iec_closed_form: f64,
    pub mutual_information: f64,
    pub max_residual: f64,
}

/// Check that the q -> 1 IEC of a bipartite state relative to one vertex
/// equals I(A:B), which is non-negative by subadditivity.
pub fn verify_corollary_bipartite(s: &MultipartiteState) -> Result<CorollaryReport> {
    if s.n_parties() != 2 {
        return Err(Error::PartyCountMismatch {
            expected: 2,
            actual: s.n_parties(),
        });
    }
    let f = functionals::make_total_correlation_functional(s, 1.0, 1.0)?;
    let rel = relative_iec(&f, 0b01)?;
    let ent = |mask: Subset| functionals::tsallis_entropy(s, mask, 1.0);
    let mutual = ent(0b01)? + ent(0b10)? - ent(0b11)?;
    Ok(CorollaryReport {
        relative_iec_from_barcode: rel.from_barcode,
        relative_iec_closed_form: rel.closed_form,
        mutual_information: mutual,
        max_residual: max_abs_pairwise(&[rel.from_barcode, rel.closed_form, mutual]),
    })
}

// --- one-state summary -------------------------------------------------------

/// Everything the summary table and the JSON document report for one state.
#[derive(Debug, Clone)]
pub struct SummaryReport {
    pub q: f64,
    pub rescale: f64,
    pub epsilon_max: f64,
    /// Integrated Betti numbers at epsilon_max, by dimension.
    pub integrated_betti: Vec<f64>,
    pub total_persistence: f64,
    /// Reduced-mode integrated Euler characteristic at epsilon_max.
    pub iec: f64,
    pub closed_form_iec: f64,
    /// Raw I_q of the state (not divided by the rescale factor).
    pub interaction_information: f64,
    /// Present for qubit states on an even number of parties.
    pub n_tangle: Option<f64>,
    /// Present for qubit states on at most 8 parties.
    pub minkowski_length: Option<f64>,
    pub residual_iec_vs_closed_form: f64,
    pub residual_iec_vs_interaction: f64,
    /// |iec - tangle/rescale|, only meaningful at q = 2.
    pub residual_iec_vs_tangle: Option<f64>,
    pub residual_iec_vs_minkowski: Option<f64>,
}

/// Compute the reduced-mode summary of a state at the given q and rescale.
pub fn summarize(s: &MultipartiteState, q: f64, rescale: f64) -> Result<SummaryReport> {
    let ents = functionals::subset_entropies(s, q)?;
    let interaction =
        functionals::interaction_information_from_entropies(&ents, s.n_parties());
    let f = functionals::total_correlation_functional_from_entropies(
        &ents,
        s.n_parties(),
        q,
        rescale,
        0,
    )?;
    let bc = compute_barcode(&build_filtration(&f, Mode::Reduced)?);
    let eps_max = bc.epsilon_max();
    let iec = iec_at_epsilon_max(&bc);
    let closed = closed_form_iec(&f);
    let betti: Vec<f64> = (0..s.n_parties()).map(|k| integrated_betti(&bc, k, eps_max)).collect();

    let n_tangle = if s.is_all_qubits() && s.n_parties() % 2 == 0 {
        Some(functionals::n_tangle_direct(s)?)
    } else {
        None
    };
    let minkowski = if s.is_all_qubits() && s.n_parties() <= functionals::MAX_BLOCH_QUBITS {
        Some(functionals::minkowski_length(&functionals::bloch_vector(s)?))
    } else {
        None
    };
    let tangle_residual = match n_tangle {
        Some(t) if q == 2.0 => Some((iec - t / rescale).abs()),
        _ => None,
    };
    let minkowski_residual = match minkowski {
        Some(m) if q == 2.0 => Some((iec - m / rescale).abs()),
        _ => None,
    };
    Ok(SummaryReport {
        q,
        rescale,
        epsilon_max: eps_max,
        total_persistence: betti.iter().sum(),
        integrated_betti: betti,
        iec,
        closed_form_iec: closed,
        interaction_information: interaction,
        n_tangle,
        minkowski_length: minkowski,
        residual_iec_vs_closed_form: (iec - closed).abs(),
        residual_iec_vs_interaction: (iec - interaction / rescale).abs(),
        residual_iec_vs_tangle: tangle_residual,
        residual_iec_vs_minkowski: minkowski_residual,
    })
}

/// Seeded batches of the theorem and consistency checks, shared by the
/// `verify` subcommand and the acceptance tests. Per-trial seeds are
/// `seed + trial index`, and every failure records a state spec that
/// reproduces it.
pub mod suites {
    use super::*;
    use crate::functionals::{
        make_total_correlation_functional, total_correlation_monotonicity_margin,
    };
    use crate::linalg::{
        apply_local_unitaries, random_local_unitaries, random_mixed_state, random_pure_state,
    };
    use crate::persistence::{betti_curve, complex_at_stats, oracle_betti};
    use crate::states::graph_state;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub const SUITE_TOL: f64 = 1e-8;
    pub const SIGN_TOL: f64 = 1e-10;
    pub const BARCODE_TOL: f64 = 1e-9;

    #[derive(Debug, Clone)]
    pub struct TrialFailure {
        pub trial: usize,
        pub seed: u64,
        pub spec: String,
        pub detail: String,
    }

    #[derive(Debug, Clone)]
    pub struct SuiteOutcome {
        pub name: &'static str,
        pub trials: usize,
        pub tolerance: f64,
        pub max_residual: f64,
        pub failures: Vec<TrialFailure>,
    }

    impl SuiteOutcome {
        pub fn passed(&self) -> bool {
            self.failures.is_empty()
        }
    }

    struct SuiteRun {
        outcome: SuiteOutcome,
    }

    impl SuiteRun {
        fn new(name: &'static str, trials: usize, tolerance: f64) -> Self {
            Self {
                outcome: SuiteOutcome {
                    name,
                    trials,
                    tolerance,
                    max_residual: 0.0,
                    failures: Vec::new(),
                },
            }
        }

        fn record(&mut self, trial: usize, seed: u64, spec: &str, residual: f64, detail: String) {
            self.outcome.max_residual = self.outcome.max_residual.max(residual);
            if residual > self.outcome.tolerance {
                self.outcome.failures.push(TrialFailure {
                    trial,
                    seed,
                    spec: spec.to_string(),
                    detail,
                });
            }
        }

        fn error(&mut self, trial: usize, seed: u64, spec: &str, err: impl ToString) {
            self.outcome.max_residual = f64::INFINITY;
            self.outcome.failures.push(TrialFailure {
                trial,
                seed,
                spec: spec.to_string(),
                detail: err.to_string(),
            });
        }

        fn finish(self) -> SuiteOutcome {
            self.outcome
        }
    }

    fn random_dims(rng: &mut ChaCha8Rng, parties: usize) -> Vec<usize> {
        (0..parties).map(|_| if rng.random::<bool>() { 3 } else { 2 }).collect()
    }

    fn spec_string(kind: &str, dims: &[usize], seed: u64) -> String {
        format!(
            r#"{{"kind":"{kind}","dims":{dims:?},"seed":{seed}}}"#,
            dims = dims
        )
    }

    /// Random state with 3 to 5 parties of local dimension 2 or 3, unless a
    /// dims override pins the party structure.
    fn sample_state(
        trial: usize,
        seed: u64,
        dims_override: Option<&[usize]>,
    ) -> (MultipartiteState, String) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = match dims_override {
            Some(d) => d.to_vec(),
            None => {
                let parties = 3 + trial % 3;
                random_dims(&mut rng, parties)
            }
        };
        if trial % 2 == 0 {
            let s = random_pure_state(&dims, seed).expect("valid dims");
            (s, spec_string("random_pure", &dims, seed))
        } else {
            let s = random_mixed_state(&dims, seed).expect("valid dims");
            (s, spec_string("random_mixed", &dims, seed))
        }
    }

    /// Interaction-information identity on random states, q in {1, 1.5, 2}.
    pub fn thm1_suite(trials: usize, seed: u64, dims: Option<&[usize]>) -> SuiteOutcome {
        let mut run = SuiteRun::new("thm1", trials, SUITE_TOL);
        for trial in 0..trials {
            let trial_seed = seed.wrapping_add(trial as u64);
            let (state, spec) = sample_state(trial, trial_seed, dims);
            let q = [1.0, 1.5, 2.0][(trial / 3) % 3];
            match verify_thm1(&state, q) {
                Ok(report) => run.record(
                    trial,
                    trial_seed,
                    &spec,
                    report.max_residual,
                    format!("q={q}: {report:?}"),
                ),
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }

    /// Tangle identity on random pure 4-qubit states.
    pub fn thm2_suite(trials: usize, seed: u64, dims: Option<&[usize]>) -> SuiteOutcome {
        let mut run = SuiteRun::new("thm2", trials, SUITE_TOL);
        let dims = dims.map_or_else(|| vec![2; 4], <[usize]>::to_vec);
        for trial in 0..trials {
            let trial_seed = seed.wrapping_add(trial as u64);
            let spec = spec_string("random_pure", &dims, trial_seed);
            let state = random_pure_state(&dims, trial_seed).expect("valid dims");
            match verify_thm2(&state) {
                Ok(report) => run.record(
                    trial,
                    trial_seed,
                    &spec,
                    report.max_residual,
                    format!("{report:?}"),
                ),
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }

    /// Relative IEC vs -I(A:B|R) on random 3-qubit mixed states, including
    /// the non-positivity guaranteed by strong subadditivity.
    pub fn thm3_suite(trials: usize, seed: u64, dims: Option<&[usize]>) -> SuiteOutcome {
        let mut run = SuiteRun::new("thm3", trials, SUITE_TOL);
        let dims = dims.map_or_else(|| vec![2; 3], <[usize]>::to_vec);
        for trial in 0..trials {
            let trial_seed = seed.wrapping_add(trial as u64);
            let spec = spec_string("random_mixed", &dims, trial_seed);
            let state = random_mixed_state(&dims, trial_seed).expect("valid dims");
            match verify_thm3(&state) {
                Ok(report) => {
                    let sign_excess = (report.relative_iec_from_barcode - SIGN_TOL).max(0.0);
                    let residual = report.max_residual.max(sign_excess);
                    run.record(trial, trial_seed, &spec, residual, format!("{report:?}"));
                }
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }

    /// Bipartite corollary: IEC relative to one vertex equals I(A:B) >= 0.
    pub fn corollary_suite(trials: usize, seed: u64, dims: Option<&[usize]>) -> SuiteOutcome {
        let mut run = SuiteRun::new("corollary", trials, SUITE_TOL);
        for trial in 0..trials {
            let trial_seed = seed.wrapping_add(trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let dims = match dims {
                Some(d) => d.to_vec(),
                None => random_dims(&mut rng, 2),
            };
            let spec = spec_string("random_mixed", &dims, trial_seed);
            let state = random_mixed_state(&dims, trial_seed).expect("valid dims");
            match verify_corollary_bipartite(&state) {
                Ok(report) => {
                    let sign_excess = (-report.relative_iec_from_barcode - SIGN_TOL).max(0.0);
                    let residual = report.max_residual.max(sign_excess);
                    run.record(trial, trial_seed, &spec, residual, format!("{report:?}"));
                }
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }

    /// Inclusion-monotonicity margins of the raw total-correlation table.
    pub fn monotonicity_suite(trials: usize, seed: u64, dims: Option<&[usize]>) -> SuiteOutcome {
        let mut run = SuiteRun::new("monotonicity", trials, BARCODE_TOL);
        for trial in 0..trials {
            let trial_seed = seed.wrapping_add(trial as u64);
            let (state, spec) = sample_state(trial, trial_seed, dims);
            let q = [1.0, 1.5, 2.0][(trial / 3) % 3];
            match total_correlation_monotonicity_margin(&state, q) {
                Ok(margin) => run.record(
                    trial,
                    trial_seed,
                    &spec,
                    margin,
                    format!("q={q}, worst covering-pair margin {margin:.3e}"),
                ),
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }

    /// Barcodes are unchanged by random local unitaries.
    pub fn lu_invariance_suite(trials: usize, seed: u64, dims: Option<&[usize]>) -> SuiteOutcome {
        let mut run = SuiteRun::new("lu-invariance", trials, BARCODE_TOL);
        for trial in 0..trials {
            let trial_seed = seed.wrapping_add(trial as u64);
            let (state, spec) = sample_state(trial, trial_seed, dims);
            let q = if trial % 2 == 0 { 2.0 } else { 1.0 };
            let unitary_seed = trial_seed ^ 0x9e37_79b9_7f4a_7c15;
            let result = (|| -> Result<f64> {
                let us = random_local_unitaries(state.dims(), unitary_seed)?;
                let rotated = apply_local_unitaries(&state, &us)?;
                let f = make_total_correlation_functional(&state, q, 1.0)?;
                let g = make_total_correlation_functional(&rotated, q, 1.0)?;
                let bc_f = compute_barcode(&build_filtration(&f, Mode::Reduced)?);
                let bc_g = compute_barcode(&build_filtration(&g, Mode::Reduced)?);
                Ok(barcode_deviation(&bc_f, &bc_g, BARCODE_TOL).unwrap_or(f64::INFINITY))
            })();
            match result {
                Ok(dev) => run.record(
                    trial,
                    trial_seed,
                    &spec,
                    dev,
                    format!("q={q}, unitary seed {unitary_seed}, max interval deviation {dev:.3e}"),
                ),
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }

    /// Barcode-derived Betti numbers against the rank oracle, exactly, in all
    /// three modes, at 20 sampled filtration values per state.
    pub fn oracle_suite(states: usize, seed: u64, dims: Option<&[usize]>) -> SuiteOutcome {
        let mut run = SuiteRun::new("oracle", states, 0.0);
        for trial in 0..states {
            let trial_seed = seed.wrapping_add(trial as u64);
            let (state, spec) = sample_state(trial, trial_seed, dims);
            let n = state.n_parties();
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed ^ 0x517c_c1b7_2722_0a95);
            let result = (|| -> Result<f64> {
                let f = make_total_correlation_functional(&state, 2.0, 1.0)?;
                let relative_to = if trial % 2 == 0 || n == 2 { 0b1 } else { 0b11 };
                let modes = [Mode::Absolute, Mode::Reduced, Mode::Relative(relative_to)];
                let mut worst = 0usize;
                for mode in modes {
                    let bc = compute_barcode(&build_filtration(&f, mode)?);
                    for _ in 0..20 {
                        let eps = rng.random_range(-0.1..f.epsilon_max() * 1.1);
                        for k in 0..n {
                            let via_barcode = betti_curve(&bc, k).value_at(eps);
                            let via_oracle = oracle_betti(&f, eps, k, mode)?;
                            worst = worst.max(via_barcode.abs_diff(via_oracle));
                        }
                    }
                }
                Ok(worst as f64)
            })();
            match result {
                Ok(worst) => run.record(
                    trial,
                    trial_seed,
                    &spec,
                    worst,
                    format!("max Betti discrepancy {worst}"),
                ),
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }

    /// The lattice-walk sublevel construction agrees with brute force and
    /// never evaluates more, strictly fewer when closure admits anything.
    pub fn heuristic_suite(pairs: usize, seed: u64, dims: Option<&[usize]>) -> SuiteOutcome {
        let mut run = SuiteRun::new("heuristic", pairs, 0.0);
        for trial in 0..pairs {
            let trial_seed = seed.wrapping_add(trial as u64);
            let (state, spec) = sample_state(trial, trial_seed, dims);
            let n = state.n_parties();
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed ^ 0x2545_f491_4f6c_dd1d);
            match make_total_correlation_functional(&state, 2.0, 1.0) {
                Ok(f) => {
                    let eps = rng.random_range(-0.1..f.epsilon_max() * 1.1);
                    let (got, stats) = complex_at_stats(&f, eps);
                    let brute: Vec<Subset> = subset::all_nonempty(n)
                        .filter(|&m| f.value(m) <= eps)
                        .collect();
                    let total = (1usize << n) - 1;
                    let sets_match = got == brute;
                    let budget_ok = stats.evaluations <= total
                        && (stats.admitted_by_closure == 0 || stats.evaluations < total);
                    let residual = if sets_match && budget_ok { 0.0 } else { 1.0 };
                    run.record(
                        trial,
                        trial_seed,
                        &spec,
                        residual,
                        format!(
                            "eps {eps}, match {sets_match}, {} evals for {} simplices ({} by closure)",
                            stats.evaluations,
                            got.len(),
                            stats.admitted_by_closure
                        ),
                    );
                }
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }

    /// Reduced IEC at q = 2 of random 6-vertex graph states equals 1 when all
    /// degrees are odd and 0 otherwise.
    pub fn graph_parity_suite(graphs: usize, seed: u64) -> SuiteOutcome {
        let mut run = SuiteRun::new("graph-parity", graphs, SUITE_TOL);
        let n = 6usize;
        for trial in 0..graphs {
            let trial_seed = seed.wrapping_add(trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<bool>() {
                        edges.push((u, v));
                    }
                }
            }
            let mut degree = vec![0usize; n];
            for &(u, v) in &edges {
                degree[u] += 1;
                degree[v] += 1;
            }
            let expected = if degree.iter().all(|&d| d % 2 == 1) { 1.0 } else { 0.0 };
            let edge_list: Vec<Vec<usize>> = edges.iter().map(|&(u, v)| vec![u, v]).collect();
            let spec = format!(
                r#"{{"kind":"graph","n":{n},"edges":{}}}"#,
                serde_json::to_string(&edge_list).expect("serializable")
            );
            let result = (|| -> Result<f64> {
                let state = graph_state(n, &edges)?;
                let f = make_total_correlation_functional(&state, 2.0, 1.0)?;
                let bc = compute_barcode(&build_filtration(&f, Mode::Reduced)?);
                Ok(iec_at_epsilon_max(&bc))
            })();
            match result {
                Ok(iec) => run.record(
                    trial,
                    trial_seed,
                    &spec,
                    (iec - expected).abs(),
                    format!("iec {iec}, expected {expected} (degrees {degree:?})"),
                ),
                Err(e) => run.error(trial, trial_seed, &spec, e),
            }
        }
        run.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{make_total_correlation_functional, SubsetFunctional};
    use crate::linalg::{random_mixed_state, random_pure_state, MultipartiteState};
    use crate::states::{ghz, graph_state, parse_state_spec};
    use num_complex::Complex64;

    const LN2: f64 = std::f64::consts::LN_2;

    fn k3_barcode() -> Barcode {
        let s = graph_state(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let f = make_total_correlation_functional(&s, 2.0, 1.0).unwrap();
        compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap())
    }

    #[test]
    fn integrated_betti_triangle() {
        let bc = k3_barcode();
        assert!((integrated_betti(&bc, 1, 1.5) - 1.0).abs() < 1e-9);
        assert!((integrated_betti(&bc, 0, 1.5) - 1.0).abs() < 1e-9);
        assert!(integrated_betti(&bc, 2, 1.5).abs() < 1e-12);
        assert!((total_persistence(&bc, 1.5) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn iec_examples() {
        assert!(iec_at_epsilon_max(&k3_barcode()).abs() < 1e-9);

        let bell = ghz(2).unwrap();
        let f = make_total_correlation_functional(&bell, 2.0, 1.0).unwrap();
        let bc = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
        assert!((iec_at_epsilon_max(&bc) - 1.0).abs() < 1e-9);

        let prod = parse_state_spec(
            r#"{"kind":"product","factors":[[[1,0],[1,0]],[[1,0],[0,0]]]}"#,
        )
        .unwrap();
        let f = make_total_correlation_functional(&prod, 2.0, 1.0).unwrap();
        let bc = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
        assert!(iec_at_epsilon_max(&bc).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let bell = ghz(2).unwrap();
        let f = make_total_correlation_functional(&bell, 2.0, 1.0).unwrap();
        assert!((closed_form_iec(&f) - 1.0).abs() < 1e-12);

        let f4 = make_total_correlation_functional(&ghz(4).unwrap(), 2.0, 1.0).unwrap();
        assert!((closed_form_iec(&f4) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_scales_linearly() {
        let s = random_mixed_state(&[2, 2, 2], 15).unwrap();
        for rescale in [2.0, 7.5] {
            let f = make_total_correlation_functional(&s, 2.0, 1.0).unwrap();
            let g = make_total_correlation_functional(&s, 2.0, rescale).unwrap();
            assert!(
                (closed_form_iec(&g) * rescale - closed_form_iec(&f)).abs() <= 1e-9,
                "rescale {rescale}"
            );
        }
    }

    #[test]
    fn closed_form_matches_barcode_route_always() {
        for seed in 0..6u64 {
            let s = if seed % 2 == 0 {
                random_pure_state(&[2, 2, 2], 500 + seed).unwrap()
            } else {
                random_mixed_state(&[2, 3], 500 + seed).unwrap()
            };
            let q = [1.0, 1.5, 2.0][(seed % 3) as usize];
            let f = make_total_correlation_functional(&s, q, 1.0).unwrap();
            let bc = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
            let residual = (iec_at_epsilon_max(&bc) - closed_form_iec(&f)).abs();
            assert!(residual <= 1e-9, "seed {seed} q {q}: {residual}");
        }
    }

    #[test]
    fn relative_iec_ghz3() {
        let s = ghz(3).unwrap();
        let f = make_total_correlation_functional(&s, 1.0, 1.0).unwrap();
        let rel = relative_iec(&f, 0b011).unwrap();
        assert!((rel.from_barcode + LN2).abs() < 1e-9, "{}", rel.from_barcode);
        assert!(rel.residual() <= 1e-9);
    }

    #[test]
    fn relative_iec_is_nonpositive_on_tripartite_states() {
        for seed in 0..8u64 {
            let s = random_mixed_state(&[2, 2, 2], 700 + seed).unwrap();
            let f = make_total_correlation_functional(&s, 1.0, 1.0).unwrap();
            let rel = relative_iec(&f, 0b011).unwrap();
            assert!(rel.from_barcode <= 1e-10, "seed {seed}: {}", rel.from_barcode);
            assert!(rel.residual() <= 1e-9);
        }
    }

    #[test]
    fn corollary_bell_mutual_information() {
        let report = verify_corollary_bipartite(&ghz(2).unwrap()).unwrap();
        assert!((report.relative_iec_from_barcode - 2.0 * LN2).abs() < 1e-9);
        assert!(report.max_residual <= 1e-9);
        assert!(report.relative_iec_from_barcode >= -1e-10);
    }

    #[test]
    fn alternating_sum_examples() {
        assert!(barcode_alternating_sum(&k3_barcode()).unwrap().abs() < 1e-12);

        let bell = ghz(2).unwrap();
        let f = make_total_correlation_functional(&bell, 2.0, 1.0).unwrap();
        let bc = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
        assert!((barcode_alternating_sum(&bc).unwrap() - 1.0).abs() < 1e-12);

        let abs_bc = compute_barcode(&build_filtration(&f, Mode::Absolute).unwrap());
        assert!(matches!(
            barcode_alternating_sum(&abs_bc),
            Err(Error::InfiniteBar)
        ));
    }

    #[test]
    fn alternating_sum_equals_iec() {
        for seed in 0..5u64 {
            let s = random_mixed_state(&[2, 2, 2], 800 + seed).unwrap();
            let f = make_total_correlation_functional(&s, 2.0, 1.0).unwrap();
            let bc = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
            let a = barcode_alternating_sum(&bc).unwrap();
            let b = iec_at_epsilon_max(&bc);
            assert!((a - b).abs() <= 1e-12, "seed {seed}: {a} vs {b}");
        }
    }

    #[test]
    fn all_odd_degree_graphs_have_unit_alternating_sum() {
        // complete graph K6 and the star K_{1,5}: every vertex degree is odd
        let k6_edges: Vec<(usize, usize)> =
            (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).collect();
        let star_edges: Vec<(usize, usize)> = (1..6).map(|v| (0, v)).collect();
        for edges in [k6_edges, star_edges] {
            let s = graph_state(6, &edges).unwrap();
            let f = make_total_correlation_functional(&s, 2.0, 1.0).unwrap();
            let bc = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
            let value = barcode_alternating_sum(&bc).unwrap();
            assert!((value - 1.0).abs() <= 1e-8, "{value}");
        }
    }

    #[test]
    fn thm1_on_mixed_dims() {
        let s = random_mixed_state(&[2, 3, 2], 900).unwrap();
        let report = verify_thm1(&s, 1.5).unwrap();
        assert!(report.max_residual <= 1e-8, "{report:?}");
    }

    #[test]
    fn thm2_on_ghz6() {
        let report = verify_thm2(&ghz(6).unwrap()).unwrap();
        assert!(report.max_residual <= 1e-8, "{report:?}");
        assert!((report.n_tangle - 1.0).abs() <= 1e-8);
        assert!((report.iec_from_barcode - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn thm2_preconditions() {
        assert!(verify_thm2(&ghz(3).unwrap()).is_err());
        let s = random_mixed_state(&[3, 3], 1).unwrap();
        assert!(verify_thm2(&s).is_err());
    }

    #[test]
    fn thm3_on_random_mixed() {
        let s = random_mixed_state(&[2, 2, 2], 901).unwrap();
        let report = verify_thm3(&s).unwrap();
        assert!(report.max_residual <= 1e-8, "{report:?}");
        assert!(report.relative_iec_from_barcode <= 1e-10);
        assert!(verify_thm3(&ghz(2).unwrap()).is_err());
    }

    #[test]
    fn barcode_matching_and_deviation() {
        let a = k3_barcode();
        assert_eq!(barcode_deviation(&a, &a, 1e-12), Some(0.0));

        let bell = ghz(2).unwrap();
        let f = make_total_correlation_functional(&bell, 2.0, 1.0).unwrap();
        let b = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
        assert!(!barcodes_match(&a, &b, 1e-6));
    }

    #[test]
    fn perturbation_moves_iec_only_slightly() {
        let delta = 1e-4;
        for seed in 0..5u64 {
            let s = random_mixed_state(&[2, 2, 2], 950 + seed).unwrap();
            let dim = s.dim();
            let mixed_in = s.rho().scale(Complex64::new(1.0 - delta, 0.0)).add(
                &crate::linalg::ComplexMatrix::identity(dim)
                    .scale(Complex64::new(delta / dim as f64, 0.0)),
            );
            let perturbed = MultipartiteState::new(mixed_in, vec![2, 2, 2]).unwrap();
            let f = make_total_correlation_functional(&s, 2.0, 1.0).unwrap();
            let g = make_total_correlation_functional(&perturbed, 2.0, 1.0).unwrap();
            let bc_f = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
            let bc_g = compute_barcode(&build_filtration(&g, Mode::Reduced).unwrap());
            let gap = (iec_at_epsilon_max(&bc_f) - iec_at_epsilon_max(&bc_g)).abs();
            assert!(gap <= 0.01, "seed {seed}: {gap}");
        }
    }

    #[test]
    fn summary_of_ghz6() {
        let report = summarize(&ghz(6).unwrap(), 2.0, 1.0).unwrap();
        assert!((report.iec - 1.0).abs() <= 1e-8);
        assert!((report.interaction_information - 1.0).abs() <= 1e-8);
        assert_eq!(report.n_tangle.is_some(), true);
        assert!((report.n_tangle.unwrap() - 1.0).abs() <= 1e-8);
        assert!((report.minkowski_length.unwrap() - 1.0).abs() <= 1e-8);
        assert!(report.residual_iec_vs_closed_form <= 1e-9);
        assert!(report.residual_iec_vs_tangle.unwrap() <= 1e-8);
    }

    #[test]
    fn summary_hides_qubit_quantities_when_inapplicable() {
        let s = random_mixed_state(&[2, 3], 77).unwrap();
        let report = summarize(&s, 2.0, 1.0).unwrap();
        assert!(report.n_tangle.is_none());
        assert!(report.minkowski_length.is_none());
        // odd qubit count: Minkowski length defined, tangle not reported
        let s3 = random_pure_state(&[2, 2, 2], 78).unwrap();
        let report = summarize(&s3, 2.0, 1.0).unwrap();
        assert!(report.n_tangle.is_none());
        assert!(report.minkowski_length.is_some());
    }

    #[test]
    fn summary_rescale_scales_iec() {
        let s = ghz(4).unwrap();
        let base = summarize(&s, 2.0, 1.0).unwrap();
        let scaled = summarize(&s, 2.0, 4.0).unwrap();
        assert!((scaled.iec - base.iec / 4.0).abs() <= 1e-12);
        assert!((scaled.epsilon_max - base.epsilon_max / 4.0).abs() <= 1e-12);
        assert!(scaled.residual_iec_vs_interaction <= 1e-9);
        assert!(scaled.residual_iec_vs_tangle.unwrap() <= 1e-9);
    }

    #[test]
    fn custom_functional_closed_form() {
        // F supported on the full pair only
        let f = SubsetFunctional::from_values("edge", 2, vec![0.0, 0.0, 0.0, 3.0]).unwrap();
        assert!((closed_form_iec(&f) - 3.0).abs() < 1e-15);
        let bc = compute_barcode(&build_filtration(&f, Mode::Reduced).unwrap());
        assert!((iec_at_epsilon_max(&bc) - 3.0).abs() < 1e-15);
    }
}
