//! Constructors for named states and a JSON document format for user-defined
//! states.
//!
//! Conventions: party `A_1` is the most significant tensor factor, so a ket
//! like |011> puts the leftmost symbol on `A_1`. Controlled-Z is
//! `diag(1,1,1,-1)` in the computational basis.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, MultipartiteState};

/// Basis-index bit of `party` (0-based) in an `n`-qubit index.
fn qubit_bit(index: usize, party: usize, n: usize) -> usize {
    index >> (n - 1 - party) & 1
}

/// GHZ state (|0...0> + |1...1>)/sqrt(2) on `n` qubits.
pub fn ghz(n: usize) -> Result<MultipartiteState> {
    if n < 2 {
        return Err(Error::InvalidParameter("ghz requires n >= 2".into()));
    }
    let dim = 1usize << n;
    let mut amps = vec![Complex64::ZERO; dim];
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    amps[0] = Complex64::new(inv, 0.0);
    amps[dim - 1] = Complex64::new(inv, 0.0);
    MultipartiteState::from_pure(&amps, vec![2; n])
}

fn validate_graph(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidGraph("graph needs at least 2 vertices".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u},{v}) references a vertex outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
        }
    }
    Ok(())
}

/// Graph state: the product of CZ gates over the edges applied to |+>^n.
///
/// CZ gates are diagonal sign flips, so the edge order cannot affect the
/// result, not even in the last bit.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Result<MultipartiteState> {
    validate_graph(n, edges)?;
    let dim = 1usize << n;
    let amp = 1.0 / (dim as f64).sqrt();
    let mut amps = vec![Complex64::new(amp, 0.0); dim];
    for &(u, v) in edges {
        for (idx, a) in amps.iter_mut().enumerate() {
            if qubit_bit(idx, u, n) == 1 && qubit_bit(idx, v, n) == 1 {
                *a = -*a;
            }
        }
    }
    MultipartiteState::from_pure(&amps, vec![2; n])
}

fn chi_state(terms: &[(usize, f64)]) -> Result<MultipartiteState> {
    let mut amps = vec![Complex64::ZERO; 64];
    for &(idx, w) in terms {
        amps[idx] = Complex64::new(w, 0.0);
    }
    MultipartiteState::from_pure(&amps, vec![2; 6])
}

/// 6-qubit state (1/t)|111111> + (1/t)|111100> + t|000010> + t|000001>, normalized.
pub fn chi4(t: f64) -> Result<MultipartiteState> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("chi4 requires t > 0".into()));
    }
    chi_state(&[(0b111111, 1.0 / t), (0b111100, 1.0 / t), (0b000010, t), (0b000001, t)])
}

/// 6-qubit state (sqrt2/t)|111111> + (1/t)|111000> + t|000100> + t|000010> + t|000001>, normalized.
pub fn chi5(t: f64) -> Result<MultipartiteState> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("chi5 requires t > 0".into()));
    }
    chi_state(&[
        (0b111111, std::f64::consts::SQRT_2 / t),
        (0b111000, 1.0 / t),
        (0b000100, t),
        (0b000010, t),
        (0b000001, t),
    ])
}

/// Three parties of two qubits each, qubit layout (A11 A12)(A21 A22)(A31 A32).
/// psi1 wires three Bell pairs between the parties: (A11,A21), (A12,A31),
/// (A22,A32).
pub fn psi1() -> MultipartiteState {
    let mut amps = vec![Complex64::ZERO; 64];
    let w = 1.0 / 8f64.sqrt();
    for (idx, a) in amps.iter_mut().enumerate() {
        let b = |p: usize| qubit_bit(idx, p, 6);
        if b(0) == b(2) && b(1) == b(4) && b(3) == b(5) {
            *a = Complex64::new(w, 0.0);
        }
    }
    MultipartiteState::from_pure(&amps, vec![4, 4, 4]).expect("valid by construction")
}

/// Same party layout as [`psi1`], but two GHZ triples (A11,A21,A31) and
/// (A12,A22,A32). All marginal spectra coincide with those of psi1.
pub fn psi2() -> MultipartiteState {
    let mut amps = vec![Complex64::ZERO; 64];
    for (idx, a) in amps.iter_mut().enumerate() {
        let b = |p: usize| qubit_bit(idx, p, 6);
        if b(0) == b(2) && b(2) == b(4) && b(1) == b(3) && b(3) == b(5) {
            *a = Complex64::new(0.5, 0.0);
        }
    }
    MultipartiteState::from_pure(&amps, vec![4, 4, 4]).expect("valid by construction")
}

// --- state-spec documents ---------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GhzParams {
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphParams {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductParams {
    factors: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AmplitudesParams {
    dims: Vec<usize>,
    values: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityParams {
    dims: Vec<usize>,
    matrix: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChiParams {
    t: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EmptyParams {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomParams {
    dims: Vec<usize>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorParams {
    factors: Vec<serde_json::Value>,
}

fn parse_err(path: &str, message: impl ToString) -> Error {
    Error::ParseError {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn params<T: serde::de::DeserializeOwned>(path: &str, value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| parse_err(path, e))
}

fn complex_list(values: &[[f64; 2]]) -> Vec<Complex64> {
    values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

/// Normalized pure factor from an amplitude list (normalization is applied,
/// not assumed).
fn pure_factor(path: &str, values: &[[f64; 2]]) -> Result<Vec<Complex64>> {
    if values.len() < 2 {
        return Err(parse_err(path, "amplitude list needs at least 2 entries"));
    }
    let amps = complex_list(values);
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::ZeroState);
    }
    Ok(amps.into_iter().map(|z| z / norm).collect())
}

const MAX_STATE_DIM: usize = 1 << 10;

fn build_spec(
    path: &str,
    value: serde_json::Value,
    default_seed: Option<u64>,
) -> Result<MultipartiteState> {
    let mut obj = match value {
        serde_json::Value::Object(map) => map,
        _ => return Err(parse_err(path, "state spec must be a JSON object")),
    };
    let kind = match obj.remove("kind") {
        Some(serde_json::Value::String(s)) => s,
        Some(_) => return Err(parse_err(&format!("{path}kind"), "kind must be a string")),
        None => return Err(parse_err(&format!("{path}kind"), "missing required field")),
    };
    let rest = serde_json::Value::Object(obj);
    let seed_for = |p: &RandomParams| -> Result<u64> {
        p.seed.or(default_seed).ok_or_else(|| {
            parse_err(
                &format!("{path}seed"),
                "random states need a seed (in the spec or via --seed)",
            )
        })
    };
    let state = match kind.as_str() {
        "ghz" => {
            let p: GhzParams = params(path, rest)?;
            ghz(p.n)?
        }
        "graph" => {
            let p: GraphParams = params(path, rest)?;
            graph_state(p.n, &p.edges)?
        }
        "product" => {
            let p: ProductParams = params(path, rest)?;
            if p.factors.is_empty() {
                return Err(parse_err(&format!("{path}factors"), "needs at least one factor"));
            }
            let mut amps: Vec<Complex64> = vec![Complex64::ONE];
            let mut dims = Vec::new();
            for (i, factor) in p.factors.iter().enumerate() {
                let f = pure_factor(&format!("{path}factors[{i}]"), factor)?;
                dims.push(f.len());
                amps = linalg::kron_vec(&amps, &f);
            }
            MultipartiteState::from_pure(&amps, dims)?
        }
        "amplitudes" => {
            let p: AmplitudesParams = params(path, rest)?;
            let expected: usize = p.dims.iter().product();
            if p.values.len() != expected {
                return Err(parse_err(
                    &format!("{path}values"),
                    format!("expected {expected} amplitudes, got {}", p.values.len()),
                ));
            }
            MultipartiteState::from_pure(&complex_list(&p.values), p.dims)?
        }
        "density" => {
            let p: DensityParams = params(path, rest)?;
            let dim: usize = p.dims.iter().product();
            if dim > MAX_STATE_DIM {
                return Err(Error::TooLarge {
                    what: "state dimension",
                    limit: MAX_STATE_DIM,
                    actual: dim,
                });
            }
            if p.matrix.len() != dim * dim {
                return Err(parse_err(
                    &format!("{path}matrix"),
                    format!("expected {} entries (row-major), got {}", dim * dim, p.matrix.len()),
                ));
            }
            let entries = complex_list(&p.matrix);
            let m = ComplexMatrix::from_fn(dim, |i, j| entries[i * dim + j]);
            let tr = m.trace();
            if tr.norm() < 1e-12 {
                return Err(Error::ZeroState);
            }
            if tr.re <= 0.0 {
                return Err(parse_err(
                    &format!("{path}matrix"),
                    format!("trace must be positive to normalize, got {tr}"),
                ));
            }
            let normalized = m.scale(Complex64::new(1.0 / tr.re, 0.0));
            MultipartiteState::new(normalized, p.dims)
                .map_err(|e| parse_err(&format!("{path}matrix"), e))?
        }
        "chi4" => {
            let p: ChiParams = params(path, rest)?;
            chi4(p.t)?
        }
        "chi5" => {
            let p: ChiParams = params(path, rest)?;
            chi5(p.t)?
        }
        "psi1" => {
            let _: EmptyParams = params(path, rest)?;
            psi1()
        }
        "psi2" => {
            let _: EmptyParams = params(path, rest)?;
            psi2()
        }
        "random_pure" => {
            let p: RandomParams = params(path, rest)?;
            let seed = seed_for(&p)?;
            linalg::random_pure_state(&p.dims, seed)?
        }
        "random_mixed" => {
            let p: RandomParams = params(path, rest)?;
            let seed = seed_for(&p)?;
            linalg::random_mixed_state(&p.dims, seed)?
        }
        "tensor" => {
            let p: TensorParams = params(path, rest)?;
            if p.factors.is_empty() {
                return Err(parse_err(&format!("{path}factors"), "needs at least one factor"));
            }
            let mut rho = ComplexMatrix::identity(1);
            let mut dims = Vec::new();
            for (i, factor) in p.factors.into_iter().enumerate() {
                let sub = build_spec(&format!("{path}factors[{i}]."), factor, default_seed)?;
                dims.extend_from_slice(sub.dims());
                rho = linalg::kron(&rho, sub.rho());
            }
            if rho.dim() > MAX_STATE_DIM {
                return Err(Error::TooLarge {
                    what: "state dimension",
                    limit: MAX_STATE_DIM,
                    actual: rho.dim(),
                });
            }
            MultipartiteState::from_valid_parts(rho, dims)
        }
        other => {
            return Err(parse_err(
                &format!("{path}kind"),
                format!("unknown kind `{other}`"),
            ))
        }
    };
    Ok(state)
}

/// Parse a state-spec document. Random kinds must carry their own `seed`.
pub fn parse_state_spec(document: &str) -> Result<MultipartiteState> {
    parse_state_spec_with_seed(document, None)
}

/// Parse a state-spec document, supplying `default_seed` to random kinds that
/// omit theirs.
pub fn parse_state_spec_with_seed(
    document: &str,
    default_seed: Option<u64>,
) -> Result<MultipartiteState> {
    let value: serde_json::Value =
        serde_json::from_str(document).map_err(|e| parse_err("", e))?;
    build_spec("", value, default_seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset;

    fn marginal_linear_entropy(s: &MultipartiteState, keep: u32) -> f64 {
        1.0 - s.partial_trace(keep).unwrap().trace_power(2).re
    }

    #[test]
    fn ghz2_is_bell() {
        let s = ghz(2).unwrap();
        let m = s.partial_trace(0b01).unwrap();
        let expected = ComplexMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert!(m.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn ghz3_marginal_linear_entropies() {
        let s = ghz(3).unwrap();
        for mask in 1..7u32 {
            assert!(
                (marginal_linear_entropy(&s, mask) - 0.5).abs() < 1e-12,
                "subset {mask:#b}"
            );
        }
    }

    #[test]
    fn ghz_rejects_small_n() {
        assert!(ghz(1).is_err());
        assert!(ghz(0).is_err());
    }

    #[test]
    fn empty_graph_is_plus_product() {
        let s = graph_state(3, &[]).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let z = s.rho()[(i, j)];
                assert!((z.re - 0.125).abs() < 1e-15 && z.im == 0.0);
            }
        }
        for mask in 1..8u32 {
            assert!(marginal_linear_entropy(&s, mask).abs() < 1e-12);
        }
    }

    #[test]
    fn graph_state_edge_order_is_irrelevant() {
        let a = graph_state(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let b = graph_state(4, &[(2, 3), (0, 3), (0, 1), (2, 1)]).unwrap();
        assert_eq!(a.rho().entries(), b.rho().entries());
    }

    #[test]
    fn single_edge_matches_bell_entropy() {
        let s = graph_state(2, &[(0, 1)]).unwrap();
        assert!((s.purity() - 1.0).abs() < 1e-12);
        assert!((marginal_linear_entropy(&s, 0b01) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn graph_rejects_bad_input() {
        assert!(matches!(graph_state(3, &[(0, 0)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(graph_state(3, &[(0, 3)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(
            graph_state(3, &[(0, 1), (1, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(graph_state(1, &[]).is_err());
    }

    #[test]
    fn chi4_symmetric_at_t_one() {
        let s = chi4(1.0).unwrap();
        for idx in [0b111111usize, 0b111100, 0b000010, 0b000001] {
            let got = s.rho()[(idx, idx)];
            assert!((got.re - 0.25).abs() < 1e-12, "population at {idx}");
            assert!(got.im.abs() < 1e-15);
        }
        assert!((s.rho().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_rejects_nonpositive_t() {
        assert!(chi4(0.0).is_err());
        assert!(chi5(-1.0).is_err());
        assert!(chi4(f64::NAN).is_err());
    }

    #[test]
    fn psi_states_have_maximally_mixed_single_marginals() {
        for s in [psi1(), psi2()] {
            for party in 0..3 {
                let m = s.partial_trace(1 << party).unwrap();
                let expected = ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
                assert!(m.max_abs_diff(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn psi_states_share_all_marginal_spectra() {
        let (a, b) = (psi1(), psi2());
        for mask in subset::all_nonempty(3) {
            let sa = a.marginal_spectrum(mask).unwrap();
            let sb = b.marginal_spectrum(mask).unwrap();
            for (x, y) in sa.iter().zip(&sb) {
                assert!((x - y).abs() <= 1e-9, "subset {mask:#b}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn parse_dispatches_to_constructors() {
        let s = parse_state_spec(r#"{"kind":"ghz","n":3}"#).unwrap();
        assert_eq!(s.dims(), &[2, 2, 2]);
        let g = parse_state_spec(r#"{"kind":"graph","n":3,"edges":[[0,1],[1,2],[0,2]]}"#).unwrap();
        let direct = graph_state(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.rho().entries(), direct.rho().entries());
    }

    #[test]
    fn parse_tensor_of_two_bells() {
        let s = parse_state_spec(
            r#"{"kind":"tensor","factors":[{"kind":"ghz","n":2},{"kind":"ghz","n":2}]}"#,
        )
        .unwrap();
        assert_eq!(s.dims(), &[2, 2, 2, 2]);
        let bell = ghz(2).unwrap();
        let expected = linalg::kron(bell.rho(), bell.rho());
        assert!(s.rho().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn parse_rejects_unknown_fields_and_kinds() {
        let err = parse_state_spec(r#"{"kind":"ghz","n":3,"extra":1}"#).unwrap_err();
        assert!(matches!(err, Error::ParseError { .. }), "{err}");
        let err = parse_state_spec(r#"{"kind":"bogus"}"#).unwrap_err();
        assert!(matches!(err, Error::ParseError { .. }));
        let err = parse_state_spec(r#"{"n":3}"#).unwrap_err();
        assert!(matches!(err, Error::ParseError { path, .. } if path == "kind"));
    }

    #[test]
    fn parse_error_paths_point_into_tensors() {
        let err = parse_state_spec(
            r#"{"kind":"tensor","factors":[{"kind":"ghz","n":2},{"kind":"ghz"}]}"#,
        )
        .unwrap_err();
        match err {
            Error::ParseError { path, .. } => assert!(path.starts_with("factors[1]."), "{path}"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn parse_normalizes_amplitudes() {
        let s = parse_state_spec(
            r#"{"kind":"amplitudes","dims":[2],"values":[[3.0,0.0],[0.0,4.0]]}"#,
        )
        .unwrap();
        assert!((s.rho()[(0, 0)].re - 0.36).abs() < 1e-12);
        assert!((s.rho()[(1, 1)].re - 0.64).abs() < 1e-12);
    }

    #[test]
    fn parse_zero_vector_is_zero_state() {
        let err = parse_state_spec(
            r#"{"kind":"amplitudes","dims":[2],"values":[[0.0,0.0],[0.0,0.0]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ZeroState));
    }

    #[test]
    fn parse_density_validates() {
        // diag(1, -0.5) is Hermitian with positive trace but not PSD
        let err = parse_state_spec(
            r#"{"kind":"density","dims":[2],"matrix":[[1,0],[0,0],[0,0],[-0.5,0]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ParseError { .. }), "{err}");
        // valid maximally mixed qubit, unnormalized trace gets fixed
        let s = parse_state_spec(
            r#"{"kind":"density","dims":[2],"matrix":[[2,0],[0,0],[0,0],[2,0]]}"#,
        )
        .unwrap();
        assert!((s.rho()[(0, 0)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parse_random_needs_seed() {
        let doc = r#"{"kind":"random_pure","dims":[2,2]}"#;
        assert!(parse_state_spec(doc).is_err());
        let s = parse_state_spec_with_seed(doc, Some(5)).unwrap();
        let direct = linalg::random_pure_state(&[2, 2], 5).unwrap();
        assert_eq!(s.rho().entries(), direct.rho().entries());
    }

    #[test]
    fn parse_product_of_qubit_factors() {
        let s = parse_state_spec(
            r#"{"kind":"product","factors":[[[1,0],[0,0]],[[1,0],[1,0]]]}"#,
        )
        .unwrap();
        assert_eq!(s.dims(), &[2, 2]);
        // |0> (x) |+>
        assert!((s.rho()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((s.rho()[(1, 1)].re - 0.5).abs() < 1e-12);
        assert!(s.rho()[(2, 2)].norm() < 1e-15);
    }
}
