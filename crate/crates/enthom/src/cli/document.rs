//! The barcode JSON document.
//!
//! Serialization is deterministic: keys in fixed order, every number printed
//! with 17 significant digits (`{:.16e}`), so serialize -> parse -> serialize
//! is byte-identical. Parsing accepts any valid JSON spelling of the same
//! fields and rejects unknown keys.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::functionals::{self, SubsetFunctional};
use crate::linalg::MultipartiteState;
use crate::persistence::{Barcode, Mode};
use crate::subset;
use crate::summaries;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentInterval {
    pub dim: usize,
    pub birth: f64,
    /// `null` encodes an infinite bar.
    pub death: Option<f64>,
    pub birth_simplex: Vec<String>,
    pub death_simplex: Option<Vec<String>>,
    pub zero_length: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentSummaries {
    pub iec: f64,
    pub closed_form_iec: f64,
    pub interaction_information: f64,
    pub integrated_betti: Vec<f64>,
    pub total_persistence: f64,
    pub n_tangle: Option<f64>,
    pub minkowski_length: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarcodeDocument {
    pub schema_version: String,
    pub q: f64,
    pub mode: String,
    pub relative_to: Option<Vec<String>>,
    pub rescale: f64,
    pub epsilon_max: f64,
    pub intervals: Vec<DocumentInterval>,
    pub summaries: DocumentSummaries,
}

/// 17 significant digits; reparsing recovers the identical f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_string(), fmt_f64)
}

fn fmt_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn fmt_labels(labels: &[String]) -> String {
    let inner: Vec<String> = labels.iter().map(|l| fmt_str(l)).collect();
    format!("[{}]", inner.join(","))
}

fn fmt_opt_labels(labels: &Option<Vec<String>>) -> String {
    labels.as_ref().map_or_else(|| "null".to_string(), |l| fmt_labels(l))
}

impl BarcodeDocument {
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"schema_version\": {},\n", fmt_str(&self.schema_version)));
        out.push_str(&format!("  \"q\": {},\n", fmt_f64(self.q)));
        out.push_str(&format!("  \"mode\": {},\n", fmt_str(&self.mode)));
        out.push_str(&format!("  \"relative_to\": {},\n", fmt_opt_labels(&self.relative_to)));
        out.push_str(&format!("  \"rescale\": {},\n", fmt_f64(self.rescale)));
        out.push_str(&format!("  \"epsilon_max\": {},\n", fmt_f64(self.epsilon_max)));
        out.push_str("  \"intervals\": [");
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    ");
            out.push_str(&format!(
                "{{\"dim\": {}, \"birth\": {}, \"death\": {}, \"birth_simplex\": {}, \"death_simplex\": {}, \"zero_length\": {}}}",
                iv.dim,
                fmt_f64(iv.birth),
                fmt_opt_f64(iv.death),
                fmt_labels(&iv.birth_simplex),
                iv.death_simplex
                    .as_ref()
                    .map_or_else(|| "null".to_string(), |l| fmt_labels(l)),
                iv.zero_length
            ));
        }
        if self.intervals.is_empty() {
            out.push_str("],\n");
        } else {
            out.push_str("\n  ],\n");
        }
        out.push_str("  \"summaries\": {\n");
        out.push_str(&format!("    \"iec\": {},\n", fmt_f64(self.summaries.iec)));
        out.push_str(&format!(
            "    \"closed_form_iec\": {},\n",
            fmt_f64(self.summaries.closed_form_iec)
        ));
        out.push_str(&format!(
            "    \"interaction_information\": {},\n",
            fmt_f64(self.summaries.interaction_information)
        ));
        let betti: Vec<String> = self.summaries.integrated_betti.iter().map(|&b| fmt_f64(b)).collect();
        out.push_str(&format!("    \"integrated_betti\": [{}],\n", betti.join(",")));
        out.push_str(&format!(
            "    \"total_persistence\": {},\n",
            fmt_f64(self.summaries.total_persistence)
        ));
        out.push_str(&format!("    \"n_tangle\": {},\n", fmt_opt_f64(self.summaries.n_tangle)));
        out.push_str(&format!(
            "    \"minkowski_length\": {}\n",
            fmt_opt_f64(self.summaries.minkowski_length)
        ));
        out.push_str("  }\n");
        out.push_str("}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BarcodeDocument = serde_json::from_str(text).map_err(|e| Error::ParseError {
            path: String::new(),
            message: e.to_string(),
        })?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::ParseError {
                path: "schema_version".into(),
                message: format!("unsupported version {:?}", doc.schema_version),
            });
        }
        Ok(doc)
    }
}

/// Assemble the document for a computed barcode. `interaction_information`
/// is the raw I_q of the state (independent of the rescale factor); finite
/// intervals shorter than `min_length` are dropped.
pub fn build_document(
    state: &MultipartiteState,
    f: &SubsetFunctional,
    bc: &Barcode,
    q: f64,
    interaction_information: f64,
    rescale: f64,
    min_length: f64,
) -> Result<BarcodeDocument> {
    let eps_max = bc.epsilon_max();
    let intervals: Vec<DocumentInterval> = bc
        .intervals()
        .iter()
        .filter(|iv| match iv.death {
            Some(d) => d - iv.birth >= min_length,
            None => true,
        })
        .map(|iv| DocumentInterval {
            dim: iv.dim,
            birth: iv.birth,
            death: iv.death,
            birth_simplex: state.subset_labels(iv.birth_simplex),
            death_simplex: iv.death_simplex.map(|m| state.subset_labels(m)),
            zero_length: iv.zero_length,
        })
        .collect();

    let relative_to = match bc.mode() {
        Mode::Relative(s) => Some(state.subset_labels(s)),
        _ => None,
    };
    let n_tangle = if state.is_all_qubits() && state.n_parties() % 2 == 0 {
        Some(functionals::n_tangle_direct(state)?)
    } else {
        None
    };
    let minkowski_length =
        if state.is_all_qubits() && state.n_parties() <= functionals::MAX_BLOCH_QUBITS {
            Some(functionals::minkowski_length(&functionals::bloch_vector(state)?))
        } else {
            None
        };
    let integrated_betti: Vec<f64> = (0..state.n_parties())
        .map(|k| summaries::integrated_betti(bc, k, eps_max))
        .collect();

    Ok(BarcodeDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        q,
        mode: bc.mode().label().to_string(),
        relative_to,
        rescale,
        epsilon_max: eps_max,
        intervals,
        summaries: DocumentSummaries {
            iec: summaries::integrated_euler_characteristic(bc, eps_max),
            closed_form_iec: summaries::closed_form_iec_for_mode(f, bc.mode())?,
            interaction_information,
            total_persistence: integrated_betti.iter().sum(),
            integrated_betti,
            n_tangle,
            minkowski_length,
        },
    })
}
