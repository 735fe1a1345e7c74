//! Persistence barcodes of multipartite entanglement.
//!
//! Given a multipartite quantum state, this crate evaluates the q-deformed
//! total correlation on every subset of parties, uses those values as a
//! sublevel-set filtration of the powerset simplicial complex, and computes
//! persistence barcodes over Z2. Topological summaries of the barcode
//! (integrated Betti numbers, integrated Euler characteristic) coincide with
//! known correlation measures: the deformed interaction information, and for
//! qubit systems the n-tangle and the Minkowski length of the generalized
//! Bloch vector. Relative barcodes connect to conditional mutual information.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, partial trace/transpose, a Jacobi
//!   eigensolver, seeded random states.
//! - [`states`]: named state constructors and a JSON state-spec format.
//! - [`functionals`]: entropies, total correlation, interaction information,
//!   n-tangle, Bloch coefficients, and the sealed subset functional.
//! - [`persistence`]: filtration construction, Z2 barcode reduction, Betti
//!   curves, and an independent rank oracle.
//! - [`summaries`]: integrated summaries, closed forms, and theorem checks.
//! - [`cli`]: the `enthom` command-line interface, JSON documents, SVG plots.

pub mod cli;
pub mod error;
pub mod functionals;
pub mod linalg;
pub mod persistence;
pub mod states;
pub mod subset;
pub mod summaries;

pub use error::{Error, Result};
