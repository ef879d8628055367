//! A small laboratory for quantum-classifier bias effects.
//!
//! The crate couples an exact statevector simulator with experiment kits for
//! the places bias creeps into quantum machine learning pipelines:
//!
//! * [`sim`] — gates, circuits, expectations, and seeded shot sampling;
//! * [`encode`] — basis / angle / hybrid feature encodings;
//! * [`vqc`] — a fixed variational classifier with parameter-shift training,
//!   the controlled architecture for encoding comparisons;
//! * [`kernel`] — Gram matrices and their concentration as qubits grow;
//! * [`measurement`] — asymmetric readout noise, invert-and-measure
//!   mitigation, and shot-budget error scaling;
//! * [`data`] — IDX (MNIST) ingestion, pooling, and synthetic datasets.
//!
//! Everything stochastic is keyed by 64-bit seeds through [`rng`], so any
//! experiment re-run with the same configuration reproduces its output
//! exactly.

pub mod data;
pub mod encode;
pub mod error;
pub mod kernel;
pub mod measurement;
pub mod rng;
pub mod sim;
pub mod vqc;

pub use error::{Error, Result};
