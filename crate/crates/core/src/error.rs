use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the simulator and the experiment modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("register of {requested} qubits outside supported range 1..={max}")]
    Capacity { requested: usize, max: usize },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("CNOT control and target are both qubit {qubit}")]
    ControlEqualsTarget { qubit: usize },

    #[error("circuit acts on {circuit} qubits but state has {state}")]
    RegisterMismatch { circuit: usize, state: usize },

    #[error("expected {expected} parameters, got {got}")]
    ParamArity { expected: usize, got: usize },

    #[error("parameter slot {slot} unbound ({num_params} parameters supplied)")]
    UnboundSlot { slot: usize, num_params: usize },

    #[error("gate at position {index} is not a parameterized rotation")]
    UnsupportedGate { index: usize },

    #[error("expected {expected} features, got {got}")]
    FeatureArity { expected: usize, got: usize },

    #[error("length mismatch: {left} values vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid feature range: lo {lo} must be below hi {hi}")]
    EmptyRange { lo: f64, hi: f64 },

    #[error("basis threshold {threshold} outside (0, 1)")]
    Threshold { threshold: f64 },

    #[error("unknown encoding name `{name}`")]
    UnknownEncoding { name: String },

    #[error("{what} = {value} outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("bitstring of {got} bits does not match register of {expected} qubits")]
    BitstringLength { expected: usize, got: usize },

    #[error("mitigation mask has {mask} bits for {qubits} qubits")]
    MaskLength { mask: usize, qubits: usize },

    #[error("power iteration did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("labels must be +1 or -1, found {found}")]
    BadLabel { found: f64 },

    #[error("bad IDX magic 0x{magic:08x}")]
    IdxMagic { magic: u32 },

    #[error("IDX payload holds {got} bytes where the shape wants {expected}")]
    IdxLength { expected: usize, got: usize },

    #[error("pooling block {block} does not divide image side {side}")]
    BlockDivisor { side: usize, block: usize },

    #[error("class {class} has {available} samples, need {needed}")]
    InsufficientClass {
        class: u8,
        available: usize,
        needed: usize,
    },

    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
