//! Feature-vector encodings: how classical data becomes a quantum state.
//!
//! Three families, one qubit per feature:
//!
//! * basis — threshold each feature and prepare the matching basis state;
//! * angle — `RY(π·x_i)` per qubit, sweeping the full Bloch meridian for
//!   features in [0, 1];
//! * hybrid — per-qubit rotation about a chosen axis with a trainable weight,
//!   `R_axis(π·w_i·x_i)`, optionally preceded by a Hadamard on every qubit.
//!
//! Hybrid weights are exposed as circuit parameter slots (scale `π·x_i`), so
//! a trainer can differentiate through them with the parameter-shift rule.
//! Note that hybrid-Z without the Hadamard layer only imprints phases on
//! |0...0⟩: outcome probabilities are then independent of the data.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sim::{Circuit, Statevector};

/// Rotation axis for the hybrid encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Default binarization threshold for the basis encoding.
pub const DEFAULT_BASIS_THRESHOLD: f64 = 0.5;

/// Exact encoding names accepted in configs and on the command line.
pub const ENCODING_NAMES: [&str; 5] = ["basis", "angle", "hybrid-rx", "hybrid-ry", "hybrid-rz"];

#[derive(Debug, Clone, PartialEq)]
pub enum EncodingKind {
    Basis {
        threshold: f64,
    },
    Angle,
    Hybrid {
        axis: Axis,
        weights: Vec<f64>,
        hadamard_pre: bool,
    },
}

/// A chosen encoding scheme plus its settings; produces circuits acting on
/// exactly `num_features` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingSpec {
    kind: EncodingKind,
    num_features: usize,
}

impl EncodingSpec {
    pub fn basis(num_features: usize, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::Threshold { threshold });
        }
        Ok(Self {
            kind: EncodingKind::Basis { threshold },
            num_features,
        })
    }

    pub fn angle(num_features: usize) -> Self {
        Self {
            kind: EncodingKind::Angle,
            num_features,
        }
    }

    /// Hybrid encoding with all weights at 1.0, so the axis-Y variant starts
    /// out identical to the angle encoding.
    pub fn hybrid(num_features: usize, axis: Axis, hadamard_pre: bool) -> Self {
        Self {
            kind: EncodingKind::Hybrid {
                axis,
                weights: vec![1.0; num_features],
                hadamard_pre,
            },
            num_features,
        }
    }

    /// Look up an encoding by its exact config name. `hadamard_pre` only
    /// affects the hybrid variants.
    pub fn from_name(name: &str, num_features: usize, hadamard_pre: bool) -> Result<Self> {
        match name {
            "basis" => Self::basis(num_features, DEFAULT_BASIS_THRESHOLD),
            "angle" => Ok(Self::angle(num_features)),
            "hybrid-rx" => Ok(Self::hybrid(num_features, Axis::X, hadamard_pre)),
            "hybrid-ry" => Ok(Self::hybrid(num_features, Axis::Y, hadamard_pre)),
            "hybrid-rz" => Ok(Self::hybrid(num_features, Axis::Z, hadamard_pre)),
            _ => Err(Error::UnknownEncoding {
                name: name.to_string(),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match &self.kind {
            EncodingKind::Basis { .. } => "basis",
            EncodingKind::Angle => "angle",
            EncodingKind::Hybrid { axis: Axis::X, .. } => "hybrid-rx",
            EncodingKind::Hybrid { axis: Axis::Y, .. } => "hybrid-ry",
            EncodingKind::Hybrid { axis: Axis::Z, .. } => "hybrid-rz",
        }
    }

    pub fn kind(&self) -> &EncodingKind {
        &self.kind
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    /// Trainable weights, present only for the hybrid family.
    pub fn trainable_weights(&self) -> Option<&[f64]> {
        match &self.kind {
            EncodingKind::Hybrid { weights, .. } => Some(weights),
            _ => None,
        }
    }

    /// Encoding circuit for one feature vector. Hybrid circuits carry one
    /// parameter slot per feature; bind them to the weights when applying.
    pub fn circuit(&self, features: &[f64]) -> Result<Circuit> {
        if features.len() != self.num_features {
            return Err(Error::FeatureArity {
                expected: self.num_features,
                got: features.len(),
            });
        }
        match &self.kind {
            EncodingKind::Basis { threshold } => encode_basis(features, *threshold),
            EncodingKind::Angle => encode_angle(features),
            EncodingKind::Hybrid {
                axis,
                weights,
                hadamard_pre,
            } => encode_hybrid(features, weights, *axis, *hadamard_pre),
        }
    }

    /// Encoded state |φ(x)⟩, binding hybrid weights from the spec.
    pub fn state(&self, features: &[f64]) -> Result<Statevector> {
        let circuit = self.circuit(features)?;
        let mut state = Statevector::zero(self.num_features)?;
        let bound: &[f64] = self.trainable_weights().unwrap_or(&[]);
        circuit.apply_to(&mut state, bound)?;
        Ok(state)
    }
}

/// Affine-rescale raw values into [0, 1], clamping anything outside.
pub fn normalize_features(raw: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>> {
    if hi <= lo {
        return Err(Error::EmptyRange { lo, hi });
    }
    Ok(raw
        .iter()
        .map(|&x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0))
        .collect())
}

/// X on qubit i iff `features[i] >= threshold` (ties round up), preparing the
/// basis state of the binarized vector.
pub fn encode_basis(features: &[f64], threshold: f64) -> Result<Circuit> {
    let mut circuit = Circuit::new(features.len())?;
    for (i, &x) in features.iter().enumerate() {
        if x >= threshold {
            circuit.x(i)?;
        }
    }
    Ok(circuit)
}

/// RY(π·x_i) on qubit i.
pub fn encode_angle(features: &[f64]) -> Result<Circuit> {
    let mut circuit = Circuit::new(features.len())?;
    for (i, &x) in features.iter().enumerate() {
        circuit.ry(i, PI * x)?;
    }
    Ok(circuit)
}

/// Optional H on every qubit, then `R_axis(π·w_i·x_i)` on qubit i.
///
/// Weight i is parameter slot i with scale `π·x_i`; apply the returned
/// circuit with the weight vector as its parameters. `weights` is validated
/// here against the feature count.
pub fn encode_hybrid(
    features: &[f64],
    weights: &[f64],
    axis: Axis,
    hadamard_pre: bool,
) -> Result<Circuit> {
    if weights.len() != features.len() {
        return Err(Error::FeatureArity {
            expected: features.len(),
            got: weights.len(),
        });
    }
    let mut circuit = Circuit::new(features.len())?;
    if hadamard_pre {
        for q in 0..features.len() {
            circuit.h(q)?;
        }
    }
    for (i, &x) in features.iter().enumerate() {
        let scale = PI * x;
        match axis {
            Axis::X => circuit.rx_slot(i, i, scale)?,
            Axis::Y => circuit.ry_slot(i, i, scale)?,
            Axis::Z => circuit.rz_slot(i, i, scale)?,
        }
    }
    Ok(circuit)
}
