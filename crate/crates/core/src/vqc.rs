//! A fixed variational classifier trained identically across encodings.
//!
//! The ansatz is `layers` repetitions of one RY slot per qubit followed by a
//! CNOT ring. Prediction is ⟨Z⟩ on the readout qubit after encoding circuit
//! then ansatz, so it always lands in [-1, 1] and is compared against ±1
//! labels with an MSE loss. Gradients are exact parameter-shift evaluations;
//! training uses Adam over seeded mini-batch shuffles and is deterministic
//! for a fixed seed.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::data::Dataset;
use crate::encode::EncodingSpec;
use crate::error::{Error, Result};
use crate::rng;
use crate::sim::{Circuit, Statevector};

// Stream ids under the model/train seed.
const STREAM_INIT: u64 = 1;
const STREAM_SHUFFLE: u64 = 2;

/// Per-qubit RY slots followed by a CNOT ring, repeated `layers` times.
/// `num_params = layers * n_qubits`; the ring is omitted on one qubit.
pub fn build_ansatz(n_qubits: usize, layers: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(n_qubits)?;
    for layer in 0..layers {
        for q in 0..n_qubits {
            circuit.ry_slot(q, layer * n_qubits + q, 1.0)?;
        }
        if n_qubits >= 2 {
            for q in 0..n_qubits {
                circuit.cnot(q, (q + 1) % n_qubits)?;
            }
        }
    }
    Ok(circuit)
}

/// Classifier: encoding, ansatz, and one flat parameter vector holding the
/// ansatz angles followed by the trainable encoding weights (hybrid only).
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    encoding: EncodingSpec,
    ansatz: Circuit,
    params: Vec<f64>,
    readout_qubit: usize,
}

impl Model {
    /// Build a model with small random ansatz angles (uniform in ±0.1 rad
    /// from the seed's init stream) and hybrid weights copied from the
    /// encoding spec.
    pub fn new(encoding: EncodingSpec, layers: usize, seed: u64) -> Result<Self> {
        let n = encoding.num_features();
        let ansatz = build_ansatz(n, layers)?;
        let mut init = rng::substream(seed, STREAM_INIT);
        let mut params: Vec<f64> = (0..ansatz.num_params())
            .map(|_| rand::Rng::gen_range(&mut init, -0.1..0.1))
            .collect();
        if let Some(weights) = encoding.trainable_weights() {
            params.extend_from_slice(weights);
        }
        Ok(Self {
            encoding,
            ansatz,
            params,
            readout_qubit: 0,
        })
    }

    pub fn encoding(&self) -> &EncodingSpec {
        &self.encoding
    }

    pub fn num_qubits(&self) -> usize {
        self.encoding.num_features()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn set_params(&mut self, params: Vec<f64>) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::ParamArity {
                expected: self.params.len(),
                got: params.len(),
            });
        }
        self.params = params;
        Ok(())
    }

    pub fn readout_qubit(&self) -> usize {
        self.readout_qubit
    }

    pub fn with_readout_qubit(mut self, qubit: usize) -> Result<Self> {
        if qubit >= self.num_qubits() {
            return Err(Error::QubitIndex {
                index: qubit,
                num_qubits: self.num_qubits(),
            });
        }
        self.readout_qubit = qubit;
        Ok(self)
    }

    fn ansatz_params(&self) -> &[f64] {
        &self.params[..self.ansatz.num_params()]
    }

    fn encoding_weights(&self) -> &[f64] {
        &self.params[self.ansatz.num_params()..]
    }

    fn encoded_state(&self, features: &[f64]) -> Result<(Circuit, Statevector)> {
        let circuit = self.encoding.circuit(features)?;
        let mut state = Statevector::zero(self.num_qubits())?;
        circuit.apply_to(&mut state, self.encoding_weights())?;
        Ok((circuit, state))
    }

    /// ⟨Z⟩ on the readout qubit after encoding then ansatz.
    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        let (_, mut state) = self.encoded_state(features)?;
        self.ansatz.apply_to(&mut state, self.ansatz_params())?;
        state.expectation_z(self.readout_qubit)
    }
}

/// Mean of (prediction - label)².
pub fn mse_loss(predictions: &[f64], labels: &[f64]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let sum: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(p, l)| (p - l) * (p - l))
        .sum();
    Ok(sum / predictions.len() as f64)
}

/// Prediction and its parameter-shift derivative per model parameter.
/// Each slot occurrence contributes `scale · (f(+π/2) - f(-π/2)) / 2`, with
/// the shift applied to the gate's total resolved angle.
fn predict_with_gradient(model: &Model, features: &[f64]) -> Result<(f64, Vec<f64>)> {
    let (enc_circuit, enc_state) = model.encoded_state(features)?;
    let ansatz_params = model.ansatz_params();
    let readout = model.readout_qubit;

    let mut forward = enc_state.clone();
    model.ansatz.apply_to(&mut forward, ansatz_params)?;
    let pred = forward.expectation_z(readout)?;

    let mut dpred = vec![0.0; model.params.len()];

    // Ansatz occurrences: reuse the encoded state, shift inside the ansatz.
    for (gi, gate) in model.ansatz.gates().iter().enumerate() {
        if let Some((slot, scale)) = gate.slot() {
            let eval = |delta: f64| -> Result<f64> {
                let mut s = enc_state.clone();
                model.ansatz.apply_to_shifted(&mut s, ansatz_params, gi, delta)?;
                s.expectation_z(readout)
            };
            let plus = eval(FRAC_PI_2)?;
            let minus = eval(-FRAC_PI_2)?;
            dpred[slot] += scale * (plus - minus) / 2.0;
        }
    }

    // Encoding-weight occurrences (hybrid): re-encode with the shift, then
    // run the unshifted ansatz.
    let offset = model.ansatz.num_params();
    let weights = model.encoding_weights();
    for (gi, gate) in enc_circuit.gates().iter().enumerate() {
        if let Some((slot, scale)) = gate.slot() {
            let eval = |delta: f64| -> Result<f64> {
                let mut s = Statevector::zero(model.num_qubits())?;
                enc_circuit.apply_to_shifted(&mut s, weights, gi, delta)?;
                model.ansatz.apply_to(&mut s, ansatz_params)?;
                s.expectation_z(readout)
            };
            let plus = eval(FRAC_PI_2)?;
            let minus = eval(-FRAC_PI_2)?;
            dpred[offset + slot] += scale * (plus - minus) / 2.0;
        }
    }

    Ok((pred, dpred))
}

/// Batch-MSE gradient via the parameter-shift rule. Also returns the batch
/// predictions so training can reuse them for the loss.
pub fn parameter_shift_gradient_with_predictions(
    model: &Model,
    features: &[Vec<f64>],
    labels: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: features.len(),
            right: labels.len(),
        });
    }
    if features.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let batch = features.len() as f64;
    // Per-sample terms run in parallel; the reduction below is sequential in
    // sample order so results do not depend on thread scheduling.
    let per_sample: Vec<(f64, Vec<f64>)> = features
        .par_iter()
        .map(|x| predict_with_gradient(model, x))
        .collect::<Result<Vec<_>>>()?;

    let mut grad = vec![0.0; model.params.len()];
    let mut predictions = Vec::with_capacity(features.len());
    for ((pred, dpred), &label) in per_sample.into_iter().zip(labels) {
        let factor = 2.0 * (pred - label) / batch;
        for (g, d) in grad.iter_mut().zip(&dpred) {
            *g += factor * d;
        }
        predictions.push(pred);
    }
    Ok((grad, predictions))
}

/// Batch-MSE gradient via the parameter-shift rule.
pub fn parameter_shift_gradient(
    model: &Model,
    features: &[Vec<f64>],
    labels: &[f64],
) -> Result<Vec<f64>> {
    parameter_shift_gradient_with_predictions(model, features, labels).map(|(grad, _)| grad)
}

/// Classification rule: the sign of the prediction, with sign(0) = +1.
pub fn predicted_label(prediction: f64) -> f64 {
    if prediction >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Fraction of samples with predicted label equal to the true label.
pub fn evaluate(model: &Model, dataset: &Dataset) -> Result<f64> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let predictions: Vec<f64> = dataset
        .features
        .par_iter()
        .map(|x| model.predict(x))
        .collect::<Result<Vec<_>>>()?;
    let correct = predictions
        .iter()
        .zip(&dataset.labels)
        .filter(|(&p, &l)| predicted_label(p) == l)
        .count();
    Ok(correct as f64 / dataset.len() as f64)
}

/// Training hyperparameters. Learning rate 0 is allowed and performs null
/// updates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub seed: u64,
    pub layers: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 20,
            batch_size: 16,
            learning_rate: 0.01,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            seed: 0,
            layers: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRow {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    pub test_acc: f64,
}

/// Training trace plus final parameters and the configuration that produced
/// them. `wall_secs` is informational and excluded from determinism
/// comparisons.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub rows: Vec<EpochRow>,
    pub final_params: Vec<f64>,
    pub config: TrainConfig,
    pub wall_secs: f64,
}

struct Adam {
    learning_rate: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

impl Adam {
    fn new(config: &TrainConfig, dim: usize) -> Self {
        Self {
            learning_rate: config.learning_rate,
            beta1: config.adam_beta1,
            beta2: config.adam_beta2,
            eps: config.adam_eps,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            step: 0,
        }
    }

    fn update(&mut self, params: &mut [f64], grad: &[f64]) {
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step as i32);
        let bc2 = 1.0 - self.beta2.powi(self.step as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

/// Adam training over seeded mini-batch shuffles. The reported train loss
/// per epoch is the mean over samples of the pre-update batch losses;
/// accuracies are measured after the epoch's updates.
pub fn train(
    model: &mut Model,
    train_set: &Dataset,
    test_set: &Dataset,
    config: &TrainConfig,
) -> Result<TrainReport> {
    if train_set.is_empty() || test_set.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if config.epochs == 0 || config.batch_size == 0 {
        return Err(Error::Domain {
            what: "epochs/batch_size",
            value: 0.0,
            domain: ">= 1",
        });
    }
    if config.learning_rate < 0.0 {
        return Err(Error::Domain {
            what: "learning_rate",
            value: config.learning_rate,
            domain: ">= 0",
        });
    }

    let started = Instant::now();
    let mut shuffle_rng = rng::substream(config.seed, STREAM_SHUFFLE);
    let mut adam = Adam::new(config, model.params.len());
    let mut rows = Vec::with_capacity(config.epochs);
    let m = train_set.len();

    for epoch in 1..=config.epochs {
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut shuffle_rng);

        let mut loss_sum = 0.0;
        for batch in order.chunks(config.batch_size) {
            let features: Vec<Vec<f64>> =
                batch.iter().map(|&i| train_set.features[i].clone()).collect();
            let labels: Vec<f64> = batch.iter().map(|&i| train_set.labels[i]).collect();
            let (grad, predictions) =
                parameter_shift_gradient_with_predictions(model, &features, &labels)?;
            loss_sum += mse_loss(&predictions, &labels)? * batch.len() as f64;
            adam.update(&mut model.params, &grad);
        }

        rows.push(EpochRow {
            epoch,
            train_loss: loss_sum / m as f64,
            train_acc: evaluate(model, train_set)?,
            test_acc: evaluate(model, test_set)?,
        });
    }

    Ok(TrainReport {
        rows,
        final_params: model.params.clone(),
        config: config.clone(),
        wall_secs: started.elapsed().as_secs_f64(),
    })
}
