//! Readout noise, its mitigation, and shot-budget error scaling.
//!
//! The noise model is classical and per-qubit: a measured 0 is reported as 1
//! with probability `eps01`, a measured 1 as 0 with probability `eps10`,
//! independently per qubit and shot. Relaxation toward the ground state makes
//! real devices read |1⟩ worse than |0⟩, i.e. `eps10 > eps01`; rates are
//! calibrated here from aggregate all-zero / all-one register fidelities.
//!
//! Invert-and-measure trades the two error directions: X the selected qubits
//! before measuring, then flip the corresponding classical bits back, so an
//! all-ones register is read with the (better) all-zeros fidelity.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rng;
use crate::sim::{CdfSampler, Gate, ShotCounts, Statevector};

// Stream ids under one sampling seed; dual-run mitigation uses a second pair.
const STREAM_SAMPLE: u64 = 0;
const STREAM_FLIP: u64 = 1;
const STREAM_PAIR: u64 = 2;

/// Per-qubit asymmetric misread probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutNoiseModel {
    rates: Vec<(f64, f64)>,
}

impl ReadoutNoiseModel {
    /// Same (eps01, eps10) on every qubit.
    pub fn uniform(num_qubits: usize, eps01: f64, eps10: f64) -> Result<Self> {
        Self::per_qubit(vec![(eps01, eps10); num_qubits])
    }

    pub fn per_qubit(rates: Vec<(f64, f64)>) -> Result<Self> {
        for &(eps01, eps10) in &rates {
            for (what, p) in [("eps01", eps01), ("eps10", eps10)] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Domain {
                        what,
                        value: p,
                        domain: "[0, 1]",
                    });
                }
            }
        }
        Ok(Self { rates })
    }

    pub fn noiseless(num_qubits: usize) -> Self {
        Self {
            rates: vec![(0.0, 0.0); num_qubits],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.rates.len()
    }

    /// P(read 1 | true 0) on a qubit.
    pub fn eps01(&self, qubit: usize) -> f64 {
        self.rates[qubit].0
    }

    /// P(read 0 | true 1) on a qubit.
    pub fn eps10(&self, qubit: usize) -> f64 {
        self.rates[qubit].1
    }
}

/// How (or whether) to counteract state-dependent readout bias.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MitigationStrategy {
    None,
    /// X every qubit before measuring, flip all classical bits back.
    InvertAll,
    /// X the flagged qubits only.
    InvertMask(Vec<bool>),
    /// Half the shots unmitigated, half with `InvertAll`, pooled. Equalizes
    /// the all-zero and all-one fidelities instead of favoring one.
    DualRunAverage,
}

/// The unique i.i.d. per-qubit rates reproducing aggregate register
/// fidelities: eps01 = 1 - f_zero^(1/n) and eps10 = 1 - f_one^(1/n).
pub fn calibrate_per_qubit_rates(f_zero: f64, f_one: f64, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Domain {
            what: "n",
            value: 0.0,
            domain: ">= 1",
        });
    }
    for (what, f) in [("f_zero", f_zero), ("f_one", f_one)] {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::Domain {
                what,
                value: f,
                domain: "(0, 1]",
            });
        }
    }
    let root = 1.0 / n as f64;
    Ok((1.0 - f_zero.powf(root), 1.0 - f_one.powf(root)))
}

fn check_register(state: &Statevector, noise: &ReadoutNoiseModel) -> Result<()> {
    if state.num_qubits() != noise.num_qubits() {
        return Err(Error::RegisterMismatch {
            circuit: noise.num_qubits(),
            state: state.num_qubits(),
        });
    }
    Ok(())
}

/// Ideal samples with per-bit classical flips applied, then `post_mask`
/// XOR-ed onto the reported outcome (the classical half of inversion).
fn noisy_index_counts(
    state: &Statevector,
    shots: u64,
    noise: &ReadoutNoiseModel,
    sample_rng: &mut ChaCha8Rng,
    flip_rng: &mut ChaCha8Rng,
    post_mask: usize,
) -> BTreeMap<usize, u64> {
    let sampler = CdfSampler::new(&state.probabilities());
    let n = state.num_qubits();
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let mut index = sampler.draw(sample_rng);
        for q in 0..n {
            let u: f64 = flip_rng.gen();
            let eps = if index >> q & 1 == 0 {
                noise.eps01(q)
            } else {
                noise.eps10(q)
            };
            if u < eps {
                index ^= 1 << q;
            }
        }
        *counts.entry(index ^ post_mask).or_insert(0) += 1;
    }
    counts
}

/// Sample `shots` outcomes, flipping each reported bit through the noise
/// model. With zero rates this matches
/// [`Statevector::sample_counts`] bit for bit under the same seed.
pub fn sample_with_noise(
    state: &Statevector,
    shots: u64,
    noise: &ReadoutNoiseModel,
    seed: u64,
) -> Result<ShotCounts> {
    check_register(state, noise)?;
    let counts = noisy_index_counts(
        state,
        shots,
        noise,
        &mut rng::substream(seed, STREAM_SAMPLE),
        &mut rng::substream(seed, STREAM_FLIP),
        0,
    );
    Ok(ShotCounts::from_index_counts(state.num_qubits(), &counts))
}

/// Fraction of shots that landed exactly on `target`.
pub fn fidelity(counts: &ShotCounts, target: &str) -> Result<f64> {
    if target.len() != counts.num_qubits() {
        return Err(Error::BitstringLength {
            expected: counts.num_qubits(),
            got: target.len(),
        });
    }
    Ok(counts.frequency(target))
}

fn mask_to_bits(mask: &[bool]) -> usize {
    mask.iter()
        .enumerate()
        .fold(0, |acc, (q, &set)| if set { acc | 1 << q } else { acc })
}

fn sample_inverted(
    state: &Statevector,
    shots: u64,
    noise: &ReadoutNoiseModel,
    seed: u64,
    stream_base: u64,
    mask: usize,
) -> Result<BTreeMap<usize, u64>> {
    let mut inverted = state.clone();
    for q in 0..state.num_qubits() {
        if mask >> q & 1 == 1 {
            inverted.apply_gate(&Gate::X { target: q })?;
        }
    }
    Ok(noisy_index_counts(
        &inverted,
        shots,
        noise,
        &mut rng::substream(seed, stream_base + STREAM_SAMPLE),
        &mut rng::substream(seed, stream_base + STREAM_FLIP),
        mask,
    ))
}

/// Measure under readout noise with the chosen mitigation; counts are
/// reported in the original (uninverted) frame.
pub fn invert_and_measure(
    state: &Statevector,
    noise: &ReadoutNoiseModel,
    shots: u64,
    strategy: &MitigationStrategy,
    seed: u64,
) -> Result<ShotCounts> {
    check_register(state, noise)?;
    let n = state.num_qubits();
    let all = (1usize << n) - 1;
    let counts = match strategy {
        MitigationStrategy::None => {
            return sample_with_noise(state, shots, noise, seed);
        }
        MitigationStrategy::InvertAll => sample_inverted(state, shots, noise, seed, 0, all)?,
        MitigationStrategy::InvertMask(mask) => {
            if mask.len() != n {
                return Err(Error::MaskLength {
                    mask: mask.len(),
                    qubits: n,
                });
            }
            sample_inverted(state, shots, noise, seed, 0, mask_to_bits(mask))?
        }
        MitigationStrategy::DualRunAverage => {
            let plain_shots = shots / 2;
            let inverted_shots = shots - plain_shots;
            let mut pooled = noisy_index_counts(
                state,
                plain_shots,
                noise,
                &mut rng::substream(seed, STREAM_SAMPLE),
                &mut rng::substream(seed, STREAM_FLIP),
                0,
            );
            for (index, count) in
                sample_inverted(state, inverted_shots, noise, seed, STREAM_PAIR, all)?
            {
                *pooled.entry(index).or_insert(0) += count;
            }
            pooled
        }
    };
    Ok(ShotCounts::from_index_counts(n, &counts))
}

/// One shot budget of the scaling experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotScalingRow {
    pub shots: u64,
    pub mean_estimate: f64,
    pub std_estimate: f64,
    pub exact: f64,
}

/// ⟨Z⟩ estimator from measured counts: (N_0 - N_1) / shots on one qubit.
pub fn z_estimate(counts: &ShotCounts, qubit: usize) -> Result<f64> {
    if qubit >= counts.num_qubits() {
        return Err(Error::QubitIndex {
            index: qubit,
            num_qubits: counts.num_qubits(),
        });
    }
    if counts.shots() == 0 {
        return Ok(0.0);
    }
    let mut signed: i64 = 0;
    for (bits, &count) in counts.counts() {
        // bitstrings render qubit 0 leftmost, so char position == qubit index
        if bits.as_bytes()[qubit] == b'0' {
            signed += count as i64;
        } else {
            signed -= count as i64;
        }
    }
    Ok(signed as f64 / counts.shots() as f64)
}

/// For each shot budget, estimate ⟨Z⟩ from `repeats` independent seeded
/// substreams and report the spread against the exact value. The estimator's
/// standard deviation follows √((1 - ⟨Z⟩²) / shots).
pub fn shot_scaling_experiment(
    state: &Statevector,
    qubit: usize,
    shot_list: &[u64],
    repeats: u32,
    seed: u64,
) -> Result<Vec<ShotScalingRow>> {
    if repeats < 2 {
        return Err(Error::Domain {
            what: "repeats",
            value: repeats as f64,
            domain: ">= 2",
        });
    }
    let exact = state.expectation_z(qubit)?;
    let mut rows = Vec::with_capacity(shot_list.len());
    for (si, &shots) in shot_list.iter().enumerate() {
        let estimates: Vec<f64> = (0..repeats)
            .map(|r| {
                let task_seed = rng::derive_seed(seed, (si as u64) * repeats as u64 + r as u64);
                z_estimate(&state.sample_counts(shots, task_seed), qubit)
            })
            .collect::<Result<Vec<_>>>()?;
        let n = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / n;
        let var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0);
        rows.push(ShotScalingRow {
            shots,
            mean_estimate: mean,
            std_estimate: var.sqrt(),
            exact,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_ones_state(n: usize) -> Statevector {
        let mut state = Statevector::zero(n).unwrap();
        for q in 0..n {
            state.apply_gate(&Gate::X { target: q }).unwrap();
        }
        state
    }

    #[test]
    fn zero_noise_equals_plain_sampling_bit_for_bit() {
        let mut state = Statevector::zero(3).unwrap();
        state.apply_gate(&Gate::H { target: 0 }).unwrap();
        state
            .apply_gate(&Gate::Ry {
                target: 2,
                angle: crate::sim::Angle::Literal(1.2),
            })
            .unwrap();
        let noise = ReadoutNoiseModel::noiseless(3);
        let noisy = sample_with_noise(&state, 2000, &noise, 44).unwrap();
        let plain = state.sample_counts(2000, 44);
        assert_eq!(noisy, plain);
    }

    #[test]
    fn certain_flip_reads_one_as_zero() {
        let one = all_ones_state(1);
        let noise = ReadoutNoiseModel::uniform(1, 0.0, 1.0).unwrap();
        let counts = sample_with_noise(&one, 500, &noise, 3).unwrap();
        assert_eq!(counts.count("0"), 500);
        assert_eq!(fidelity(&counts, "1").unwrap(), 0.0);
    }

    #[test]
    fn calibrated_all_zero_fidelity() {
        let (eps01, _) = calibrate_per_qubit_rates(0.84, 0.62, 5).unwrap();
        assert!((eps01 - 0.03427).abs() < 1e-5);
        let zero = Statevector::zero(5).unwrap();
        let noise = ReadoutNoiseModel::uniform(5, eps01, 0.0).unwrap();
        let counts = sample_with_noise(&zero, 100_000, &noise, 10).unwrap();
        let f = fidelity(&counts, "00000").unwrap();
        assert!((f - 0.84).abs() < 0.01, "fidelity {f}");
    }

    #[test]
    fn calibration_closed_forms() {
        let (eps01, eps10) = calibrate_per_qubit_rates(0.84, 0.62, 5).unwrap();
        assert!((eps01 - (1.0 - 0.84f64.powf(0.2))).abs() < 1e-15);
        assert!((eps10 - (1.0 - 0.62f64.powf(0.2))).abs() < 1e-15);
        assert!((eps10 - 0.09118).abs() < 1e-5);
        assert!(eps10 > eps01);

        let (perfect, _) = calibrate_per_qubit_rates(1.0, 1.0, 7).unwrap();
        assert_eq!(perfect, 0.0);

        assert!(matches!(
            calibrate_per_qubit_rates(0.0, 0.5, 3),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            calibrate_per_qubit_rates(0.5, 1.5, 3),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn fidelity_worked_example() {
        let mut index_counts = BTreeMap::new();
        index_counts.insert(0usize, 84u64); // "00"
        index_counts.insert(2usize, 16u64); // "01"
        let counts = ShotCounts::from_index_counts(2, &index_counts);
        assert_eq!(fidelity(&counts, "00").unwrap(), 0.84);
        assert_eq!(fidelity(&counts, "11").unwrap(), 0.0);
        assert!(matches!(
            fidelity(&counts, "000"),
            Err(Error::BitstringLength { .. })
        ));
    }

    #[test]
    fn mitigation_is_identity_without_noise() {
        let mut state = Statevector::zero(2).unwrap();
        state.apply_gate(&Gate::H { target: 1 }).unwrap();
        let noise = ReadoutNoiseModel::noiseless(2);
        let plain = state.sample_counts(1000, 5);
        for strategy in [
            MitigationStrategy::None,
            MitigationStrategy::InvertAll,
            MitigationStrategy::InvertMask(vec![true, false]),
        ] {
            let counts = invert_and_measure(&state, &noise, 1000, &strategy, 5).unwrap();
            let total: u64 = counts.counts().values().sum();
            assert_eq!(total, 1000);
            // same outcome distribution as noiseless sampling
            for bits in ["00", "10", "01", "11"] {
                let diff =
                    counts.frequency(bits) - plain.frequency(bits);
                assert!(diff.abs() < 0.05, "{bits}: {diff}");
            }
        }
    }

    #[test]
    fn invert_all_recovers_all_zero_fidelity_for_ones() {
        let (eps01, eps10) = calibrate_per_qubit_rates(0.84, 0.62, 5).unwrap();
        let noise = ReadoutNoiseModel::uniform(5, eps01, eps10).unwrap();
        let ones = all_ones_state(5);

        let unmitigated =
            invert_and_measure(&ones, &noise, 100_000, &MitigationStrategy::None, 8).unwrap();
        let f_plain = fidelity(&unmitigated, "11111").unwrap();
        assert!((f_plain - 0.62).abs() < 0.01, "unmitigated {f_plain}");

        let mitigated =
            invert_and_measure(&ones, &noise, 100_000, &MitigationStrategy::InvertAll, 8).unwrap();
        let f_inv = fidelity(&mitigated, "11111").unwrap();
        assert!((f_inv - 0.84).abs() < 0.01, "mitigated {f_inv}");
    }

    #[test]
    fn invert_mask_length_checked() {
        let state = Statevector::zero(3).unwrap();
        let noise = ReadoutNoiseModel::noiseless(3);
        assert!(matches!(
            invert_and_measure(
                &state,
                &noise,
                10,
                &MitigationStrategy::InvertMask(vec![true]),
                0
            ),
            Err(Error::MaskLength { mask: 1, qubits: 3 })
        ));
    }

    #[test]
    fn z_estimator_deterministic_state() {
        let zero = Statevector::zero(1).unwrap();
        let rows = shot_scaling_experiment(&zero, 0, &[50, 200], 5, 2).unwrap();
        for row in &rows {
            assert_eq!(row.mean_estimate, 1.0);
            assert_eq!(row.std_estimate, 0.0);
            assert_eq!(row.exact, 1.0);
        }
    }

    #[test]
    fn z_estimator_plus_state_spread() {
        let mut plus = Statevector::zero(1).unwrap();
        plus.apply_gate(&Gate::H { target: 0 }).unwrap();
        let rows = shot_scaling_experiment(&plus, 0, &[100], 200, 9).unwrap();
        let row = &rows[0];
        assert!(row.exact.abs() < 1e-12);
        // analytic sigma = sqrt((1 - 0) / 100) = 0.1
        assert!((row.std_estimate - 0.1).abs() < 0.02, "std {}", row.std_estimate);
    }

    #[test]
    fn repeats_guard() {
        let zero = Statevector::zero(1).unwrap();
        assert!(matches!(
            shot_scaling_experiment(&zero, 0, &[10], 1, 0),
            Err(Error::Domain { .. })
        ));
    }
}
