//! Exact statevector simulation of small gate circuits.
//!
//! Bit convention, fixed project-wide: qubit `i` is bit `i` of a basis-state
//! index with qubit 0 least significant; rendered bitstrings list qubit 0
//! leftmost, so basis index 1 on two qubits prints as `"10"`.
//!
//! Gates act in place over strided amplitude pairs; no full unitary matrix is
//! ever materialized here.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// Hard cap on register size; 2^24 amplitudes is ~256 MB of complex values.
pub const MAX_QUBITS: usize = 24;

/// A rotation angle: either fixed, or bound to a parameter slot so that the
/// applied angle is `scale * params[index]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Literal(f64),
    Slot { index: usize, scale: f64 },
}

impl Angle {
    fn resolve(self, params: &[f64]) -> Result<f64> {
        match self {
            Angle::Literal(theta) => Ok(theta),
            Angle::Slot { index, scale } => params
                .get(index)
                .map(|p| scale * p)
                .ok_or(Error::UnboundSlot {
                    slot: index,
                    num_params: params.len(),
                }),
        }
    }

    fn slot(self) -> Option<(usize, f64)> {
        match self {
            Angle::Literal(_) => None,
            Angle::Slot { index, scale } => Some((index, scale)),
        }
    }
}

/// One gate of the supported set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X { target: usize },
    H { target: usize },
    Rx { target: usize, angle: Angle },
    Ry { target: usize, angle: Angle },
    Rz { target: usize, angle: Angle },
    Cnot { control: usize, target: usize },
}

impl Gate {
    /// Parameter slot and scale factor, for rotations bound to a slot.
    pub fn slot(&self) -> Option<(usize, f64)> {
        match self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => {
                angle.slot()
            }
            _ => None,
        }
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, Gate::Rx { .. } | Gate::Ry { .. } | Gate::Rz { .. })
    }

    fn max_qubit(&self) -> usize {
        match *self {
            Gate::X { target }
            | Gate::H { target }
            | Gate::Rx { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rz { target, .. } => target,
            Gate::Cnot { control, target } => control.max(target),
        }
    }
}

/// Pure n-qubit state as a dense vector of 2^n complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros state |0...0⟩.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Squared inner product |⟨self|other⟩|², clamped into [0, 1].
    pub fn overlap_sqr(&self, other: &Statevector) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::RegisterMismatch {
                circuit: other.num_qubits,
                state: self.num_qubits,
            });
        }
        let inner: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(inner.norm_sqr().clamp(0.0, 1.0))
    }

    fn check_qubit(&self, index: usize) -> Result<()> {
        if index >= self.num_qubits {
            return Err(Error::QubitIndex {
                index,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Apply a gate whose angle (if any) is a literal.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        self.apply_gate_with(gate, &[])
    }

    /// Apply a gate, resolving a slot-bound angle against `params`.
    pub fn apply_gate_with(&mut self, gate: &Gate, params: &[f64]) -> Result<()> {
        self.apply_gate_offset(gate, params, 0.0)
    }

    /// Apply a gate with an extra additive offset on the resolved angle.
    /// The offset is what the parameter-shift rule perturbs.
    fn apply_gate_offset(&mut self, gate: &Gate, params: &[f64], offset: f64) -> Result<()> {
        match *gate {
            Gate::X { target } => {
                self.check_qubit(target)?;
                self.apply_x(target);
            }
            Gate::H { target } => {
                self.check_qubit(target)?;
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_single(target, |a0, a1| (h * (a0 + a1), h * (a0 - a1)));
            }
            Gate::Rx { target, angle } => {
                self.check_qubit(target)?;
                let theta = angle.resolve(params)? + offset;
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let mis = Complex64::new(0.0, -s);
                self.apply_single(target, |a0, a1| (c * a0 + mis * a1, mis * a0 + c * a1));
            }
            Gate::Ry { target, angle } => {
                self.check_qubit(target)?;
                let theta = angle.resolve(params)? + offset;
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                self.apply_single(target, |a0, a1| (c * a0 - s * a1, s * a0 + c * a1));
            }
            Gate::Rz { target, angle } => {
                self.check_qubit(target)?;
                let theta = angle.resolve(params)? + offset;
                let phase0 = Complex64::from_polar(1.0, -theta / 2.0);
                let phase1 = Complex64::from_polar(1.0, theta / 2.0);
                self.apply_single(target, |a0, a1| (phase0 * a0, phase1 * a1));
            }
            Gate::Cnot { control, target } => {
                self.check_qubit(control)?;
                self.check_qubit(target)?;
                if control == target {
                    return Err(Error::ControlEqualsTarget { qubit: control });
                }
                self.apply_cnot(control, target);
            }
        }
        Ok(())
    }

    /// Visit every (index0, index1) amplitude pair split by `target`.
    fn apply_single<F>(&mut self, target: usize, f: F)
    where
        F: Fn(Complex64, Complex64) -> (Complex64, Complex64),
    {
        let stride = 1usize << target;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for low in base..base + stride {
                let high = low + stride;
                let (b0, b1) = f(self.amps[low], self.amps[high]);
                self.amps[low] = b0;
                self.amps[high] = b1;
            }
            base += stride << 1;
        }
    }

    fn apply_x(&mut self, target: usize) {
        let stride = 1usize << target;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for low in base..base + stride {
                self.amps.swap(low, low + stride);
            }
            base += stride << 1;
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }

    /// Born-rule outcome distribution over basis indices.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨Z⟩ on one qubit, computed as 1 - 2·P(bit = 1).
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        let mut p_one = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            if i & mask != 0 {
                p_one += a.norm_sqr();
            }
        }
        Ok(1.0 - 2.0 * p_one)
    }

    /// Draw `shots` measurement outcomes by inverse-CDF sampling on the
    /// stream-0 generator of `seed`. Same (state, shots, seed) gives
    /// identical counts.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> ShotCounts {
        let mut rng = rng::substream(seed, 0);
        self.sample_counts_rng(shots, &mut rng)
    }

    pub(crate) fn sample_counts_rng(&self, shots: u64, rng: &mut impl Rng) -> ShotCounts {
        let sampler = CdfSampler::new(&self.probabilities());
        let mut index_counts: BTreeMap<usize, u64> = BTreeMap::new();
        for _ in 0..shots {
            *index_counts.entry(sampler.draw(rng)).or_insert(0) += 1;
        }
        ShotCounts::from_index_counts(self.num_qubits, &index_counts)
    }
}

/// Inverse-CDF sampler over a probability vector.
pub(crate) struct CdfSampler {
    cdf: Vec<f64>,
    last_nonzero: usize,
}

impl CdfSampler {
    pub(crate) fn new(probs: &[f64]) -> Self {
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            cdf.push(acc);
        }
        Self { cdf, last_nonzero }
    }

    pub(crate) fn draw(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c <= u);
        // u can land past the accumulated total by float rounding
        idx.min(self.last_nonzero)
    }
}

/// Render a basis index as a bitstring, qubit 0 leftmost.
pub fn bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Measured bitstring histogram for a fixed shot budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotCounts {
    num_qubits: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl ShotCounts {
    pub(crate) fn from_index_counts(
        num_qubits: usize,
        index_counts: &BTreeMap<usize, u64>,
    ) -> Self {
        let mut counts = BTreeMap::new();
        let mut shots = 0;
        for (&index, &count) in index_counts {
            shots += count;
            counts.insert(bitstring(index, num_qubits), count);
        }
        Self {
            num_qubits,
            shots,
            counts,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn count(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn frequency(&self, bits: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.count(bits) as f64 / self.shots as f64
        }
    }
}

/// Ordered gate list over a fixed register, with free parameter slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    num_params: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(Self {
            num_qubits,
            gates: Vec::new(),
            num_params: 0,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of free parameter slots (one past the highest referenced slot).
    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_qubit() >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: gate.max_qubit(),
                num_qubits: self.num_qubits,
            });
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(Error::ControlEqualsTarget { qubit: control });
            }
        }
        if let Some((slot, _)) = gate.slot() {
            self.num_params = self.num_params.max(slot + 1);
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn x(&mut self, target: usize) -> Result<()> {
        self.push(Gate::X { target })
    }

    pub fn h(&mut self, target: usize) -> Result<()> {
        self.push(Gate::H { target })
    }

    pub fn rx(&mut self, target: usize, theta: f64) -> Result<()> {
        self.push(Gate::Rx {
            target,
            angle: Angle::Literal(theta),
        })
    }

    pub fn ry(&mut self, target: usize, theta: f64) -> Result<()> {
        self.push(Gate::Ry {
            target,
            angle: Angle::Literal(theta),
        })
    }

    pub fn rz(&mut self, target: usize, theta: f64) -> Result<()> {
        self.push(Gate::Rz {
            target,
            angle: Angle::Literal(theta),
        })
    }

    pub fn rx_slot(&mut self, target: usize, slot: usize, scale: f64) -> Result<()> {
        self.push(Gate::Rx {
            target,
            angle: Angle::Slot { index: slot, scale },
        })
    }

    pub fn ry_slot(&mut self, target: usize, slot: usize, scale: f64) -> Result<()> {
        self.push(Gate::Ry {
            target,
            angle: Angle::Slot { index: slot, scale },
        })
    }

    pub fn rz_slot(&mut self, target: usize, slot: usize, scale: f64) -> Result<()> {
        self.push(Gate::Rz {
            target,
            angle: Angle::Slot { index: slot, scale },
        })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::Cnot { control, target })
    }

    /// Slots below `num_params` that no gate references.
    pub fn unreferenced_slots(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_params];
        for gate in &self.gates {
            if let Some((slot, _)) = gate.slot() {
                used[slot] = true;
            }
        }
        used.iter()
            .enumerate()
            .filter_map(|(i, &u)| (!u).then_some(i))
            .collect()
    }

    /// Apply all gates in order, binding slot angles to `params`.
    pub fn apply_to(&self, state: &mut Statevector, params: &[f64]) -> Result<()> {
        self.apply_impl(state, params, None)
    }

    /// Like [`apply_to`](Self::apply_to) but with `delta` added to the
    /// resolved angle of the gate at `gate_index` (the parameter-shift
    /// evaluation point). Errors if that gate is not a rotation.
    pub fn apply_to_shifted(
        &self,
        state: &mut Statevector,
        params: &[f64],
        gate_index: usize,
        delta: f64,
    ) -> Result<()> {
        match self.gates.get(gate_index) {
            Some(g) if g.is_rotation() => self.apply_impl(state, params, Some((gate_index, delta))),
            _ => Err(Error::UnsupportedGate { index: gate_index }),
        }
    }

    fn apply_impl(
        &self,
        state: &mut Statevector,
        params: &[f64],
        shift: Option<(usize, f64)>,
    ) -> Result<()> {
        if state.num_qubits != self.num_qubits {
            return Err(Error::RegisterMismatch {
                circuit: self.num_qubits,
                state: state.num_qubits,
            });
        }
        if params.len() != self.num_params {
            return Err(Error::ParamArity {
                expected: self.num_params,
                got: params.len(),
            });
        }
        for (i, gate) in self.gates.iter().enumerate() {
            let offset = match shift {
                Some((index, delta)) if index == i => delta,
                _ => 0.0,
            };
            state.apply_gate_offset(gate, params, offset)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn assert_close(a: Complex64, re: f64, im: f64) {
        assert!(
            (a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12,
            "amplitude {a} != {re}+{im}i"
        );
    }

    #[test]
    fn zero_state_one_qubit() {
        let s = Statevector::zero(1).unwrap();
        assert_close(s.amplitudes()[0], 1.0, 0.0);
        assert_close(s.amplitudes()[1], 0.0, 0.0);
    }

    #[test]
    fn zero_state_two_qubits() {
        let s = Statevector::zero(2).unwrap();
        assert_eq!(s.amplitudes().len(), 4);
        assert_close(s.amplitudes()[0], 1.0, 0.0);
        for &a in &s.amplitudes()[1..] {
            assert_close(a, 0.0, 0.0);
        }
    }

    #[test]
    fn zero_state_capacity_guard() {
        assert!(matches!(
            Statevector::zero(25),
            Err(Error::Capacity { requested: 25, .. })
        ));
        assert!(matches!(Statevector::zero(0), Err(Error::Capacity { .. })));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = Statevector::zero(1).unwrap();
        s.apply_gate(&Gate::H { target: 0 }).unwrap();
        assert_close(s.amplitudes()[0], FRAC_1_SQRT_2, 0.0);
        assert_close(s.amplitudes()[1], FRAC_1_SQRT_2, 0.0);
    }

    #[test]
    fn ry_pi_flips_zero_to_one() {
        let mut s = Statevector::zero(1).unwrap();
        s.apply_gate(&Gate::Ry {
            target: 0,
            angle: Angle::Literal(PI),
        })
        .unwrap();
        assert_close(s.amplitudes()[0], 0.0, 0.0);
        assert_close(s.amplitudes()[1], 1.0, 0.0);
    }

    #[test]
    fn gate_index_out_of_range() {
        let mut s = Statevector::zero(2).unwrap();
        assert!(matches!(
            s.apply_gate(&Gate::X { target: 2 }),
            Err(Error::QubitIndex { index: 2, .. })
        ));
    }

    #[test]
    fn cnot_control_equals_target_rejected() {
        let mut c = Circuit::new(2).unwrap();
        assert!(matches!(
            c.cnot(1, 1),
            Err(Error::ControlEqualsTarget { qubit: 1 })
        ));
    }

    #[test]
    fn bit_convention_qubit0_is_lsb_and_leftmost() {
        let mut s = Statevector::zero(2).unwrap();
        s.apply_gate(&Gate::X { target: 0 }).unwrap();
        // qubit 0 set -> basis index 1
        assert_close(s.amplitudes()[1], 1.0, 0.0);
        assert_eq!(bitstring(1, 2), "10");
        assert_eq!(bitstring(2, 2), "01");
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3).unwrap();
        let mut s = Statevector::zero(3).unwrap();
        let before = s.clone();
        c.apply_to(&mut s, &[]).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn all_zero_rotations_are_identity() {
        let mut c = Circuit::new(2).unwrap();
        c.rx(0, 0.0).unwrap();
        c.ry(1, 0.0).unwrap();
        c.rz(0, 0.0).unwrap();
        let mut s = Statevector::zero(2).unwrap();
        let mut t = Statevector::zero(2).unwrap();
        t.apply_gate(&Gate::H { target: 0 }).unwrap();
        s.apply_gate(&Gate::H { target: 0 }).unwrap();
        let before = s.clone();
        c.apply_to(&mut s, &[]).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_eq!(t.amplitudes().len(), 4);
    }

    #[test]
    fn slot_binding_resolves_scale_times_param() {
        let mut c = Circuit::new(1).unwrap();
        c.ry_slot(0, 0, 1.0).unwrap();
        assert_eq!(c.num_params(), 1);
        let mut s = Statevector::zero(1).unwrap();
        c.apply_to(&mut s, &[PI]).unwrap();
        assert_close(s.amplitudes()[0], 0.0, 0.0);
        assert_close(s.amplitudes()[1], 1.0, 0.0);
    }

    #[test]
    fn param_arity_mismatch() {
        let mut c = Circuit::new(1).unwrap();
        c.ry_slot(0, 0, 1.0).unwrap();
        let mut s = Statevector::zero(1).unwrap();
        assert!(matches!(
            c.apply_to(&mut s, &[]),
            Err(Error::ParamArity {
                expected: 1,
                got: 0
            })
        ));
    }

    #[test]
    fn unreferenced_slot_detection() {
        let mut c = Circuit::new(1).unwrap();
        c.ry_slot(0, 2, 1.0).unwrap();
        assert_eq!(c.num_params(), 3);
        assert_eq!(c.unreferenced_slots(), vec![0, 1]);
    }

    #[test]
    fn probabilities_born_rule() {
        let mut s = Statevector::zero(1).unwrap();
        s.apply_gate(&Gate::H { target: 0 }).unwrap();
        let p = s.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!((p[1] - 0.5).abs() < 1e-12);

        let mut one = Statevector::zero(1).unwrap();
        one.apply_gate(&Gate::X { target: 0 }).unwrap();
        assert_eq!(one.probabilities(), vec![0.0, 1.0]);
    }

    #[test]
    fn probabilities_sum_to_one_after_random_circuit() {
        let mut s = Statevector::zero(3).unwrap();
        let mut c = Circuit::new(3).unwrap();
        c.h(0).unwrap();
        c.rx(1, 0.83).unwrap();
        c.ry(2, -1.91).unwrap();
        c.cnot(0, 2).unwrap();
        c.rz(1, 2.4).unwrap();
        c.cnot(2, 1).unwrap();
        c.apply_to(&mut s, &[]).unwrap();
        let total: f64 = s.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn expectation_z_closed_forms() {
        let s = Statevector::zero(1).unwrap();
        assert!((s.expectation_z(0).unwrap() - 1.0).abs() < 1e-12);

        let mut plus = Statevector::zero(1).unwrap();
        plus.apply_gate(&Gate::H { target: 0 }).unwrap();
        assert!(plus.expectation_z(0).unwrap().abs() < 1e-12);

        let mut rot = Statevector::zero(1).unwrap();
        rot.apply_gate(&Gate::Ry {
            target: 0,
            angle: Angle::Literal(0.7),
        })
        .unwrap();
        assert!((rot.expectation_z(0).unwrap() - 0.7f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn expectation_z_matches_marginal_exactly() {
        let mut s = Statevector::zero(3).unwrap();
        let mut c = Circuit::new(3).unwrap();
        c.h(0).unwrap();
        c.ry(1, 1.1).unwrap();
        c.cnot(0, 1).unwrap();
        c.rx(2, 0.4).unwrap();
        c.apply_to(&mut s, &[]).unwrap();
        for q in 0..3 {
            let probs = s.probabilities();
            let marginal: f64 = probs
                .iter()
                .enumerate()
                .filter(|(i, _)| i >> q & 1 == 1)
                .map(|(_, p)| p)
                .sum();
            assert_eq!(s.expectation_z(q).unwrap(), 1.0 - 2.0 * marginal);
        }
    }

    #[test]
    fn sampling_deterministic_state() {
        let mut one = Statevector::zero(1).unwrap();
        one.apply_gate(&Gate::X { target: 0 }).unwrap();
        let counts = one.sample_counts(100, 12345);
        assert_eq!(counts.count("1"), 100);
        assert_eq!(counts.shots(), 100);
    }

    #[test]
    fn sampling_frequency_near_half_on_plus() {
        let mut plus = Statevector::zero(1).unwrap();
        plus.apply_gate(&Gate::H { target: 0 }).unwrap();
        let counts = plus.sample_counts(10_000, 99);
        let f = counts.frequency("0");
        assert!((f - 0.5).abs() < 0.05, "frequency {f}");
    }

    #[test]
    fn sampling_same_seed_identical() {
        let mut s = Statevector::zero(2).unwrap();
        s.apply_gate(&Gate::H { target: 0 }).unwrap();
        s.apply_gate(&Gate::Ry {
            target: 1,
            angle: Angle::Literal(0.9),
        })
        .unwrap();
        let a = s.sample_counts(5000, 7);
        let b = s.sample_counts(5000, 7);
        assert_eq!(a, b);
        let c = s.sample_counts(5000, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn counts_sum_to_shots() {
        let mut s = Statevector::zero(3).unwrap();
        for q in 0..3 {
            s.apply_gate(&Gate::H { target: q }).unwrap();
        }
        let counts = s.sample_counts(4096, 1);
        let total: u64 = counts.counts().values().sum();
        assert_eq!(total, 4096);
        for bits in counts.counts().keys() {
            assert_eq!(bits.len(), 3);
            assert!(bits.chars().all(|ch| ch == '0' || ch == '1'));
        }
    }

    #[test]
    fn shifted_apply_rejects_non_rotation() {
        let mut c = Circuit::new(2).unwrap();
        c.h(0).unwrap();
        c.ry_slot(1, 0, 1.0).unwrap();
        let mut s = Statevector::zero(2).unwrap();
        assert!(matches!(
            c.apply_to_shifted(&mut s, &[0.3], 0, 0.5),
            Err(Error::UnsupportedGate { index: 0 })
        ));
        let mut s2 = Statevector::zero(2).unwrap();
        c.apply_to_shifted(&mut s2, &[0.3], 1, 0.5).unwrap();
    }
}
