//! Quantum-kernel Gram matrices and their concentration with qubit count.
//!
//! The kernel is the state fidelity |⟨φ(x)|φ(y)⟩|² under a deterministic
//! encoding. As the register grows, random encoded states crowd toward
//! orthogonality, so the Gram matrix of a random sample drifts toward the
//! identity and its dominant eigenvalue sinks toward 1 — the spectrum-level
//! face of measure concentration.
//!
//! For the angle encoding with i.i.d. uniform features the mean off-diagonal
//! entry factorizes per qubit to E[cos²(π(x-y)/2)] = 1/2 + 2/π², so it decays
//! like (0.7026...)^n. That law is a property of this encoding and data
//! distribution, not a universal constant.

use crate::data::uniform_features;
use crate::encode::EncodingSpec;
use crate::error::{Error, Result};
use crate::rng;

/// Capacity guards for the concentration experiment.
pub const MAX_CONCENTRATION_QUBITS: usize = 20;
pub const MAX_CONCENTRATION_SAMPLES: usize = 200;

/// Mean off-diagonal kernel value of uniform angle-encoded pairs on one
/// qubit: 1/2 + 2/π².
pub const UNIFORM_ANGLE_MEAN_OFFDIAG: f64 = 0.5 + 2.0 / (std::f64::consts::PI * std::f64::consts::PI);

/// Symmetric positive-semidefinite kernel matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl GramMatrix {
    /// Wrap a row-major square matrix. The caller vouches for symmetry and
    /// positive semidefiniteness; generated Gram matrices satisfy both.
    pub fn from_entries(size: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::LengthMismatch {
                left: entries.len(),
                right: size * size,
            });
        }
        Ok(Self { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.size + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Mean of the entries off the main diagonal.
    pub fn mean_offdiagonal(&self) -> f64 {
        let m = self.size;
        if m < 2 {
            return 0.0;
        }
        let mut sum = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    sum += self.get(i, j);
                }
            }
        }
        sum / (m * (m - 1)) as f64
    }

    fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.entries
            .chunks_exact(self.size)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Kernel value |⟨φ(x)|φ(y)⟩|² for a deterministic encoding.
pub fn kernel_value(x: &[f64], y: &[f64], encoding: &EncodingSpec) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::FeatureArity {
            expected: x.len(),
            got: y.len(),
        });
    }
    let sx = encoding.state(x)?;
    let sy = encoding.state(y)?;
    sx.overlap_sqr(&sy)
}

/// Pairwise kernel matrix over the sample rows. Each row is encoded once;
/// entries are filled symmetrically so `get(i, j) == get(j, i)` exactly.
pub fn gram_matrix(samples: &[Vec<f64>], encoding: &EncodingSpec) -> Result<GramMatrix> {
    let m = samples.len();
    let states = samples
        .iter()
        .map(|x| encoding.state(x))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let k = states[i].overlap_sqr(&states[j])?;
            entries[i * m + j] = k;
            entries[j * m + i] = k;
        }
    }
    Ok(GramMatrix { size: m, entries })
}

/// Largest eigenvalue by power iteration from the normalized all-ones vector,
/// converged when successive Rayleigh quotients differ by less than `tol`.
pub fn dominant_eigenvalue(matrix: &GramMatrix, tol: f64, max_iter: usize) -> Result<f64> {
    let m = matrix.size();
    if m == 0 {
        return Ok(0.0);
    }
    let mut v = vec![1.0 / (m as f64).sqrt(); m];
    let mut previous = f64::NAN;
    for _ in 0..max_iter {
        let w = matrix.mul_vec(&v);
        let rayleigh: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        if (rayleigh - previous).abs() < tol {
            return Ok(rayleigh);
        }
        previous = rayleigh;
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            // zero matrix: every vector is an eigenvector of 0
            return Ok(0.0);
        }
        v = w.into_iter().map(|x| x / norm).collect();
    }
    Err(Error::NoConvergence { max_iter })
}

/// One sweep point of the concentration experiment, averaged over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationRow {
    pub n_qubits: usize,
    pub m: usize,
    pub mean_offdiag: f64,
    pub lambda_max: f64,
    pub seeds: u32,
}

/// For each register size: draw `m` uniform feature vectors per seed stream,
/// angle-encode, build the Gram matrix, and record its mean off-diagonal and
/// dominant eigenvalue, averaged over `num_seeds` streams.
pub fn concentration_experiment(
    n_list: &[usize],
    m: usize,
    num_seeds: u32,
    seed: u64,
) -> Result<Vec<ConcentrationRow>> {
    for &n in n_list {
        if n == 0 || n > MAX_CONCENTRATION_QUBITS {
            return Err(Error::Capacity {
                requested: n,
                max: MAX_CONCENTRATION_QUBITS,
            });
        }
    }
    if !(2..=MAX_CONCENTRATION_SAMPLES).contains(&m) {
        return Err(Error::Capacity {
            requested: m,
            max: MAX_CONCENTRATION_SAMPLES,
        });
    }
    if num_seeds == 0 {
        return Err(Error::Domain {
            what: "num_seeds",
            value: 0.0,
            domain: ">= 1",
        });
    }

    let mut rows = Vec::with_capacity(n_list.len());
    for (ni, &n) in n_list.iter().enumerate() {
        let encoding = EncodingSpec::angle(n);
        let mut sum_offdiag = 0.0;
        let mut sum_lambda = 0.0;
        for s in 0..num_seeds {
            let stream = (ni as u64) * num_seeds as u64 + s as u64;
            let mut data_rng = rng::substream(seed, stream);
            let samples = uniform_features(m, n, &mut data_rng);
            let gram = gram_matrix(&samples, &encoding)?;
            sum_offdiag += gram.mean_offdiagonal();
            sum_lambda += dominant_eigenvalue(&gram, 1e-9, 100_000)?;
        }
        rows.push(ConcentrationRow {
            n_qubits: n,
            m,
            mean_offdiag: sum_offdiag / num_seeds as f64,
            lambda_max: sum_lambda / num_seeds as f64,
            seeds: num_seeds,
        });
    }
    Ok(rows)
}
