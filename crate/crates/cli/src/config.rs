//! Experiment configuration: one JSON document drives every subcommand.
//!
//! Any field may be omitted; defaults are filled in and the fully resolved
//! config is echoed next to each output file, so artifacts stay
//! self-describing. Command-line flags override file values and `--seed`
//! overrides everything.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    EncodeBench,
    ReadoutBias,
    Sampling,
    KernelConcentration,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::EncodeBench => "encode-bench",
            ExperimentKind::ReadoutBias => "readout-bias",
            ExperimentKind::Sampling => "sampling",
            ExperimentKind::KernelConcentration => "kernel-concentration",
        }
    }

    pub fn default_out(self) -> PathBuf {
        PathBuf::from(format!("{}.csv", self.name()))
    }
}

/// Where encode-bench gets its data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataSource {
    Synthetic {
        #[serde(default = "default_n_per_class")]
        n_per_class: usize,
        #[serde(default = "default_test_per_class")]
        test_per_class: usize,
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default = "default_separation")]
        separation: f64,
    },
    Mnist {
        /// Defaults to the QBIAS_DATA_DIR environment variable.
        #[serde(default)]
        data_dir: Option<PathBuf>,
        #[serde(default = "default_class_a")]
        class_a: u8,
        #[serde(default = "default_class_b")]
        class_b: u8,
        #[serde(default = "default_n_per_class")]
        n_per_class: usize,
        #[serde(default = "default_test_per_class")]
        test_per_class: usize,
        #[serde(default = "default_block")]
        block: usize,
    },
}

fn default_n_per_class() -> usize {
    100
}
fn default_test_per_class() -> usize {
    50
}
fn default_dim() -> usize {
    8
}
fn default_separation() -> f64 {
    0.4
}
fn default_class_a() -> u8 {
    0
}
fn default_class_b() -> u8 {
    1
}
fn default_block() -> usize {
    7
}

impl Default for DataSource {
    fn default() -> Self {
        DataSource::Synthetic {
            n_per_class: default_n_per_class(),
            test_per_class: default_test_per_class(),
            dim: default_dim(),
            separation: default_separation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub layers: usize,
}

impl Default for TrainSection {
    fn default() -> Self {
        Self {
            epochs: 20,
            batch_size: 16,
            learning_rate: 0.01,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            layers: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReadoutSection {
    pub f_zero: f64,
    pub f_one: f64,
    pub n_qubits: usize,
    pub shots: u64,
}

impl Default for ReadoutSection {
    fn default() -> Self {
        Self {
            f_zero: 0.84,
            f_one: 0.62,
            n_qubits: 5,
            shots: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSection {
    pub n_qubits: usize,
    pub shot_list: Vec<u64>,
    pub repeats: u32,
}

impl Default for SamplingSection {
    fn default() -> Self {
        Self {
            n_qubits: 1,
            shot_list: vec![100, 400, 1600],
            repeats: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSection {
    pub n_list: Vec<usize>,
    pub m: usize,
    pub num_seeds: u32,
}

impl Default for KernelSection {
    fn default() -> Self {
        Self {
            n_list: vec![2, 4, 8],
            m: 50,
            num_seeds: 5,
        }
    }
}

/// The full experiment description; serializes losslessly through JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    /// Output CSV path; the metadata echo lands next to it.
    pub out: Option<PathBuf>,
    pub source: DataSource,
    /// Encoding names from the fixed set: basis, angle, hybrid-rx,
    /// hybrid-ry, hybrid-rz.
    pub encodings: Vec<String>,
    /// Prepend a Hadamard layer inside the hybrid encodings.
    pub hadamard_pre: bool,
    /// Independent training repetitions of encode-bench; seeds are derived
    /// from the master seed per repetition.
    pub num_seeds: u32,
    pub train: TrainSection,
    pub readout: ReadoutSection,
    pub sampling: SamplingSection,
    pub kernel: KernelSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::EncodeBench,
            seed: DEFAULT_SEED,
            out: None,
            source: DataSource::default(),
            encodings: qbias_core::encode::ENCODING_NAMES
                .iter()
                .map(|s| s.to_string())
                .collect(),
            hadamard_pre: false,
            num_seeds: 1,
            train: TrainSection::default(),
            readout: ReadoutSection::default(),
            sampling: SamplingSection::default(),
            kernel: KernelSection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))?;
        Ok(config)
    }

    pub fn out_path(&self) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| self.experiment.default_out())
    }

    /// Reject configurations the runners cannot execute.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.encodings.is_empty() {
            return Err(CliError::Config("no encodings requested".into()));
        }
        for name in &self.encodings {
            qbias_core::encode::EncodingSpec::from_name(name, 1, false)
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        if self.num_seeds == 0 {
            return Err(CliError::Config("num_seeds must be at least 1".into()));
        }
        if self.train.epochs == 0 || self.train.batch_size == 0 {
            return Err(CliError::Config(
                "epochs and batch_size must be at least 1".into(),
            ));
        }
        if self.train.learning_rate < 0.0 {
            return Err(CliError::Config("learning_rate must be >= 0".into()));
        }
        match &self.source {
            DataSource::Synthetic { dim, n_per_class, test_per_class, .. } => {
                if *dim == 0 || *n_per_class == 0 || *test_per_class == 0 {
                    return Err(CliError::Config(
                        "synthetic source needs dim and sample counts >= 1".into(),
                    ));
                }
            }
            DataSource::Mnist { block, n_per_class, test_per_class, .. } => {
                if 28 % *block != 0 {
                    return Err(CliError::Config(format!(
                        "block {block} does not divide 28"
                    )));
                }
                if *n_per_class == 0 || *test_per_class == 0 {
                    return Err(CliError::Config("sample counts must be >= 1".into()));
                }
            }
        }
        if self.sampling.shot_list.is_empty() || self.kernel.n_list.is_empty() {
            return Err(CliError::Config("shot_list and n_list must be non-empty".into()));
        }
        Ok(())
    }
}
