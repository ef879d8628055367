//! Experiment runners: each takes a resolved config, runs one experiment,
//! and atomically writes a CSV plus a sibling `<out>.meta.json` echoing the
//! full configuration. Identical configs produce byte-identical files.

use std::path::{Path, PathBuf};

use qbias_core::data::{
    self, avg_pool, load_idx, make_binary_subset, synthetic_gaussians, Dataset,
};
use qbias_core::encode::EncodingSpec;
use qbias_core::kernel::concentration_experiment;
use qbias_core::measurement::{
    calibrate_per_qubit_rates, fidelity, invert_and_measure, shot_scaling_experiment,
    MitigationStrategy, ReadoutNoiseModel,
};
use qbias_core::rng::derive_seed;
use qbias_core::sim::{Gate, Statevector};
use qbias_core::vqc::{train, Model, TrainConfig};

use crate::config::{DataSource, ExperimentConfig, ExperimentKind};
use crate::error::CliError;

pub const ENCODE_BENCH_HEADER: &str = "encoding,epoch,train_loss,train_acc,test_acc,seed";
pub const READOUT_HEADER: &str = "state,strategy,shots,fidelity";
pub const SAMPLING_HEADER: &str = "shots,mean_estimate,std_estimate,exact";
pub const KERNEL_HEADER: &str = "n_qubits,m,mean_offdiag,lambda_max,seeds";

/// Paths produced by a run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub csv: PathBuf,
    pub meta: PathBuf,
}

/// Dispatch on the configured experiment kind.
pub fn run(config: &ExperimentConfig) -> Result<RunArtifacts, CliError> {
    config.validate()?;
    let csv = match config.experiment {
        ExperimentKind::EncodeBench => encode_bench_csv(config)?,
        ExperimentKind::ReadoutBias => readout_csv(config)?,
        ExperimentKind::Sampling => sampling_csv(config)?,
        ExperimentKind::KernelConcentration => kernel_csv(config)?,
    };
    write_artifacts(config, &csv)
}

fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

struct MnistPools {
    train_features: Vec<Vec<f64>>,
    train_labels: Vec<u8>,
    test_features: Vec<Vec<f64>>,
    test_labels: Vec<u8>,
}

fn resolve_data_dir(data_dir: &Option<PathBuf>) -> Result<PathBuf, CliError> {
    if let Some(dir) = data_dir {
        return Ok(dir.clone());
    }
    std::env::var_os(data::DATA_DIR_ENV)
        .map(PathBuf::from)
        .ok_or_else(|| {
            CliError::Data(format!(
                "no data directory given and {} is unset",
                data::DATA_DIR_ENV
            ))
        })
}

fn load_mnist_pool(dir: &Path, images: &str, labels: &str, block: usize) -> Result<(Vec<Vec<f64>>, Vec<u8>), CliError> {
    let (image_shape, image_bytes) = load_idx(&dir.join(images))?;
    let (label_shape, label_bytes) = load_idx(&dir.join(labels))?;
    if image_shape.len() != 3 || image_shape[1] != 28 || image_shape[2] != 28 {
        return Err(CliError::Data(format!(
            "{images}: expected Nx28x28 images, got shape {image_shape:?}"
        )));
    }
    if label_shape[0] != image_shape[0] {
        return Err(CliError::Data(format!(
            "{labels}: {} labels for {} images",
            label_shape[0], image_shape[0]
        )));
    }
    let features = image_bytes
        .chunks_exact(28 * 28)
        .map(|img| avg_pool(img, 28, block))
        .collect::<qbias_core::Result<Vec<_>>>()?;
    Ok((features, label_bytes))
}

fn load_mnist_pools(
    data_dir: &Option<PathBuf>,
    block: usize,
) -> Result<MnistPools, CliError> {
    let dir = resolve_data_dir(data_dir)?;
    let (train_features, train_labels) =
        load_mnist_pool(&dir, data::MNIST_TRAIN_IMAGES, data::MNIST_TRAIN_LABELS, block)?;
    let (test_features, test_labels) =
        load_mnist_pool(&dir, data::MNIST_TEST_IMAGES, data::MNIST_TEST_LABELS, block)?;
    Ok(MnistPools {
        train_features,
        train_labels,
        test_features,
        test_labels,
    })
}

fn encode_bench_csv(config: &ExperimentConfig) -> Result<String, CliError> {
    let num_features = match &config.source {
        DataSource::Synthetic { dim, .. } => *dim,
        DataSource::Mnist { block, .. } => (28 / block) * (28 / block),
    };
    let mnist_pools = match &config.source {
        DataSource::Mnist { data_dir, block, .. } => {
            Some(load_mnist_pools(data_dir, *block)?)
        }
        DataSource::Synthetic { .. } => None,
    };

    let mut csv = String::from(ENCODE_BENCH_HEADER);
    csv.push('\n');
    for name in &config.encodings {
        for rep in 0..config.num_seeds {
            // one seed per repetition, shared across encodings so every
            // encoding sees the same data draw and initialization
            let run_seed = derive_seed(config.seed, rep as u64);
            let (train_set, test_set): (Dataset, Dataset) = match &config.source {
                DataSource::Synthetic {
                    n_per_class,
                    test_per_class,
                    dim,
                    separation,
                } => (
                    synthetic_gaussians(*n_per_class, *dim, *separation, derive_seed(run_seed, 0)),
                    synthetic_gaussians(
                        *test_per_class,
                        *dim,
                        *separation,
                        derive_seed(run_seed, 1),
                    ),
                ),
                DataSource::Mnist {
                    class_a,
                    class_b,
                    n_per_class,
                    test_per_class,
                    ..
                } => {
                    let pools = mnist_pools.as_ref().expect("pools loaded for mnist source");
                    (
                        make_binary_subset(
                            &pools.train_features,
                            &pools.train_labels,
                            *class_a,
                            *class_b,
                            *n_per_class,
                            derive_seed(run_seed, 0),
                        )?,
                        make_binary_subset(
                            &pools.test_features,
                            &pools.test_labels,
                            *class_a,
                            *class_b,
                            *test_per_class,
                            derive_seed(run_seed, 1),
                        )?,
                    )
                }
            };

            let spec = EncodingSpec::from_name(name, num_features, config.hadamard_pre)?;
            let mut model = Model::new(spec, config.train.layers, run_seed)?;
            let train_config = TrainConfig {
                epochs: config.train.epochs,
                batch_size: config.train.batch_size,
                learning_rate: config.train.learning_rate,
                adam_beta1: config.train.adam_beta1,
                adam_beta2: config.train.adam_beta2,
                adam_eps: config.train.adam_eps,
                seed: run_seed,
                layers: config.train.layers,
            };
            let report = train(&mut model, &train_set, &test_set, &train_config)?;
            for row in &report.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    name,
                    row.epoch,
                    fmt6(row.train_loss),
                    fmt6(row.train_acc),
                    fmt6(row.test_acc),
                    run_seed
                ));
            }
        }
    }
    Ok(csv)
}

fn readout_csv(config: &ExperimentConfig) -> Result<String, CliError> {
    let section = &config.readout;
    let (eps01, eps10) =
        calibrate_per_qubit_rates(section.f_zero, section.f_one, section.n_qubits)?;
    let noise = ReadoutNoiseModel::uniform(section.n_qubits, eps01, eps10)?;

    let zero_state = Statevector::zero(section.n_qubits)?;
    let mut one_state = Statevector::zero(section.n_qubits)?;
    for q in 0..section.n_qubits {
        one_state.apply_gate(&Gate::X { target: q })?;
    }
    let zero_target = "0".repeat(section.n_qubits);
    let one_target = "1".repeat(section.n_qubits);

    let states = [("all-zero", &zero_state, &zero_target), ("all-one", &one_state, &one_target)];
    let strategies = [
        ("none", MitigationStrategy::None),
        ("invert-all", MitigationStrategy::InvertAll),
        ("dual-run-average", MitigationStrategy::DualRunAverage),
    ];

    let mut csv = String::from(READOUT_HEADER);
    csv.push('\n');
    let mut cell = 0u64;
    for (state_name, state, target) in states {
        for (strategy_name, strategy) in &strategies {
            let counts = invert_and_measure(
                state,
                &noise,
                section.shots,
                strategy,
                derive_seed(config.seed, cell),
            )?;
            let f = fidelity(&counts, target)?;
            csv.push_str(&format!(
                "{state_name},{strategy_name},{},{}\n",
                section.shots,
                fmt6(f)
            ));
            cell += 1;
        }
    }
    Ok(csv)
}

fn sampling_csv(config: &ExperimentConfig) -> Result<String, CliError> {
    let section = &config.sampling;
    let mut state = Statevector::zero(section.n_qubits)?;
    state.apply_gate(&Gate::H { target: 0 })?;
    let rows = shot_scaling_experiment(
        &state,
        0,
        &section.shot_list,
        section.repeats,
        config.seed,
    )?;
    let mut csv = String::from(SAMPLING_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.shots,
            fmt6(row.mean_estimate),
            fmt6(row.std_estimate),
            fmt6(row.exact)
        ));
    }
    Ok(csv)
}

fn kernel_csv(config: &ExperimentConfig) -> Result<String, CliError> {
    let section = &config.kernel;
    let rows = concentration_experiment(
        &section.n_list,
        section.m,
        section.num_seeds,
        config.seed,
    )?;
    let mut csv = String::from(KERNEL_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n_qubits,
            row.m,
            fmt6(row.mean_offdiag),
            fmt6(row.lambda_max),
            row.seeds
        ));
    }
    Ok(csv)
}

/// Metadata file path next to the CSV: `results/x.csv` -> `results/x.meta.json`.
pub fn metadata_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Data(format!("creating {}: {e}", parent.display())))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)
        .map_err(|e| CliError::Data(format!("writing {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::Data(format!("renaming to {}: {e}", path.display())))?;
    Ok(())
}

fn write_artifacts(config: &ExperimentConfig, csv: &str) -> Result<RunArtifacts, CliError> {
    let out = config.out_path();
    let meta = metadata_path(&out);
    let mut echoed = serde_json::to_string_pretty(config)
        .map_err(|e| CliError::Config(format!("serializing config: {e}")))?;
    echoed.push('\n');
    write_atomic(&out, csv)?;
    write_atomic(&meta, &echoed)?;
    Ok(RunArtifacts { csv: out, meta })
}
