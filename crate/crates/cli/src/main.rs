use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qbias_cli::config::{DataSource, ExperimentConfig, ExperimentKind};
use qbias_cli::error::CliError;
use qbias_cli::runner;

#[derive(Debug, Parser)]
#[command(
    name = "qbias",
    version,
    about = "Reproducible bias experiments for small quantum classifiers",
    after_help = "Exit codes: 0 success, 2 config error, 3 data error, 4 capacity error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train the fixed classifier under each requested encoding and record
    /// per-epoch accuracy curves.
    EncodeBench(CommonArgs),
    /// Measure all-zero / all-one register fidelities under calibrated
    /// asymmetric readout noise, with and without invert-and-measure.
    ReadoutBias(CommonArgs),
    /// Estimate ⟨Z⟩ on |+⟩ across shot budgets and record the estimator
    /// spread against the exact value.
    Sampling(CommonArgs),
    /// Sweep register sizes and record Gram-matrix concentration statistics.
    KernelConcentration(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON experiment config; omitted fields take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (metadata echo is written next to it).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed, overriding the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// MNIST directory; falls back to the QBIAS_DATA_DIR environment
    /// variable. Implies the MNIST data source for encode-bench.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Force the synthetic data source.
    #[arg(long)]
    synthetic: bool,
}

fn resolve(kind: ExperimentKind, args: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    if args.synthetic && args.data_dir.is_some() {
        return Err(CliError::Config(
            "--synthetic and --data-dir are mutually exclusive".into(),
        ));
    }
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    config.experiment = kind;
    if let Some(out) = &args.out {
        config.out = Some(out.clone());
    }
    if let Some(dir) = &args.data_dir {
        config.source = match config.source {
            DataSource::Mnist {
                class_a,
                class_b,
                n_per_class,
                test_per_class,
                block,
                ..
            } => DataSource::Mnist {
                data_dir: Some(dir.clone()),
                class_a,
                class_b,
                n_per_class,
                test_per_class,
                block,
            },
            DataSource::Synthetic { .. } => DataSource::Mnist {
                data_dir: Some(dir.clone()),
                class_a: 0,
                class_b: 1,
                n_per_class: 100,
                test_per_class: 50,
                block: 7,
            },
        };
    }
    if args.synthetic {
        if let DataSource::Mnist { .. } = config.source {
            config.source = DataSource::default();
        }
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::EncodeBench(args) => (ExperimentKind::EncodeBench, args),
        Command::ReadoutBias(args) => (ExperimentKind::ReadoutBias, args),
        Command::Sampling(args) => (ExperimentKind::Sampling, args),
        Command::KernelConcentration(args) => (ExperimentKind::KernelConcentration, args),
    };
    let outcome = resolve(kind, args).and_then(|config| runner::run(&config));
    match outcome {
        Ok(artifacts) => {
            println!("wrote {}", artifacts.csv.display());
            println!("wrote {}", artifacts.meta.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
