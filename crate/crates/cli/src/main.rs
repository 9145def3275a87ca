use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qlstm_core::chem::LoadOptions;
use qlstm_core::experiment::{
    collect_results, fingerprint_file, run_experiment, run_sweep, score_path, ExperimentConfig, SweepAxis,
    SweepOptions,
};
use qlstm_core::model::ModelKind;

#[derive(Parser)]
#[command(name = "qlstm", version, about = "Quantum LSTM experiments on molecular fingerprints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute circular fingerprints for a SMILES CSV.
    Fingerprint {
        /// Input CSV with a `smiles` column and label columns.
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value_t = 1024)]
        bits: usize,
        /// Drop stereo markers instead of skipping those rows.
        #[arg(long)]
        strip_stereo: bool,
    },
    /// Train per an experiment config.
    Train(RunArgs),
    /// Run an experiment config across values of one axis.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        axis: AxisArg,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
        /// Models to train for every value (default: the config's model).
        #[arg(long, value_enum, value_delimiter = ',')]
        models: Vec<ModelArg>,
        /// Number of legs to run at once.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Circuit error score of a circuit file, model config or experiment config.
    Score {
        input: PathBuf,
        /// JSON gate-error table (default 0.0003 / 0.0032).
        #[arg(long)]
        table: Option<PathBuf>,
        /// Print only the JSON document.
        #[arg(long)]
        json: bool,
    },
    /// Merge sweep or run directories into one results table.
    Report {
        dirs: Vec<PathBuf>,
        /// Also write the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the global seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn load(&self) -> Result<(ExperimentConfig, PathBuf)> {
        let (mut config, base) = ExperimentConfig::load(&self.config)
            .with_context(|| format!("reading config {}", self.config.display()))?;
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        config.validate(&base)?;
        Ok((config, base))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Qubits,
    Noise,
    Lr,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Qlstm,
    Lstm,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fingerprint { input, out, radius, bits, strip_stereo } => {
            let options = LoadOptions { radius, n_bits: bits, strip_stereo, ..Default::default() };
            let s = fingerprint_file(&input, &out, &options)?;
            println!("{} rows written to {}, {} skipped", s.rows, out.display(), s.skipped);
        }
        Command::Train(args) => {
            let (config, base) = args.load()?;
            let run = run_experiment(&config, &base)?;
            println!(
                "{} mean val accuracy {:.4} over {} split(s); written to {}",
                run.summary.model.name(),
                run.summary.mean_val_accuracy,
                run.summary.seeds.len(),
                run.dir.display()
            );
        }
        Command::Sweep { run, axis, values, models, parallel } => {
            let (config, base) = run.load()?;
            let axis = match axis {
                AxisArg::Qubits => SweepAxis::Qubits,
                AxisArg::Noise => SweepAxis::Noise,
                AxisArg::Lr => SweepAxis::Lr,
            };
            let models = models
                .into_iter()
                .map(|m| match m {
                    ModelArg::Qlstm => ModelKind::Qlstm,
                    ModelArg::Lstm => ModelKind::Lstm,
                })
                .collect();
            let options = SweepOptions { axis, values, models, parallel: parallel.max(1) };
            let sweep = run_sweep(&config, &base, &options)?;
            let table = collect_results(&[sweep.dir.clone()])?;
            print!("{}", table.render());
            println!("written to {}", sweep.dir.display());
            let failed = sweep.manifest.legs.iter().filter(|l| l.error.is_some()).count();
            if failed > 0 {
                bail!("{failed} of {} sweep legs failed", sweep.manifest.legs.len());
            }
        }
        Command::Score { input, table, json } => {
            let out = score_path(&input, table.as_deref())?;
            if !json {
                println!("{}", out.render());
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Report { dirs, out } => {
            let table = collect_results(&dirs)?;
            print!("{}", table.render());
            if let Some(path) = out {
                table.write_csv(&path).with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(())
}
