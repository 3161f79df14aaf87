//! Command-line harness: generate datasets, train models, diff clean/noisy
//! pairs and run the experiment presets.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use fuzzy_noise::datagen::{make_plane_dataset, DataSpec, Dataset, Distribution};
use fuzzy_noise::error::{Error, Result};
use fuzzy_noise::evaluation::{difference_surface, model_error, plane, DEFAULT_RESOLUTION};
use fuzzy_noise::experiment::{run_sweep, summary_csv, ExperimentConfig, Preset, DEFAULT_TRIALS};
use fuzzy_noise::inference::{read_model, save_model};
use fuzzy_noise::learning::{Algorithm, Init};
use fuzzy_noise::membership::MfKind;

#[derive(Parser, Debug)]
#[command(
    name = "fuzzy-noise",
    version,
    about = "Fuzzy model noise-sensitivity harness"
)]
struct Cli {
    /// `key=value` file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a plane dataset `z = x + y` as CSV.
    #[command(args_override_self = true)]
    Gen(GenArgs),
    /// Learn a model from a dataset CSV.
    #[command(args_override_self = true)]
    Train(TrainArgs),
    /// Compare a clean and a noisy model.
    #[command(args_override_self = true)]
    Diff(DiffArgs),
    /// Error of a model against the analytic plane.
    #[command(args_override_self = true)]
    Eval(EvalArgs),
    /// Run an experiment preset and write a summary CSV.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "clustered")]
    dist: Distribution,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    lo: f64,
    #[arg(long, default_value_t = 11.0, allow_negative_numbers = true)]
    hi: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Debug)]
struct TrainArgs {
    /// simplified, cluster, cluster-tri, cluster-gauss or neurofuzzy
    #[arg(long)]
    algo: String,
    /// Input membership kind; `cluster` picks its variant from this.
    #[arg(long)]
    mf: Option<MfKind>,
    #[arg(long, default_value_t = 9)]
    sets: usize,
    #[arg(long = "out-sets", default_value_t = 13)]
    out_sets: usize,
    #[arg(long = "width-factor", default_value_t = 0.5)]
    width_factor: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 50)]
    epochs: usize,
    #[arg(long, default_value = "cluster")]
    init: Init,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    lo: f64,
    #[arg(long, default_value_t = 11.0, allow_negative_numbers = true)]
    hi: f64,
    #[arg(long = "out-lo", default_value_t = 2.0, allow_negative_numbers = true)]
    out_lo: f64,
    #[arg(long = "out-hi", default_value_t = 22.0, allow_negative_numbers = true)]
    out_hi: f64,
    dataset: PathBuf,
    model: PathBuf,
}

#[derive(clap::Args, Debug)]
struct DiffArgs {
    clean: PathBuf,
    noisy: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    /// Report CSV path.
    #[arg(long, default_value = "diff.csv")]
    out: PathBuf,
}

#[derive(clap::Args, Debug)]
struct EvalArgs {
    model: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
}

#[derive(clap::Args, Debug)]
struct SweepArgs {
    preset: String,
    /// Keep only this algorithm's cells.
    #[arg(long)]
    algo: Option<Algorithm>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value = "clustered")]
    dist: Distribution,
    #[arg(long = "out-sets", default_value_t = 13)]
    out_sets: usize,
    #[arg(long = "width-factor", default_value_t = 0.5)]
    width_factor: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 50)]
    epochs: usize,
    #[arg(long, default_value = "cluster")]
    init: Init,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    /// Summary CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn gen(args: GenArgs) -> Result<()> {
    let spec = DataSpec {
        n: args.n,
        domain: vec![(args.lo, args.hi); 2],
        distribution: args.dist,
        noise_level: args.noise,
        seed: args.seed,
    };
    let data = make_plane_dataset(&spec)?;
    data.save(&args.out)?;
    println!(
        "n={} seed={} noise={} distribution={} out={}",
        spec.n,
        spec.seed,
        spec.noise_level,
        spec.distribution,
        args.out.display()
    );
    Ok(())
}

fn resolve_algorithm(algo: &str, mf: Option<MfKind>) -> Result<Algorithm> {
    let algorithm = match (algo, mf) {
        ("cluster", Some(MfKind::Gaussian)) => Algorithm::ClusterGauss,
        ("cluster", _) => Algorithm::ClusterTri,
        (name, _) => name.parse()?,
    };
    if let Some(kind) = mf {
        if kind != algorithm.input_kind() {
            return Err(Error::InvalidConfig(format!(
                "{algorithm} requires {} membership functions",
                algorithm.input_kind()
            )));
        }
    }
    Ok(algorithm)
}

fn train(args: TrainArgs) -> Result<()> {
    let algorithm = resolve_algorithm(&args.algo, args.mf)?;
    let cfg = ExperimentConfig {
        algorithm,
        input_sets: args.sets,
        output_sets: args.out_sets,
        alpha: args.alpha,
        epochs: args.epochs,
        init: args.init,
        width_factor: args.width_factor,
        input_range: (args.lo, args.hi),
        output_range: (args.out_lo, args.out_hi),
        ..Default::default()
    };
    let data = Dataset::load(&args.dataset)?;
    let model = cfg.train(&data)?;

    let mut meta = vec![
        ("algorithm".to_string(), algorithm.to_string()),
        (
            "partitions".to_string(),
            format!("{}x{}x{}", args.sets, args.sets, args.out_sets),
        ),
        ("dataset".to_string(), args.dataset.display().to_string()),
        ("n".to_string(), data.len().to_string()),
    ];
    if algorithm == Algorithm::NeuroFuzzy {
        meta.push(("alpha".into(), args.alpha.to_string()));
        meta.push(("epochs".into(), args.epochs.to_string()));
        meta.push(("init".into(), args.init.to_string()));
    }
    save_model(&args.model, &model, &meta)?;
    println!(
        "rules={} empty_cells={} shape={:?} out={}",
        model.rule_count(),
        model.empty_count(),
        model.shape(),
        args.model.display()
    );
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "absent".to_string(), |v| v.to_string())
}

fn diff(args: DiffArgs) -> Result<()> {
    let (clean, clean_meta) = read_model(&args.clean)?;
    let (noisy, noisy_meta) = read_model(&args.noisy)?;
    let report = difference_surface(&clean, &noisy, args.resolution)?;

    // Structure keys come from the noisy model; datasets are listed per side.
    let dataset_of = |meta: &[(String, String)]| {
        meta.iter()
            .find(|(k, _)| k == "dataset")
            .map(|(_, v)| v.clone())
    };
    let mut meta: Vec<(String, String)> = noisy_meta
        .iter()
        .filter(|(k, _)| k != "dataset")
        .cloned()
        .collect();
    meta.push(("clean_model".into(), args.clean.display().to_string()));
    meta.push(("noisy_model".into(), args.noisy.display().to_string()));
    if let Some(d) = dataset_of(&clean_meta) {
        meta.push(("clean_dataset".into(), d));
    }
    if let Some(d) = dataset_of(&noisy_meta) {
        meta.push(("noisy_dataset".into(), d));
    }
    meta.push(("resolution".into(), args.resolution.to_string()));
    write_file(&args.out, &report.to_csv(&meta))?;

    if let Some(map) = report.heatmap() {
        print!("{map}");
    }
    let rc = report.rule_changes;
    println!("rmse={}", fmt_opt(report.rmse));
    println!("max_abs={}", fmt_opt(report.max_abs));
    println!("gap_fraction={}", report.gap_fraction);
    println!(
        "rules: unchanged={} changed={} only_clean={} only_noisy={}",
        rc.unchanged, rc.changed, rc.only_a, rc.only_b
    );
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let (model, _) = read_model(&args.model)?;
    let e = model_error(&model, plane, args.resolution)?;
    println!("rmse={}", fmt_opt(e.rmse));
    println!("max_abs={}", fmt_opt(e.max_abs));
    println!("gap_fraction={}", e.gap_fraction);
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let preset: Preset = args.preset.parse()?;
    let base = ExperimentConfig {
        seed: args.seed,
        n_examples: args.n,
        distribution: args.dist,
        output_sets: args.out_sets,
        width_factor: args.width_factor,
        alpha: args.alpha,
        epochs: args.epochs,
        init: args.init,
        resolution: args.resolution,
        ..Default::default()
    };
    let rows = run_sweep(preset, &base, args.algo, args.trials)?;
    let csv = summary_csv(&rows);
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

/// Splits `--config FILE` out of the raw arguments and turns the file's
/// `key=value` lines into `--key=value` flags placed right after the
/// subcommand, so flags given on the command line win.
fn expand_config(raw: Vec<String>) -> Result<Vec<String>> {
    let mut args = Vec::with_capacity(raw.len());
    let mut config = None;
    let mut iter = raw.into_iter();
    while let Some(a) = iter.next() {
        if a == "--config" {
            config = iter.next();
        } else if let Some(path) = a.strip_prefix("--config=") {
            config = Some(path.to_string());
        } else {
            args.push(a);
        }
    }
    let Some(path) = config else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|source| Error::Io {
        path: path.clone().into(),
        source,
    })?;

    let root = Cli::command();
    let Some((pos, sub)) = args
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| root.find_subcommand(a).map(|s| (i, s)))
    else {
        return Ok(args);
    };
    let mut injected = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("{path}: expected key=value"),
        })?;
        let key = key.trim();
        if !sub.get_arguments().any(|a| a.get_long() == Some(key)) {
            return Err(Error::InvalidConfig(format!(
                "{path}: '{key}' is not a flag of '{}'",
                sub.get_name()
            )));
        }
        injected.push(format!("--{key}={}", value.trim()));
    }
    args.splice(pos + 1..pos + 1, injected);
    Ok(args)
}

fn run() -> Result<()> {
    let args = expand_config(std::env::args().collect())?;
    let cli = Cli::parse_from(args);
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Train(a) => train(a),
        Command::Diff(a) => diff(a),
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
