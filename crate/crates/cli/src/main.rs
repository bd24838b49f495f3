//! `magnitude`: compute magnitudes and diversifiers, run the continuity
//! suites, preprocess signals, extract features and run experiments.

mod io;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use magnitude_core::continuity::{run_suite, Suite};
use magnitude_core::experiments::{
    run_convergence_with, run_identification_with, ConvergenceConfig, IdentificationConfig, KnnWeighting, Model,
    DEFAULT_MAX_POINTS, DEFAULT_SWEEP,
};
use magnitude_core::features::{extract_features_with, EmbeddingSpec, FeatureBasis, FeatureConfig};
use magnitude_core::seed::derive_seed;
use magnitude_core::signal::{bandpass, blind_segment, resample};
use magnitude_core::{diversifier_with, weighting_with, SolverConfig, WeightKind};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "magnitude",
    version,
    about = "Magnitude, diversity and weighting-integral features of point clouds and signals"
)]
struct Cli {
    /// Root seed; every stochastic step derives its own seed from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Convergence tolerance for the solvers.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Suppress warnings and progress on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Magnitude and weighting, or maximum diversity and diversifier, of a point cloud.
    Compute(ComputeArgs),
    /// Run a seeded suite of continuity-bound checks.
    Check(CheckArgs),
    /// Bandpass, resample and segment a single-column signal.
    Preprocess(PreprocessArgs),
    /// Extract feature vectors from segment directories.
    Features(FeaturesArgs),
    /// Convergence and identification experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Weighting,
    Diversifier,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Weighting,
    Diversifier,
    Uniform,
}

impl From<Kind> for WeightKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Weighting => WeightKind::Weighting,
            Kind::Diversifier => WeightKind::Diversifier,
            Kind::Uniform => WeightKind::Uniform,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct ComputeArgs {
    /// CSV of points, one per row, with an optional header.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, value_enum, default_value_t = Mode::Weighting)]
    mode: Mode,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SuiteArg {
    WeightingBound,
    DiversifierBound,
    DiversityRatio,
}

#[derive(Args, Debug, Serialize)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct PreprocessArgs {
    /// Single-column CSV of samples.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    freq_hz: f64,
    /// Pass band as `LOW:HIGH` in Hz.
    #[arg(long, default_value = "0.5:50")]
    band: String,
    /// Total filter order (even).
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// Target sampling frequency in Hz.
    #[arg(long)]
    resample: Option<f64>,
    /// Segment length in seconds.
    #[arg(long, default_value_t = 2.0)]
    segment: f64,
    #[arg(long)]
    outdir: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct FeaturesArgs {
    /// Directory of label subdirectories holding segment CSVs, or a single
    /// segment directory labelled by its own name.
    #[arg(long)]
    input: PathBuf,
    /// Sampling frequency, when segment directories carry no meta.json.
    #[arg(long)]
    freq_hz: Option<f64>,
    #[arg(long, default_value_t = 20.0)]
    tau_ms: f64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 200)]
    target_points: usize,
    #[arg(long, value_enum, default_value_t = Kind::Weighting)]
    kind: Kind,
    #[arg(long, default_value_t = 512)]
    n_fourier: usize,
    #[arg(long, default_value_t = 512)]
    n_landmark: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    radius_prime: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    /// Spread of the integral at ξ = (1, −1) across randomly sampled segments.
    Convergence(ConvergenceArgs),
    /// Synthetic multi-class identification.
    Identify(IdentifyArgs),
}

#[derive(Args, Debug, Serialize)]
struct ConvergenceArgs {
    #[arg(long, value_enum, default_value_t = Kind::Weighting)]
    kind: Kind,
    /// `default`, or a comma-separated list of `F:DELTA` pairs.
    #[arg(long, default_value = "default")]
    sweep: String,
    #[arg(long, default_value_t = 100)]
    segments: usize,
    /// Cap on embedded cloud size before solving; 0 keeps every point.
    #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModelArg {
    Knn,
    Logreg,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum KnnWeightArg {
    Uniform,
    Distance,
}

#[derive(Args, Debug, Serialize)]
struct IdentifyArgs {
    #[arg(long, default_value_t = 5)]
    classes: usize,
    #[arg(long, default_value_t = 100)]
    segments: usize,
    #[arg(long, value_enum, default_value_t = Kind::Weighting)]
    kind: Kind,
    #[arg(long, value_enum, default_value_t = ModelArg::Knn)]
    model: ModelArg,
    /// Neighbours for KNN.
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, value_enum, default_value_t = KnnWeightArg::Distance)]
    knn_weighting: KnnWeightArg,
    /// Inverse regularization strength for logistic regression.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    /// Uniform sampling-noise bound.
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long, default_value_t = 512)]
    n_fourier: usize,
    #[arg(long, default_value_t = 512)]
    n_landmark: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    radius_prime: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Ctx {
    seed: u64,
    tolerance: Option<f64>,
    quiet: bool,
}

impl Ctx {
    fn warn(&self, msg: &str) {
        if !self.quiet {
            eprintln!("warning: {msg}");
        }
    }

    fn meta(&self, command: &str, config: &impl Serialize, derived_seed: Option<u64>) -> Result<Value> {
        Ok(json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "seed": self.seed,
            "derived_seed": derived_seed,
            "tolerance": self.tolerance,
            "config": serde_json::to_value(config)?,
        }))
    }

    fn solver(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(t) = self.tolerance {
            cfg.tolerance = t;
        }
        cfg
    }
}

fn compute(ctx: &Ctx, args: &ComputeArgs) -> Result<()> {
    let cloud = io::read_cloud(&args.input)?;
    let cfg = ctx.solver();
    let r = match args.mode {
        Mode::Weighting => weighting_with(&cloud, args.scale, &cfg)?,
        Mode::Diversifier => diversifier_with(&cloud, args.scale, &cfg)?,
    };
    r.warnings.iter().for_each(|w| ctx.warn(w));
    let out = json!({
        "meta": ctx.meta("compute", args, None)?,
        "mode": args.mode,
        "scale": args.scale,
        "value": r.value,
        "coefficients": r.weights.coeffs(),
        "points": r.weights.support().points().collect::<Vec<_>>(),
        "residual": r.residual,
        "iterations": r.iterations,
        "removed_duplicates": r.removed_duplicates,
        "warnings": r.warnings,
    });
    io::emit(args.output.as_deref(), &io::to_json(&out)?)
}

/// Returns whether every pair satisfied its bounds.
fn check(ctx: &Ctx, args: &CheckArgs) -> Result<bool> {
    let suite = match args.suite {
        SuiteArg::WeightingBound => Suite::WeightingBound,
        SuiteArg::DiversifierBound => Suite::DiversifierBound,
        SuiteArg::DiversityRatio => Suite::DiversityRatio,
    };
    let seed = derive_seed(ctx.seed, "check");
    let report = run_suite(suite, args.trials, seed, args.scale)?;
    let ok = report.satisfied == report.trials;
    if !ok {
        ctx.warn(&format!("{} of {} pairs violated a bound", report.trials - report.satisfied, report.trials));
    }
    let out = json!({ "meta": ctx.meta("check", args, Some(seed))?, "report": report });
    io::emit(args.output.as_deref(), &io::to_json(&out)?)?;
    Ok(ok)
}

fn parse_band(band: &str) -> Result<(f64, f64)> {
    let Some((lo, hi)) = band.split_once(':') else { bail!("band must look like LOW:HIGH, got {band:?}") };
    Ok((lo.trim().parse().context("band low edge")?, hi.trim().parse().context("band high edge")?))
}

fn preprocess(ctx: &Ctx, args: &PreprocessArgs) -> Result<()> {
    let (lo, hi) = parse_band(&args.band)?;
    let raw = io::read_signal(&args.input, args.freq_hz)?;
    let mut signal = bandpass(&raw, lo, hi, args.order)?;
    if let Some(f) = args.resample {
        signal = resample(&signal, f)?;
    }
    let segments = blind_segment(&signal, args.segment)?;
    if segments.is_empty() {
        ctx.warn("signal is shorter than one segment; no segments written");
    }
    fs::create_dir_all(&args.outdir).with_context(|| format!("cannot create {}", args.outdir.display()))?;
    for (i, s) in segments.iter().enumerate() {
        io::write_signal(&args.outdir.join(format!("segment_{i:05}.csv")), s)?;
    }
    let meta = json!({
        "freq_hz": signal.freq_hz(),
        "segments": segments.len(),
        "meta": ctx.meta("preprocess", args, None)?,
    });
    io::emit(Some(&args.outdir.join(io::SEGMENT_META)), &io::to_json(&meta)?)
}

fn label_dirs(input: &Path) -> Result<Vec<(String, PathBuf)>> {
    let subdirs = io::subdirs(input)?;
    let dirs = if subdirs.is_empty() { vec![input.to_path_buf()] } else { subdirs };
    Ok(dirs
        .into_iter()
        .map(|d| {
            let label = d.file_name().map_or_else(|| "segments".to_string(), |n| n.to_string_lossy().into_owned());
            (label, d)
        })
        .collect())
}

fn features(ctx: &Ctx, args: &FeaturesArgs) -> Result<()> {
    let spec = EmbeddingSpec { lag_s: args.tau_ms / 1000.0, dim: args.dim };
    let cfg = FeatureConfig {
        n_fourier: args.n_fourier,
        n_landmark: args.n_landmark,
        radius: args.radius,
        radius_prime: args.radius_prime,
        target_points: args.target_points,
        kind: args.kind.into(),
        scale: 1.0,
        seed: derive_seed(ctx.seed, "features"),
    };
    let basis = FeatureBasis::new(args.dim, &cfg);
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label".to_string()];
    header.extend((0..cfg.n_fourier).map(|i| format!("fourier_{i}")));
    header.extend((0..cfg.n_landmark).map(|i| format!("landmark_{i}")));
    writer.write_record(&header)?;
    let mut rows = 0;
    for (label, dir) in label_dirs(&args.input)? {
        let freq = match (args.freq_hz, io::read_segment_meta(&dir)?) {
            (Some(f), _) => f,
            (None, Some(m)) => m.freq_hz,
            (None, None) => bail!("{}: no meta.json; pass --freq-hz", dir.display()),
        };
        for file in io::csv_files(&dir)? {
            let segment = io::read_signal(&file, freq)?;
            let fv = extract_features_with(&segment, &spec, &cfg, &basis)
                .with_context(|| format!("features of {}", file.display()))?;
            let mut record = vec![label.clone()];
            record.extend(fv.values.iter().map(|v| v.to_string()));
            writer.write_record(&record)?;
            rows += 1;
        }
    }
    if rows == 0 {
        bail!("{}: no segment CSV files found", args.input.display());
    }
    let bytes = writer.into_inner().context("flushing features")?;
    io::emit(args.output.as_deref(), &String::from_utf8(bytes)?)
}

fn parse_sweep(sweep: &str) -> Result<Vec<(f64, f64)>> {
    if sweep == "default" {
        return Ok(DEFAULT_SWEEP.to_vec());
    }
    sweep
        .split(',')
        .map(|pair| {
            let Some((f, d)) = pair.split_once(':') else { bail!("sweep entries look like F:DELTA, got {pair:?}") };
            Ok((f.trim().parse().context("sweep frequency")?, d.trim().parse().context("sweep noise bound")?))
        })
        .collect()
}

fn convergence(ctx: &Ctx, args: &ConvergenceArgs) -> Result<()> {
    let seed = derive_seed(ctx.seed, "convergence");
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["kind", "f", "delta", "mean", "std", "n"])?;
    for (f, delta) in parse_sweep(&args.sweep)? {
        let cfg = ConvergenceConfig {
            max_points: (args.max_points > 0).then_some(args.max_points),
            ..ConvergenceConfig::new(args.kind.into(), f, delta, args.segments, seed)
        };
        let run = run_convergence_with(&cfg)?;
        if !ctx.quiet {
            eprintln!("f = {f} Hz, delta = {delta}: std {}", run.std);
        }
        let kind = serde_json::to_value(args.kind)?;
        writer.write_record([
            kind.as_str().unwrap_or_default().to_string(),
            f.to_string(),
            delta.to_string(),
            run.mean.to_string(),
            run.std.to_string(),
            run.n_segments.to_string(),
        ])?;
    }
    let bytes = writer.into_inner().context("flushing convergence table")?;
    io::emit(args.out.as_deref(), &String::from_utf8(bytes)?)
}

fn identify(ctx: &Ctx, args: &IdentifyArgs) -> Result<()> {
    let seed = derive_seed(ctx.seed, "identify");
    let mut cfg = IdentificationConfig::new(args.classes, args.segments, args.kind.into(), seed);
    cfg.model = match args.model {
        ModelArg::Knn => Model::Knn {
            k: args.k,
            weighting: match args.knn_weighting {
                KnnWeightArg::Uniform => KnnWeighting::Uniform,
                KnnWeightArg::Distance => KnnWeighting::Distance,
            },
        },
        ModelArg::Logreg => Model::Logreg { c: args.c, epochs: args.epochs, lr: args.lr },
    };
    if let Some(noise) = args.noise {
        cfg.noise_bound = noise;
    }
    cfg.features.n_fourier = args.n_fourier;
    cfg.features.n_landmark = args.n_landmark;
    cfg.features.radius = args.radius;
    cfg.features.radius_prime = args.radius_prime;
    let report = run_identification_with(&cfg)?;
    let out = json!({ "meta": ctx.meta("experiment identify", &cfg, Some(seed))?, "report": report });
    io::emit(args.out.as_deref(), &io::to_json(&out)?)
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = Ctx { seed: cli.seed, tolerance: cli.tolerance, quiet: cli.quiet };
    match &cli.command {
        Command::Compute(a) => compute(&ctx, a)?,
        Command::Check(a) => return check(&ctx, a),
        Command::Preprocess(a) => preprocess(&ctx, a)?,
        Command::Features(a) => features(&ctx, a)?,
        Command::Experiment(ExperimentCommand::Convergence(a)) => convergence(&ctx, a)?,
        Command::Experiment(ExperimentCommand::Identify(a)) => identify(&ctx, a)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
