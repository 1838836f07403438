use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use specmetric::experiments::{
    run_cost_validity, run_reliability, run_segment_reliability_config, run_validity, CostValidityConfig,
    ExperimentReport, ReliabilityConfig, SegmentReliabilityConfig, ValidityConfig,
};
use specmetric::io::{self, ReportFormat, RunManifest};
use specmetric::simulate::{derive_seed, generate_demand, perturb_forecast, DemandProfile, ErrorModel};
use specmetric::{compute, spec_alpha_sweep, spec_decompose, EvaluationPair, MetricName, SpecParams};

#[derive(Parser)]
#[command(
    name = "specmetric",
    version,
    about = "Cost-oriented forecast error evaluation for intermittent demand"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a forecast against actual demand.
    Score(ScoreArgs),
    /// Per-step opportunity and stock-keeping contributions to SPEC.
    Decompose(DecomposeArgs),
    /// SPEC over an alpha1 grid with alpha2 = 1 - alpha1.
    Sweep(SweepArgs),
    /// Generate demand and perturbed forecasts.
    Simulate(SimulateArgs),
    /// Run a reliability or validity experiment from a JSON config.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct Weights {
    #[arg(long, default_value_t = 0.75)]
    alpha1: f64,
    #[arg(long, default_value_t = 0.25)]
    alpha2: f64,
}

impl Weights {
    fn params(&self) -> specmetric::Result<SpecParams> {
        SpecParams::new(self.alpha1, self.alpha2)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => ReportFormat::Table,
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Args)]
struct ScoreArgs {
    /// CSV with header `t,actual,forecast`.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    weights: Weights,
    /// Comma-separated metric names; defaults to mae,rmse,mape,smape,mase,spec.
    #[arg(long, value_delimiter = ',')]
    metrics: Vec<MetricName>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    weights: Weights,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a stacked-bar chart.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// One or more pair CSVs; each becomes one curve.
    #[arg(long, num_args = 1.., required = true)]
    input: Vec<PathBuf>,
    #[arg(long, default_value_t = 101)]
    grid_size: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 52)]
    n: usize,
    #[arg(long, default_value_t = 10.0)]
    count_mu: f64,
    #[arg(long, default_value_t = 2.5)]
    count_sigma: f64,
    #[arg(long, default_value_t = 10.0)]
    magnitude_mu: f64,
    #[arg(long, default_value_t = 4.0)]
    magnitude_sigma: f64,
    #[arg(long)]
    integer_magnitudes: bool,
    #[arg(long, default_value_t = 0.0)]
    vertical_mu: f64,
    #[arg(long, default_value_t = 0.0)]
    vertical_sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    horizontal_mu: f64,
    #[arg(long, default_value_t = 0.0)]
    horizontal_sigma: f64,
    /// Number of perturbed forecasts to write.
    #[arg(long, default_value_t = 1)]
    forecasts: usize,
    /// Base seed; drawn from system entropy when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Reliability,
    SegmentReliability,
    Validity,
    CostValidity,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: ExperimentName,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    User(String),
    Internal(String),
}

impl From<specmetric::Error> for Failure {
    fn from(e: specmetric::Error) -> Self {
        if e.is_user_error() {
            Failure::User(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn read_pair(path: &Path) -> CliResult<EvaluationPair> {
    io::read_pair(path).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn command_line() -> Vec<String> {
    std::env::args().collect()
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes a manifest beside the first file output, if there is one.
fn finish_manifest(mut manifest: RunManifest, outputs: &[&Path]) -> CliResult<()> {
    let Some(first) = outputs.first() else {
        return Ok(());
    };
    manifest.outputs = outputs.iter().map(|p| p.display().to_string()).collect();
    manifest.write(manifest_path(first))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn score(args: ScoreArgs) -> CliResult<()> {
    let params = args.weights.params()?;
    let pair = read_pair(&args.input)?;
    let metrics = if args.metrics.is_empty() {
        MetricName::TABLE.to_vec()
    } else {
        args.metrics.clone()
    };
    let report = compute(&pair, params, &metrics);
    let mut manifest = RunManifest::new(
        command_line(),
        json!({
            "input": args.input.display().to_string(),
            "alpha1": params.alpha1(),
            "alpha2": params.alpha2(),
            "metrics": metrics,
        }),
    );
    if let Some(out) = &args.out {
        manifest.outputs.push(out.display().to_string());
    }
    let text = io::render_report(&report, args.format.into(), Some(&manifest))?;
    emit(args.out.as_deref(), &text)?;
    // JSON embeds the manifest; other formats get it beside the file.
    if !matches!(args.format, Format::Json) {
        if let Some(out) = &args.out {
            finish_manifest(manifest, &[out])?;
        }
    }
    Ok(())
}

fn decompose(args: DecomposeArgs) -> CliResult<()> {
    let params = args.weights.params()?;
    let pair = read_pair(&args.input)?;
    let breakdown = spec_decompose(&pair, params);
    emit(args.out.as_deref(), &io::decomposition_csv(&breakdown))?;
    if let Some(svg) = &args.svg {
        write_file(svg, &io::decomposition_svg(&breakdown))?;
    }
    let manifest = RunManifest::new(
        command_line(),
        json!({
            "input": args.input.display().to_string(),
            "alpha1": params.alpha1(),
            "alpha2": params.alpha2(),
        }),
    );
    let outputs: Vec<&Path> = args.out.iter().chain(args.svg.iter()).map(PathBuf::as_path).collect();
    finish_manifest(manifest, &outputs)
}

fn sweep(args: SweepArgs) -> CliResult<()> {
    let mut curves = Vec::new();
    for path in &args.input {
        let pair = read_pair(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        curves.push((name, spec_alpha_sweep(&pair, args.grid_size)?));
    }
    emit(args.out.as_deref(), &io::sweep_csv(&curves)?)?;
    if let Some(svg) = &args.svg {
        write_file(svg, &io::sweep_svg(&curves))?;
    }
    let manifest = RunManifest::new(
        command_line(),
        json!({
            "inputs": args.input.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "grid_size": args.grid_size,
        }),
    );
    let outputs: Vec<&Path> = args.out.iter().chain(args.svg.iter()).map(PathBuf::as_path).collect();
    finish_manifest(manifest, &outputs)
}

fn simulate(args: SimulateArgs) -> CliResult<()> {
    let seed = args.seed.unwrap_or_else(rand::random);
    let profile = DemandProfile {
        n: args.n,
        count_mu: args.count_mu,
        count_sigma: args.count_sigma,
        magnitude_mu: args.magnitude_mu,
        magnitude_sigma: args.magnitude_sigma,
        integer_magnitudes: args.integer_magnitudes,
    };
    let model = ErrorModel {
        vertical_mu: args.vertical_mu,
        vertical_sigma: args.vertical_sigma,
        horizontal_mu: args.horizontal_mu,
        horizontal_sigma: args.horizontal_sigma,
    };
    model.validate()?;
    let actual = generate_demand(&profile.with_seed(derive_seed(seed, &[0])))?;

    fs::create_dir_all(&args.out_dir).map_err(|e| Failure::User(format!("{}: {e}", args.out_dir.display())))?;
    let mut outputs = Vec::new();
    let demand_path = args.out_dir.join("demand.csv");
    let mut buf = Vec::new();
    io::write_demand_csv(&actual, &mut buf)?;
    write_file(&demand_path, &String::from_utf8_lossy(&buf))?;
    outputs.push(demand_path);

    for k in 1..=args.forecasts {
        let forecast = perturb_forecast(&actual, &model.with_seed(derive_seed(seed, &[1, k as u64])))?;
        let pair = EvaluationPair::new(actual.clone(), forecast)?;
        let path = args.out_dir.join(format!("pair_{k}.csv"));
        let mut buf = Vec::new();
        io::write_csv(&pair, &mut buf)?;
        write_file(&path, &String::from_utf8_lossy(&buf))?;
        outputs.push(path);
    }

    let mut manifest = RunManifest::new(
        command_line(),
        json!({ "demand": profile, "error": model, "forecasts": args.forecasts }),
    );
    manifest.seeds = vec![seed];
    manifest.outputs = outputs.iter().map(|p| p.display().to_string()).collect();
    manifest.write(args.out_dir.join("manifest.json"))?;
    Ok(())
}

fn load_config<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| Failure::User(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn experiment(args: ExperimentArgs) -> CliResult<()> {
    let report: ExperimentReport = match args.kind {
        ExperimentName::Reliability => run_reliability(&load_config::<ReliabilityConfig>(&args.config)?)?,
        ExperimentName::SegmentReliability => {
            run_segment_reliability_config(&load_config::<SegmentReliabilityConfig>(&args.config)?)?
        }
        ExperimentName::Validity => run_validity(&load_config::<ValidityConfig>(&args.config)?)?,
        ExperimentName::CostValidity => run_cost_validity(&load_config::<CostValidityConfig>(&args.config)?)?,
    };
    let mut text = report.to_json()?;
    text.push('\n');
    write_file(&args.out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Score(a) => score(a),
        Command::Decompose(a) => decompose(a),
        Command::Sweep(a) => sweep(a),
        Command::Simulate(a) => simulate(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
