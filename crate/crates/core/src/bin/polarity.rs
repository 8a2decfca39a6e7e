//! Command-line front end: `polarity`, `binarize`, `sweep` and `synth`.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 when processing
//! fails (unreadable or degenerate image, I/O error).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polarity::conditions::ConditionConfig;
use polarity::histogram::build_histogram;
use polarity::imageio::{read_gray, write_binary, write_gray};
use polarity::otsu::{binarize, otsu_threshold};
use polarity::sweep::{
    detect_polarity, sweep_mbcv, validate_trend_threshold, GammaGrid, PolarityReport, SweepConfig,
    DEFAULT_TREND_THRESHOLD,
};
use polarity::synth::{self, SynthSpec};

#[derive(Parser, Debug)]
#[command(
    name = "polarity",
    version,
    about = "Text polarity detection via power-law MBCV sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detect text polarity from the MBCV-vs-gamma trend.
    Polarity(PolarityArgs),
    /// Otsu-threshold an image into black and white.
    Binarize(BinarizeArgs),
    /// Export the MBCV curve as CSV.
    Sweep(SweepArgs),
    /// Generate a seeded synthetic two-mode image.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct PolarityArgs {
    input: PathBuf,
    /// Comma-separated gamma grid, strictly increasing from 1.
    #[arg(long, default_value = "1,1.5,2,2.5,3,3.5,4,4.5,5")]
    gammas: GammaGrid,
    /// Fraction of same-signed steps needed to call a trend, in (0.5, 1].
    #[arg(long, default_value_t = DEFAULT_TREND_THRESHOLD, value_parser = parse_trend_threshold)]
    trend_threshold: f64,
    #[command(flatten)]
    conditions: ConditionArgs,
    /// Print a single JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ConditionArgs {
    /// Maximum |w1 - w2| for balanced classes.
    #[arg(long, default_value_t = ConditionConfig::DEFAULT.balance_tol)]
    balance_tol: f64,
    /// Case I bound on the normalized class-mean gap.
    #[arg(long, default_value_t = ConditionConfig::DEFAULT.epsilon)]
    epsilon: f64,
    /// Case II bound on the normalized class-mean gap.
    #[arg(long, default_value_t = ConditionConfig::DEFAULT.delta)]
    delta: f64,
    /// Case I bound on the normalized threshold.
    #[arg(long, default_value_t = ConditionConfig::DEFAULT.t_low)]
    t_low: f64,
    /// Case II bound on the normalized threshold.
    #[arg(long, default_value_t = ConditionConfig::DEFAULT.t_high)]
    t_high: f64,
}

impl ConditionArgs {
    fn config(&self) -> ConditionConfig {
        ConditionConfig {
            balance_tol: self.balance_tol,
            epsilon: self.epsilon,
            delta: self.delta,
            t_low: self.t_low,
            t_high: self.t_high,
        }
    }
}

#[derive(Args, Debug)]
struct BinarizeArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Map the low class to white and the high class to black.
    #[arg(long)]
    invert: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    input: PathBuf,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value = "1,1.5,2,2.5,3,3.5,4,4.5,5")]
    gammas: GammaGrid,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    CaseI,
    CaseIi,
    Unimodal,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = Preset::CaseI)]
    preset: Preset,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    mode1_mean: Option<f64>,
    #[arg(long)]
    mode2_mean: Option<f64>,
    #[arg(long)]
    mode1_std: Option<f64>,
    #[arg(long)]
    mode2_std: Option<f64>,
    #[arg(long)]
    weight1: Option<f64>,
}

fn parse_trend_threshold(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    validate_trend_threshold(v).map_err(|e| e.to_string())?;
    Ok(v)
}

enum Failure {
    Usage(String),
    Processing(String),
}

impl From<polarity::Error> for Failure {
    fn from(e: polarity::Error) -> Self {
        Failure::Processing(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Processing(format!("i/o error: {e}"))
    }
}

fn with_path(path: &Path) -> impl Fn(polarity::Error) -> Failure + '_ {
    move |e| Failure::Processing(format!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct JsonReport<'a> {
    input: String,
    #[serde(flatten)]
    report: &'a PolarityReport,
    trend_threshold: f64,
    gammas: Vec<f64>,
    condition_config: ConditionConfig,
    /// Condition bounds left at their built-in defaults.
    condition_defaults: Vec<&'static str>,
}

fn cmd_polarity(args: &PolarityArgs) -> Result<(), Failure> {
    let config = SweepConfig {
        grid: args.gammas.clone(),
        trend_threshold: args.trend_threshold,
        conditions: args.conditions.config(),
    };
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let image = read_gray(&args.input).map_err(with_path(&args.input))?;
    let report = detect_polarity(&image, &config).map_err(with_path(&args.input))?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.json {
        let json = JsonReport {
            input: args.input.display().to_string(),
            report: &report,
            trend_threshold: config.trend_threshold,
            gammas: config.grid.gammas().iter().map(|g| g.value()).collect(),
            condition_config: config.conditions,
            condition_defaults: config.conditions.defaulted_fields(),
        };
        serde_json::to_writer(&mut out, &json).map_err(|e| Failure::Processing(e.to_string()))?;
        writeln!(out)?;
        return Ok(());
    }

    let c = &report.conditions;
    let cfg = &config.conditions;
    let mark = |name: &str| {
        if cfg.defaulted_fields().contains(&name) {
            " (default)"
        } else {
            ""
        }
    };
    writeln!(out, "polarity: {}", report.polarity)?;
    writeln!(out, "trend: {}", report.trend)?;
    writeln!(out, "monotone_fraction: {}", report.monotone_fraction)?;
    writeln!(out, "t_star: {}", report.otsu.t_star)?;
    writeln!(out, "mbcv: {}", report.otsu.mbcv)?;
    writeln!(out, "mu_t: {}", report.otsu.mu_t)?;
    writeln!(out, "w1: {}", c.w1)?;
    writeln!(out, "w2: {}", c.w2)?;
    writeln!(out, "t_star_norm: {}", c.t_star_norm)?;
    writeln!(out, "mean_gap_norm: {}", c.mean_gap_norm)?;
    writeln!(out, "balanced: {}", c.balanced)?;
    writeln!(out, "case_i: {}", c.case_i)?;
    writeln!(out, "case_ii: {}", c.case_ii)?;
    writeln!(
        out,
        "condition bounds: balance_tol={}{} epsilon={}{} delta={}{} t_low={}{} t_high={}{}",
        cfg.balance_tol,
        mark("balance_tol"),
        cfg.epsilon,
        mark("epsilon"),
        cfg.delta,
        mark("delta"),
        cfg.t_low,
        mark("t_low"),
        cfg.t_high,
        mark("t_high"),
    )?;
    writeln!(
        out,
        "note: default condition bounds are tuning choices, not canonical values"
    )?;
    writeln!(out, "curve (gamma, power, mbcv):")?;
    for s in &report.curve.samples {
        writeln!(out, "  {} {} {}", s.gamma, s.power, s.mbcv)?;
    }
    Ok(())
}

fn cmd_binarize(args: &BinarizeArgs) -> Result<(), Failure> {
    let image = read_gray(&args.input).map_err(with_path(&args.input))?;
    let otsu = otsu_threshold(&build_histogram(&image)).map_err(with_path(&args.input))?;
    let binary = binarize(&image, otsu.t_star, args.invert);
    write_binary(&binary, &args.output).map_err(with_path(&args.output))?;
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let image = read_gray(&args.input).map_err(with_path(&args.input))?;
    let curve = sweep_mbcv(&build_histogram(&image), &args.gammas).map_err(with_path(&args.input))?;
    match &args.csv {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::Processing(format!("{}: {e}", path.display())))?;
            curve.write_csv(io::BufWriter::new(file))?;
        }
        None => curve.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> Result<(), Failure> {
    let base = match args.preset {
        Preset::CaseI => synth::case_i_spec(args.seed),
        Preset::CaseIi => synth::case_ii_spec(args.seed),
        Preset::Unimodal => synth::unimodal_spec(args.seed),
    };
    let spec = SynthSpec {
        width: args.width.unwrap_or(base.width),
        height: args.height.unwrap_or(base.height),
        mode1_mean: args.mode1_mean.unwrap_or(base.mode1_mean),
        mode2_mean: args.mode2_mean.unwrap_or(base.mode2_mean),
        mode1_std: args.mode1_std.unwrap_or(base.mode1_std),
        mode2_std: args.mode2_std.unwrap_or(base.mode2_std),
        weight1: args.weight1.unwrap_or(base.weight1),
        seed: args.seed,
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let image = synth::generate(&spec)?;
    write_gray(&image, &args.output).map_err(with_path(&args.output))?;
    let sidecar = sidecar_path(&args.output);
    fs::write(&sidecar, spec.to_string()).map_err(|e| Failure::Processing(format!("{}: {e}", sidecar.display())))?;
    Ok(())
}

/// `page.pgm` -> `page.spec.txt`
fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("spec.txt")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Polarity(a) => cmd_polarity(a),
        Command::Binarize(a) => cmd_binarize(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Processing(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
