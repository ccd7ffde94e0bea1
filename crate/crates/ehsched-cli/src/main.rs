//! Command-line front end: run a scheduler on a scenario, compare policies
//! against the clairvoyant benchmark, sweep adversarial lower bounds, and
//! certify runs against the brute-force oracle.
//!
//! Exit codes: 0 success, 1 defect found (a competitive-ratio or oracle
//! bound violated), 2 bad usage or unparseable input, 3 configuration or
//! infeasibility errors, 4 algorithm precondition not met.

mod report;
mod scenario;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ehsched::corpus::{random_trace, CorpusParams};
use ehsched::presets;
use ehsched::{
    lower_bound_search, offline_schedule, oracle_min_time, oracle_time_step, run_alpha_policy,
    run_glo, run_lazy, verify_energy_neutrality, ChannelModel, EnergyTrace, Error,
    LowerBoundConfig, RunReport,
};

use crate::report::num;
use crate::scenario::{parse_scenario, Scenario};

#[derive(Parser)]
#[command(name = "ehsched", version, about = "Schedulers for energy-harvesting transmitters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scheduling policy on a scenario and print its schedule.
    Run(RunArgs),
    /// Run the online policies against the benchmark over many scenarios.
    Compare(CompareArgs),
    /// Sweep the adversarial fraction grid for a competitive-ratio bound.
    Lowerbound(LowerboundArgs),
    /// Certify a policy's run against the exhaustive oracle.
    OracleCheck(OracleCheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Offline,
    Lazy,
    Glo,
    Alpha,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Siso,
    Gmac,
}

impl From<ChannelArg> for ChannelModel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Siso => ChannelModel::Siso,
            ChannelArg::Gmac => ChannelModel::Gmac,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Scenario file to load.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    scenario: Option<PathBuf>,
    /// Built-in instance: example1, example1-literal, or example2.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Fraction of the first packet spent before the horizon (alpha only).
    #[arg(long)]
    alpha: Option<f64>,
    /// Commitment horizon for the alpha policy; defaults to the second
    /// arrival time.
    #[arg(long)]
    horizon: Option<f64>,
    /// Also write the machine-readable report here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Scenario files or directories full of them.
    #[arg(value_name = "PATH")]
    paths: Vec<PathBuf>,
    /// Built-in instances to include (repeatable).
    #[arg(long, value_name = "NAME")]
    preset: Vec<String>,
    /// Add this many seeded random traces to the corpus.
    #[arg(long, value_name = "COUNT")]
    random: Option<usize>,
    /// First seed for --random; later traces use consecutive seeds.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Arrival cap for --random traces.
    #[arg(long, default_value_t = 10, value_name = "COUNT")]
    max_arrivals: usize,
    /// Pin --random traces to one channel instead of alternating.
    #[arg(long, value_enum)]
    channel: Option<ChannelArg>,
    /// Also write the ratio table here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LowerboundArgs {
    /// Named pair: proof, figure, lb-siso-proof, lb-gmac-proof, lb-figure.
    #[arg(long, value_name = "NAME", conflicts_with_all = ["sigma1", "sigma2"])]
    preset: Option<String>,
    /// Channel for the proof/figure presets.
    #[arg(long, value_enum, default_value = "siso")]
    channel: ChannelArg,
    /// Scenario for the future where the extra packet arrives.
    #[arg(long, value_name = "PATH", requires = "sigma2")]
    sigma1: Option<PathBuf>,
    /// Scenario for the future where it never does.
    #[arg(long, value_name = "PATH", requires = "sigma1")]
    sigma2: Option<PathBuf>,
    /// Commitment horizon; defaults to sigma1's second arrival time.
    #[arg(long)]
    horizon: Option<f64>,
    /// Alpha sweep resolution.
    #[arg(long, default_value_t = 1e-3)]
    grid_step: f64,
    /// Skip the golden-section polish after the grid sweep.
    #[arg(long)]
    no_refine: bool,
    /// Write the curve here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleCheckArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "offline")]
    algorithm: AlgorithmArg,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Spend-fraction cells per inter-arrival interval.
    #[arg(long, default_value_t = ehsched::oracle::DEFAULT_POWER_GRID)]
    power_grid: usize,
    /// End-time cells across the search window.
    #[arg(long, default_value_t = ehsched::oracle::DEFAULT_TIME_GRID)]
    time_grid: usize,
    /// Allowed excess over the oracle minimum; defaults to
    /// max(2 grid steps, 1e-3).
    #[arg(long)]
    tolerance: Option<f64>,
}

/// Failure classes, ordered by exit code.
enum Failure {
    Defect(String),
    Parse(String),
    Config(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Defect(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Config(_) => 3,
            Failure::Precondition(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Defect(m) | Failure::Parse(m) | Failure::Config(m) | Failure::Precondition(m) => m,
        }
    }
}

fn from_lib(err: Error) -> Failure {
    match err {
        Error::LazyPrecondition { .. } => Failure::Precondition(err.to_string()),
        _ => Failure::Config(err.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Lowerbound(args) => cmd_lowerbound(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn load_preset(name: &str) -> Result<Scenario, Failure> {
    let trace = match name {
        "example1" => presets::example1(),
        "example1-literal" => presets::example1_literal(),
        "example2" => presets::example2(),
        _ => {
            return Err(Failure::Parse(format!(
                "unknown preset '{name}' (expected example1, example1-literal, or example2)"
            )))
        }
    };
    Ok(Scenario { label: Some(name.to_string()), trace })
}

fn load_file(path: &PathBuf) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_input(input: &InputArgs) -> Result<Scenario, Failure> {
    match (&input.scenario, &input.preset) {
        (Some(path), None) => load_file(path),
        (None, Some(name)) => load_preset(name),
        _ => Err(Failure::Parse("exactly one of --scenario or --preset is required".into())),
    }
}

/// Rejects alpha-policy flags on other algorithms, then dispatches.
fn execute(
    trace: &EnergyTrace,
    algorithm: AlgorithmArg,
    alpha: Option<f64>,
    horizon: Option<f64>,
) -> Result<RunReport, Failure> {
    if !matches!(algorithm, AlgorithmArg::Alpha) && (alpha.is_some() || horizon.is_some()) {
        return Err(Failure::Parse("--alpha and --horizon only apply to --algorithm alpha".into()));
    }
    match algorithm {
        AlgorithmArg::Offline => offline_schedule(trace).map_err(from_lib),
        AlgorithmArg::Lazy => run_lazy(trace).map_err(from_lib),
        AlgorithmArg::Glo => run_glo(trace).map_err(from_lib),
        AlgorithmArg::Alpha => {
            let alpha = alpha
                .ok_or_else(|| Failure::Parse("--alpha is required with --algorithm alpha".into()))?;
            let horizon = horizon
                .or_else(|| trace.events().get(1).map(|a| a.time))
                .ok_or_else(|| {
                    Failure::Parse("--horizon is required when the trace has one arrival".into())
                })?;
            run_alpha_policy(trace, alpha, horizon).map_err(from_lib)
        }
    }
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let scenario = load_input(&args.input)?;
    let report = execute(&scenario.trace, args.algorithm, args.alpha, args.horizon)?;
    if let Some(label) = &scenario.label {
        println!("scenario {label}");
    }
    print!("{}", report::render_table(&scenario.trace, &report));
    if let Some(path) = &args.out {
        write_out(path, &report::render_report(&scenario.trace, &report))?;
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), Failure> {
    let mut corpus: Vec<(String, Result<EnergyTrace, Failure>)> = Vec::new();
    for path in &args.paths {
        if path.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            for file in files {
                corpus.push((file.display().to_string(), load_file(&file).map(|s| s.trace)));
            }
        } else {
            corpus.push((path.display().to_string(), load_file(path).map(|s| s.trace)));
        }
    }
    for name in &args.preset {
        corpus.push((name.clone(), load_preset(name).map(|s| s.trace)));
    }
    if let Some(count) = args.random {
        if args.max_arrivals == 0 {
            return Err(Failure::Parse("--max-arrivals must be at least 1".into()));
        }
        let params = CorpusParams { max_arrivals: args.max_arrivals, ..CorpusParams::default() };
        for i in 0..count {
            let seed = args.seed + i as u64;
            let channel = args.channel.map_or_else(
                || if seed.is_multiple_of(2) { ChannelModel::Siso } else { ChannelModel::Gmac },
                ChannelModel::from,
            );
            corpus.push((format!("seed-{seed}"), Ok(random_trace(channel, seed, &params))));
        }
    }
    if corpus.is_empty() {
        return Err(Failure::Parse("nothing to compare: give paths, --preset, or --random".into()));
    }

    let mut lines = String::new();
    let mut emit = |line: String| {
        println!("{line}");
        lines.push_str(&line);
        lines.push('\n');
    };
    let mut max_ratio = f64::NEG_INFINITY;
    let mut compared = 0usize;
    let mut defect = false;
    let mut parse_failed = false;
    let mut run_failed = false;
    for (name, entry) in &corpus {
        let trace = match entry {
            Ok(trace) => trace,
            Err(failure) => {
                parse_failed = true;
                emit(format!("trace {name} error {}", failure.message()));
                continue;
            }
        };
        let runs = offline_schedule(trace).and_then(|off| run_glo(trace).map(|glo| (off, glo)));
        let (offline, glo) = match runs {
            Ok(pair) => pair,
            Err(e) => {
                run_failed = true;
                emit(format!("trace {name} error {e}"));
                continue;
            }
        };
        let ratio = glo.completion_time / offline.completion_time;
        let mut row = format!(
            "trace {name} offline {} glo {} ratio {}",
            num(offline.completion_time),
            num(glo.completion_time),
            num(ratio)
        );
        let mut worst = ratio;
        if let Ok(lazy) = run_lazy(trace) {
            let lazy_ratio = lazy.completion_time / offline.completion_time;
            worst = worst.max(lazy_ratio);
            row.push_str(&format!(" lazy {} lazy_ratio {}", num(lazy.completion_time), num(lazy_ratio)));
        }
        if worst >= 2.0 {
            defect = true;
            row.push_str(" defect");
        }
        compared += 1;
        max_ratio = max_ratio.max(worst);
        emit(row);
    }
    emit(format!("traces {compared}"));
    if compared > 0 {
        emit(format!("max_ratio {}", num(max_ratio)));
    }
    if let Some(path) = &args.out {
        write_out(path, &lines)?;
    }
    if defect {
        Err(Failure::Defect("a policy breached the 2x competitive bound".into()))
    } else if parse_failed {
        Err(Failure::Parse("some inputs did not parse".into()))
    } else if run_failed {
        Err(Failure::Config("some traces did not run".into()))
    } else {
        Ok(())
    }
}

fn cmd_lowerbound(args: LowerboundArgs) -> Result<(), Failure> {
    let config = if let Some(name) = &args.preset {
        match name.as_str() {
            "proof" => LowerBoundConfig::proof_preset(args.channel.into()),
            "figure" => LowerBoundConfig::figure_preset(args.channel.into()),
            "lb-siso-proof" => LowerBoundConfig::proof_preset(ChannelModel::Siso),
            "lb-gmac-proof" => LowerBoundConfig::proof_preset(ChannelModel::Gmac),
            "lb-figure" => LowerBoundConfig::figure_preset(args.channel.into()),
            _ => {
                return Err(Failure::Parse(format!(
                    "unknown preset '{name}' (expected proof, figure, lb-siso-proof, lb-gmac-proof, or lb-figure)"
                )))
            }
        }
    } else {
        let (Some(p1), Some(p2)) = (&args.sigma1, &args.sigma2) else {
            return Err(Failure::Parse("provide --preset or both --sigma1 and --sigma2".into()));
        };
        let sigma1 = load_file(p1)?.trace;
        let sigma2 = load_file(p2)?.trace;
        let horizon = args
            .horizon
            .or_else(|| sigma1.events().get(1).map(|a| a.time))
            .ok_or_else(|| {
                Failure::Parse("--horizon is required when sigma1 has one arrival".into())
            })?;
        LowerBoundConfig::new(sigma1, sigma2, horizon, 1e-3, true).map_err(from_lib)?
    };
    let config = config.with_grid_step(args.grid_step).map_err(from_lib)?.with_refine(!args.no_refine);
    let result = lower_bound_search(&config).map_err(from_lib)?;
    println!("alpha_star {}", num(result.alpha_star));
    println!("ratio {}", num(result.ratio));
    let curve = report::render_curve(&result);
    match &args.out {
        Some(path) => write_out(path, &curve)?,
        None => print!("{curve}"),
    }
    Ok(())
}

fn cmd_oracle_check(args: OracleCheckArgs) -> Result<(), Failure> {
    let scenario = load_input(&args.input)?;
    let trace = &scenario.trace;
    let report = execute(trace, args.algorithm, args.alpha, args.horizon)?;
    let oracle = oracle_min_time(trace, args.power_grid, args.time_grid).map_err(from_lib)?;
    let step = oracle_time_step(trace, args.time_grid).map_err(from_lib)?;
    let tolerance = args.tolerance.unwrap_or((2.0 * step).max(1e-3));
    let neutral = verify_energy_neutrality(&report.schedule, trace).ok;
    let delivered = report.schedule.bits_delivered(trace.channel(), report.completion_time)
        >= trace.bits_total() * (1.0 - 1e-6);
    let within = report.completion_time <= oracle + tolerance;
    let certified = report.feasible && neutral && delivered && within;
    println!("oracle_min_time {}", num(oracle));
    println!("grid_step {}", num(step));
    println!("tolerance {}", num(tolerance));
    println!("completion_time {}", num(report.completion_time));
    println!("certified {}", if certified { "yes" } else { "no" });
    if certified {
        Ok(())
    } else {
        let why = if !neutral {
            "the schedule overspends its harvest"
        } else if !delivered {
            "the schedule does not deliver the load"
        } else {
            "completion exceeds the oracle minimum plus tolerance"
        };
        Err(Failure::Defect(why.into()))
    }
}
