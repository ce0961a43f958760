//! `tileguard` command line.
//!
//! Exit status: 0 success, 1 usage error, 2 dataset error, 3 internal error.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use tileguard_core::corpus::{discover_datasets, synthesize, write_corpora, LoadOptions, SynthConfig};
use tileguard_core::lexer::tokenize_named;
use tileguard_core::matchers::{LaScoring, DEFAULT_MML};
use tileguard_core::pipeline::{detect_corpora, score_corpus, sweep_corpora, ReportFormat, SweepConfig};
use tileguard_core::report::{correlation_csv, emit_report, ir_dump_csv, stats_csv, sweep_csv, write_output};
use tileguard_core::thresholds::parse_threshold;
use tileguard_core::{Error, MatcherKind, Mechanism, ScenarioConfig};

const THREADS_VAR: &str = "TILEGUARD_THREADS";

#[derive(Parser, Debug)]
#[command(name = "tileguard", version, about = "IR-filtered source code plagiarism detection")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Print the token kinds of a Java file, one per line, and exit
    #[arg(long, value_name = "FILE", global = true)]
    dump_tokens: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Filter pairs by IR similarity and string-match the survivors
    Detect(DetectArgs),
    /// Evaluate SM, RM and PCM over the thresholds 0.0, 0.1, ..., 1.0
    Sweep(SweepArgs),
    /// Per sub-dataset submission and token counts
    Stats(StatsArgs),
    /// Write a synthetic plagiarism corpus
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct DatasetArgs {
    /// Directory of .java files, or of sub-dataset directories
    dataset: PathBuf,

    /// Abort on a file that fails to lex instead of skipping it
    #[arg(long)]
    fail_on_lex_error: bool,
}

impl DatasetArgs {
    fn options(&self) -> LoadOptions {
        LoadOptions {
            fail_on_lex_error: self.fail_on_lex_error,
        }
    }
}

#[derive(Args, Debug)]
struct MatcherArgs {
    #[arg(long, default_value = "rkrgst", value_parser = parse_from_str::<MatcherKind>)]
    matcher: MatcherKind,

    /// Minimum match length for RKRGST
    #[arg(long, default_value_t = DEFAULT_MML)]
    mml: usize,

    /// Local alignment scores as match,mismatch,gap
    #[arg(long, default_value = "2,-1,-1", value_parser = parse_from_str::<LaScoring>, allow_hyphen_values = true)]
    la_scoring: LaScoring,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[command(flatten)]
    dataset: DatasetArgs,

    #[command(flatten)]
    matcher: MatcherArgs,

    #[arg(long, default_value = "sm", value_parser = parse_from_str::<Mechanism>)]
    mechanism: Mechanism,

    /// Raw threshold as a fraction (0.35) or percentage (35%)
    #[arg(long, default_value = "0", value_parser = parse_threshold_arg)]
    threshold: f64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Report file; stdout when omitted or `-`
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// Also match excluded pairs so DEP and the correlation are reported
    #[arg(long)]
    full_pass: bool,

    /// Write the unfiltered IR similarities as CSV
    #[arg(long, value_name = "PATH")]
    dump_ir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    dataset: DatasetArgs,

    #[command(flatten)]
    matcher: MatcherArgs,

    /// Scenario metrics CSV; stdout when omitted or `-`
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// Write the IR to string-matching correlation summary as CSV
    #[arg(long, value_name = "PATH")]
    correlation: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[command(flatten)]
    dataset: DatasetArgs,

    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Output directory; one sub-directory per sub-dataset
    out: PathBuf,

    #[arg(long, default_value_t = 3)]
    subdatasets: usize,

    /// Number of bundled seed programs per sub-dataset (at most 7)
    #[arg(long, default_value_t = 7)]
    programs: usize,

    /// Attack levels to generate, each in 1..=6
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
    levels: Vec<u8>,

    #[arg(long, default_value_t = 1)]
    variants: usize,

    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

fn parse_from_str<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

fn parse_threshold_arg(s: &str) -> Result<f64, String> {
    parse_threshold(s).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }

    fn dataset(message: impl Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn internal(message: impl Display) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage_error() {
            Failure::usage(e)
        } else if e.is_dataset_error() {
            Failure::dataset(e)
        } else {
            Failure::internal(e)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::usage(format!("{THREADS_VAR} must be a non-negative integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(Failure::internal)
}

fn scenario(mechanism: Mechanism, threshold: f64, m: &MatcherArgs) -> Result<ScenarioConfig, Failure> {
    let scenario = ScenarioConfig {
        mml: m.mml,
        la_scoring: m.la_scoring,
        ..ScenarioConfig::new(mechanism, threshold, m.matcher)
    };
    scenario.validate().map_err(Failure::usage)?;
    Ok(scenario)
}

fn dump_tokens(path: &Path) -> Result<(), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::dataset(format!("failed to read {}: {e}", path.display())))?;
    let seq = tokenize_named(&path.to_string_lossy(), &text)
        .map_err(|e| Failure::dataset(format!("failed to lex {}: {e}", path.display())))?;
    let mut out = String::new();
    for kind in seq.kinds() {
        out.push_str(kind.name());
        out.push('\n');
    }
    write_output(&out, None)?;
    Ok(())
}

fn detect(args: &DetectArgs) -> Result<(), Failure> {
    let scenario = scenario(args.mechanism, args.threshold, &args.matcher)?;
    let corpora = discover_datasets(&args.dataset.dataset, &args.dataset.options()).map_err(Error::from)?;
    if let Some(path) = &args.dump_ir {
        let tables = corpora
            .iter()
            .map(|c| score_corpus(c).map(|(_, t)| t))
            .collect::<Result<Vec<_>, _>>()?;
        let pairs: Vec<_> = corpora.iter().zip(&tables).collect();
        write_output(&ir_dump_csv(&pairs), Some(path))?;
    }
    let report = detect_corpora(&corpora, &scenario, args.full_pass)?;
    emit_report(&report, args.format.into(), args.output.as_deref())?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    scenario(Mechanism::Static, 0.0, &args.matcher)?;
    let config = SweepConfig {
        mml: args.matcher.mml,
        la_scoring: args.matcher.la_scoring,
        ..SweepConfig::new(args.matcher.matcher)
    };
    let corpora = discover_datasets(&args.dataset.dataset, &args.dataset.options()).map_err(Error::from)?;
    let report = sweep_corpora(&corpora, &config)?;
    write_output(&sweep_csv(&report), args.output.as_deref())?;
    if let Some(path) = &args.correlation {
        write_output(&correlation_csv(&report), Some(path))?;
    }
    Ok(())
}

fn stats(args: &StatsArgs) -> Result<(), Failure> {
    let corpora = discover_datasets(&args.dataset.dataset, &args.dataset.options()).map_err(Error::from)?;
    let stats: Vec<_> = corpora.iter().map(|c| c.stats()).collect();
    write_output(&stats_csv(&stats), args.output.as_deref())?;
    Ok(())
}

fn synth(args: &SynthArgs) -> Result<(), Failure> {
    let config = SynthConfig {
        subdatasets: args.subdatasets,
        programs: args.programs,
        levels: args.levels.clone(),
        variants_per_level: args.variants,
        rng_seed: args.seed,
    };
    if config.subdatasets == 0 || config.programs == 0 || config.levels.is_empty() {
        return Err(Failure::usage(
            "--subdatasets, --programs and --levels must be non-empty",
        ));
    }
    let corpora = synthesize(&config).map_err(Failure::usage)?;
    write_corpora(&corpora, &args.out)
        .map_err(|e| Failure::internal(format!("cannot write {}: {e}", args.out.display())))?;
    let files: usize = corpora.iter().map(|c| c.len()).sum();
    log::info!(
        "wrote {} sub-datasets, {files} files to {}",
        corpora.len(),
        args.out.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    if let Some(path) = &cli.dump_tokens {
        return dump_tokens(path);
    }
    match &cli.command {
        Some(Command::Detect(args)) => detect(args),
        Some(Command::Sweep(args)) => sweep(args),
        Some(Command::Stats(args)) => stats(args),
        Some(Command::Synth(args)) => synth(args),
        None => Err(Failure::usage("no subcommand given; see --help")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
