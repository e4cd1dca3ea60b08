use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rsum::fpbits::Precision;
use rsum::generators::IllCondSpec;
use rsum::harness::{
    self, compare, default_seed, load_input, run, write_dataset, DatasetFormat, HarnessError,
    Method, Order, OutputFormat, RunConfig, Source, Summary,
};

#[derive(Parser)]
#[command(name = "rsum", version, about = "Floating-point summation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum a series or dataset with one algorithm.
    Sum(RunArgs),
    /// Sign of a sum (`essa` or `hash`).
    Sign(RunArgs),
    /// Run several algorithms on the same input.
    Compare(RunArgs),
    /// Write a series or an ill-conditioned set to a dataset file.
    Gen(GenArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Series name, e.g. `harmonic` or `const-1e-3`.
    #[arg(long, conflicts_with = "file")]
    series: Option<String>,
    /// Number of terms.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Dataset file: text (one float per line) or raw `RSUMF64` binary.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value = "double")]
    precision: Precision,
    /// forward, reverse, shuffled or shuffled:<seed>.
    #[arg(long, default_value = "forward")]
    order: Order,
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm; repeat or comma-separate for `compare`.
    #[arg(long = "algo", value_delimiter = ',', required = true)]
    algos: Vec<String>,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Timed runs; the median is reported.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    /// Add the result cut to this many significant digits.
    #[arg(long)]
    digits: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, required_unless_present = "ratio")]
    series: Option<String>,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value = "double")]
    precision: Precision,
    /// Generate an ill-conditioned set with this condition ratio (`inf` for an exact zero).
    #[arg(long, conflicts_with = "series")]
    ratio: Option<f64>,
    /// Seed for the ill-conditioned set; defaults to `RSUM_SEED`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "forward")]
    order: Order,
    /// text or raw; defaults to raw for `.f64` paths.
    #[arg(long)]
    format: Option<DatasetFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn source_of(args: &SourceArgs) -> Result<Source, String> {
    match (&args.series, &args.file) {
        (Some(name), None) => Ok(Source::Series {
            name: name.clone(),
            n: args.n,
        }),
        (None, Some(path)) => Ok(Source::File(path.clone())),
        _ => Err("give exactly one of --series or --file".to_string()),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), HarnessError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Configs for every `--algo`. `kind` restricts to sum (`Some(false)`) or
/// sign (`Some(true)`) methods.
fn configs(args: &RunArgs, kind: Option<bool>) -> Result<Vec<RunConfig>, HarnessError> {
    let source = source_of(&args.source).map_err(HarnessError::Usage)?;
    args.algos
        .iter()
        .map(|name| {
            let method: Method = name.parse()?;
            if kind.is_some_and(|sign| sign != method.is_sign()) {
                return Err(HarnessError::UnknownMethod(name.clone()));
            }
            Ok(RunConfig::new(method, source.clone())
                .precision(args.source.precision)
                .order(args.source.order)
                .repeat(args.repeat))
        })
        .collect()
}

fn render(
    args: &RunArgs,
    rows: &[harness::ReportRow],
    summary: Option<&Summary>,
) -> Result<String, HarnessError> {
    match args.format {
        OutputFormat::Csv => harness::to_csv(rows, summary, args.digits),
        OutputFormat::Json => Ok(harness::to_json(rows, summary, args.digits)),
    }
}

fn execute(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Sum(args) | Command::Sign(args) if args.algos.len() != 1 => {
            Err(HarnessError::Usage("give exactly one --algo".into()))
        }
        Command::Sum(args) => {
            let row = run(&configs(&args, Some(false))?[0])?;
            emit(&render(&args, &[row], None)?, &args.out)
        }
        Command::Sign(args) => {
            let row = run(&configs(&args, Some(true))?[0])?;
            emit(&render(&args, &[row], None)?, &args.out)
        }
        Command::Compare(args) => {
            let cmp = compare(&configs(&args, None)?)?;
            emit(&render(&args, &cmp.rows, Some(&cmp.summary))?, &args.out)
        }
        Command::Gen(args) => {
            let source = match (args.series, args.ratio) {
                (Some(name), None) => Source::Series { name, n: args.n },
                (None, Some(ratio)) => Source::IllConditioned(IllCondSpec {
                    n: args.n,
                    target_ratio: ratio,
                    seed: args.seed.unwrap_or_else(default_seed),
                }),
                _ => {
                    return Err(HarnessError::Usage(
                        "give exactly one of --series or --ratio".into(),
                    ))
                }
            };
            let values = load_input(&source, args.precision, args.order)?;
            match args.out {
                Some(path) => {
                    let format = args
                        .format
                        .unwrap_or_else(|| DatasetFormat::for_path(&path));
                    write_dataset(&path, &values, format)
                }
                None => emit(&harness::dataset::encode_text(&values), &None),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rsum: {e}");
            let code = e.exit_code();
            if code == 2 {
                eprintln!("see `rsum --help` for usage");
            }
            ExitCode::from(code as u8)
        }
    }
}
