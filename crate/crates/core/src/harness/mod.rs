//! Experiment runner: load a series or dataset file, run one method over it,
//! and report the result next to the exact sum.

pub mod dataset;
pub mod hexfloat;
pub mod report;

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::accumulators::Algorithm;
use crate::error::{GenError, OracleError, SignError, SumError};
use crate::fpbits::{IeeeFloat, Precision};
use crate::generators::{make_ill_conditioned, make_series, IllCondSpec};
use crate::oracle::{accumulate, relative_error_against};
use crate::signsum::{essa_sign, hash_sign};

pub use dataset::{read_dataset, write_dataset, DatasetFormat, RAW_MAGIC};
pub use report::{parse_report, to_csv, to_json, OutputFormat, ReportRow, Summary};

/// Shuffle seed used when neither the order nor `RSUM_SEED` names one.
pub const DEFAULT_SEED: u64 = 42;

/// `RSUM_SEED` if set and numeric, else [`DEFAULT_SEED`].
pub fn default_seed() -> u64 {
    std::env::var("RSUM_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("`{path}` line {line}: cannot parse `{text}`")]
    Parse {
        path: String,
        line: usize,
        text: String,
    },
    #[error("`{path}`: raw payload is not a whole number of 8-byte floats")]
    TruncatedRaw { path: String },
    #[error("unknown algorithm `{0}`")]
    UnknownMethod(String),
    #[error("configs read different inputs; compare needs one source, precision and order")]
    InconsistentSources,
    #[error("nothing to compare")]
    NoConfigs,
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Sum(#[from] SumError),
    #[error(transparent)]
    Sign(#[from] SignError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("malformed report: {0}")]
    BadReport(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// 2 for bad input (unreadable file, unknown name, inconsistent configs),
    /// 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Io { .. }
            | HarnessError::Parse { .. }
            | HarnessError::TruncatedRaw { .. }
            | HarnessError::UnknownMethod(_)
            | HarnessError::InconsistentSources
            | HarnessError::NoConfigs
            | HarnessError::Usage(_)
            | HarnessError::Gen(GenError::UnknownSeries(_))
            | HarnessError::Gen(GenError::EmptySeries) => 2,
            _ => 1,
        }
    }
}

/// What to run: a summation algorithm, the exact oracle, or a sign method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Sum(Algorithm),
    Oracle,
    EssaSign,
    HashSign,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Sum(Algorithm::Naive),
        Method::Sum(Algorithm::Compensated),
        Method::Sum(Algorithm::BucketRecursive),
        Method::Sum(Algorithm::BucketNonrec),
        Method::Sum(Algorithm::BucketNonrecCorrected),
        Method::EssaSign,
        Method::HashSign,
        Method::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sum(a) => a.name(),
            Method::Oracle => "oracle",
            Method::EssaSign => "essa-sign",
            Method::HashSign => "hash-sign",
        }
    }

    pub fn is_sign(self) -> bool {
        matches!(self, Method::EssaSign | Method::HashSign)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = HarnessError;

    /// Accepts the full names plus `essa` and `hash` as short forms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "essa" => return Ok(Method::EssaSign),
            "hash" => return Ok(Method::HashSign),
            _ => {}
        }
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| HarnessError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Series { name: String, n: usize },
    IllConditioned(IllCondSpec),
    File(PathBuf),
}

impl Source {
    pub fn label(&self) -> String {
        match self {
            Source::Series { name, .. } => name.clone(),
            Source::IllConditioned(s) => format!("ill-conditioned:{}:{}", s.target_ratio, s.seed),
            Source::File(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Forward,
    Reverse,
    Shuffled(u64),
}

impl Order {
    pub fn apply<T>(self, values: &mut [T]) {
        match self {
            Order::Forward => {}
            Order::Reverse => values.reverse(),
            Order::Shuffled(seed) => values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Forward => f.write_str("forward"),
            Order::Reverse => f.write_str("reverse"),
            Order::Shuffled(seed) => write!(f, "shuffled:{seed}"),
        }
    }
}

impl std::str::FromStr for Order {
    type Err = String;

    /// `forward`, `reverse`, `shuffled` (seed from [`default_seed`]) or `shuffled:<seed>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "forward" => Ok(Order::Forward),
            "reverse" => Ok(Order::Reverse),
            "shuffled" => Ok(Order::Shuffled(default_seed())),
            other => other
                .strip_prefix("shuffled:")
                .and_then(|seed| seed.parse().ok())
                .map(Order::Shuffled)
                .ok_or_else(|| format!("unknown order `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub source: Source,
    pub precision: Precision,
    pub order: Order,
    /// Number of timed runs; the reported time is their median.
    pub repeat: usize,
}

impl RunConfig {
    pub fn new(method: Method, source: Source) -> Self {
        RunConfig {
            method,
            source,
            precision: Precision::Double,
            order: Order::Forward,
            repeat: 1,
        }
    }

    pub fn precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn order(mut self, order: Order) -> Self {
        self.order = order;
        self
    }

    pub fn repeat(mut self, repeat: usize) -> Self {
        self.repeat = repeat;
        self
    }

    fn same_input(&self, other: &RunConfig) -> bool {
        self.source == other.source
            && self.precision == other.precision
            && self.order == other.order
    }
}

/// Terms in the configured precision (widened to `f64`) and order.
pub fn load_input(
    source: &Source,
    precision: Precision,
    order: Order,
) -> Result<Vec<f64>, HarnessError> {
    let mut values = match source {
        Source::Series { name, n } => make_series(name, *n, precision)?.terms_f64(),
        Source::IllConditioned(spec) => make_ill_conditioned(*spec)?,
        Source::File(path) => read_dataset(path)?,
    };
    if precision == Precision::Single {
        for v in &mut values {
            *v = *v as f32 as f64;
        }
    }
    order.apply(&mut values);
    Ok(values)
}

pub fn run(config: &RunConfig) -> Result<ReportRow, HarnessError> {
    let values = load_input(&config.source, config.precision, config.order)?;
    run_on(config, &values)
}

/// Run `config.method` on already loaded terms.
pub fn run_on(config: &RunConfig, values: &[f64]) -> Result<ReportRow, HarnessError> {
    match config.precision {
        Precision::Single => {
            let narrowed: Vec<f32> = values.iter().map(|&v| v as f32).collect();
            run_typed(config, &narrowed)
        }
        Precision::Double => run_typed(config, values),
    }
}

struct Outcome {
    result: f64,
    histogram: Option<Vec<u64>>,
    overflow: bool,
    saw_nan: bool,
}

fn run_once<F: IeeeFloat>(method: Method, values: &[F]) -> Result<Outcome, HarnessError> {
    let plain = |result: f64| Outcome {
        result,
        histogram: None,
        overflow: result.is_infinite(),
        saw_nan: result.is_nan(),
    };
    Ok(match method {
        Method::Sum(algorithm) => {
            let report = algorithm.run(values)?;
            let histogram = report.level_histogram.as_ref().map(|h| {
                let used = report.max_level().map_or(0, |l| l + 1);
                h[..used].to_vec()
            });
            Outcome {
                result: report.sum,
                histogram,
                overflow: report.flags.overflow,
                saw_nan: report.flags.saw_nan,
            }
        }
        Method::Oracle => match accumulate(values) {
            Ok(acc) => plain(acc.round::<F>().to_f64()),
            Err(_) => plain(non_finite_sum(values)),
        },
        Method::EssaSign => plain(essa_sign(values)?.sign as f64),
        Method::HashSign => plain(hash_sign(values)?.sign as f64),
    })
}

/// IEEE value of a sum whose input holds infinities or NaN: the finite terms
/// cannot change it.
fn non_finite_sum<F: IeeeFloat>(values: &[F]) -> f64 {
    values
        .iter()
        .map(|v| v.to_f64())
        .filter(|v| !v.is_finite())
        .sum()
}

fn run_typed<F: IeeeFloat>(config: &RunConfig, values: &[F]) -> Result<ReportRow, HarnessError> {
    let repeat = config.repeat.max(1);
    let mut times = Vec::with_capacity(repeat);
    let mut outcome = None;
    for _ in 0..repeat {
        let start = Instant::now();
        let o = run_once(config.method, values)?;
        times.push(start.elapsed().as_nanos() as u64);
        outcome = Some(o);
    }
    let outcome = outcome.expect("at least one run");
    times.sort_unstable();
    let wall_time_ns = times[times.len() / 2];

    let (oracle_result, relative_error) = match accumulate(values) {
        Ok(acc) if config.method.is_sign() => {
            let exact = acc.sign() as f64;
            (exact, sign_error(outcome.result, exact))
        }
        Ok(acc) => (acc.to_f64(), relative_error_against(outcome.result, &acc)),
        Err(_) => {
            let exact = non_finite_sum(values);
            let err = if exact.to_bits() == outcome.result.to_bits() {
                0.0
            } else {
                f64::NAN
            };
            (exact, err)
        }
    };

    let histogram = outcome.histogram;
    Ok(ReportRow {
        algorithm: config.method.name().to_string(),
        series: config.source.label(),
        n: values.len(),
        precision: config.precision,
        order: config.order.to_string(),
        result: outcome.result,
        oracle_result,
        relative_error,
        wall_time_ns,
        max_recursion_level: histogram.as_ref().map(|h| h.len().saturating_sub(1)),
        histogram,
        overflow: outcome.overflow,
        saw_nan: outcome.saw_nan || relative_error.is_nan(),
    })
}

/// Relative error of a sign against the exact sign, both in {-1, 0, 1}.
fn sign_error(sign: f64, exact: f64) -> f64 {
    if sign == exact {
        0.0
    } else if exact == 0.0 {
        f64::INFINITY
    } else {
        (sign - exact).abs() / exact.abs()
    }
}

/// Result of [`compare`]: one row per config and the best/worst summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
}

/// Run several configs on the same input, loaded once.
pub fn compare(configs: &[RunConfig]) -> Result<Comparison, HarnessError> {
    let first = configs.first().ok_or(HarnessError::NoConfigs)?;
    if !configs.iter().all(|c| c.same_input(first)) {
        return Err(HarnessError::InconsistentSources);
    }
    let values = load_input(&first.source, first.precision, first.order)?;
    let rows = configs
        .iter()
        .map(|c| run_on(c, &values))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = Summary::of(&rows).expect("at least one row");
    Ok(Comparison { rows, summary })
}
