//! Drive the experiment harness from code: compare algorithms on one input
//! and print the report as CSV and JSON.

use rsum::harness::{compare, to_csv, to_json, Method, Order, RunConfig, Source};
use rsum::{Algorithm, Precision};

fn main() {
    let source = Source::Series {
        name: "harmonic".into(),
        n: 1_000_000,
    };
    let configs: Vec<RunConfig> = [
        Method::Sum(Algorithm::Naive),
        Method::Sum(Algorithm::Compensated),
        Method::Sum(Algorithm::BucketRecursive),
        Method::Sum(Algorithm::BucketNonrecCorrected),
        Method::Oracle,
    ]
    .into_iter()
    .map(|m| {
        RunConfig::new(m, source.clone())
            .precision(Precision::Single)
            .order(Order::Reverse)
            .repeat(5)
    })
    .collect();
    let cmp = compare(&configs).unwrap();
    print!(
        "{}",
        to_csv(&cmp.rows, Some(&cmp.summary), Some(8)).unwrap()
    );
    println!();
    print!("{}", to_json(&cmp.rows[..1], None, None));
}
