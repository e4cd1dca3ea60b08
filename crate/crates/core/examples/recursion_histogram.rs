//! Recursion-level histogram of bucket summation as CSV (`depth,count`).
//!
//! Usage: `recursion_histogram [n] [max_exponent]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsum::bucket_sum_recursive;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000_000);
    let spread: i32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(30);
    let mut rng = ChaCha8Rng::seed_from_u64(rsum::harness::default_seed());
    let terms: Vec<f64> = (0..n)
        .map(|_| {
            let x = rng.gen_range(1.0f64..2.0) * 2f64.powi(rng.gen_range(-spread..=spread));
            if rng.gen_bool(0.5) {
                x
            } else {
                -x
            }
        })
        .collect();
    let report = bucket_sum_recursive(&terms).unwrap();
    let max = report.max_level().unwrap();
    println!("depth,count");
    for (depth, count) in report.level_histogram.unwrap()[..=max].iter().enumerate() {
        println!("{depth},{count}");
    }
}
