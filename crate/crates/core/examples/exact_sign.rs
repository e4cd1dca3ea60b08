//! Exact sign of badly conditioned sums: ESSA against the bucket estimate.

use rsum::accumulators::condition_measure;
use rsum::generators::{make_ill_conditioned, IllCondSpec};
use rsum::{essa_sign, exact_sign, hash_sign, naive_sum};

fn main() {
    println!(
        "{:>8} {:>10} {:>6} {:>6} {:>6} {:>6} {:>7}",
        "ratio", "measured", "exact", "essa", "hash", "naive", "rounds"
    );
    for e in [0, 5, 10, 15, 20, 25, 30] {
        let spec = IllCondSpec {
            n: 100,
            target_ratio: 10f64.powi(e),
            seed: e as u64,
        };
        let a = make_ill_conditioned(spec).unwrap();
        let essa = essa_sign(&a).unwrap();
        let naive = naive_sum(&a).sum;
        println!(
            "{:>8.0e} {:>10.2e} {:>6} {:>6} {:>6} {:>6} {:>7}",
            spec.target_ratio,
            condition_measure(&a).unwrap().ratio,
            exact_sign(&a).unwrap(),
            essa.sign,
            hash_sign(&a).unwrap().sign,
            naive.partial_cmp(&0.0).map_or(0, |o| o as i8),
            essa.iterations
        );
    }
}
