//! Split a large sum across threads, one bucket table per chunk, then merge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsum::accumulators::{bucket_table_recursive, BucketTable};
use rsum::{bucket_sum_recursive, exact_sum};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let terms: Vec<f64> = (0..4_000_000)
        .map(|_| rng.gen_range(-1.0f64..1.0) * 2f64.powi(rng.gen_range(-50..50)))
        .collect();
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = terms.len().div_ceil(threads);

    let tables: Vec<BucketTable<f64>> = std::thread::scope(|s| {
        let handles: Vec<_> = terms
            .chunks(chunk)
            .map(|part| s.spawn(move || bucket_table_recursive(part).unwrap()))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let merged = tables
        .iter()
        .skip(1)
        .fold(tables[0].clone(), |acc, t| acc.merge(t).unwrap());

    println!("threads     {threads}");
    println!("merged      {:e}", merged.fold());
    println!(
        "sequential  {:e}",
        bucket_sum_recursive(&terms).unwrap().sum
    );
    println!("exact       {:e}", exact_sum(&terms).unwrap().0);
}
