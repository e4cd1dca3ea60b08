//! Small sums that go wrong in single precision, and how the other
//! algorithms do on the same terms.

use rsum::harness::hexfloat::truncate_significant;
use rsum::{
    bucket_sum_recursive, compensated_sum, exact_sum, generators::make_series, naive_sum, Precision,
};

fn show(label: &str, terms: &[f32]) {
    let (exact, _) = exact_sum(terms).unwrap();
    println!("{label}");
    println!("  exact sum of the rounded terms  {exact}");
    println!("  naive                           {}", naive_sum(terms).sum);
    println!(
        "  compensated                     {}",
        compensated_sum(terms).sum
    );
    println!(
        "  bucket                          {}",
        bucket_sum_recursive(terms).unwrap().sum
    );
}

fn main() {
    show("1000 x 1e-3, single", &vec![1e-3f32; 1000]);
    show("10000 x 1e-4, single", &vec![1e-4f32; 10_000]);

    let forward = make_series("harmonic", 1_000_000, Precision::Single)
        .unwrap()
        .terms::<f32>();
    let reverse: Vec<f32> = forward.iter().rev().copied().collect();
    println!("harmonic, 10^6 terms, single");
    println!(
        "  naive forward  {}",
        truncate_significant(naive_sum(&forward).sum, 8)
    );
    println!(
        "  naive reverse  {}",
        truncate_significant(naive_sum(&reverse).sum, 8)
    );
    println!(
        "  bucket forward {}",
        bucket_sum_recursive(&forward).unwrap().sum
    );
    println!(
        "  bucket reverse {}",
        bucket_sum_recursive(&reverse).unwrap().sum
    );
}
