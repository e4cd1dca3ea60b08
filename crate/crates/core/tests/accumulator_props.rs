use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rsum::accumulators::{
    bucket_sum_nonrecursive, bucket_sum_recursive, bucket_table_recursive, compensated_sum,
    condition_measure, naive_sum, AnyBucketTable, BucketTable,
};
use rsum::error::SumError;
use rsum::fpbits::{extract_exponent, mul_pow2};
use rsum::generators::{make_ill_conditioned, make_series, IllCondSpec};
use rsum::oracle::{accumulate, error_in_ulps, exact_sum, relative_error};
use rsum::Precision;

const U: f64 = f64::EPSILON / 2.0;

fn wide_double() -> impl Strategy<Value = f64> {
    (any::<bool>(), 1.0f64..2.0, -300i64..300).prop_map(|(neg, m, e)| {
        let x = mul_pow2(m, e);
        if neg {
            -x
        } else {
            x
        }
    })
}

fn abs_sum(a: &[f64]) -> f64 {
    let abs: Vec<f64> = a.iter().map(|x| x.abs()).collect();
    exact_sum(&abs).unwrap().0
}

fn placed_exactly<F: rsum::IeeeFloat>(t: &BucketTable<F>) -> bool {
    let top = F::FORMAT.max_biased_exponent as usize;
    t.slots()
        .iter()
        .enumerate()
        .all(|(i, &v)| i == 0 || i == top || v == F::ZERO || extract_exponent(v) as usize == i)
}

proptest! {
    #[test]
    fn recursive_placement_is_exact(a in prop::collection::vec(wide_double(), 0..200)) {
        let t = bucket_table_recursive(&a).unwrap();
        prop_assert!(placed_exactly(&t));
        prop_assert!(t.is_placed());
        prop_assert_eq!(t.level_histogram().iter().sum::<u64>(), a.len() as u64);
    }

    #[test]
    fn recursive_placement_is_exact_single(a in prop::collection::vec(-1e20f32..1e20, 0..200)) {
        let t = bucket_table_recursive(&a).unwrap();
        prop_assert!(placed_exactly(&t));
    }

    #[test]
    fn corrected_nonrecursive_ends_placed(a in prop::collection::vec(wide_double(), 0..200)) {
        let exact = accumulate(&a).unwrap();
        let r = bucket_sum_nonrecursive(&a, true).unwrap();
        let bound = 4.0 * U * abs_sum(&a);
        let mut diff = exact.clone();
        diff.add(-r.sum).unwrap();
        prop_assert!(diff.to_f64().abs() <= bound);
    }

    #[test]
    fn compensated_bound(a in prop::collection::vec(wide_double(), 1..300)) {
        let r = compensated_sum(&a);
        let mut diff = accumulate(&a).unwrap();
        diff.add(-r.sum).unwrap();
        let n = a.len() as f64;
        prop_assert!(diff.to_f64().abs() <= 2.0 * U * abs_sum(&a) * (1.0 + 4.0 * n * U));
    }

    #[test]
    fn recursive_error_is_bounded_by_the_absolute_sum(a in prop::collection::vec(wide_double(), 1..300)) {
        let r = bucket_sum_recursive(&a).unwrap();
        let mut diff = accumulate(&a).unwrap();
        diff.add(-r.sum).unwrap();
        prop_assert!(diff.to_f64().abs() <= 2.0 * U * abs_sum(&a));
    }

    #[test]
    fn positive_inputs_are_within_one_ulp(a in prop::collection::vec(1e-10f64..1e10, 1..500)) {
        let r = bucket_sum_recursive(&a).unwrap();
        let exact = accumulate(&a).unwrap();
        prop_assert!(error_in_ulps::<f64>(r.sum, &exact) <= 1.0);
    }

    #[test]
    fn fold_of_a_random_table(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = BucketTable::<f64>::new();
        let mut values = Vec::new();
        for _ in 0..50 {
            let x = rng.gen_range(1.0f64..2.0) * 2f64.powi(rng.gen_range(-100..100));
            let x = if rng.gen_bool(0.5) { x } else { -x };
            let idx = extract_exponent(x) as usize;
            if t.slots()[idx] == 0.0 {
                t.set_slot(idx, x);
                values.push(x);
            }
        }
        let exact = accumulate(&values).unwrap();
        prop_assert!(error_in_ulps::<f64>(t.fold(), &exact) <= 1.0);
    }

    #[test]
    fn fold_is_pure(a in prop::collection::vec(wide_double(), 0..100)) {
        let t = bucket_table_recursive(&a).unwrap();
        prop_assert_eq!(t.fold().to_bits(), t.clone().fold().to_bits());
    }
}

#[test]
fn naive_examples() {
    let terms = vec![1e-3f32; 1000];
    assert_eq!(naive_sum(&terms).sum, 0.999990701675415);
    let terms = vec![1e-4f32; 10_000];
    assert_eq!(naive_sum(&terms).sum, 1.0000535249710083);
    assert_eq!(naive_sum::<f64>(&[]).sum, 0.0);
}

#[test]
fn compensated_beats_naive_on_tenth_milli() {
    let terms = vec![1e-4f32; 10_000];
    let naive = relative_error(naive_sum(&terms).sum, &[1.0f64]).unwrap();
    let comp = relative_error(compensated_sum(&terms).sum, &[1.0f64]).unwrap();
    assert!(comp < naive, "{comp} vs {naive}");
    let one = compensated_sum(&[3.5f64]);
    assert_eq!((one.sum, one.error_estimate), (3.5, Some(0.0)));
}

#[test]
fn compensated_harmonic_within_two_ulp() {
    let a = make_series("harmonic", 1_000_000, Precision::Double)
        .unwrap()
        .terms::<f64>();
    let exact = accumulate(&a).unwrap();
    assert!(error_in_ulps::<f64>(compensated_sum(&a).sum, &exact) <= 2.0);
}

#[test]
fn recursive_examples() {
    let zeros = vec![0.0f64; 100];
    let r = bucket_sum_recursive(&zeros).unwrap();
    assert_eq!(r.sum, 0.0);
    let h = r.level_histogram.unwrap();
    assert_eq!(h[0], 100);
    assert!(h[1..].iter().all(|&c| c == 0));

    let mut a = vec![1e-6f64; 1_000_000];
    a.push(1e9);
    a.shuffle(&mut ChaCha8Rng::seed_from_u64(1));
    let r = bucket_sum_recursive(&a).unwrap();
    assert!(relative_error(r.sum, &a).unwrap() <= 1e-14);
}

#[test]
fn nonrecursive_examples() {
    let terms = vec![1e-3f32; 1000];
    let naive_err = relative_error(naive_sum(&terms).sum, &terms).unwrap();
    for correct in [false, true] {
        let r = bucket_sum_nonrecursive(&terms, correct).unwrap();
        assert!(relative_error(r.sum, &terms).unwrap() <= naive_err);
        assert_eq!(
            bucket_sum_nonrecursive(&[2.5f32], correct).unwrap().sum,
            2.5
        );
    }

    let n = 1_000_000u64;
    let a = make_series("telescoping-reciprocal", n as usize, Precision::Double)
        .unwrap()
        .terms::<f64>();
    let closed = 1.0 - 1.0 / (n as f64 + 1.0);
    for correct in [false, true] {
        let r = bucket_sum_nonrecursive(&a, correct).unwrap();
        assert!((r.sum - closed).abs() / r.sum <= 1e-13);
    }
}

#[test]
fn fold_examples() {
    let mut t = BucketTable::<f64>::new();
    t.set_slot(1023, 1.0);
    assert_eq!(t.fold(), 1.0);
    t.set_slot(1023 - 30, 2f64.powi(-30));
    assert_eq!(t.fold(), 1.0 + 2f64.powi(-30));
}

#[test]
fn merge_examples() {
    let t = bucket_table_recursive(&[1.0, 2.5, -0.125]).unwrap();
    let empty = BucketTable::<f64>::new();
    assert_eq!(t.clone().merge(&empty).unwrap(), t);
    let back = empty.merge(&t).unwrap();
    assert_eq!(back.fold(), t.fold());
    assert_eq!(back.slots(), t.slots());

    let single = AnyBucketTable::Single(BucketTable::new());
    let double = AnyBucketTable::Double(BucketTable::new());
    assert!(matches!(
        single.merge(&double),
        Err(SumError::FormatMismatch { .. })
    ));
}

#[test]
fn split_merge_matches_the_whole() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let a: Vec<f64> = (0..100_000)
        .map(|_| rng.gen_range(-1.0f64..1.0) * 2f64.powi(rng.gen_range(-40..40)))
        .collect();
    let whole = bucket_sum_recursive(&a).unwrap().sum;
    let (left, right) = a.split_at(37_123);
    let merged = bucket_table_recursive(left)
        .unwrap()
        .merge(&bucket_table_recursive(right).unwrap())
        .unwrap();
    let ulp = rsum::fpbits::ulp(whole);
    assert!((merged.fold() - whole).abs() <= 2.0 * ulp);
    assert_eq!(merged.level_histogram().iter().sum::<u64>(), 100_000);
}

#[test]
fn rounded_carries_variant_still_places_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut t = BucketTable::<f64>::with_rounded_carries();
    assert!(!t.exact_carries());
    for _ in 0..10_000 {
        t.insert(rng.gen_range(-1e6..1e6)).unwrap();
    }
    assert!(placed_exactly(&t));
}

#[test]
fn non_finite_inputs_set_flags() {
    let r = bucket_sum_recursive(&[1.0, f64::INFINITY, 2.0]).unwrap();
    assert_eq!(r.sum, f64::INFINITY);
    assert!(r.flags.overflow);
    let r = bucket_sum_recursive(&[1.0, f64::NAN]).unwrap();
    assert!(r.sum.is_nan() && r.flags.saw_nan);
    let r = naive_sum(&[f64::MAX, f64::MAX]);
    assert!(r.flags.overflow);
}

#[test]
fn condition_measure_examples() {
    let m = condition_measure(&[1.0, -1.0, 1e-20]).unwrap();
    assert!((m.ratio / 2e20 - 1.0).abs() < 1e-12);
    let m = condition_measure(&[1.0, 2.0, 3.0]).unwrap();
    assert_eq!(m.ratio, 1.0);
    let a = make_ill_conditioned(IllCondSpec {
        n: 200,
        target_ratio: 1e12,
        seed: 9,
    })
    .unwrap();
    let m = condition_measure(&a).unwrap();
    assert!(m.ratio >= 1e11 && m.ratio <= 1e13, "{}", m.ratio);
    assert_eq!(
        condition_measure(&[1.0, -1.0]).unwrap().ratio,
        f64::INFINITY
    );
}
