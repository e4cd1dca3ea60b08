use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rsum::fpbits::{extract_exponent, ilogb, mul_pow2, set_exponent, ulp, FloatView};

fn boundary_doubles() -> Vec<f64> {
    let mut v = vec![
        0.0,
        f64::from_bits(1),
        f64::from_bits(2),
        f64::from_bits(3),
        f64::MIN_POSITIVE,
        f64::from_bits(f64::MIN_POSITIVE.to_bits() - 1),
        f64::from_bits(f64::MIN_POSITIVE.to_bits() + 1),
        f64::MAX,
        f64::from_bits(f64::MAX.to_bits() - 1),
        1.0,
        1.5,
        f64::from_bits(1.0f64.to_bits() - 1),
        f64::from_bits(0x000f_ffff_ffff_ffff),
        f64::from_bits(0x0008_0000_0000_0001),
    ];
    for e in -1074i64..=1023 {
        let bits = if e >= -1022 {
            ((e + 1023) as u64) << 52
        } else {
            1u64 << (e + 1074)
        };
        v.push(f64::from_bits(bits));
    }
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    v.extend(neg);
    v
}

fn boundary_shifts() -> Vec<i64> {
    let mut k: Vec<i64> = (-70..=70).collect();
    k.extend([
        -2200, -2098, -2097, -1100, -1075, -1074, -1073, -1022, -1000, 1000, 1023, 1024, 2046,
        2098, 2200,
    ]);
    k
}

#[test]
fn mul_pow2_matches_scalbn_on_boundaries() {
    for &x in &boundary_doubles() {
        for &k in &boundary_shifts() {
            let got = mul_pow2(x, k);
            let want = libm::scalbn(x, k as i32);
            assert_eq!(got.to_bits(), want.to_bits(), "x={x:e} k={k}");
        }
    }
}

#[test]
fn mul_pow2_matches_scalbn_on_random_doubles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    let mut checked = 0u64;
    while checked < 1_000_000 {
        let x = f64::from_bits(rng.gen());
        if !x.is_finite() {
            continue;
        }
        let k: i64 = match rng.gen_range(0..4) {
            0 => rng.gen_range(-60..=60),
            1 => rng.gen_range(-1100..=1100),
            2 => rng.gen_range(-2200..=2200),
            _ => -(ilogb(x).unwrap_or(0) as i64) - rng.gen_range(1000..=1080),
        };
        let got = mul_pow2(x, k);
        let want = libm::scalbn(x, k as i32);
        assert_eq!(got.to_bits(), want.to_bits(), "x={x:e} k={k}");
        checked += 1;
    }
}

#[test]
fn mul_pow2_matches_scalbnf_on_random_singles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf32);
    let mut checked = 0;
    while checked < 200_000 {
        let x = f32::from_bits(rng.gen());
        if !x.is_finite() {
            continue;
        }
        let k: i64 = rng.gen_range(-300..=300);
        assert_eq!(
            mul_pow2(x, k).to_bits(),
            libm::scalbnf(x, k as i32).to_bits(),
            "x={x:e} k={k}"
        );
        checked += 1;
    }
}

#[test]
fn non_finite_passes_through() {
    assert!(mul_pow2(f64::NAN, 5).is_nan());
    assert_eq!(mul_pow2(f64::NEG_INFINITY, -5000), f64::NEG_INFINITY);
    assert_eq!(mul_pow2(-0.0f64, 100).to_bits(), (-0.0f64).to_bits());
}

proptest! {
    #[test]
    fn decompose_recompose(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        let view = FloatView::<f64>::new(x);
        prop_assert_eq!(view.recompose().to_bits(), bits);
        prop_assert_eq!(view.to_bits(), bits);
    }

    #[test]
    fn set_then_extract(bits in any::<u64>(), e in 0u32..=2047) {
        let x = f64::from_bits(bits);
        let y = set_exponent(x, e).unwrap();
        prop_assert_eq!(extract_exponent(y), e);
        prop_assert_eq!(y.to_bits() & !(0x7ffu64 << 52), bits & !(0x7ffu64 << 52));
    }

    #[test]
    fn set_then_extract_single(bits in any::<u32>(), e in 0u32..=255) {
        let x = f32::from_bits(bits);
        let y = set_exponent(x, e).unwrap();
        prop_assert_eq!(extract_exponent(y), e);
    }

    #[test]
    fn exponent_out_of_range_is_rejected(x in any::<f64>(), e in 2048u32..10_000) {
        prop_assert!(set_exponent(x, e).is_err());
    }

    #[test]
    fn ulp_is_the_gap_to_the_next_float(x in 1e-300f64..1e300) {
        let next = f64::from_bits(x.to_bits() + 1);
        prop_assert_eq!(ulp(x), next - x);
    }

    #[test]
    fn mul_pow2_inverts_when_exact(x in -1e100f64..1e100, k in -200i64..200) {
        prop_assert_eq!(mul_pow2(mul_pow2(x, k), -k), x);
    }
}
