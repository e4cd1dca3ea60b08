//! Pull a float apart into sign, exponent and mantissa, rewrite the exponent,
//! and scale by powers of two without touching the mantissa.

use rsum::fpbits::{extract_exponent, ilogb, mul_pow2, set_exponent, ulp, FloatView, FormatSpec};

fn main() {
    for spec in [FormatSpec::SINGLE, FormatSpec::DOUBLE] {
        println!(
            "{:<6} bias {:4}  word mask {:#06x} shift {} field {:#06x} keep {:#06x}",
            spec.name,
            spec.bias,
            spec.word_mask(),
            spec.word_shift(),
            spec.word_field_mask(),
            spec.word_keep_mask()
        );
    }

    for x in [1.0f64, -3.5, 0.1, f64::MIN_POSITIVE, 5e-324, f64::MAX] {
        let v = FloatView::new(x);
        println!(
            "{x:>24e}  sign {} exp {:4} mantissa {:#015x}  ilogb {:?}  ulp {:e}",
            v.sign,
            v.biased_exponent,
            v.mantissa,
            ilogb(x),
            ulp(x)
        );
    }

    let x = 1.75f64;
    let moved = set_exponent(x, 1023 + 10).unwrap();
    println!(
        "set_exponent(1.75, bias+10) = {moved}  (exponent field now {})",
        extract_exponent(moved)
    );

    let tiny = mul_pow2(1.5f64, -1073);
    println!("1.5 * 2^-1073 = {tiny:e} (rounded into the subnormal range)");
    println!("1.0 * 2^1024  = {}", mul_pow2(1.0f64, 1024));
    println!("f32 3 * 2^-140 = {:e}", mul_pow2(3.0f32, -140));
}
