//! Bit-level access to IEEE-754 binary32/binary64 values.
//!
//! Everything here works on the full-width bit pattern of a value rather than
//! on 16-bit words overlaid on memory, so results do not depend on byte
//! order. The classic 16-bit view (mask `0x7FF0`, shift 4 for doubles) is
//! still available through [`FormatSpec::word_mask`] and friends, since the
//! bucket tables index by exactly that field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::FpBitsError;

/// The two supported binary interchange formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub fn format(self) -> FormatSpec {
        match self {
            Precision::Single => FormatSpec::SINGLE,
            Precision::Double => FormatSpec::DOUBLE,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Single => "single",
            Precision::Double => "double",
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" | "f32" => Ok(Precision::Single),
            "double" | "f64" => Ok(Precision::Double),
            other => Err(format!("unknown precision `{other}`")),
        }
    }
}

/// Layout constants of a binary floating-point format.
///
/// All masks are expressed on the low `total_bits()` bits of a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormatSpec {
    pub name: Precision,
    pub exponent_bits: u32,
    pub mantissa_bits: u32,
    pub bias: i32,
    pub max_biased_exponent: u32,
}

impl FormatSpec {
    pub const SINGLE: FormatSpec = FormatSpec::new(Precision::Single, 8, 23);
    pub const DOUBLE: FormatSpec = FormatSpec::new(Precision::Double, 11, 52);

    const fn new(name: Precision, exponent_bits: u32, mantissa_bits: u32) -> Self {
        FormatSpec {
            name,
            exponent_bits,
            mantissa_bits,
            bias: (1 << (exponent_bits - 1)) - 1,
            max_biased_exponent: (1 << exponent_bits) - 1,
        }
    }

    #[inline]
    pub const fn total_bits(&self) -> u32 {
        1 + self.exponent_bits + self.mantissa_bits
    }

    #[inline]
    pub const fn sign_mask(&self) -> u64 {
        1 << (self.total_bits() - 1)
    }

    #[inline]
    pub const fn exponent_mask(&self) -> u64 {
        (self.max_biased_exponent as u64) << self.mantissa_bits
    }

    #[inline]
    pub const fn mantissa_mask(&self) -> u64 {
        (1 << self.mantissa_bits) - 1
    }

    /// Smallest unbiased exponent of a normal number (`1 - bias`).
    #[inline]
    pub const fn min_normal_exponent(&self) -> i32 {
        1 - self.bias
    }

    /// Exponent of the smallest subnormal, i.e. the weight of mantissa bit 0
    /// when the biased exponent is 0 or 1.
    #[inline]
    pub const fn min_subnormal_exponent(&self) -> i32 {
        1 - self.bias - self.mantissa_bits as i32
    }

    /// Exponent mask as seen in the most significant 16-bit word.
    #[inline]
    pub const fn word_mask(&self) -> u16 {
        (self.exponent_mask() >> (self.total_bits() - 16)) as u16
    }

    /// Right shift that moves the exponent field of the top 16-bit word to bit 0.
    #[inline]
    pub const fn word_shift(&self) -> u32 {
        self.mantissa_bits - (self.total_bits() - 16)
    }

    /// Mask applied after the shift; equal to the largest biased exponent.
    #[inline]
    pub const fn word_field_mask(&self) -> u16 {
        self.max_biased_exponent as u16
    }

    /// Complement of [`word_mask`](Self::word_mask): keeps sign and mantissa bits of the top word.
    #[inline]
    pub const fn word_keep_mask(&self) -> u16 {
        !self.word_mask()
    }

    /// Biased exponent field of a raw bit pattern.
    #[inline]
    pub const fn exponent_field(&self, bits: u64) -> u32 {
        ((bits & self.exponent_mask()) >> self.mantissa_bits) as u32
    }

    /// Same field, read the 16-bit-word way. Always agrees with [`exponent_field`](Self::exponent_field).
    #[inline]
    pub const fn exponent_field_from_word(&self, bits: u64) -> u32 {
        let word = (bits >> (self.total_bits() - 16)) as u16;
        (((word & self.word_mask()) >> self.word_shift()) & self.word_field_mask()) as u32
    }
}

/// Coarse classification of a bit pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloatClass {
    Zero,
    Subnormal,
    Normal,
    Infinite,
    NaN,
}

/// Floating-point types whose bits the crate knows how to take apart.
pub trait IeeeFloat:
    Copy
    + PartialEq
    + PartialOrd
    + Default
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const FORMAT: FormatSpec;
    const ZERO: Self;
    const ONE: Self;

    fn to_raw(self) -> u64;
    fn from_raw(bits: u64) -> Self;
    /// Exact widening to `f64`.
    fn to_f64(self) -> f64;
    /// Round-to-nearest-even narrowing from `f64`.
    fn from_f64(v: f64) -> Self;
    fn abs(self) -> Self;
    fn is_nan(self) -> bool;
    fn is_finite(self) -> bool;
    fn is_infinite(self) -> bool;
}

impl IeeeFloat for f32 {
    const FORMAT: FormatSpec = FormatSpec::SINGLE;
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;

    #[inline]
    fn to_raw(self) -> u64 {
        self.to_bits() as u64
    }
    #[inline]
    fn from_raw(bits: u64) -> Self {
        f32::from_bits(bits as u32)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    #[inline]
    fn abs(self) -> Self {
        f32::abs(self)
    }
    #[inline]
    fn is_nan(self) -> bool {
        f32::is_nan(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }
    #[inline]
    fn is_infinite(self) -> bool {
        f32::is_infinite(self)
    }
}

impl IeeeFloat for f64 {
    const FORMAT: FormatSpec = FormatSpec::DOUBLE;
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;

    #[inline]
    fn to_raw(self) -> u64 {
        self.to_bits()
    }
    #[inline]
    fn from_raw(bits: u64) -> Self {
        f64::from_bits(bits)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn is_nan(self) -> bool {
        f64::is_nan(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn is_infinite(self) -> bool {
        f64::is_infinite(self)
    }
}

/// A value seen both as a number and as its three bit fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatView<F: IeeeFloat> {
    pub value: F,
    pub sign: u8,
    pub biased_exponent: u32,
    pub mantissa: u64,
}

impl<F: IeeeFloat> FloatView<F> {
    pub fn new(value: F) -> Self {
        Self::from_bits(value.to_raw())
    }

    pub fn from_bits(bits: u64) -> Self {
        let fmt = F::FORMAT;
        FloatView {
            value: F::from_raw(bits),
            sign: ((bits & fmt.sign_mask()) != 0) as u8,
            biased_exponent: fmt.exponent_field(bits),
            mantissa: bits & fmt.mantissa_mask(),
        }
    }

    /// Reassemble the bit pattern from the three fields.
    pub fn to_bits(&self) -> u64 {
        let fmt = F::FORMAT;
        ((self.sign as u64) << (fmt.total_bits() - 1))
            | ((self.biased_exponent as u64) << fmt.mantissa_bits)
            | (self.mantissa & fmt.mantissa_mask())
    }

    pub fn recompose(&self) -> F {
        F::from_raw(self.to_bits())
    }

    pub fn class(&self) -> FloatClass {
        classify_fields(F::FORMAT, self.biased_exponent, self.mantissa)
    }
}

fn classify_fields(fmt: FormatSpec, biased_exponent: u32, mantissa: u64) -> FloatClass {
    match (biased_exponent, mantissa) {
        (0, 0) => FloatClass::Zero,
        (0, _) => FloatClass::Subnormal,
        (e, 0) if e == fmt.max_biased_exponent => FloatClass::Infinite,
        (e, _) if e == fmt.max_biased_exponent => FloatClass::NaN,
        _ => FloatClass::Normal,
    }
}

/// Raw biased exponent field of `x`. Total over all bit patterns.
#[inline]
pub fn extract_exponent<F: IeeeFloat>(x: F) -> u32 {
    F::FORMAT.exponent_field(x.to_raw())
}

/// Replace the exponent field of `x`, keeping its sign and mantissa bits.
pub fn set_exponent<F: IeeeFloat>(x: F, new_exp: u32) -> Result<F, FpBitsError> {
    let fmt = F::FORMAT;
    if new_exp > fmt.max_biased_exponent {
        return Err(FpBitsError::ExponentOutOfRange {
            exponent: new_exp as i64,
            max: fmt.max_biased_exponent,
        });
    }
    let bits = (x.to_raw() & !fmt.exponent_mask()) | ((new_exp as u64) << fmt.mantissa_bits);
    Ok(F::from_raw(bits))
}

pub fn classify<F: IeeeFloat>(x: F) -> FloatClass {
    let bits = x.to_raw();
    let fmt = F::FORMAT;
    classify_fields(fmt, fmt.exponent_field(bits), bits & fmt.mantissa_mask())
}

/// Unbiased binary exponent `e` with `2^e <= |x| < 2^(e+1)`, for finite nonzero `x`
/// (subnormals included).
pub fn ilogb<F: IeeeFloat>(x: F) -> Option<i32> {
    let fmt = F::FORMAT;
    let bits = x.to_raw();
    let exp = fmt.exponent_field(bits);
    let mant = bits & fmt.mantissa_mask();
    if exp == fmt.max_biased_exponent {
        return None;
    }
    if exp == 0 {
        if mant == 0 {
            return None;
        }
        let top = 63 - mant.leading_zeros() as i32;
        return Some(fmt.min_subnormal_exponent() + top);
    }
    Some(exp as i32 - fmt.bias)
}

/// Exact power of two `2^k`, or `None` when it is not representable.
pub fn pow2<F: IeeeFloat>(k: i32) -> Option<F> {
    let fmt = F::FORMAT;
    if k > fmt.bias || k < fmt.min_subnormal_exponent() {
        return None;
    }
    if k >= fmt.min_normal_exponent() {
        Some(F::from_raw(((k + fmt.bias) as u64) << fmt.mantissa_bits))
    } else {
        Some(F::from_raw(1u64 << (k - fmt.min_subnormal_exponent())))
    }
}

/// Spacing of the format's grid at `|x|`. Zero maps to the smallest subnormal.
pub fn ulp<F: IeeeFloat>(x: F) -> F {
    let fmt = F::FORMAT;
    let e = ilogb(x)
        .unwrap_or(fmt.min_normal_exponent())
        .max(fmt.min_normal_exponent());
    pow2(e - fmt.mantissa_bits as i32).expect("ulp exponent in range")
}

/// `x * 2^k`, correctly rounded, computed on the bit fields.
///
/// Normal inputs whose result stays normal only touch the exponent field.
/// Everything else goes through an integer significand so gradual underflow
/// is rounded once (to nearest, ties to even) and overflow yields ±∞.
pub fn mul_pow2<F: IeeeFloat>(x: F, k: i64) -> F {
    let fmt = F::FORMAT;
    let bits = x.to_raw();
    let exp = fmt.exponent_field(bits) as i64;
    let max = fmt.max_biased_exponent as i64;

    if exp == max || (bits & !fmt.sign_mask()) == 0 {
        // NaN, infinity and zeros are fixed points.
        return x;
    }
    if exp != 0 {
        let target = exp + k;
        if target >= 1 && target < max {
            let out = (bits & !fmt.exponent_mask()) | ((target as u64) << fmt.mantissa_bits);
            return F::from_raw(out);
        }
    }
    scale_slow(fmt, bits, k)
}

fn scale_slow<F: IeeeFloat>(fmt: FormatSpec, bits: u64, k: i64) -> F {
    let sign = bits & fmt.sign_mask();
    let exp = fmt.exponent_field(bits) as i64;
    let mut mant = bits & fmt.mantissa_mask();
    // value = mant * 2^(e2), with the implicit bit folded into mant.
    let mut e2 = if exp == 0 {
        fmt.min_subnormal_exponent() as i64
    } else {
        mant |= 1 << fmt.mantissa_bits;
        exp - fmt.bias as i64 - fmt.mantissa_bits as i64
    };
    // Normalize so the leading bit sits at position mantissa_bits.
    let lead = 63 - mant.leading_zeros() as i64;
    let up = fmt.mantissa_bits as i64 - lead;
    mant <<= up;
    e2 -= up;

    let e2 = e2.saturating_add(k);
    let top = e2 + fmt.mantissa_bits as i64; // unbiased exponent of the result
    if top > fmt.bias as i64 {
        return F::from_raw(sign | fmt.exponent_mask());
    }
    if top >= fmt.min_normal_exponent() as i64 {
        let field = (top + fmt.bias as i64) as u64;
        return F::from_raw(sign | (field << fmt.mantissa_bits) | (mant & fmt.mantissa_mask()));
    }
    // Subnormal or underflow: shift right onto the 2^min_subnormal grid.
    let shift = fmt.min_subnormal_exponent() as i64 - e2;
    let rounded = if shift > fmt.mantissa_bits as i64 + 1 {
        0
    } else {
        round_shift_right(mant, shift as u32)
    };
    // A carry out of the subnormal range lands exactly on the smallest normal,
    // which the plain bit pattern already encodes.
    F::from_raw(sign | rounded)
}

/// `m >> s` rounded to nearest, ties to even. `s` is at most 64.
fn round_shift_right(m: u64, s: u32) -> u64 {
    if s == 0 {
        return m;
    }
    let wide = m as u128;
    let q = (wide >> s) as u64;
    let rem = wide & ((1u128 << s) - 1);
    let half = 1u128 << (s - 1);
    if rem > half || (rem == half && q & 1 == 1) {
        q + 1
    } else {
        q
    }
}
