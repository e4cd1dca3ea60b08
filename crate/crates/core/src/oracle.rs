//! Exact reference summation.
//!
//! [`Superaccumulator`] is a fixed-point register covering every bit a finite
//! double can carry (weights `2^-1074 ..= 2^1023`) plus 64 bits of headroom, so
//! the sum of up to 2^63 doubles is held without any rounding. Digits are
//! radix 2^32 stored in `i64`, which leaves room to defer carry propagation for
//! a long run of additions.

use crate::error::OracleError;
use crate::fpbits::{FormatSpec, IeeeFloat};

const DIGIT_BITS: u32 = 32;
const DIGIT_MASK: i64 = (1 << DIGIT_BITS) - 1;
/// Weight of bit 0 is `2^LSB_EXPONENT`.
const LSB_EXPONENT: i32 = -1074;
/// 1074 + 1024 + 64 bits of headroom, rounded up to whole digits.
const DIGITS: usize = 68;
/// Each addition moves a digit by less than 2^32; i64 digits tolerate this many before a carry pass.
const MAX_PENDING: u32 = 1 << 29;

#[derive(Clone, Debug)]
pub struct Superaccumulator {
    digits: [i64; DIGITS],
    count: u64,
    pending: u32,
}

impl Default for Superaccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl Superaccumulator {
    pub fn new() -> Self {
        Superaccumulator {
            digits: [0; DIGITS],
            count: 0,
            pending: 0,
        }
    }

    /// Number of terms added so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Add one finite value exactly.
    pub fn add<F: IeeeFloat>(&mut self, x: F) -> Result<(), OracleError> {
        let x = x.to_f64();
        if !x.is_finite() {
            return Err(OracleError::NonFinite {
                index: self.count as usize,
                value: x,
            });
        }
        self.add_finite(x);
        Ok(())
    }

    /// Subtract one finite value exactly.
    pub fn sub<F: IeeeFloat>(&mut self, x: F) -> Result<(), OracleError> {
        self.add(-x)
    }

    fn add_finite(&mut self, x: f64) {
        self.count += 1;
        let bits = x.to_bits();
        let fmt = FormatSpec::DOUBLE;
        let field = fmt.exponent_field(bits);
        let frac = bits & fmt.mantissa_mask();
        let (mant, offset) = if field == 0 {
            (frac, 0u32)
        } else {
            (frac | (1 << fmt.mantissa_bits), field - 1)
        };
        if mant == 0 {
            return;
        }
        let idx = (offset / DIGIT_BITS) as usize;
        let wide = (mant as u128) << (offset % DIGIT_BITS);
        let parts = [
            (wide & DIGIT_MASK as u128) as i64,
            ((wide >> 32) & DIGIT_MASK as u128) as i64,
            (wide >> 64) as i64,
        ];
        if x < 0.0 {
            for (d, p) in self.digits[idx..idx + 3].iter_mut().zip(parts) {
                *d -= p;
            }
        } else {
            for (d, p) in self.digits[idx..idx + 3].iter_mut().zip(parts) {
                *d += p;
            }
        }
        self.pending += 1;
        if self.pending >= MAX_PENDING {
            self.normalize();
        }
    }

    /// Add another accumulator's exact value into this one.
    pub fn merge(&mut self, other: &Superaccumulator) {
        self.normalize();
        let mut other = other.clone();
        other.normalize();
        for (d, o) in self.digits.iter_mut().zip(other.digits.iter()) {
            *d += *o;
        }
        self.count += other.count;
        self.pending = 1;
        self.normalize();
    }

    /// Propagate carries so digits `0..DIGITS-1` lie in `[0, 2^32)`; the top digit carries the sign.
    pub fn normalize(&mut self) {
        for i in 0..DIGITS - 1 {
            let carry = self.digits[i] >> DIGIT_BITS;
            self.digits[i] &= DIGIT_MASK;
            self.digits[i + 1] += carry;
        }
        self.pending = 0;
    }

    fn normalized(&self) -> [i64; DIGITS] {
        let mut copy = self.clone();
        copy.normalize();
        copy.digits
    }

    /// Sign of the exact sum: -1, 0 or +1.
    pub fn sign(&self) -> i8 {
        sign_of(&self.normalized())
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    /// Exact sum rounded to nearest (ties to even) in `F`'s format.
    pub fn round<F: IeeeFloat>(&self) -> F {
        let digits = self.normalized();
        let sign = sign_of(&digits);
        if sign == 0 {
            return F::ZERO;
        }
        let magnitude = if sign < 0 {
            let mut neg = Superaccumulator::new();
            for (d, s) in neg.digits.iter_mut().zip(digits.iter()) {
                *d = -*s;
            }
            neg.normalize();
            neg.digits
        } else {
            digits
        };
        let bits = round_magnitude(&magnitude, F::FORMAT);
        let value = F::from_raw(bits);
        if sign < 0 {
            -value
        } else {
            value
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.round::<f64>()
    }
}

impl PartialEq for Superaccumulator {
    /// Compares exact values, ignoring term counts and carry state.
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

fn sign_of(digits: &[i64; DIGITS]) -> i8 {
    let top = digits[DIGITS - 1];
    if top < 0 {
        -1
    } else if top > 0 || digits[..DIGITS - 1].iter().any(|&d| d != 0) {
        1
    } else {
        0
    }
}

fn bit(magnitude: &[i64; DIGITS], index: i64) -> u64 {
    if index < 0 {
        return 0;
    }
    let d = (index / DIGIT_BITS as i64) as usize;
    ((magnitude[d] >> (index % DIGIT_BITS as i64)) & 1) as u64
}

fn any_below(magnitude: &[i64; DIGITS], index: i64) -> bool {
    if index <= 0 {
        return false;
    }
    let d = (index / DIGIT_BITS as i64) as usize;
    if magnitude[..d].iter().any(|&x| x != 0) {
        return true;
    }
    let r = index % DIGIT_BITS as i64;
    r > 0 && (magnitude[d] & ((1 << r) - 1)) != 0
}

/// Round a nonnegative normalized magnitude to the given format; returns raw bits.
fn round_magnitude(magnitude: &[i64; DIGITS], fmt: FormatSpec) -> u64 {
    let top_digit = magnitude
        .iter()
        .rposition(|&d| d != 0)
        .expect("nonzero magnitude");
    let top_bit =
        top_digit as i64 * DIGIT_BITS as i64 + (63 - magnitude[top_digit].leading_zeros() as i64);
    let mb = fmt.mantissa_bits as i64;
    let exponent = top_bit + LSB_EXPONENT as i64;
    let mut quantum = (exponent - mb).max(fmt.min_subnormal_exponent() as i64);
    let qbit = quantum - LSB_EXPONENT as i64;

    let mut m: u64 = 0;
    for i in (qbit.max(0)..=top_bit).rev() {
        m = (m << 1) | bit(magnitude, i);
    }
    if qbit > 0 {
        let round = bit(magnitude, qbit - 1) == 1;
        let sticky = any_below(magnitude, qbit - 1);
        if round && (sticky || m & 1 == 1) {
            m += 1;
        }
    } else {
        // Every bit is at or above the quantum: exact. Only reachable for doubles.
        m <<= -qbit;
    }
    if m == 1 << (mb + 1) {
        m >>= 1;
        quantum += 1;
    }
    if m >= 1 << mb {
        let field = quantum + mb + fmt.bias as i64;
        if field >= fmt.max_biased_exponent as i64 {
            return fmt.exponent_mask();
        }
        ((field as u64) << mb) | (m & fmt.mantissa_mask())
    } else {
        m
    }
}

/// Correctly rounded sum and whether the exact sum is zero.
pub fn exact_sum<F: IeeeFloat>(a: &[F]) -> Result<(f64, bool), OracleError> {
    let acc = accumulate(a)?;
    Ok((acc.to_f64(), acc.is_zero()))
}

pub fn accumulate<F: IeeeFloat>(a: &[F]) -> Result<Superaccumulator, OracleError> {
    let mut acc = Superaccumulator::new();
    for (index, &x) in a.iter().enumerate() {
        if !x.is_finite() {
            return Err(OracleError::NonFinite {
                index,
                value: x.to_f64(),
            });
        }
        acc.add_finite(x.to_f64());
    }
    Ok(acc)
}

pub fn exact_sign<F: IeeeFloat>(a: &[F]) -> Result<i8, OracleError> {
    Ok(accumulate(a)?.sign())
}

/// `|approx - exact| / |exact|`, with the difference formed exactly before rounding.
pub fn relative_error<F: IeeeFloat>(approx: f64, a: &[F]) -> Result<f64, OracleError> {
    let acc = accumulate(a)?;
    Ok(relative_error_against(approx, &acc))
}

pub fn relative_error_against(approx: f64, exact: &Superaccumulator) -> f64 {
    if approx.is_nan() {
        return f64::NAN;
    }
    if exact.is_zero() {
        return if approx == 0.0 { 0.0 } else { f64::INFINITY };
    }
    if approx.is_infinite() {
        return f64::INFINITY;
    }
    let mut diff = exact.clone();
    diff.add_finite(-approx);
    diff.to_f64().abs() / exact.to_f64().abs()
}

/// `|approx - exact|` measured in units of `ulp(round(exact))` of format `F`.
pub fn error_in_ulps<F: IeeeFloat>(approx: f64, exact: &Superaccumulator) -> f64 {
    if approx.is_nan() {
        return f64::NAN;
    }
    if approx.is_infinite() {
        return f64::INFINITY;
    }
    let mut diff = exact.clone();
    diff.add_finite(-approx);
    let reference = exact.round::<F>();
    diff.to_f64().abs() / crate::fpbits::ulp(reference).to_f64()
}
