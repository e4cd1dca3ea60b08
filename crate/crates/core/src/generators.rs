//! Deterministic test data: the classic series with known sums, Rump's
//! polynomial, and ill-conditioned sets with a prescribed condition ratio.
//!
//! Series terms are computed exactly (or as close as the term allows) and
//! rounded once into the target format, so the only error left in a run is
//! the error of the summation itself.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::fpbits::{mul_pow2, IeeeFloat, Precision};

/// The named series. `Harmonic` and `HarmonicReverse` hold the same terms in
/// opposite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    ConstMilli,
    ConstTenthMilli,
    Harmonic,
    HarmonicReverse,
    Integers,
    Cubes,
    ExpSeries,
    LogTelescoping,
    TelescopingReciprocal,
    RiemannQuadratic,
    Rosenbrock,
    OddReciprocal,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 12] = [
        SeriesKind::ConstMilli,
        SeriesKind::ConstTenthMilli,
        SeriesKind::Harmonic,
        SeriesKind::HarmonicReverse,
        SeriesKind::Integers,
        SeriesKind::Cubes,
        SeriesKind::ExpSeries,
        SeriesKind::LogTelescoping,
        SeriesKind::TelescopingReciprocal,
        SeriesKind::RiemannQuadratic,
        SeriesKind::Rosenbrock,
        SeriesKind::OddReciprocal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::ConstMilli => "const-1e-3",
            SeriesKind::ConstTenthMilli => "const-1e-4",
            SeriesKind::Harmonic => "harmonic",
            SeriesKind::HarmonicReverse => "harmonic-reverse",
            SeriesKind::Integers => "integers",
            SeriesKind::Cubes => "cubes",
            SeriesKind::ExpSeries => "exp-series",
            SeriesKind::LogTelescoping => "log-telescoping",
            SeriesKind::TelescopingReciprocal => "telescoping-reciprocal",
            SeriesKind::RiemannQuadratic => "riemann-quadratic",
            SeriesKind::Rosenbrock => "rosenbrock",
            SeriesKind::OddReciprocal => "odd-reciprocal",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            SeriesKind::ConstMilli => "sum 1e-3",
            SeriesKind::ConstTenthMilli => "sum 1e-4",
            SeriesKind::Harmonic => "sum 1/i, i = 1..n",
            SeriesKind::HarmonicReverse => "sum 1/i, i = n..1",
            SeriesKind::Integers => "sum i = n(n+1)/2",
            SeriesKind::Cubes => "sum i^3 = n^2(n+1)^2/4",
            SeriesKind::ExpSeries => "sum 1/(i-1)! -> e",
            SeriesKind::LogTelescoping => "sum ln(i+2) - ln(i+1) = ln(n+2) - ln 2",
            SeriesKind::TelescopingReciprocal => "sum 1/(i(i+1)) = 1 - 1/(n+1)",
            SeriesKind::RiemannQuadratic => "sum 3(1+i/n)^2/n = 7 + 9/(2n) + 1/(2n^2)",
            SeriesKind::Rosenbrock => "extended Rosenbrock terms at x = (1, ..., 1)",
            SeriesKind::OddReciprocal => "sum 1/((2i-1)(2i+1)) = n/(2n+1)",
        }
    }
}

impl std::str::FromStr for SeriesKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SeriesKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GenError::UnknownSeries(s.to_string()))
    }
}

/// A series instance: which terms, how many, and in which format.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub n: usize,
    pub precision: Precision,
}

pub fn make_series(name: &str, n: usize, precision: Precision) -> Result<SeriesSpec, GenError> {
    let kind: SeriesKind = name.parse()?;
    if n == 0 {
        return Err(GenError::EmptySeries);
    }
    Ok(SeriesSpec { kind, n, precision })
}

impl SeriesSpec {
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// The `i`-th term (1-based, in generation order) rounded to `F`.
    pub fn term<F: IeeeFloat>(&self, i: usize) -> F {
        let n = self.n as u128;
        let i = i as u128;
        match self.kind {
            SeriesKind::ConstMilli => round_ratio(1, 1000),
            SeriesKind::ConstTenthMilli => round_ratio(1, 10_000),
            SeriesKind::Harmonic => round_ratio(1, i),
            SeriesKind::HarmonicReverse => round_ratio(1, n + 1 - i),
            SeriesKind::Integers => round_ratio(i, 1),
            SeriesKind::Cubes => round_ratio(i * i * i, 1),
            SeriesKind::ExpSeries => exp_term(i as usize),
            SeriesKind::LogTelescoping => F::from_f64((1.0 / (i as f64 + 1.0)).ln_1p()),
            SeriesKind::TelescopingReciprocal => round_ratio(1, i * (i + 1)),
            SeriesKind::RiemannQuadratic => round_ratio(3 * (n + i) * (n + i), n * n * n),
            SeriesKind::Rosenbrock => F::ZERO,
            SeriesKind::OddReciprocal => round_ratio(1, (2 * i - 1) * (2 * i + 1)),
        }
    }

    pub fn terms<F: IeeeFloat>(&self) -> Vec<F> {
        (1..=self.n).map(|i| self.term(i)).collect()
    }

    /// Terms widened to `f64`, in the precision this spec names.
    pub fn terms_f64(&self) -> Vec<f64> {
        match self.precision {
            Precision::Single => (1..=self.n).map(|i| self.term::<f32>(i) as f64).collect(),
            Precision::Double => (1..=self.n).map(|i| self.term::<f64>(i)).collect(),
        }
    }

    /// Closed-form value of the mathematical series, rounded to `f64`.
    ///
    /// Rational closed forms are rounded once. The harmonic and logarithmic
    /// series go through `f64` transcendental functions and can be off by a
    /// few ulp.
    pub fn expected(&self) -> f64 {
        let n = self.n as u128;
        match self.kind {
            SeriesKind::ConstMilli => round_ratio(n, 1000),
            SeriesKind::ConstTenthMilli => round_ratio(n, 10_000),
            SeriesKind::Harmonic | SeriesKind::HarmonicReverse => harmonic_number(self.n),
            SeriesKind::Integers => round_ratio(n * (n + 1) / 2, 1),
            SeriesKind::Cubes => {
                let t = n * (n + 1) / 2;
                round_ratio(t * t, 1)
            }
            SeriesKind::ExpSeries => exp_partial_sum(self.n),
            SeriesKind::LogTelescoping => ((self.n as f64 + 2.0) / 2.0).ln(),
            SeriesKind::TelescopingReciprocal => round_ratio(n, n + 1),
            SeriesKind::RiemannQuadratic => round_ratio(14 * n * n + 9 * n + 1, 2 * n * n),
            SeriesKind::Rosenbrock => 0.0,
            SeriesKind::OddReciprocal => round_ratio(n, 2 * n + 1),
        }
    }
}

/// Correctly rounded `num / den` in format `F`.
pub fn round_ratio<F: IeeeFloat>(num: u128, den: u128) -> F {
    // Both operands exact in F: one IEEE division is already correctly rounded.
    let exact_limit = 1u128 << (F::FORMAT.mantissa_bits + 1);
    if num < exact_limit && den < exact_limit {
        return F::from_f64(num as f64) / F::from_f64(den as f64);
    }
    round_big_ratio(&BigUint::from(num), &BigUint::from(den))
}

/// Correctly rounded `num / den` for arbitrary-size nonnegative integers.
pub fn round_big_ratio<F: IeeeFloat>(num: &BigUint, den: &BigUint) -> F {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return F::ZERO;
    }
    let fmt = F::FORMAT;
    // Exponent e with 2^e <= num/den < 2^(e+1).
    let mut e = num.bits() as i64 - den.bits() as i64;
    let below = if e >= 0 {
        num < &(den << e as u64)
    } else {
        &(num << (-e) as u64) < den
    };
    if below {
        e -= 1;
    }
    if e > fmt.bias as i64 {
        return F::from_raw(fmt.exponent_mask());
    }
    let quantum = (e - fmt.mantissa_bits as i64).max(fmt.min_subnormal_exponent() as i64);
    let (n2, d2) = if quantum <= 0 {
        (num << (-quantum) as u64, den.clone())
    } else {
        (num.clone(), den << quantum as u64)
    };
    let mut m = &n2 / &d2;
    let twice_rem: BigUint = (&n2 % &d2) << 1u32;
    if twice_rem > d2 || (twice_rem == d2 && m.bit(0)) {
        m += 1u32;
    }
    let m = m.to_u64().expect("significand fits in 64 bits") as f64;
    // m <= 2^(mantissa_bits + 1) and m * 2^quantum sits on the format grid,
    // so both steps are exact (or overflow, which is the right answer).
    mul_pow2(F::from_f64(m), quantum)
}

/// Correctly rounded value of a signed rational.
pub fn round_rational<F: IeeeFloat>(q: &BigRational) -> F {
    let mag: F = round_big_ratio(q.numer().magnitude(), q.denom().magnitude());
    if q.is_negative() {
        -mag
    } else {
        mag
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).fold(BigUint::one(), |acc, j| acc * j)
}

/// Past this index `1/(i-1)!` is far below half the smallest double subnormal.
const EXP_SERIES_CUTOFF: usize = 200;

fn exp_term<F: IeeeFloat>(i: usize) -> F {
    if i > EXP_SERIES_CUTOFF {
        return F::ZERO;
    }
    round_big_ratio(&BigUint::one(), &factorial(i - 1))
}

fn exp_partial_sum(n: usize) -> f64 {
    let mut sum = BigRational::zero();
    for i in 1..=n.min(EXP_SERIES_CUTOFF) {
        sum += BigRational::new(BigInt::one(), BigInt::from(factorial(i - 1)));
    }
    round_rational(&sum)
}

/// `H_n`, exactly for small `n`, from the asymptotic expansion otherwise.
fn harmonic_number(n: usize) -> f64 {
    if n <= 1000 {
        let mut sum = BigRational::zero();
        for i in 1..=n {
            sum += BigRational::new(BigInt::one(), BigInt::from(i));
        }
        return round_rational(&sum);
    }
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let x = n as f64;
    let inv2 = 1.0 / (x * x);
    let tail = 1.0 / (2.0 * x) - inv2 / 12.0 + inv2 * inv2 / 120.0;
    x.ln() + (EULER_GAMMA + tail)
}

/// Extended Rosenbrock terms at `point`, two per coordinate pair:
/// `100 (x_{2i} - x_{2i-1}^2)^2` and `(1 - x_{2i-1})^2`, each evaluated exactly
/// and rounded once. A trailing odd coordinate is ignored.
pub fn rosenbrock_terms<F: IeeeFloat>(point: &[f64]) -> Vec<F> {
    let mut out = Vec::with_capacity(point.len());
    for pair in point.chunks_exact(2) {
        let (odd, even) = (exact(pair[0]), exact(pair[1]));
        let d = &even - &odd * &odd;
        let hundred = BigRational::from_integer(BigInt::from(100));
        out.push(round_rational(&(hundred * &d * &d)));
        let one_minus = BigRational::one() - &odd;
        out.push(round_rational(&(&one_minus * &one_minus)));
    }
    out
}

/// Exact value of the extended Rosenbrock function at `point`, rounded once.
pub fn rosenbrock_value(point: &[f64]) -> f64 {
    let mut sum = BigRational::zero();
    for pair in point.chunks_exact(2) {
        let (odd, even) = (exact(pair[0]), exact(pair[1]));
        let d = &even - &odd * &odd;
        let one_minus = BigRational::one() - &odd;
        sum += BigRational::from_integer(BigInt::from(100)) * &d * &d + &one_minus * &one_minus;
    }
    round_rational(&sum)
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

/// Where Rump's polynomial is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RumpPrecision {
    Single,
    Double,
    /// Exact rational evaluation, rounded once to `f64`.
    Exact,
}

/// `333.75 y^6 + x^2 (11 x^2 y^2 - y^6 - 121 y^4 - 2) + 5.5 y^8 + x / (2y)`.
///
/// Float evaluations go strictly left to right, powers as repeated products.
pub fn rump_eval(x: f64, y: f64, precision: RumpPrecision) -> Result<f64, GenError> {
    if y == 0.0 {
        return Err(GenError::Domain);
    }
    Ok(match precision {
        RumpPrecision::Single => rump_float(x as f32, y as f32) as f64,
        RumpPrecision::Double => rump_float(x, y),
        RumpPrecision::Exact => round_rational(&rump_exact(x, y)),
    })
}

fn rump_float<F: IeeeFloat>(x: F, y: F) -> F {
    let c = |v: f64| F::from_f64(v);
    let y2 = y * y;
    let y4 = y2 * y2;
    let y6 = y4 * y2;
    let y8 = y4 * y4;
    let x2 = x * x;
    c(333.75) * y6
        + x2 * (c(11.0) * x2 * y2 - y6 - c(121.0) * y4 - c(2.0))
        + c(5.5) * y8
        + x / (c(2.0) * y)
}

/// Exact rational value of Rump's polynomial at `(x, y)`.
pub fn rump_exact(x: f64, y: f64) -> BigRational {
    let x = exact(x);
    let y = exact(y);
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let y2 = &y * &y;
    let y4 = &y2 * &y2;
    let y6 = &y4 * &y2;
    let y8 = &y4 * &y4;
    let x2 = &x * &x;
    let coeff = BigRational::new(BigInt::from(1335), BigInt::from(4));
    let half_11 = BigRational::new(BigInt::from(11), BigInt::from(2));
    coeff * &y6
        + &x2 * (int(11) * &x2 * &y2 - &y6 - int(121) * &y4 - int(2))
        + half_11 * &y8
        + &x / (int(2) * &y)
}

/// Parameters for an ill-conditioned data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IllCondSpec {
    pub n: usize,
    /// Desired `Σ|a_i| / |Σ a_i|`; `f64::INFINITY` asks for an exact zero sum.
    pub target_ratio: f64,
    pub seed: u64,
}

/// Cancelling pairs plus a small residual, shuffled.
///
/// Some positive partners are split into a high and a low part so the
/// cancellation spans more than two terms.
pub fn make_ill_conditioned(spec: IllCondSpec) -> Result<Vec<f64>, GenError> {
    let IllCondSpec {
        n,
        target_ratio,
        seed,
    } = spec;
    let unachievable = || GenError::Unachievable {
        n,
        ratio: target_ratio,
    };
    if n == 0 || target_ratio.is_nan() || target_ratio < 1.0 {
        return Err(unachievable());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_magnitude = |rng: &mut ChaCha8Rng| -> f64 {
        rng.gen_range(1.0..2.0) * 2f64.powi(rng.gen_range(-20..=0))
    };

    if target_ratio == 1.0 {
        return Ok((0..n).map(|_| random_magnitude(&mut rng)).collect());
    }
    let residual_sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let residual = residual_sign * rng.gen_range(1.0..2.0) * 2f64.powi(rng.gen_range(-10..=10));

    if n == 1 {
        return Err(unachievable());
    }
    if n == 2 {
        if target_ratio.is_infinite() {
            let x = random_magnitude(&mut rng);
            return Ok(vec![x, -x]);
        }
        if target_ratio > 2f64.powi(50) {
            return Err(unachievable());
        }
        let x = (target_ratio + 1.0) * residual.abs() / 2.0 * residual_sign;
        let mut out = vec![x, -(x - residual)];
        out.shuffle(&mut rng);
        return Ok(out);
    }

    // Layout: groups of (x, -x) or (hi, lo, -x), then one or two residual terms.
    let exact_zero = target_ratio.is_infinite();
    let mut budget = if exact_zero { n } else { n - 1 };
    let mut groups = Vec::new();
    while budget > 0 {
        match budget {
            1 if exact_zero => return Err(unachievable()),
            1 => break,
            2 => {
                groups.push(false);
                budget -= 2;
            }
            _ => {
                // An exact-zero layout must never leave a single slot over.
                let split = match budget {
                    3 if exact_zero => true,
                    4 if exact_zero => false,
                    _ => rng.gen_bool(0.5),
                };
                groups.push(split);
                budget -= if split { 3 } else { 2 };
            }
        }
    }
    let residual_terms = if exact_zero {
        0
    } else {
        n - groups.iter().map(|&s| if s { 3 } else { 2 }).sum::<usize>()
    };

    let weights: Vec<f64> = groups.iter().map(|_| random_magnitude(&mut rng)).collect();
    let total: f64 = weights.iter().sum();
    // Σ|a| = 2 Σ|x_j| + |r|  =>  Σ|x_j| = (R - 1) |r| / 2.
    let pair_mass = if exact_zero {
        1.0
    } else {
        (target_ratio - 1.0) * residual.abs() / 2.0
    };
    let scale = pair_mass / total;

    let mut out = Vec::with_capacity(n);
    for (&split, &w) in groups.iter().zip(&weights) {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let x = sign * w * scale;
        if split {
            let hi = f64::from_bits(x.to_bits() & !((1u64 << 26) - 1));
            let lo = x - hi;
            out.extend([hi, lo, -x]);
        } else {
            out.extend([x, -x]);
        }
    }
    match residual_terms {
        0 => {}
        1 => out.push(residual),
        _ => out.extend([residual / 2.0, residual / 2.0]),
    }
    out.shuffle(&mut rng);
    Ok(out)
}
