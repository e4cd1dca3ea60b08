//! Sign of a floating-point sum.
//!
//! [`essa_sign`] decides the sign exactly. The positive terms and the
//! magnitudes of the negative terms are kept in two sorted lists; each round
//! either proves the sign from the two leading entries or replaces them with
//! smaller values of the same exact total. No rounding ever happens, so the
//! answer is the sign of the real-number sum.
//!
//! [`hash_sign`] is the cheap alternative: the sign of the bucket sum.

use crate::accumulators::{bucket_sum_recursive, two_sum};
use crate::error::SignError;
use crate::fpbits::{ilogb, mul_pow2, pow2, IeeeFloat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignResult {
    pub sign: i8,
    pub exact: bool,
    pub iterations: u64,
}

/// Positive terms (`a`) and magnitudes of negative terms (`b`), zeros dropped.
///
/// Both lists are kept in ascending order so the leading (largest) entry is
/// the last one.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedInput<F: IeeeFloat> {
    a_list: Vec<F>,
    b_list: Vec<F>,
    rounds: u64,
}

impl<F: IeeeFloat> PartitionedInput<F> {
    pub fn new(values: &[F]) -> Result<Self, SignError> {
        let mut a_list = Vec::new();
        let mut b_list = Vec::new();
        for (index, &x) in values.iter().enumerate() {
            if !x.is_finite() {
                return Err(SignError::NonFinite {
                    index,
                    value: x.to_f64(),
                });
            }
            if x > F::ZERO {
                a_list.push(x);
            } else if x < F::ZERO {
                b_list.push(-x);
            }
        }
        let by_value = |p: &F, q: &F| p.partial_cmp(q).expect("finite values");
        a_list.sort_by(by_value);
        b_list.sort_by(by_value);
        Ok(PartitionedInput {
            a_list,
            b_list,
            rounds: 0,
        })
    }

    /// Positive terms, largest first.
    pub fn a_list(&self) -> impl Iterator<Item = F> + '_ {
        self.a_list.iter().rev().copied()
    }

    /// Magnitudes of the negative terms, largest first.
    pub fn b_list(&self) -> impl Iterator<Item = F> + '_ {
        self.b_list.iter().rev().copied()
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    /// Current terms as signed values (`a` positive, `b` negated).
    pub fn signed_terms(&self) -> Vec<F> {
        self.a_list
            .iter()
            .copied()
            .chain(self.b_list.iter().map(|&b| -b))
            .collect()
    }

    fn insert_a(&mut self, x: F) {
        let at = self.a_list.partition_point(|&v| v < x);
        self.a_list.insert(at, x);
    }

    fn insert_b(&mut self, x: F) {
        let at = self.b_list.partition_point(|&v| v < x);
        self.b_list.insert(at, x);
    }

    /// Route a signed value to the proper list. Zeros are dropped.
    fn insert_signed(&mut self, x: F) {
        if x > F::ZERO {
            self.insert_a(x);
        } else if x < F::ZERO {
            self.insert_b(-x);
        }
    }

    /// `x - y` as an unevaluated pair; the pair is pushed to the lists.
    fn insert_difference(&mut self, x: F, y: F) {
        let (d, r) = two_sum(x, -y);
        self.insert_signed(d);
        self.insert_signed(r);
    }

    /// Run one round. Returns the sign once it is decided.
    pub fn step(&mut self) -> Option<i8> {
        self.rounds += 1;
        let k = self.a_list.len();
        let l = self.b_list.len();
        match (k, l) {
            (0, 0) => return Some(0),
            (_, 0) => return Some(1),
            (0, _) => return Some(-1),
            _ => {}
        }
        let a1 = *self.a_list.last().expect("k > 0");
        let b1 = *self.b_list.last().expect("l > 0");
        let e1 = ilogb(a1).expect("finite nonzero");
        let f1 = ilogb(b1).expect("finite nonzero");

        // Every b_j is below 2^(f1+1), so l * 2^(f1+1) bounds the b side.
        if a1.to_f64() >= mul_pow2(l as f64, f1 as i64 + 1) {
            return Some(1);
        }
        if b1.to_f64() >= mul_pow2(k as f64, e1 as i64 + 1) {
            return Some(-1);
        }

        self.a_list.pop();
        self.b_list.pop();
        if e1 == f1 {
            // Same binade: the difference is exact.
            self.insert_difference(a1, b1);
        } else if e1 > f1 {
            // a1 - b1 = (a1 - u) + (u - b1), with u between them.
            let u: F = pow2(f1 + 1).expect("f1 < e1 keeps u in range");
            self.insert_difference(a1, u);
            self.insert_difference(u, b1);
        } else {
            let v: F = pow2(e1 + 1).expect("e1 < f1 keeps v in range");
            self.insert_difference(v, b1);
            self.insert_difference(a1, v);
        }
        None
    }
}

/// Rounds allowed before giving up. Far above anything the algorithm needs.
fn round_cap<F: IeeeFloat>(n: usize) -> u64 {
    let fmt = F::FORMAT;
    let range = (fmt.max_biased_exponent + fmt.mantissa_bits) as u64;
    16 * (n as u64 + 1) * range
}

/// Exact sign of `Σ values`.
pub fn essa_sign<F: IeeeFloat>(values: &[F]) -> Result<SignResult, SignError> {
    let mut state = PartitionedInput::new(values)?;
    let cap = round_cap::<F>(values.len());
    loop {
        if let Some(sign) = state.step() {
            return Ok(SignResult {
                sign,
                exact: true,
                iterations: state.rounds,
            });
        }
        if state.rounds >= cap {
            return Err(SignError::IterationCap(state.rounds));
        }
    }
}

/// Sign of the bucket sum. Fast, usually right, never guaranteed.
pub fn hash_sign<F: IeeeFloat>(values: &[F]) -> Result<SignResult, SignError> {
    let report = bucket_sum_recursive(values)?;
    let sign = if report.sum > 0.0 {
        1
    } else if report.sum < 0.0 {
        -1
    } else {
        0
    };
    Ok(SignResult {
        sign,
        exact: false,
        iterations: values.len() as u64,
    })
}
