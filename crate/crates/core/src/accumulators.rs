//! Summation algorithms.
//!
//! Besides the plain and compensated loops, this module holds the
//! exponent-bucket summation: every term is added into a table slot chosen by
//! its biased exponent, so values of similar magnitude are combined with each
//! other before they ever meet larger partial sums. The table is folded from
//! the smallest bucket upward at the end.

use serde::{Deserialize, Serialize};

use crate::error::{OracleError, SumError};
use crate::fpbits::{extract_exponent, FormatSpec, IeeeFloat, Precision};
use crate::oracle;

/// Size of the recursion-level histogram; deeper chains are an error.
pub const MAX_RECURSION_LEVEL: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Naive,
    Compensated,
    BucketRecursive,
    BucketNonrec,
    BucketNonrecCorrected,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Naive,
        Algorithm::Compensated,
        Algorithm::BucketRecursive,
        Algorithm::BucketNonrec,
        Algorithm::BucketNonrecCorrected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Compensated => "compensated",
            Algorithm::BucketRecursive => "bucket-recursive",
            Algorithm::BucketNonrec => "bucket-nonrec",
            Algorithm::BucketNonrecCorrected => "bucket-nonrec-corrected",
        }
    }

    /// Run this algorithm over `a`.
    pub fn run<F: IeeeFloat>(self, a: &[F]) -> Result<SumReport, SumError> {
        match self {
            Algorithm::Naive => Ok(naive_sum(a)),
            Algorithm::Compensated => Ok(compensated_sum(a)),
            Algorithm::BucketRecursive => bucket_sum_recursive(a),
            Algorithm::BucketNonrec => bucket_sum_nonrecursive(a, false),
            Algorithm::BucketNonrecCorrected => bucket_sum_nonrecursive(a, true),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumFlags {
    pub overflow: bool,
    pub saw_nan: bool,
}

impl SumFlags {
    fn observe<F: IeeeFloat>(&mut self, x: F) {
        if x.is_nan() {
            self.saw_nan = true;
        } else if x.is_infinite() {
            self.overflow = true;
        }
    }
}

/// Outcome of one summation run. `sum` is widened exactly to `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumReport {
    pub sum: f64,
    pub precision: Precision,
    pub algorithm: Algorithm,
    pub n_terms: usize,
    pub error_estimate: Option<f64>,
    pub level_histogram: Option<Vec<u64>>,
    pub flags: SumFlags,
}

impl SumReport {
    fn new<F: IeeeFloat>(
        algorithm: Algorithm,
        sum: F,
        n_terms: usize,
        mut flags: SumFlags,
    ) -> Self {
        flags.observe(sum);
        SumReport {
            sum: sum.to_f64(),
            precision: F::FORMAT.name,
            algorithm,
            n_terms,
            error_estimate: None,
            level_histogram: None,
            flags,
        }
    }

    /// Deepest recursion level that occurred, if a histogram was recorded.
    pub fn max_level(&self) -> Option<usize> {
        self.level_histogram
            .as_ref()
            .map(|h| h.iter().rposition(|&c| c != 0).unwrap_or(0))
    }
}

/// Left-to-right sum in the precision of `F`.
pub fn naive_sum<F: IeeeFloat>(a: &[F]) -> SumReport {
    let mut flags = SumFlags::default();
    let mut s = F::ZERO;
    for &x in a {
        flags.observe(x);
        s = s + x;
    }
    SumReport::new(Algorithm::Naive, s, a.len(), flags)
}

/// Compensated summation carrying a running error term.
///
/// The returned `sum` is the running sum `S`; the residual that has not been
/// folded back yet is reported as `error_estimate`.
pub fn compensated_sum<F: IeeeFloat>(a: &[F]) -> SumReport {
    let mut flags = SumFlags::default();
    let mut s = F::ZERO;
    let mut error = F::ZERO;
    for &x in a {
        flags.observe(x);
        let temp = s;
        let q = x + error;
        s = temp + q;
        error = (temp - s) + q;
    }
    let mut report = SumReport::new(Algorithm::Compensated, s, a.len(), flags);
    report.error_estimate = Some(error.to_f64());
    report
}

/// Per-exponent partial sums plus a histogram of insertion chain lengths.
///
/// Slot `i` holds a signed partial sum whose magnitude has biased exponent
/// `i`. Slot 0 (zeros and subnormals) and the top slot (infinities and NaN)
/// are plain accumulators and never trigger a move.
///
/// Two equal-exponent values of the same sign can lose their last bit when
/// they carry into the next bucket. With exact carries (the default) that
/// bit is inserted back into the table, so the slots always add up to the
/// exact sum of everything inserted. [`BucketTable::with_rounded_carries`]
/// drops it instead.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketTable<F: IeeeFloat> {
    slots: Vec<F>,
    level_histogram: Vec<u64>,
    overflow: bool,
    saw_nan: bool,
    exact_carries: bool,
    pending: Vec<F>,
}

impl<F: IeeeFloat> Default for BucketTable<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: IeeeFloat> BucketTable<F> {
    pub fn new() -> Self {
        BucketTable {
            slots: vec![F::ZERO; F::FORMAT.max_biased_exponent as usize + 1],
            level_histogram: vec![0; MAX_RECURSION_LEVEL + 1],
            overflow: false,
            saw_nan: false,
            exact_carries: true,
            pending: Vec::new(),
        }
    }

    /// A table whose carries keep only the rounded sum.
    pub fn with_rounded_carries() -> Self {
        BucketTable {
            exact_carries: false,
            ..Self::new()
        }
    }

    pub fn exact_carries(&self) -> bool {
        self.exact_carries
    }

    pub fn format(&self) -> FormatSpec {
        F::FORMAT
    }

    pub fn slots(&self) -> &[F] {
        &self.slots
    }

    pub fn level_histogram(&self) -> &[u64] {
        &self.level_histogram
    }

    pub fn overflow(&self) -> bool {
        self.overflow
    }

    pub fn saw_nan(&self) -> bool {
        self.saw_nan
    }

    /// Overwrite a slot directly, bypassing placement.
    pub fn set_slot(&mut self, index: usize, value: F) {
        self.observe(value);
        self.slots[index] = value;
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(|&s| s == F::ZERO)
    }

    fn observe(&mut self, x: F) {
        if x.is_nan() {
            self.saw_nan = true;
        } else if x.is_infinite() {
            self.overflow = true;
        }
    }

    #[inline]
    fn is_catch_all(index: u32) -> bool {
        index == 0 || index == F::FORMAT.max_biased_exponent
    }

    /// Add `x` to the table, moving the partial sum to the bucket of its new
    /// exponent until it lands in a bucket that matches. Returns the chain
    /// length, which is also counted in the level histogram.
    pub fn insert(&mut self, x: F) -> Result<usize, SumError> {
        let depth = self.absorb(x)?;
        self.level_histogram[depth] += 1;
        Ok(depth)
    }

    /// Place `x`, then any carry remainders it produced. Returns the depth of `x`'s own chain.
    fn absorb(&mut self, x: F) -> Result<usize, SumError> {
        let depth = self.place(x)?;
        while let Some(r) = self.pending.pop() {
            self.place(r)?;
        }
        Ok(depth)
    }

    fn place(&mut self, x: F) -> Result<usize, SumError> {
        let mut q = x;
        let mut index = extract_exponent(q);
        let mut depth = 0;
        loop {
            if Self::is_catch_all(index) {
                let slot = &mut self.slots[index as usize];
                *slot = *slot + q;
                let v = *slot;
                self.observe(q);
                self.observe(v);
                return Ok(depth);
            }
            let old = std::mem::replace(&mut self.slots[index as usize], F::ZERO);
            let sum = if self.exact_carries {
                let (sum, rest) = two_sum(q, old);
                if rest != F::ZERO && sum.is_finite() {
                    self.pending.push(rest);
                }
                sum
            } else {
                q + old
            };
            let new_index = extract_exponent(sum);
            if new_index == index {
                self.slots[index as usize] = sum;
                return Ok(depth);
            }
            depth += 1;
            if depth > MAX_RECURSION_LEVEL {
                return Err(SumError::RecursionLimit {
                    depth,
                    limit: MAX_RECURSION_LEVEL,
                });
            }
            q = sum;
            index = new_index;
        }
    }

    /// Add `x` into the slot of its own exponent without moving the result.
    pub fn insert_unplaced(&mut self, x: F) -> usize {
        let index = extract_exponent(x) as usize;
        let slot = &mut self.slots[index];
        *slot = *slot + x;
        let v = *slot;
        self.observe(x);
        self.observe(v);
        index
    }

    /// Single relocation step: if the value at `index` now has a different
    /// exponent, add it into that bucket instead. The destination is not
    /// checked again. Returns the destination when a move happened.
    pub fn relocate(&mut self, index: usize) -> Option<usize> {
        if Self::is_catch_all(index as u32) {
            return None;
        }
        let v = self.slots[index];
        let actual = extract_exponent(v);
        if actual == index as u32 || Self::is_catch_all(actual) {
            return None;
        }
        self.slots[index] = F::ZERO;
        let dest = &mut self.slots[actual as usize];
        *dest = *dest + v;
        let d = *dest;
        self.observe(d);
        Some(actual as usize)
    }

    /// Re-place every misplaced slot through [`insert`](Self::insert)'s
    /// chain. Afterwards every non-catch-all slot is exactly placed.
    pub fn correct_all(&mut self) -> Result<(), SumError> {
        let top = F::FORMAT.max_biased_exponent as usize;
        for index in 1..top {
            let v = self.slots[index];
            if v != F::ZERO && extract_exponent(v) as usize != index {
                self.slots[index] = F::ZERO;
                self.absorb(v)?;
            }
        }
        Ok(())
    }

    /// True when every nonzero slot outside the catch-all buckets sits at its own exponent.
    pub fn is_placed(&self) -> bool {
        let top = F::FORMAT.max_biased_exponent as usize;
        (1..top).all(|i| {
            let v = self.slots[i];
            v == F::ZERO || extract_exponent(v) as usize == i
        })
    }

    /// Sum of all slots, smallest bucket first, with a compensated accumulator.
    pub fn fold(&self) -> F {
        if self.slots.iter().any(|s| !s.is_finite()) {
            return self.slots.iter().fold(F::ZERO, |acc, &s| acc + s);
        }
        let mut sum = F::ZERO;
        let mut comp = F::ZERO;
        for &v in &self.slots {
            if v == F::ZERO {
                continue;
            }
            let (s, e) = two_sum(sum, v);
            sum = s;
            comp = comp + e;
            if !sum.is_finite() {
                return sum;
            }
        }
        sum + comp
    }

    /// Fold `other` into `self`: its slots are inserted through the placing
    /// chain and the histograms are added.
    pub fn merge(mut self, other: &BucketTable<F>) -> Result<BucketTable<F>, SumError> {
        for &v in &other.slots {
            if v != F::ZERO {
                self.absorb(v)?;
            }
        }
        for (a, b) in self.level_histogram.iter_mut().zip(&other.level_histogram) {
            *a += b;
        }
        self.overflow |= other.overflow;
        self.saw_nan |= other.saw_nan;
        Ok(self)
    }

    fn flags(&self) -> SumFlags {
        SumFlags {
            overflow: self.overflow,
            saw_nan: self.saw_nan,
        }
    }
}

/// Error-free sum: `a + b = s + e` exactly.
#[inline]
pub fn two_sum<F: IeeeFloat>(a: F, b: F) -> (F, F) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// A bucket table whose format is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyBucketTable {
    Single(BucketTable<f32>),
    Double(BucketTable<f64>),
}

impl AnyBucketTable {
    pub fn precision(&self) -> Precision {
        match self {
            AnyBucketTable::Single(_) => Precision::Single,
            AnyBucketTable::Double(_) => Precision::Double,
        }
    }

    pub fn fold(&self) -> f64 {
        match self {
            AnyBucketTable::Single(t) => t.fold() as f64,
            AnyBucketTable::Double(t) => t.fold(),
        }
    }

    pub fn merge(self, other: &AnyBucketTable) -> Result<AnyBucketTable, SumError> {
        match (self, other) {
            (AnyBucketTable::Single(a), AnyBucketTable::Single(b)) => {
                a.merge(b).map(AnyBucketTable::Single)
            }
            (AnyBucketTable::Double(a), AnyBucketTable::Double(b)) => {
                a.merge(b).map(AnyBucketTable::Double)
            }
            (a, b) => Err(SumError::FormatMismatch {
                left: a.precision().as_str(),
                right: b.precision().as_str(),
            }),
        }
    }
}

/// Build the exactly placed table for `a` without folding it.
pub fn bucket_table_recursive<F: IeeeFloat>(a: &[F]) -> Result<BucketTable<F>, SumError> {
    let mut table = BucketTable::new();
    for &x in a {
        table.insert(x)?;
    }
    Ok(table)
}

pub fn bucket_sum_recursive<F: IeeeFloat>(a: &[F]) -> Result<SumReport, SumError> {
    let table = bucket_table_recursive(a)?;
    let mut report = SumReport::new(
        Algorithm::BucketRecursive,
        table.fold(),
        a.len(),
        table.flags(),
    );
    report.level_histogram = Some(table.level_histogram);
    Ok(report)
}

/// Bucket summation without the placing chain.
///
/// Each term is added into the slot of its own exponent. With `correct`, one
/// relocation step follows every insertion and a full correction pass runs
/// before the fold.
pub fn bucket_sum_nonrecursive<F: IeeeFloat>(
    a: &[F],
    correct: bool,
) -> Result<SumReport, SumError> {
    let mut table = BucketTable::new();
    for &x in a {
        let index = table.insert_unplaced(x);
        if correct {
            table.relocate(index);
        }
    }
    if correct {
        table.correct_all()?;
    }
    let algorithm = if correct {
        Algorithm::BucketNonrecCorrected
    } else {
        Algorithm::BucketNonrec
    };
    Ok(SumReport::new(
        algorithm,
        table.fold(),
        a.len(),
        table.flags(),
    ))
}

/// How badly cancellation can hurt a sum: `Σ|a_i| / |Σ a_i|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionMeasure {
    pub sum_abs: f64,
    pub abs_sum: f64,
    pub ratio: f64,
}

pub fn condition_measure<F: IeeeFloat>(a: &[F]) -> Result<ConditionMeasure, OracleError> {
    let exact = oracle::accumulate(a)?;
    let mut abs_acc = oracle::Superaccumulator::new();
    for &x in a {
        abs_acc.add(x.abs())?;
    }
    let sum_abs = abs_acc.to_f64();
    let abs_sum = exact.to_f64().abs();
    let ratio = if exact.is_zero() {
        f64::INFINITY
    } else {
        sum_abs / abs_sum
    };
    Ok(ConditionMeasure {
        sum_abs,
        abs_sum,
        ratio,
    })
}
