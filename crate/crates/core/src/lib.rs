//! Floating-point summation toolkit.
//!
//! * [`fpbits`]: exponent extraction/rewrite and exact scaling by powers of two.
//! * [`accumulators`]: naive, compensated and exponent-bucket summation.
//! * [`signsum`]: exact sign of a sum and a fast bucket-based estimate.
//! * [`oracle`]: an exact superaccumulator used as ground truth.
//! * [`generators`]: test series, Rump's polynomial and ill-conditioned sets.
//! * [`harness`]: the experiment runner behind the `rsum` binary.
//!
//! ```
//! use rsum::accumulators::{bucket_sum_recursive, naive_sum};
//!
//! let terms: Vec<f32> = vec![1e-3; 1000];
//! assert_eq!(naive_sum(&terms).sum, 0.999990701675415);
//! let bucket = bucket_sum_recursive(&terms).unwrap();
//! assert!((bucket.sum - 1.0).abs() < (naive_sum(&terms).sum - 1.0).abs());
//! ```

pub mod accumulators;
pub mod error;
pub mod fpbits;
pub mod generators;
pub mod harness;
pub mod oracle;
pub mod signsum;

pub use accumulators::{
    bucket_sum_nonrecursive, bucket_sum_recursive, compensated_sum, condition_measure, naive_sum,
    Algorithm, BucketTable, SumReport,
};
pub use fpbits::{FormatSpec, IeeeFloat, Precision};
pub use oracle::{exact_sign, exact_sum, relative_error, Superaccumulator};
pub use signsum::{essa_sign, hash_sign, SignResult};
