//! Exact integer helpers, fixed-point reals with error bounds, logarithms,
//! continued fractions and the indicator DFT used by the Fourier sampler.

mod arith;
mod cf;
mod dft;
mod fixreal;
mod ln;

pub use arith::{
    cmp_with_sqrt, exact_sqrt, ext_gcd, ext_gcd3, is_perfect_square, isqrt, round_ratio, tau,
    tau_with_root, ExtGcd, ExtGcd3,
};
pub use cf::{cf_convergents, CfExpansion};
pub use dft::{dft_indicator, direct_indicator_distribution};
pub use fixreal::{rational_to_decimal, FixReal};
pub use ln::{ln_fix, ln_rational, LN2_TABLE_BITS};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Rational numbers are always kept in lowest terms with a positive denominator.
pub type BigRat = BigRational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("modulus parameter a must be nonzero")]
    ZeroModulus,
    #[error("{0} is a perfect square, expected a non-square discriminant")]
    SquareDiscriminant(BigInt),
    #[error("extended gcd of (0, 0) is undefined")]
    BothZero,
    #[error("logarithm of a non-positive value")]
    NonPositiveLog,
    #[error("sign of the argument is not resolved at the current precision")]
    UnresolvedSign,
    #[error("continued fraction with zero denominator")]
    ZeroDenominator,
    #[error("empty position set")]
    EmptyPositions,
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("position {pos} outside [0, {q})")]
    PositionOutOfRange { pos: usize, q: usize },
    #[error("duplicate position {0}")]
    DuplicatePosition(usize),
    #[error("probability mass {0} deviates from 1 by more than 1e-12")]
    Normalization(f64),
}

/// Working precision in bits for `digits` decimal digits over `step_count`
/// accumulated operations: ⌈n·log₂10⌉ + ⌈log₂ steps⌉ + 32.
pub fn precision_for_digits(digits: u32, step_count: u64) -> u32 {
    let digit_bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32;
    let step_bits = 64 - step_count.max(1).saturating_sub(1).leading_zeros();
    digit_bits + step_bits + 32
}
