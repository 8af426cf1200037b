//! Exact comparisons of `f64` values through their rational expansions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// The exact rational value of a finite `f64`.
pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(|| panic!("non-finite value {x}"))
}

pub fn abs_diff(a: f64, b: f64) -> BigRational {
    (rational(a) - rational(b)).abs()
}

/// `|a − b| ≤ bound`, decided exactly.
pub fn abs_diff_le(a: f64, b: f64, bound: f64) -> bool {
    abs_diff(a, b) <= rational(bound)
}

pub fn half(x: f64) -> BigRational {
    rational(x) / BigRational::from_integer(BigInt::from(2))
}

pub fn clamp_unit(q: BigRational) -> BigRational {
    let one = BigRational::from_integer(BigInt::from(1));
    if q.is_negative() {
        BigRational::zero()
    } else if q > one {
        one
    } else {
        q
    }
}
