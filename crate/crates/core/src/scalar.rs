//! Scalar abstractions.
//!
//! [`Scalar`] is the field-like bound used by the finite partial sums, so the
//! same code runs over exact rationals and over floats. [`Real`] adds what the
//! rigorous numeric layer needs from a binary float: a per-operation error
//! bound and exact conversion to a rational.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};
use twofloat::TwoFloat;

/// Anything with field operations that can be built from small integers.
pub trait Scalar: Num + Clone + Neg<Output = Self> + FromPrimitive + Debug {
    fn from_index(n: u64) -> Self {
        Self::from_u64(n).expect("index representable in scalar")
    }
}

impl<T> Scalar for T where T: Num + Clone + Neg<Output = Self> + FromPrimitive + Debug {}

/// A binary floating-point type usable for enclosures.
///
/// `OP_EPS` bounds the relative error of a single `+ - * /` on two values of
/// this type (the result `r` of an op with exact value `x` satisfies
/// `|r - x| <= OP_EPS * |x| + ABS_FLOOR`).
pub trait Real: Scalar + Copy + PartialOrd + Send + Sync + 'static {
    const OP_EPS: f64;
    const ABS_FLOOR: f64;
    const NAME: &'static str;

    /// Rounds an `f64` into this type (exact unless the type is narrower).
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;

    /// Exact rational value of this float.
    fn to_rational(self) -> BigRational;

    /// Converts an integer, returning the value and a relative error bound.
    fn from_bigint(n: &BigInt) -> (Self, f64);

    /// Division meeting the `OP_EPS` bound.
    fn quot(self, rhs: Self) -> Self {
        self / rhs
    }

    fn powu(self, e: u32) -> Self {
        num_traits::pow::pow(self, e as usize)
    }

    /// `|x|` as an `f64`, rounded up.
    fn abs_f64_up(self) -> f64 {
        up(self.to_f64().abs())
    }
}

/// Inflates a non-negative `f64` computed with a handful of roundings so the
/// result is an upper bound of the exact quantity.
#[inline]
pub fn up(x: f64) -> f64 {
    debug_assert!(x >= 0.0 || x.is_nan());
    x * (1.0 + 1.0e-14) + f64::MIN_POSITIVE
}

fn f64_to_rational(x: f64) -> BigRational {
    if x == 0.0 {
        return BigRational::zero();
    }
    BigRational::from_float(x).expect("finite float")
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

impl Real for f64 {
    const OP_EPS: f64 = 1.1102230246251565e-16; // 2^-53
    const ABS_FLOOR: f64 = 4.9406564584124654e-324;
    const NAME: &'static str = "f64";

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn to_rational(self) -> BigRational {
        f64_to_rational(self)
    }
    fn from_bigint(n: &BigInt) -> (Self, f64) {
        (bigint_to_f64(n), 2.0 * Self::OP_EPS)
    }
}

impl Real for f32 {
    const OP_EPS: f64 = 5.960464477539063e-8; // 2^-24
    const ABS_FLOOR: f64 = 1.401298464324817e-45;
    const NAME: &'static str = "f32";

    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn abs(self) -> Self {
        f32::abs(self)
    }
    fn to_rational(self) -> BigRational {
        f64_to_rational(self as f64)
    }
    fn from_bigint(n: &BigInt) -> (Self, f64) {
        (bigint_to_f64(n) as f32, 2.0 * Self::OP_EPS)
    }
}

impl Real for TwoFloat {
    // Published double-word bounds are at most 10 u^2 with u = 2^-53.
    const OP_EPS: f64 = 3.944304526105059e-31; // 2^-101
    const ABS_FLOOR: f64 = 1.0e-300;
    const NAME: &'static str = "double-double";

    fn from_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }
    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }
    fn abs(self) -> Self {
        TwoFloat::abs(&self)
    }
    // The crate's own division is only accurate to about 2^-53; one
    // correction step restores double-word accuracy.
    fn quot(self, rhs: Self) -> Self {
        let q = self / rhs;
        let r = self - q * rhs;
        let q = q + TwoFloat::from(r.hi() / rhs.hi());
        let r = self - q * rhs;
        q + TwoFloat::from(r.hi() / rhs.hi())
    }
    fn to_rational(self) -> BigRational {
        f64_to_rational(self.hi()) + f64_to_rational(self.lo())
    }
    fn from_bigint(n: &BigInt) -> (Self, f64) {
        let hi = bigint_to_f64(n);
        if !hi.is_finite() {
            return (TwoFloat::from(hi), f64::INFINITY);
        }
        let rest = n - BigInt::from_f64(hi).expect("finite");
        let lo = bigint_to_f64(&rest);
        (TwoFloat::new_add(hi, lo), 4.0 * Self::OP_EPS)
    }
}
