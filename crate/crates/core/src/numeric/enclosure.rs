use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::scalar::{up, Real};

/// A float `value` with an absolute `error_bound`: the true quantity lies in
/// `[value - error_bound, value + error_bound]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure<F> {
    value: F,
    error_bound: f64,
}

fn rounding<F: Real>(r: F) -> f64 {
    F::OP_EPS * (1.0 + 2.0 * F::OP_EPS) * r.abs_f64_up() + F::ABS_FLOOR
}

fn rational_to_f64_up(q: &BigRational) -> f64 {
    let x = q.abs().to_f64().unwrap_or(f64::INFINITY);
    up(x)
}

/// Keeps the top 128 bits of `n`: `n ~ kept * 2^shift` with the given
/// relative error.
fn truncate_bits(n: &BigInt) -> (BigInt, i64, f64) {
    let bits = n.bits() as i64;
    if bits <= 128 {
        return (n.clone(), 0, 0.0);
    }
    let shift = bits - 128;
    (n >> (shift as usize), shift, 2f64.powi(-126))
}

impl<F: Real> Enclosure<F> {
    pub fn new(value: F, error_bound: f64) -> Self {
        assert!(error_bound >= 0.0, "negative error bound");
        Enclosure { value, error_bound }
    }

    pub fn exact(value: F) -> Self {
        Enclosure::new(value, 0.0)
    }

    pub fn zero() -> Self {
        Enclosure::exact(F::zero())
    }

    pub fn value(&self) -> F {
        self.value
    }

    pub fn error_bound(&self) -> f64 {
        self.error_bound
    }

    /// Rounds an exact rational into `F`.
    pub fn from_rational(q: &BigRational) -> Self {
        if q.is_zero() {
            return Enclosure::zero();
        }
        let (num, num_shift, num_rel) = truncate_bits(q.numer());
        let (den, den_shift, den_rel) = truncate_bits(q.denom());
        let (n, rn) = F::from_bigint(&num);
        let (d, rd) = F::from_bigint(&den);
        let (rn, rd) = (rn + num_rel, rd + den_rel);
        let scale = num_shift - den_shift;
        assert!(scale.abs() < 1000, "rational outside float range");
        let v = n.quot(d) * <F as Real>::from_f64(2f64.powi(scale as i32));
        let rel = (rn + rd + 2.0 * F::OP_EPS) * (1.0 + 4.0 * F::OP_EPS.max(rn).max(rd));
        Enclosure::new(v, up(v.abs_f64_up() * rel) + F::ABS_FLOOR)
    }

    /// `1/n`.
    pub fn recip_index(n: u64) -> Self {
        let v = F::one().quot(F::from_index(n));
        Enclosure::new(v, up(v.abs_f64_up() * 2.0 * F::OP_EPS * (1.0 + 4.0 * F::OP_EPS)) + F::ABS_FLOOR)
    }

    pub fn powu(self, e: u32) -> Self {
        let mut acc = Enclosure::exact(F::one());
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    pub fn scale(self, q: &BigRational) -> Self {
        Enclosure::from_rational(q) * self
    }

    pub fn abs_upper(&self) -> f64 {
        up(self.value.abs_f64_up() + self.error_bound)
    }

    /// Adds `extra` to the error bound.
    pub fn widen(self, extra: f64) -> Self {
        assert!(extra >= 0.0);
        Enclosure::new(self.value, up(self.error_bound + extra))
    }

    /// Exact endpoints.
    pub fn interval(&self) -> (BigRational, BigRational) {
        let v = self.value.to_rational();
        let e = if self.error_bound == 0.0 {
            BigRational::zero()
        } else {
            BigRational::from_float(self.error_bound).expect("finite bound")
        };
        (&v - &e, v + e)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        let (lo, hi) = self.interval();
        &lo <= q && q <= &hi
    }

    pub fn overlaps<G: Real>(&self, other: &Enclosure<G>) -> bool {
        let (a, b) = self.interval();
        let (c, d) = other.interval();
        a <= d && c <= b
    }

    /// The smallest enclosure (up to rounding) containing both arguments.
    pub fn hull(a: Self, b: Self) -> Self {
        let (alo, ahi) = a.interval();
        let (blo, bhi) = b.interval();
        let lo = alo.min(blo);
        let hi = ahi.max(bhi);
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        let centre = Enclosure::<F>::from_rational(&mid);
        let c = centre.value.to_rational();
        let radius = (&hi - &c).max(&c - &lo);
        Enclosure::new(centre.value, rational_to_f64_up(&radius))
    }

    pub fn convert<G: Real>(self) -> Enclosure<G> {
        let v = Enclosure::<G>::from_rational(&self.value.to_rational());
        v.widen(self.error_bound)
    }
}

impl<F: Real> Add for Enclosure<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let r = self.value + o.value;
        Enclosure::new(r, up(self.error_bound + o.error_bound + rounding(r)))
    }
}

impl<F: Real> Sub for Enclosure<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Real> Neg for Enclosure<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Enclosure::new(-self.value, self.error_bound)
    }
}

impl<F: Real> Mul for Enclosure<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let r = self.value * o.value;
        let (ea, eb) = (self.error_bound, o.error_bound);
        let prop = self.value.abs_f64_up() * eb + o.value.abs_f64_up() * ea + ea * eb;
        Enclosure::new(r, up(prop + rounding(r)))
    }
}

impl<F: Real> fmt::Display for Enclosure<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} +/- {:.3e}", self.value.to_f64(), self.error_bound)
    }
}
