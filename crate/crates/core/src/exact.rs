//! Exact integer and rational primitives.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sign in {-1, +1}.
///
/// Ordered with `Minus` first, which fixes the canonical atom order of
/// reduced expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::pre(format!("sign must be +1 or -1, got {v}"))),
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    /// `self^n`.
    pub fn pow(self, n: u64) -> Sign {
        if self.is_plus() || n % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `(-1)^n`.
    pub fn parity(n: u64) -> Sign {
        Sign::Minus.pow(n)
    }

    pub fn to_scalar<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    /// Accepts `+1`, `1`, `+`, `p`, `plus` and `-1`, `-`, `m`, `minus`.
    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+1" | "1" | "+" | "p" | "P" | "plus" => Ok(Sign::Plus),
            "-1" | "-" | "m" | "M" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("not a sign: {other:?}"))),
        }
    }
}

/// Binomial coefficient `C(n, r)`, zero outside `0 <= r <= n`.
pub fn binom(n: i64, r: i64) -> Result<BigRational> {
    Ok(BigRational::from_integer(binom_int(n, r)?))
}

pub(crate) fn binom_int(n: i64, r: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::pre(format!("binomial upper index must be >= 0, got {n}")));
    }
    if r < 0 || r > n {
        return Ok(BigInt::zero());
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

/// `C(n, r)` for indices that are non-negative by construction.
pub(crate) fn binom_u(n: u32, r: u32) -> BigRational {
    binom(n as i64, r as i64).expect("non-negative upper index")
}

/// Harmonic number `H_n = 1 + 1/2 + ... + 1/n`; `H_0 = 0`.
pub fn harmonic(n: u64) -> BigRational {
    // Sum over a common denominator; one reduction at the end.
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for k in 1..=n {
        let k = BigInt::from(k);
        num = num * &k + &den;
        den *= k;
    }
    BigRational::new(num, den)
}

fn bernoulli_cache() -> &'static Mutex<HashMap<u32, BigRational>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
///
/// Computed with the Akiyama–Tanigawa transform and memoized.
pub fn bernoulli(n: u32) -> BigRational {
    if n == 1 {
        return BigRational::new((-1).into(), 2.into());
    }
    if n > 1 && n % 2 == 1 {
        return BigRational::zero();
    }
    if let Some(b) = bernoulli_cache().lock().unwrap().get(&n) {
        return b.clone();
    }
    let mut a: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n as usize {
        a.push(BigRational::new(1.into(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
    }
    let b = a.swap_remove(0);
    bernoulli_cache().lock().unwrap().insert(n, b.clone());
    b
}
