//! Finite partial sums of single and double signed zeta series.
//!
//! `zeta_N(s; w) = sum_{n<=N} w^n / n^s` and
//! `zeta_N(s, t; v, w) = sum_{n<=N} sum_{k<n} v^n w^k / (n^s k^t)`.
//!
//! Everything here is generic over [`Scalar`]; instantiate with
//! `BigRational` for exact values. The weighted variants accept arbitrary
//! weights (the finite identities need `1/sigma`, `tau/sigma` and friends);
//! the [`SignedIndex`] variants restrict to the signs {-1, +1}.

use crate::error::{Error, Result};
use crate::exact::Sign;
use crate::scalar::Scalar;

/// An exponent together with its sign, e.g. `(s; sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedIndex {
    exponent: u32,
    sign: Sign,
}

impl SignedIndex {
    pub fn new(exponent: u32, sign: Sign) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::pre("exponent must be >= 1"));
        }
        Ok(SignedIndex { exponent, sign })
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn sign(self) -> Sign {
        self.sign
    }
}

/// Truncation point `N >= 1` of a partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Truncation(u64);

impl Truncation {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::pre("truncation N must be >= 1"));
        }
        Ok(Truncation(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// `1 / n^s`.
pub(crate) fn inv_pow<T: Scalar>(n: u64, s: u32) -> T {
    T::one() / num_traits::pow::pow(T::from_index(n), s as usize)
}

/// Terms `w^n / n^s` for `n = from..=to`, with `w^n` built incrementally.
fn weighted_terms<T: Scalar>(s: u32, w: &T, from: u64, to: u64) -> impl Iterator<Item = T> + '_ {
    let mut power = num_traits::pow::pow(w.clone(), from.saturating_sub(1) as usize);
    (from..=to).map(move |n| {
        power = power.clone() * w.clone();
        power.clone() * inv_pow::<T>(n, s)
    })
}

/// Prefix sums `[0, zeta_1(s;w), ..., zeta_n(s;w)]`.
pub fn weighted_prefix<T: Scalar>(s: u32, w: &T, n: u64) -> Vec<T> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = T::zero();
    out.push(acc.clone());
    for term in weighted_terms(s, w, 1, n) {
        acc = acc + term;
        out.push(acc.clone());
    }
    out
}

/// `sum_{k=1}^{n} w^k / k^s`.
pub fn weighted_single<T: Scalar>(s: u32, w: &T, n: u64) -> T {
    weighted_terms(s, w, 1, n).fold(T::zero(), |acc, x| acc + x)
}

/// `sum_{m=1}^{n} sum_{k=1}^{m-1} v^m w^k / (m^s k^t)` in one pass, reusing
/// the inner prefix sum.
pub fn weighted_double<T: Scalar>(s: u32, t: u32, v: &T, w: &T, n: u64) -> T {
    let mut inner = T::zero();
    let mut total = T::zero();
    for (outer, inner_term) in weighted_terms(s, v, 1, n).zip(weighted_terms(t, w, 1, n)) {
        total = total + outer * inner.clone();
        inner = inner + inner_term;
    }
    total
}

/// `sum_{k>=1, m>=1, k+m<=n} wk^k wm^m / (k^a m^b)`.
pub fn corner_sum<T: Scalar>(a: u32, b: u32, wk: &T, wm: &T, n: u64) -> T {
    if n < 2 {
        return T::zero();
    }
    let prefix = weighted_prefix(b, wm, n - 1);
    weighted_terms(a, wk, 1, n - 1)
        .zip(1..n)
        .fold(T::zero(), |acc, (term, k)| acc + term * prefix[(n - k) as usize].clone())
}

/// `sum_{j=n+1}^{2n} wj^j / j^b * sum_{x=j-n}^{n} wx^x / x^a`.
pub fn boundary_sum<T: Scalar>(a: u32, b: u32, wx: &T, wj: &T, n: u64) -> T {
    let prefix = weighted_prefix(a, wx, n);
    weighted_terms(b, wj, n + 1, 2 * n)
        .zip(n + 1..=2 * n)
        .fold(T::zero(), |acc, (term, j)| {
            let inner = prefix[n as usize].clone() - prefix[(j - n - 1) as usize].clone();
            acc + term * inner
        })
}

/// `zeta_N(s; sigma)`.
pub fn zeta_partial_single<T: Scalar>(idx: SignedIndex, n: Truncation) -> T {
    weighted_single(idx.exponent, &idx.sign.to_scalar(), n.get())
}

/// `zeta_N(s, t; sigma, tau)`; zero when `N = 1`.
pub fn zeta_partial_double<T: Scalar>(outer: SignedIndex, inner: SignedIndex, n: Truncation) -> T {
    weighted_double(
        outer.exponent,
        inner.exponent,
        &outer.sign.to_scalar(),
        &inner.sign.to_scalar(),
        n.get(),
    )
}

/// The three lattice regions of `zeta_N(s;sigma) * zeta_N(t;tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StuffleParts<T> {
    /// `zeta_N(s, t; sigma, tau)`, the region `n > k`.
    pub double: T,
    /// `zeta_N(s + t; sigma tau)`, the diagonal.
    pub diagonal: T,
    /// `zeta_N(t, s; tau, sigma)`, the region `n < k`.
    pub reflected: T,
}

impl<T: Scalar> StuffleParts<T> {
    pub fn sum(&self) -> T {
        self.double.clone() + self.diagonal.clone() + self.reflected.clone()
    }
}

pub fn stuffle_decompose<T: Scalar>(
    outer: SignedIndex,
    inner: SignedIndex,
    n: Truncation,
) -> StuffleParts<T> {
    let diagonal_idx = SignedIndex {
        exponent: outer.exponent + inner.exponent,
        sign: outer.sign * inner.sign,
    };
    StuffleParts {
        double: zeta_partial_double(outer, inner, n),
        diagonal: zeta_partial_single(diagonal_idx, n),
        reflected: zeta_partial_double(inner, outer, n),
    }
}
