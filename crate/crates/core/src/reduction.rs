//! Closed forms of odd-weight double zeta values in terms of single zeta
//! values.
//!
//! [`reduce_signed`] is the general signed reduction; [`reduce_euler`],
//! [`reduce_s1`] and [`reduce_even_s_t1`] are the classical special forms,
//! kept separate so they can be cross-checked against the signed one.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{binom_u, Sign};
use crate::expr::{normalize, ZetaAtom, ZetaExpr};

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `(1 + (-1)^s) / 2`.
fn even_indicator(s: u32) -> BigRational {
    int(if s % 2 == 0 { 1 } else { 0 })
}

/// Reduction of `zeta(s, t; sigma, tau)` for odd weight `s + t`.
///
/// Requires `s > (1 + sigma)/2` and `t > (1 + tau)/2`. The case `t = 1`,
/// `tau = +1` (with `s` necessarily even) is accepted as well; the result is
/// then flagged as using `zeta(1;1) = 0`.
pub fn reduce_signed(s: u32, t: u32, sigma: Sign, tau: Sign) -> Result<ZetaExpr> {
    if s == 0 || t == 0 {
        return Err(Error::pre("s and t must be positive"));
    }
    if (s + t) % 2 == 0 {
        return Err(Error::pre(format!("weight s+t = {} must be odd", s + t)));
    }
    if s == 1 && sigma.is_plus() {
        return Err(Error::Divergent("zeta(1, t; +1, tau) diverges".into()));
    }
    let convention = t == 1 && tau.is_plus();

    let st = sigma * tau;
    let weight = s + t;
    let sign_t = BigRational::from_integer(Sign::parity(t as u64).value().into());
    let mut e = ZetaExpr::zero();

    e.push_term(
        even_indicator(s),
        vec![ZetaAtom::new(s, sigma), ZetaAtom::new(t, tau)],
    )?;
    e.push_term(-half(), vec![ZetaAtom::new(weight, st)])?;
    for k in 0..=t / 2 {
        let c = binom_u(weight - 2 * k - 1, s - 1);
        e.push_term(
            &sign_t * c,
            vec![ZetaAtom::new(2 * k, st), ZetaAtom::new(weight - 2 * k, sigma)],
        )?;
    }
    for k in 0..=s / 2 {
        let c = binom_u(weight - 2 * k - 1, t - 1);
        e.push_term(
            &sign_t * c,
            vec![ZetaAtom::new(2 * k, st), ZetaAtom::new(weight - 2 * k, tau)],
        )?;
    }
    if convention {
        e = e.with_zeta_one_convention();
    }
    normalize(&e)
}

/// The classical unsigned reduction for `s, t >= 2` of opposite parity.
///
/// The `k`-sum runs to `floor(max(s, t) / 2)`; terms past the natural range
/// vanish through the binomial convention.
pub fn reduce_euler(s: u32, t: u32) -> Result<ZetaExpr> {
    if s < 2 || t < 2 {
        return Err(Error::pre("reduce_euler needs s, t >= 2 (use reduce_s1 for t = 1)"));
    }
    if (s + t) % 2 == 0 {
        return Err(Error::pre(format!("weight s+t = {} must be odd", s + t)));
    }
    let weight = s + t;
    let sign_s = Sign::parity(s as u64).value() as i64;
    let mut e = ZetaExpr::zero();
    e.push_term(even_indicator(s), vec![ZetaAtom::plain(s), ZetaAtom::plain(t)])?;
    let mid = (int(sign_s) * binom_u(weight, s) - BigRational::one()) * half();
    e.push_term(mid, vec![ZetaAtom::plain(weight)])?;
    for k in 1..=s.max(t) / 2 {
        let c = binom_u(weight - 2 * k - 1, t - 1) + binom_u(weight - 2 * k - 1, s - 1);
        e.push_term(
            int(-sign_s) * c,
            vec![ZetaAtom::plain(2 * k), ZetaAtom::plain(weight - 2 * k)],
        )?;
    }
    normalize(&e)
}

/// `zeta(s, 1) = s/2 zeta(s+1) - 1/2 sum_{k=2}^{s-1} zeta(k) zeta(s+1-k)`,
/// any `s >= 2`.
pub fn reduce_s1(s: u32) -> Result<ZetaExpr> {
    if s < 2 {
        return Err(Error::pre("reduce_s1 needs s >= 2"));
    }
    let mut e = ZetaExpr::zero();
    e.push_term(int(s as i64) * half(), vec![ZetaAtom::plain(s + 1)])?;
    for k in 2..s {
        e.push_term(-half(), vec![ZetaAtom::plain(k), ZetaAtom::plain(s + 1 - k)])?;
    }
    normalize(&e)
}

/// `zeta(s, 1; sigma, 1)` for even `s >= 2`.
pub fn reduce_even_s_t1(s: u32, sigma: Sign) -> Result<ZetaExpr> {
    if s < 2 || s % 2 == 1 {
        return Err(Error::pre(format!("reduce_even_s_t1 needs even s >= 2, got {s}")));
    }
    let mut e = ZetaExpr::zero();
    e.push_term(int(s as i64 - 1) * half(), vec![ZetaAtom::new(s + 1, sigma)])?;
    e.push_term(half(), vec![ZetaAtom::plain(s + 1)])?;
    for k in 1..s / 2 {
        e.push_term(
            int(-1),
            vec![ZetaAtom::new(2 * k, sigma), ZetaAtom::plain(s + 1 - 2 * k)],
        )?;
    }
    normalize(&e)
}

/// Whether `(s, t, sigma, tau)` is inside the domain of [`reduce_signed`].
pub fn in_signed_domain(s: u32, t: u32, sigma: Sign, tau: Sign) -> bool {
    let t_ok = t >= 2 || !tau.is_plus() || s % 2 == 0;
    s >= 1 && t >= 1 && (s + t) % 2 == 1 && !(s == 1 && sigma.is_plus()) && t_ok
}
