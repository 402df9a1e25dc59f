//! Exact verifiers for the partial-fraction decomposition and for the finite-N
//! identities behind the signed reduction.
//!
//! Every check evaluates both sides in exact rational arithmetic and compares
//! them for equality; there is no tolerance anywhere in this module. The
//! `*_sides` functions return both sides for diagnostics.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{binom_u, harmonic, Sign};
use crate::partial_sums::{boundary_sum, corner_sum, weighted_double, weighted_single, Truncation};

type Q = BigRational;

/// Seed used for the pseudo-random rational points unless one is given.
pub const DEFAULT_SEED: u64 = 42;

/// Bound on `|p|` and `q` of the pseudo-random points `p/q`.
pub const POINT_MAGNITUDE: i64 = 50;

/// `coefficient / (x^x_power (x+y)^xy_power y^y_power)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFracTerm {
    pub coefficient: BigRational,
    pub x_power: u32,
    pub xy_power: u32,
    pub y_power: u32,
}

impl PartialFracTerm {
    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let pow = |b: &Q, e: u32| num_traits::pow::pow(b.clone(), e as usize);
        let den = pow(x, self.x_power) * pow(&(x + y), self.xy_power) * pow(y, self.y_power);
        &self.coefficient / den
    }
}

/// The `s + t` terms decomposing `1 / (x^s y^t)` over powers of `x`, `x + y`
/// and `y`.
pub fn partial_fraction_terms(s: u32, t: u32) -> Result<Vec<PartialFracTerm>> {
    if s == 0 || t == 0 {
        return Err(Error::pre("partial fractions need s, t >= 1"));
    }
    let left = (0..s).map(|a| PartialFracTerm {
        coefficient: binom_u(a + t - 1, t - 1),
        x_power: s - a,
        xy_power: t + a,
        y_power: 0,
    });
    let right = (0..t).map(|a| PartialFracTerm {
        coefficient: binom_u(a + s - 1, s - 1),
        x_power: 0,
        xy_power: s + a,
        y_power: t - a,
    });
    Ok(left.chain(right).collect())
}

/// Exact check of the decomposition at the point `(x, y)`.
pub fn verify_partial_fraction(s: u32, t: u32, x: &BigRational, y: &BigRational) -> Result<bool> {
    if x.is_zero() || y.is_zero() || (x + y).is_zero() {
        return Err(Error::pre("partial fraction point needs x != 0, y != 0, x + y != 0"));
    }
    let terms = partial_fraction_terms(s, t)?;
    let lhs = Q::one()
        / (num_traits::pow::pow(x.clone(), s as usize) * num_traits::pow::pow(y.clone(), t as usize));
    let rhs: Q = terms.iter().map(|term| term.evaluate(x, y)).sum();
    Ok(lhs == rhs)
}

/// Deterministic rational points `(x, y)` with `x, y, x + y` non-zero and
/// numerators and denominators bounded by [`POINT_MAGNITUDE`].
pub fn seeded_rational_points(seed: u64, count: usize) -> Vec<(BigRational, BigRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let p: i64 = rng.gen_range(-POINT_MAGNITUDE..=POINT_MAGNITUDE);
        let q: i64 = rng.gen_range(1..=POINT_MAGNITUDE);
        if p != 0 {
            return Q::new(p.into(), q.into());
        }
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        if !(&x + &y).is_zero() {
            out.push((x, y));
        }
    }
    out
}

/// Both sides of an identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Sides {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl Sides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Memoized single partial sums at a fixed truncation.
struct Sums {
    n: u64,
    single: HashMap<(u32, Q), Q>,
}

impl Sums {
    fn new(n: Truncation) -> Self {
        Sums { n: n.get(), single: HashMap::new() }
    }

    fn z1(&mut self, s: u32, w: &Q) -> Q {
        let n = self.n;
        self.single
            .entry((s, w.clone()))
            .or_insert_with(|| weighted_single(s, w, n))
            .clone()
    }

    fn z2(&self, s: u32, t: u32, v: &Q, w: &Q) -> Q {
        weighted_double(s, t, v, w, self.n)
    }

    fn corner(&self, a: u32, b: u32, wk: &Q, wm: &Q) -> Q {
        corner_sum(a, b, wk, wm, self.n)
    }

    fn boundary(&self, a: u32, b: u32, wx: &Q, wj: &Q) -> Q {
        boundary_sum(a, b, wx, wj, self.n)
    }
}

fn parity(n: u32) -> Q {
    Sign::parity(n as u64).to_scalar()
}

fn check_st(s: u32, t: u32) -> Result<()> {
    if s == 0 || t == 0 {
        return Err(Error::pre("s and t must be positive"));
    }
    Ok(())
}

fn check_weights(sigma: &Q, tau: &Q) -> Result<()> {
    if sigma.is_zero() || tau.is_zero() {
        return Err(Error::pre("weights must be non-zero"));
    }
    Ok(())
}

/// `(-1)^t zeta_N(s,t;sigma,tau) + (-1)^s zeta_N(t,s;tau,sigma)` against its
/// expansion through the partial-fraction decomposition. Holds for arbitrary
/// non-zero rational weights.
pub fn symmetric_sides(s: u32, t: u32, sigma: &Q, tau: &Q, n: Truncation) -> Result<Sides> {
    check_st(s, t)?;
    check_weights(sigma, tau)?;
    let mut z = Sums::new(n);
    let st = sigma * tau;
    let inv_sigma = sigma.recip();
    let inv_tau = tau.recip();

    let lhs = parity(t) * z.z2(s, t, sigma, tau) + parity(s) * z.z2(t, s, tau, sigma);

    let mut rhs = Q::zero();
    for a in 0..s {
        let c = binom_u(a + t - 1, t - 1);
        rhs += &c * z.z1(s - a, &st) * z.z1(t + a, &inv_tau);
        rhs -= &c * z.z2(t + a, s - a, &inv_tau, &st);
        rhs += parity(s) * parity(a) * &c * z.corner(t + a, s - a, tau, &st);
    }
    for a in 0..t {
        let c = binom_u(a + s - 1, s - 1);
        rhs += &c * z.z1(t - a, &st) * z.z1(s + a, &inv_sigma);
        rhs -= &c * z.z2(s + a, t - a, &inv_sigma, &st);
        rhs += parity(t) * parity(a) * &c * z.corner(s + a, t - a, sigma, &st);
    }
    rhs -= binom_u(s + t - 1, s - 1) * z.z1(s + t, sigma);
    rhs -= binom_u(s + t - 1, t - 1) * z.z1(s + t, tau);
    Ok(Sides { lhs, rhs })
}

pub fn check_symmetric_identity(s: u32, t: u32, sigma: &Q, tau: &Q, n: Truncation) -> Result<bool> {
    Ok(symmetric_sides(s, t, sigma, tau, n)?.holds())
}

/// The finite shuffle-product relation: the binomially weighted double sums
/// against `zeta_N(s;1/sigma) zeta_N(t;1/tau)` minus the boundary triangles
/// `N < n <= 2N`. Holds for arbitrary non-zero rational weights.
pub fn shuffle_sides(s: u32, t: u32, sigma: &Q, tau: &Q, n: Truncation) -> Result<Sides> {
    check_st(s, t)?;
    check_weights(sigma, tau)?;
    let mut z = Sums::new(n);
    let inv_sigma = sigma.recip();
    let inv_tau = tau.recip();
    let tau_over_sigma = tau / sigma;
    let sigma_over_tau = sigma / tau;

    let mut lhs = Q::zero();
    let mut rhs = z.z1(s, &inv_sigma) * z.z1(t, &inv_tau);
    for a in 0..s {
        let c = binom_u(a + t - 1, t - 1);
        lhs += &c * z.z2(t + a, s - a, &inv_tau, &tau_over_sigma);
        rhs -= &c * z.boundary(s - a, t + a, &tau_over_sigma, &inv_tau);
    }
    for a in 0..t {
        let c = binom_u(a + s - 1, s - 1);
        lhs += &c * z.z2(s + a, t - a, &inv_sigma, &sigma_over_tau);
        rhs -= &c * z.boundary(t - a, s + a, &sigma_over_tau, &inv_sigma);
    }
    Ok(Sides { lhs, rhs })
}

pub fn check_shuffle_identity(s: u32, t: u32, sigma: &Q, tau: &Q, n: Truncation) -> Result<bool> {
    Ok(shuffle_sides(s, t, sigma, tau, n)?.holds())
}

/// Symmetric relation with the shuffle relation substituted in, for signs
/// in {-1, +1}. Not independent mathematics: it follows from
/// [`symmetric_sides`] and [`shuffle_sides`], and is checked to confirm the
/// composition.
pub fn stillsymmetric_sides(s: u32, t: u32, sigma: Sign, tau: Sign, n: Truncation) -> Result<Sides> {
    check_st(s, t)?;
    let mut z = Sums::new(n);
    let sg: Q = sigma.to_scalar();
    let tg: Q = tau.to_scalar();
    let st = &sg * &tg;

    let lhs = parity(t) * z.z2(s, t, &sg, &tg) + parity(s) * z.z2(t, s, &tg, &sg);

    let mut rhs = -(z.z1(s, &sg) * z.z1(t, &tg));
    rhs -= binom_u(s + t - 1, s - 1) * z.z1(s + t, &sg);
    rhs -= binom_u(s + t - 1, t - 1) * z.z1(s + t, &tg);
    for a in 0..s {
        let c = binom_u(a + t - 1, t - 1);
        rhs += &c * z.z1(s - a, &st) * z.z1(t + a, &tg);
        rhs += parity(s) * parity(a) * &c * z.corner(t + a, s - a, &tg, &st);
        rhs += &c * z.boundary(s - a, t + a, &st, &tg);
    }
    for a in 0..t {
        let c = binom_u(a + s - 1, s - 1);
        rhs += &c * z.z1(t - a, &st) * z.z1(s + a, &sg);
        rhs += parity(t) * parity(a) * &c * z.corner(s + a, t - a, &sg, &st);
        rhs += &c * z.boundary(t - a, s + a, &st, &sg);
    }
    Ok(Sides { lhs, rhs })
}

pub fn check_stillsymmetric_identity(s: u32, t: u32, sigma: Sign, tau: Sign, n: Truncation) -> Result<bool> {
    Ok(stillsymmetric_sides(s, t, sigma, tau, n)?.holds())
}

/// `2 zeta_N(s,t;sigma,tau)` against its finite expansion for odd `s + t`,
/// every remainder and boundary sum included.
pub fn finite_sides(s: u32, t: u32, sigma: Sign, tau: Sign, n: Truncation) -> Result<Sides> {
    check_st(s, t)?;
    if (s + t) % 2 == 0 {
        return Err(Error::pre(format!("weight s+t = {} must be odd", s + t)));
    }
    let mut z = Sums::new(n);
    let sg: Q = sigma.to_scalar();
    let tg: Q = tau.to_scalar();
    let st = &sg * &tg;
    let w = s + t;
    let sign_t = parity(t);

    let lhs = Q::from_integer(2.into()) * z.z2(s, t, &sg, &tg);

    let mut rhs = (Q::one() + parity(s)) * z.z1(s, &sg) * z.z1(t, &tg) - z.z1(w, &st);
    for b in 1..=s {
        let bracket = z.z1(b, &st) * z.z1(w - b, &tg)
            + parity(b) * z.corner(w - b, b, &tg, &st)
            + z.boundary(b, w - b, &st, &tg);
        rhs += &sign_t * binom_u(w - b - 1, t - 1) * bracket;
    }
    for b in 1..=t {
        rhs += &sign_t * binom_u(w - b - 1, s - 1) * outer_bracket(&mut z, s, t, b, &sg, &tg);
    }
    rhs -= &sign_t * binom_u(w - 1, s - 1) * z.z1(w, &sg);
    rhs -= &sign_t * binom_u(w - 1, t - 1) * z.z1(w, &tg);
    Ok(Sides { lhs, rhs })
}

/// `zeta_N(b;sigma tau) zeta_N(s+t-b;sigma)` plus its remainder corner and
/// boundary triangle; the quantity whose size the tail witness controls.
fn outer_bracket(z: &mut Sums, s: u32, t: u32, b: u32, sg: &Q, tg: &Q) -> Q {
    let st = sg * tg;
    let w = s + t;
    z.z1(b, &st) * z.z1(w - b, sg) + parity(b) * z.corner(w - b, b, sg, &st) + z.boundary(b, w - b, &st, sg)
}

pub fn check_finite_identity(s: u32, t: u32, sigma: Sign, tau: Sign, n: Truncation) -> Result<bool> {
    Ok(finite_sides(s, t, sigma, tau, n)?.holds())
}

/// `(|bracket_N|, 3 H_N / N)` for odd `b <= t`, where `bracket_N` is the
/// `b`-th bracket of the finite expansion that vanishes as `N` grows. The
/// first component never exceeds the second.
pub fn tail_witness_b_odd(
    s: u32,
    t: u32,
    sigma: Sign,
    tau: Sign,
    b: u32,
    n: Truncation,
) -> Result<(BigRational, BigRational)> {
    check_st(s, t)?;
    if (s + t) % 2 == 0 {
        return Err(Error::pre(format!("weight s+t = {} must be odd", s + t)));
    }
    if b == 0 || b > t || b % 2 == 0 {
        return Err(Error::pre(format!("b must be odd with 1 <= b <= t, got b={b}, t={t}")));
    }
    let mut z = Sums::new(n);
    let bracket = outer_bracket(&mut z, s, t, b, &sigma.to_scalar(), &tau.to_scalar());
    let bound = Q::from_integer(3.into()) * harmonic(n.get()) / Q::from_integer(n.get().into());
    Ok((bracket.abs(), bound))
}
