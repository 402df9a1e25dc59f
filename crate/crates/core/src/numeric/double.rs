use super::enclosure::Enclosure;
use super::single::integral_tail;
use super::ZETA2_UPPER;
use crate::error::{Error, Result};
use crate::exact::Sign;
use crate::partial_sums::Truncation;
use crate::scalar::{up, Real};

/// Default ceiling on the truncation point of a direct evaluation.
pub const DEFAULT_MAX_TERMS: u64 = 4_000_000_000;

/// First checkpoint of the heuristic `s = 1` path.
const HEURISTIC_START: u64 = 1024;

/// Upper bound on `|zeta(s,t;sigma,tau) - zeta_N(s,t;sigma,tau)|`, valid for
/// every choice of signs.
pub fn double_tail_bound(s: u32, t: u32, n: Truncation) -> Result<f64> {
    if s <= 1 {
        return Err(Error::pre(format!("tail bound needs s >= 2, got s={s}")));
    }
    if t == 0 {
        return Err(Error::pre("t must be positive"));
    }
    let n = n.get() as f64;
    let sm1 = (s - 1) as f64;
    let outer = up(n.powi(1 - s as i32) / sm1);
    if t >= 2 {
        Ok(up(ZETA2_UPPER * outer))
    } else {
        Ok(up((1.0 + (n + 1.0).ln()) * outer + outer / sm1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectOptions {
    pub max_terms: u64,
}

impl Default for DirectOptions {
    fn default() -> Self {
        DirectOptions { max_terms: DEFAULT_MAX_TERMS }
    }
}

/// Result of a direct summation: the enclosure, the truncation used and
/// whether the error bound is proven (`false` only on the `s = 1` path).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectEvaluation<F> {
    pub enclosure: Enclosure<F>,
    pub terms: u64,
    pub rigorous: bool,
}

fn unreachable(tol: f64, reason: impl Into<String>) -> Error {
    Error::Unreachable { tol, reason: reason.into() }
}

/// Bound on every inner partial sum `|sum_{k<n} tau^k / k^t|`, `n <= N+1`.
fn inner_bound(t: u32, tau: Sign, n: u64) -> f64 {
    match (tau, t) {
        (Sign::Minus, _) => 1.0,
        (Sign::Plus, 1) => up(1.0 + (n.max(1) as f64).ln()),
        (Sign::Plus, _) => ZETA2_UPPER,
    }
}

/// Bound on `sum_{n<=N} n^-s`.
fn outer_bound(s: u32, n: u64) -> f64 {
    if s >= 2 {
        ZETA2_UPPER
    } else {
        up(1.0 + (n.max(1) as f64).ln())
    }
}

/// Accumulated rounding of the partial-sum loop below.
fn loop_rounding<F: Real>(s: u32, t: u32, tau: Sign, n: u64) -> f64 {
    let a = inner_bound(t, tau, n);
    let b = outer_bound(s, n);
    let ops = (3 * s + 3 * t + 6) as f64 + 3.0 * n as f64;
    up(1.05 * F::OP_EPS * a * b * ops + n as f64 * (s + t + 6) as f64 * F::ABS_FLOOR)
}

fn inner_rounding<F: Real>(t: u32, tau: Sign, n: u64) -> f64 {
    let a = inner_bound(t, tau, n);
    up(1.02 * F::OP_EPS * a * ((3 * t + 3) as f64 + n as f64) + n as f64 * 4.0 * F::ABS_FLOOR)
}

/// Drift of the inner partial sums past `N`: `|I_m - I_N|` for all `m >= N`.
fn inner_drift(t: u32, tau: Sign, n: u64) -> Option<f64> {
    let n = n as f64;
    match (tau, t) {
        (Sign::Minus, _) => Some(up((n + 1.0).powi(-(t as i32)))),
        (Sign::Plus, 1) => None,
        (Sign::Plus, _) => Some(up(n.powi(1 - t as i32) / (t - 1) as f64)),
    }
}

/// `[lo, hi]` containing `sum_{n>N} (H_{n-1} - H_N) / n^s`.
///
/// `H_{n-1} - H_N` lies between `ln(n/(N+1))` and `ln(n/N)`; each
/// `ln(x/c) x^-s` is unimodal on `[c, inf)` with peak `1/(e s c^s)` and
/// integral `c^(1-s)/(s-1)^2`, and a unimodal sum is within one peak of its
/// integral.
fn harmonic_drift(s: u32, n: u64) -> (f64, f64) {
    let sm1 = (s - 1) as f64;
    let e_lo = std::f64::consts::E * (1.0 - 1e-15);
    let integral = |c: f64| c.powi(1 - s as i32) / (sm1 * sm1);
    let peak = |c: f64| 1.0 / (e_lo * s as f64 * c.powi(s as i32));
    let n = n as f64;
    let lo = (integral(n + 1.0) * (1.0 - 1e-13) - peak(n + 1.0) * (1.0 + 1e-13)).max(0.0);
    let hi = up(up(integral(n)) + up(peak(n)));
    (lo, hi)
}

/// A priori radius of the tail enclosure built by [`tail_enclosure`].
fn tail_prior(s: u32, t: u32, sigma: Sign, tau: Sign, n: u64) -> f64 {
    let a = inner_bound(t, tau, n + 1);
    let nf = n as f64;
    match sigma {
        Sign::Minus => up(a * (nf + 1.0).powi(-(s as i32))),
        Sign::Plus => match inner_drift(t, tau, n) {
            None => {
                let (lo, hi) = harmonic_drift(s, n);
                up(a * nf.powi(-(s as i32)) + (hi - lo) / 2.0)
            }
            Some(d) => {
                let r_hi = up(nf.powi(1 - s as i32) / (s - 1) as f64);
                up(a * nf.powi(-(s as i32)) + r_hi * d)
            }
        },
    }
}

/// Enclosure of `zeta(s,t;sigma,tau) - zeta_N(s,t;sigma,tau)` given the inner
/// partial sum `I_N`.
///
/// For `sigma = -1` the outer series alternates with decreasing terms
/// `|I_{n-1}| / n^s`, so the tail lies between `0` and its first term. For
/// `sigma = +1` the inner sums stay within a computable drift of `I_N`, and the
/// tail is `I_N sum_{n>N} n^-s` up to that drift; for the harmonic inner sum
/// the drift itself is enclosed on both sides.
fn tail_enclosure<F: Real>(s: u32, t: u32, sigma: Sign, tau: Sign, n: u64, inner: Enclosure<F>) -> Enclosure<F> {
    match sigma {
        Sign::Minus => {
            let first = inner * Enclosure::recip_index(n + 1).powu(s);
            let first = if (n + 1) % 2 == 0 { first } else { -first };
            Enclosure::hull(Enclosure::zero(), first)
        }
        Sign::Plus => match inner_drift(t, tau, n) {
            None => {
                let (lo, hi) = harmonic_drift(s, n);
                let mid = (lo + hi) / 2.0;
                let drift = Enclosure::new(<F as Real>::from_f64(mid), up((hi - lo) / 2.0 + 2.0 * F::OP_EPS * hi));
                inner * integral_tail::<F>(s, n) + drift
            }
            Some(d) => {
                let r_hi = up((n as f64).powi(1 - s as i32) / (s - 1) as f64);
                (inner * integral_tail::<F>(s, n)).widen(up(r_hi * d))
            }
        },
    }
}

/// `(zeta_N(s,t;sigma,tau), I_N)` in working precision, where
/// `I_N = sum_{k<=N} tau^k / k^t`.
fn partial_pair<F: Real>(s: u32, t: u32, sigma: Sign, tau: Sign, n: u64) -> (F, F) {
    let mut inner = F::zero();
    let mut total = F::zero();
    for k in 1..=n {
        let r = F::one().quot(F::from_index(k));
        let odd = k % 2 == 1;
        let term = r.powu(s) * inner;
        total = if odd && !sigma.is_plus() { total - term } else { total + term };
        let rt = r.powu(t);
        inner = if odd && !tau.is_plus() { inner - rt } else { inner + rt };
    }
    (total, inner)
}

fn check_args(s: u32, t: u32, sigma: Sign, tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::pre(format!("tolerance must be positive and finite, got {tol}")));
    }
    if s == 0 || t == 0 {
        return Err(Error::pre("s and t must be positive"));
    }
    if s == 1 && sigma.is_plus() {
        return Err(Error::Divergent(format!("zeta(1,{t};+1,tau) diverges")));
    }
    Ok(())
}

/// Direct evaluation of `zeta(s,t;sigma,tau)` to absolute accuracy
/// `target_tol`.
pub fn double_zeta_direct<F: Real>(s: u32, t: u32, sigma: Sign, tau: Sign, target_tol: f64) -> Result<DirectEvaluation<F>> {
    double_zeta_direct_with(s, t, sigma, tau, target_tol, DirectOptions::default())
}

pub fn double_zeta_direct_with<F: Real>(
    s: u32,
    t: u32,
    sigma: Sign,
    tau: Sign,
    target_tol: f64,
    opts: DirectOptions,
) -> Result<DirectEvaluation<F>> {
    check_args(s, t, sigma, target_tol)?;
    if s == 1 {
        return heuristic_s1(t, tau, target_tol, opts);
    }
    let n = choose_truncation(s, t, sigma, tau, target_tol, opts.max_terms)?;
    if loop_rounding::<F>(s, t, tau, n) > target_tol / 4.0 {
        return Err(unreachable(
            target_tol,
            format!("{} rounding over {n} terms exceeds the tolerance", F::NAME),
        ));
    }
    let (total, inner) = partial_pair::<F>(s, t, sigma, tau, n);
    let inner = Enclosure::new(inner, inner_rounding::<F>(t, tau, n));
    let sum = Enclosure::new(total, loop_rounding::<F>(s, t, tau, n));
    let enclosure = sum + tail_enclosure(s, t, sigma, tau, n, inner);
    if enclosure.error_bound() > target_tol {
        return Err(unreachable(
            target_tol,
            format!("bound {:.3e} after {n} terms", enclosure.error_bound()),
        ));
    }
    Ok(DirectEvaluation { enclosure, terms: n, rigorous: true })
}

/// Smallest tolerance [`double_zeta_direct_with`] can meet on the rigorous
/// path without exceeding `max_terms`.
pub fn direct_tolerance_floor<F: Real>(s: u32, t: u32, sigma: Sign, tau: Sign, max_terms: u64) -> Result<f64> {
    if s < 2 {
        return Err(Error::pre("the rigorous direct path needs s >= 2"));
    }
    if t == 0 || max_terms == 0 {
        return Err(Error::pre("t and the term ceiling must be positive"));
    }
    let tail = 2.0 * tail_prior(s, t, sigma, tau, max_terms);
    let rounding = 4.0 * loop_rounding::<F>(s, t, tau, max_terms);
    Ok(up(1.01 * tail.max(rounding)))
}

/// Smallest power-of-two bracketed `N` with `tail_prior(N) <= tol / 2`.
fn choose_truncation(s: u32, t: u32, sigma: Sign, tau: Sign, tol: f64, max_terms: u64) -> Result<u64> {
    let ok = |n: u64| tail_prior(s, t, sigma, tau, n) <= tol / 2.0;
    let mut hi = 1u64;
    while !ok(hi) {
        if hi >= max_terms {
            return Err(unreachable(
                tol,
                format!("truncation would exceed the ceiling of {max_terms} terms"),
            ));
        }
        hi = (hi * 2).min(max_terms);
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(hi);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `s = 1, sigma = -1`: the limit is estimated from averages of consecutive
/// partial sums and the error from the change of that average between
/// neighbouring indices. Not a proven bound.
fn heuristic_s1<F: Real>(t: u32, tau: Sign, tol: f64, opts: DirectOptions) -> Result<DirectEvaluation<F>> {
    let mut inner = F::zero();
    let mut total = F::zero();
    let mut checkpoint = HEURISTIC_START;
    let mut saved: [F; 2] = [F::zero(); 2];
    let two = F::from_index(2);
    for k in 1..=opts.max_terms {
        let r = F::one().quot(F::from_index(k));
        let term = r * inner;
        total = if k % 2 == 1 { total - term } else { total + term };
        let rt = r.powu(t);
        inner = if k % 2 == 1 && !tau.is_plus() { inner - rt } else { inner + rt };

        if k == checkpoint {
            saved[0] = total;
        } else if k == checkpoint + 1 {
            saved[1] = total;
        } else if k == checkpoint + 2 {
            let m0 = (saved[0] + saved[1]).quot(two);
            let m1 = (saved[1] + total).quot(two);
            let estimate = up(2.0 * (m1 - m0).abs().to_f64().abs());
            let bound = up(estimate + loop_rounding::<F>(1, t, tau, k) + 2.0 * F::OP_EPS * m1.abs_f64_up());
            if bound <= tol {
                return Ok(DirectEvaluation { enclosure: Enclosure::new(m1, bound), terms: k, rigorous: false });
            }
            checkpoint *= 2;
        }
    }
    Err(unreachable(tol, format!("heuristic estimate not reached within {} terms", opts.max_terms)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial_sums::{zeta_partial_double, SignedIndex};
    use num_rational::BigRational;
    use num_traits::{Signed, ToPrimitive};
    use twofloat::TwoFloat;

    type Dd = TwoFloat;
    const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

    fn trunc(n: u64) -> Truncation {
        Truncation::new(n).unwrap()
    }

    fn exact_partial(s: u32, t: u32, sg: Sign, tg: Sign, n: u64) -> BigRational {
        zeta_partial_double(SignedIndex::new(s, sg).unwrap(), SignedIndex::new(t, tg).unwrap(), trunc(n))
    }

    // 30-digit reference values.
    fn zeta3() -> BigRational {
        "1202056903159594285399738161511/1000000000000000000000000000000".parse().unwrap()
    }

    #[test]
    fn tail_bound_examples() {
        let b = double_tail_bound(2, 2, trunc(100)).unwrap();
        assert!(b <= 0.016450 && b >= 0.016449);
        let moved = (exact_partial(2, 2, Sign::Plus, Sign::Plus, 200) - exact_partial(2, 2, Sign::Plus, Sign::Plus, 100)).abs();
        assert!(moved.to_f64().unwrap() <= b);
        let b51 = double_tail_bound(5, 1, trunc(10)).unwrap();
        assert!(b51.is_finite() && b51 > 0.0);
        for (s, t) in [(2, 1), (2, 2), (3, 1), (5, 4)] {
            for n in [1, 7, 100, 12345] {
                assert!(double_tail_bound(s, t, trunc(2 * n)).unwrap() < double_tail_bound(s, t, trunc(n)).unwrap());
            }
        }
        assert!(double_tail_bound(1, 2, trunc(10)).is_err());
    }

    #[test]
    fn tail_bound_dominates_movement() {
        for s in 2..=5 {
            for t in 2..=5 {
                for sg in SIGNS {
                    for tg in SIGNS {
                        let n = 10;
                        let moved = (exact_partial(s, t, sg, tg, 4 * n) - exact_partial(s, t, sg, tg, n)).abs();
                        assert!(moved.to_f64().unwrap() <= double_tail_bound(s, t, trunc(n)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn sharpened_tail_encloses_exact_remainder() {
        // The remainder after 40 equals zeta_{2000} - zeta_{40} plus the
        // remainder after 2000, so the two enclosures must meet.
        for (s, t) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 3)] {
            for sg in SIGNS {
                for tg in SIGNS {
                    let (n, m) = (40u64, 2000u64);
                    let enclose = |k: u64| {
                        let inner: Dd =
                            crate::partial_sums::zeta_partial_single(SignedIndex::new(t, tg).unwrap(), trunc(k));
                        tail_enclosure::<Dd>(s, t, sg, tg, k, Enclosure::new(inner, inner_rounding::<Dd>(t, tg, k)))
                    };
                    let tail = enclose(n);
                    let later = enclose(m);
                    let moved = Enclosure::<Dd>::from_rational(&(exact_partial(s, t, sg, tg, m) - exact_partial(s, t, sg, tg, n)));
                    assert!(tail.overlaps(&(moved + later)), "s={s} t={t} {sg} {tg}");
                    assert!(later.error_bound() < tail.error_bound() / 10.0);
                    assert!(tail.error_bound() <= tail_prior(s, t, sg, tg, n));
                }
            }
        }
    }

    #[test]
    fn direct_zeta21_contains_zeta3() {
        let d = double_zeta_direct::<Dd>(2, 1, Sign::Plus, Sign::Plus, 1e-3).unwrap();
        assert!(d.rigorous);
        assert!(d.enclosure.error_bound() <= 1e-3);
        assert!(d.enclosure.contains(&zeta3()));
        for tol in [1e-8, 1e-12] {
            let d = double_zeta_direct::<Dd>(2, 1, Sign::Plus, Sign::Plus, tol).unwrap();
            assert!(d.enclosure.error_bound() <= tol);
            assert!(d.terms < 20_000_000);
            assert!(d.enclosure.contains(&zeta3()));
        }
    }

    #[test]
    fn direct_zeta31_is_quarter_zeta4() {
        let pi4: BigRational = "97409091034002437236440332688705/1000000000000000000000000000000".parse().unwrap();
        let expected = &pi4 / BigRational::from_integer(360.into());
        let d = double_zeta_direct::<Dd>(3, 1, Sign::Plus, Sign::Plus, 1e-11).unwrap();
        assert!(d.enclosure.contains(&expected));
    }

    #[test]
    fn harmonic_drift_brackets_partial_drift() {
        for s in 2..=4u32 {
            for n in [1u64, 5, 40] {
                let (lo, hi) = harmonic_drift(s, n);
                assert!(lo <= hi);
                let mut drift = BigRational::from_integer(0.into());
                let mut acc = BigRational::from_integer(0.into());
                for m in n + 1..=20 * n {
                    acc += &drift / BigRational::from_integer(num_bigint::BigInt::from(m).pow(s));
                    drift += BigRational::new(1.into(), m.into());
                }
                assert!(acc.to_f64().unwrap() <= hi);
            }
        }
    }

    #[test]
    fn direct_zeta22() {
        // (zeta(2)^2 - zeta(4)) / 2 = pi^4 / 120, from 30-digit pi^4.
        let pi4: BigRational = "97409091034002437236440332688705/1000000000000000000000000000000".parse().unwrap();
        let expected = &pi4 * BigRational::new(3.into(), 360.into());
        let d = double_zeta_direct::<Dd>(2, 2, Sign::Plus, Sign::Plus, 1e-4).unwrap();
        assert!(d.enclosure.error_bound() <= 1e-4);
        assert!(d.enclosure.contains(&expected));
        assert!((d.enclosure.value().to_f64() - 0.8117).abs() < 1e-3);
    }

    #[test]
    fn direct_agrees_with_exact_partial_sums() {
        for (s, t) in [(2, 1), (3, 3), (4, 1)] {
            for sg in SIGNS {
                for tg in SIGNS {
                    let (total, inner) = partial_pair::<Dd>(s, t, sg, tg, 300);
                    let exact = exact_partial(s, t, sg, tg, 300);
                    assert!(Enclosure::new(total, loop_rounding::<Dd>(s, t, tg, 300)).contains(&exact));
                    let exact_inner: BigRational =
                        crate::partial_sums::zeta_partial_single(SignedIndex::new(t, tg).unwrap(), trunc(300));
                    assert!(Enclosure::new(inner, inner_rounding::<Dd>(t, tg, 300)).contains(&exact_inner));
                    let (f, _) = partial_pair::<f32>(s, t, sg, tg, 300);
                    assert!(Enclosure::new(f, loop_rounding::<f32>(s, t, tg, 300)).contains(&exact));
                }
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            double_zeta_direct::<Dd>(1, 2, Sign::Plus, Sign::Plus, 1e-3),
            Err(Error::Divergent(_))
        ));
        let tight = DirectOptions { max_terms: 1000 };
        assert!(matches!(
            double_zeta_direct_with::<Dd>(2, 1, Sign::Plus, Sign::Plus, 1e-8, tight),
            Err(Error::Unreachable { .. })
        ));
        assert!(matches!(
            double_zeta_direct::<f32>(2, 3, Sign::Plus, Sign::Plus, 1e-12),
            Err(Error::Unreachable { .. })
        ));
    }

    #[test]
    fn tolerance_floor_is_reachable() {
        let opts = DirectOptions { max_terms: 5000 };
        for (s, t) in [(2, 1), (3, 1), (2, 2)] {
            for sg in SIGNS {
                for tg in SIGNS {
                    let floor = direct_tolerance_floor::<Dd>(s, t, sg, tg, opts.max_terms).unwrap();
                    let d = double_zeta_direct_with::<Dd>(s, t, sg, tg, floor, opts).unwrap();
                    assert!(d.terms <= opts.max_terms && d.enclosure.error_bound() <= floor);
                }
            }
        }
    }

    #[test]
    fn s1_path_is_flagged() {
        // zeta(1,2;-1,+1) = zeta(3)/8 - pi^2/4 ln 2 + ... ; only check it is
        // flagged and stable between tolerances.
        let a = double_zeta_direct::<Dd>(1, 2, Sign::Minus, Sign::Plus, 1e-6).unwrap();
        let b = double_zeta_direct::<Dd>(1, 2, Sign::Minus, Sign::Plus, 1e-9).unwrap();
        assert!(!a.rigorous && !b.rigorous);
        assert!(a.enclosure.overlaps(&b.enclosure));
    }
}
