use num_rational::BigRational;
use num_traits::One;

use super::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::exact::{bernoulli, Sign};
use crate::expr::ZetaAtom;
use crate::scalar::{up, Real};

/// How `zeta(s)` for `s >= 2` is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingleMethod {
    /// Partial sum plus a two-sided integral tail.
    Direct,
    /// Euler–Maclaurin with an explicit remainder bound.
    EulerMaclaurin,
    /// `Direct` while it needs at most [`AUTO_DIRECT_TERMS`] terms, otherwise
    /// Euler–Maclaurin.
    #[default]
    Auto,
}

/// Largest partial sum `Auto` will use before switching to Euler–Maclaurin.
pub const AUTO_DIRECT_TERMS: u64 = 2_000_000;

/// Hard limit on terms for an explicit `Direct` request.
pub const DIRECT_TERM_LIMIT: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SingleOptions {
    /// Evaluate `zeta(1;+1)` as `0` instead of reporting divergence.
    pub zeta_one_convention: bool,
    pub method: SingleMethod,
}

fn unreachable(tol: f64, reason: impl Into<String>) -> Error {
    Error::Unreachable { tol, reason: reason.into() }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::pre(format!("tolerance must be positive and finite, got {tol}")));
    }
    Ok(())
}

/// `zeta(s; sigma)` with `|error| <= target_tol`.
pub fn zeta_single_value<F: Real>(atom: ZetaAtom, target_tol: f64, opts: SingleOptions) -> Result<Enclosure<F>> {
    check_tol(target_tol)?;
    let s = atom.arg();
    match (s, atom.sign()) {
        (0, _) => Ok(Enclosure::exact(<F as Real>::from_f64(-0.5))),
        (1, Sign::Plus) if opts.zeta_one_convention => Ok(Enclosure::zero()),
        (1, Sign::Plus) => Err(Error::Divergent("zeta(1) diverges; request the zeta(1;1)=0 convention".into())),
        (1, Sign::Minus) => Ok(-ln2(target_tol)?),
        (_, Sign::Plus) => zeta_plain(s, target_tol, opts.method),
        (_, Sign::Minus) => {
            let factor = Enclosure::<F>::from_rational(&(eta_factor(s)));
            let z = zeta_plain::<F>(s, target_tol / 2.0, opts.method)?;
            finish(factor * z, target_tol)
        }
    }
}

/// `2^(1-s) - 1`.
fn eta_factor(s: u32) -> BigRational {
    BigRational::new(1.into(), num_bigint::BigInt::one() << (s as usize - 1)) - BigRational::one()
}

fn finish<F: Real>(e: Enclosure<F>, tol: f64) -> Result<Enclosure<F>> {
    if e.error_bound() <= tol {
        Ok(e)
    } else {
        Err(unreachable(
            tol,
            format!("{} precision only reached {:.3e}", F::NAME, e.error_bound()),
        ))
    }
}

fn zeta_plain<F: Real>(s: u32, tol: f64, method: SingleMethod) -> Result<Enclosure<F>> {
    if s < 2 {
        return Err(Error::pre("zeta(s) needs s >= 2"));
    }
    match method {
        SingleMethod::Direct => zeta_direct(s, tol, DIRECT_TERM_LIMIT),
        SingleMethod::EulerMaclaurin => zeta_euler_maclaurin(s, tol),
        SingleMethod::Auto => {
            if direct_terms(s, tol) <= AUTO_DIRECT_TERMS as f64 {
                zeta_direct(s, tol, AUTO_DIRECT_TERMS)
            } else {
                zeta_euler_maclaurin(s, tol)
            }
        }
    }
}

/// Terms needed so the two-sided tail has half-width at most `tol / 2`.
fn direct_terms(s: u32, tol: f64) -> f64 {
    (1.0 / tol).powf(1.0 / s as f64).ceil().max(1.0)
}

/// `sum_{n<=M} n^-s` plus the tail enclosed between
/// `(M+1)^(1-s)/(s-1)` and `M^(1-s)/(s-1)`.
pub fn zeta_direct<F: Real>(s: u32, tol: f64, max_terms: u64) -> Result<Enclosure<F>> {
    check_tol(tol)?;
    if s < 2 {
        return Err(Error::pre("zeta(s) needs s >= 2"));
    }
    let m = direct_terms(s, tol);
    if m > max_terms as f64 {
        return Err(unreachable(tol, format!("direct zeta({s}) needs {m:.3e} terms")));
    }
    let m = m as u64;
    let mut sum = Enclosure::<F>::zero();
    for n in (1..=m).rev() {
        sum = sum + Enclosure::recip_index(n).powu(s);
    }
    let tail = integral_tail::<F>(s, m);
    finish(sum + tail, tol)
}

/// Enclosure of `sum_{n>m} n^-s`.
pub(crate) fn integral_tail<F: Real>(s: u32, m: u64) -> Enclosure<F> {
    let inv = Enclosure::<F>::from_rational(&BigRational::new(1.into(), ((s - 1) as u64).into()));
    let hi = Enclosure::<F>::recip_index(m).powu(s - 1) * inv;
    let lo = Enclosure::<F>::recip_index(m + 1).powu(s - 1) * inv;
    Enclosure::hull(lo, hi)
}

/// `s (s+1) ... (s + 2k - 2) B_{2k} / (2k)!`.
fn em_coefficient(s: u32, k: u32) -> BigRational {
    let mut c = bernoulli(2 * k);
    for j in 0..(2 * k - 1) {
        c *= BigRational::from_integer((s + j).into());
    }
    for j in 1..=(2 * k) {
        c /= BigRational::from_integer(j.into());
    }
    c
}

const EM_MAX_ORDER: u32 = 60;

/// Euler–Maclaurin at cut `M` with `q` correction terms; the remainder is
/// bounded by the first omitted term (valid for real `s > 1`).
pub fn zeta_euler_maclaurin<F: Real>(s: u32, tol: f64) -> Result<Enclosure<F>> {
    check_tol(tol)?;
    if s < 2 {
        return Err(Error::pre("zeta(s) needs s >= 2"));
    }
    let mut m: u64 = 16.max(s as u64);
    while m <= 1 << 20 {
        let m_f = m as f64;
        let term_size = |k: u32| -> f64 {
            let c = em_coefficient(s, k);
            let c = num_traits::ToPrimitive::to_f64(&num_traits::Signed::abs(&c)).unwrap_or(f64::INFINITY);
            c * m_f.powf(-(s as f64) - 2.0 * k as f64 + 1.0)
        };
        let q = (1..EM_MAX_ORDER).find(|&k| up(term_size(k + 1)) <= tol / 4.0);
        let Some(q) = q else {
            m *= 4;
            continue;
        };
        let remainder = up(term_size(q + 1) * 1.01);

        let mut sum = Enclosure::<F>::zero();
        for n in (1..m).rev() {
            sum = sum + Enclosure::recip_index(n).powu(s);
        }
        let inv_m = Enclosure::<F>::recip_index(m);
        let m_pow = inv_m.powu(s);
        let mut e = sum + m_pow * Enclosure::from_rational(&BigRational::from_integer(m.into()))
            * Enclosure::from_rational(&BigRational::new(1.into(), ((s - 1) as u64).into()))
            + m_pow * Enclosure::from_rational(&BigRational::new(1.into(), 2.into()));
        let inv_m2 = inv_m * inv_m;
        let mut power = m_pow * inv_m;
        for k in 1..=q {
            e = e + power * Enclosure::from_rational(&em_coefficient(s, k));
            power = power * inv_m2;
        }
        return finish(e.widen(remainder), tol);
    }
    Err(unreachable(tol, format!("Euler-Maclaurin for zeta({s}) did not converge")))
}

/// `ln 2 = sum_k 1/(k 2^k)`; the tail after `K` terms is at most
/// `1/((K+1) 2^K)`.
pub fn ln2<F: Real>(tol: f64) -> Result<Enclosure<F>> {
    check_tol(tol)?;
    let mut k_max = 1u32;
    while 2f64.powi(-(k_max as i32)) / (k_max as f64 + 1.0) > tol / 2.0 {
        k_max += 1;
        if k_max > 2000 {
            return Err(unreachable(tol, "ln 2 series"));
        }
    }
    let mut sum = Enclosure::<F>::zero();
    for k in (1..=k_max).rev() {
        let d = num_bigint::BigInt::from(k) << (k as usize);
        sum = sum + Enclosure::from_rational(&BigRational::new(1.into(), d));
    }
    let tail_hi = sum + Enclosure::from_rational(&BigRational::new(
        1.into(),
        num_bigint::BigInt::from(k_max + 1) << (k_max as usize),
    ));
    finish(Enclosure::hull(sum, tail_hi), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use twofloat::TwoFloat;

    type Dd = TwoFloat;

    fn opts() -> SingleOptions {
        SingleOptions::default()
    }

    fn pi2_over_6() -> f64 {
        std::f64::consts::PI * std::f64::consts::PI / 6.0
    }

    // Independent oracle: decimal expansions of zeta(3), zeta(5), ln 2 and
    // pi^2/6 to 30 digits.
    fn known(s: u32) -> BigRational {
        let digits = match s {
            2 => "1.644934066848226436472415166646",
            3 => "1.202056903159594285399738161511",
            4 => "1.082323233711138191516003696541",
            5 => "1.036927755143369926331365486457",
            _ => unreachable!(),
        };
        parse_decimal(digits)
    }

    fn parse_decimal(s: &str) -> BigRational {
        let (int, frac) = s.split_once('.').unwrap();
        let num: num_bigint::BigInt = format!("{int}{frac}").parse().unwrap();
        BigRational::new(num, num_bigint::BigInt::from(10).pow(frac.len() as u32))
    }

    fn oracle_interval(s: u32) -> Enclosure<Dd> {
        Enclosure::<Dd>::from_rational(&known(s)).widen(1e-29)
    }

    #[test]
    fn conventions() {
        let z0 = zeta_single_value::<Dd>(ZetaAtom::new(0, Sign::Minus), 1e-3, opts()).unwrap();
        assert_eq!(z0.value(), Dd::from(-0.5));
        assert_eq!(z0.error_bound(), 0.0);
        let conv = SingleOptions { zeta_one_convention: true, ..opts() };
        let z1 = zeta_single_value::<Dd>(ZetaAtom::plain(1), 1e-3, conv).unwrap();
        assert_eq!((z1.value(), z1.error_bound()), (Dd::from(0.0), 0.0));
        assert!(matches!(
            zeta_single_value::<Dd>(ZetaAtom::plain(1), 1e-3, opts()),
            Err(Error::Divergent(_))
        ));
        assert!(zeta_single_value::<Dd>(ZetaAtom::plain(3), 0.0, opts()).is_err());
    }

    #[test]
    fn zeta2_to_1e12() {
        let direct = SingleOptions { method: SingleMethod::Direct, ..opts() };
        let z = zeta_single_value::<Dd>(ZetaAtom::plain(2), 1e-12, direct).unwrap();
        assert!(z.error_bound() <= 1e-12);
        assert!((z.value().to_f64() - pi2_over_6()).abs() <= 1e-12);
        assert!(z.overlaps(&oracle_interval(2)));
    }

    #[test]
    fn euler_maclaurin_agrees_with_direct() {
        for s in 2..=12 {
            let d = zeta_direct::<Dd>(s, 1e-10, DIRECT_TERM_LIMIT).unwrap();
            let em = zeta_euler_maclaurin::<Dd>(s, 1e-25).unwrap();
            assert!(em.error_bound() <= 1e-25);
            assert!(d.overlaps(&em), "s={s}");
            assert!(d.contains(&em.value().to_rational()));
        }
        for s in 2..=5 {
            let em = zeta_euler_maclaurin::<Dd>(s, 1e-28).unwrap();
            assert!(em.overlaps(&oracle_interval(s)), "s={s}");
        }
    }

    #[test]
    fn auto_picks_a_method_that_meets_tolerance() {
        for tol in [1e-4, 1e-12, 1e-20] {
            let z = zeta_single_value::<Dd>(ZetaAtom::plain(3), tol, opts()).unwrap();
            assert!(z.error_bound() <= tol);
            assert!(z.overlaps(&oracle_interval(3)));
        }
    }

    #[test]
    fn narrow_precision_reports_unreachable() {
        let r = zeta_single_value::<f32>(ZetaAtom::plain(3), 1e-12, opts());
        assert!(matches!(r, Err(Error::Unreachable { .. })));
        let z = zeta_single_value::<f32>(ZetaAtom::plain(3), 1e-4, opts()).unwrap();
        assert!(z.overlaps(&oracle_interval(3)));
    }

    #[test]
    fn ln2_value() {
        let l = ln2::<Dd>(1e-28).unwrap();
        let known = parse_decimal("0.693147180559945309417232121458");
        assert!(l.overlaps(&Enclosure::<Dd>::from_rational(&known).widen(1e-29)));
        let m = zeta_single_value::<f64>(ZetaAtom::new(1, Sign::Minus), 1e-12, opts()).unwrap();
        assert!((m.value() + std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn eta_matches_alternating_sum() {
        for s in 2..=10u32 {
            let z = zeta_single_value::<Dd>(ZetaAtom::new(s, Sign::Minus), 1e-12, opts()).unwrap();
            // sum_{n<=N} (-1)^n / n^s, remainder at most the first omitted term.
            let n_max = 200_000u64;
            let mut acc = Enclosure::<Dd>::zero();
            for n in (1..=n_max).rev() {
                let term = Enclosure::recip_index(n).powu(s);
                acc = if n % 2 == 1 { acc - term } else { acc + term };
            }
            let first_omitted = 1.0 / ((n_max + 1) as f64).powi(s as i32);
            let alt = acc.widen(up(first_omitted));
            assert!(z.overlaps(&alt), "s={s}");
        }
    }
}
