use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive};

use super::enclosure::Enclosure;
use super::single::{zeta_single_value, SingleMethod, SingleOptions};
use crate::error::{Error, Result};
use crate::expr::{ZetaAtom, ZetaExpr};
use crate::scalar::Real;

/// Bound on `|zeta(n; sigma)|` over every atom, including `ln 2` and `1/2`.
const ATOM_MAGNITUDE: f64 = 1.65;

const RETRIES: u32 = 6;

/// Value of `e` with total error at most `target_tol`.
pub fn eval_expr<F: Real>(e: &ZetaExpr, target_tol: f64) -> Result<Enclosure<F>> {
    eval_expr_with(e, target_tol, SingleMethod::default())
}

pub fn eval_expr_with<F: Real>(e: &ZetaExpr, target_tol: f64, method: SingleMethod) -> Result<Enclosure<F>> {
    if !(target_tol > 0.0 && target_tol.is_finite()) {
        return Err(Error::pre(format!("tolerance must be positive and finite, got {target_tol}")));
    }
    let opts = SingleOptions { zeta_one_convention: e.uses_zeta_one_convention(), method };
    let weight: f64 = e
        .terms()
        .iter()
        .map(|t| t.coeff().abs().to_f64().unwrap_or(f64::INFINITY) * (2.0 * ATOM_MAGNITUDE + 1.0))
        .sum();
    let mut atom_tol = target_tol / (4.0 * weight.max(1.0));
    let mut last = None;
    for _ in 0..RETRIES {
        let mut cache: HashMap<ZetaAtom, Enclosure<F>> = HashMap::new();
        let mut total = Enclosure::<F>::zero();
        for term in e.terms() {
            let mut product = Enclosure::<F>::from_rational(term.coeff());
            for &atom in term.atoms() {
                let v = match cache.get(&atom) {
                    Some(v) => *v,
                    None => {
                        let v = zeta_single_value::<F>(atom, atom_tol, opts)?;
                        cache.insert(atom, v);
                        v
                    }
                };
                product = product * v;
            }
            total = total + product;
        }
        if total.error_bound() <= target_tol {
            return Ok(total);
        }
        last = Some(total.error_bound());
        atom_tol /= 16.0;
    }
    Err(Error::Unreachable {
        tol: target_tol,
        reason: format!("expression bound stalled at {:.3e}", last.unwrap_or(f64::INFINITY)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Sign;
    use crate::expr::normalize;
    use crate::reduction::reduce_s1;
    use num_rational::BigRational;
    use twofloat::TwoFloat;

    type Dd = TwoFloat;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn single_atom_matches_single_value() {
        let e = ZetaExpr::atom(ZetaAtom::plain(3));
        let v = eval_expr::<Dd>(&e, 1e-12).unwrap();
        let direct = zeta_single_value::<Dd>(ZetaAtom::plain(3), 1e-12, SingleOptions::default()).unwrap();
        assert!(v.overlaps(&direct));
        assert!(v.error_bound() <= 1e-12);
    }

    #[test]
    fn s1_two_is_zeta3() {
        // Independent oracle: sum_{n<=10^5} n^-3 plus the two-sided integral tail.
        let m = 100_000u64;
        let mut acc = 0f64;
        for n in (1..=m).rev() {
            acc += 1.0 / (n as f64).powi(3);
        }
        let mf = m as f64;
        let oracle = acc + 0.5 * (1.0 / (2.0 * mf * mf) + 1.0 / (2.0 * (mf + 1.0) * (mf + 1.0)));
        let v = eval_expr::<Dd>(&reduce_s1(2).unwrap(), 1e-10).unwrap();
        assert!((v.value().to_f64() - oracle).abs() < 1e-9);
        assert!((v.value().to_f64() - 1.2020569031595942).abs() < 1e-10);
    }

    #[test]
    fn zeta_zero_atom_is_minus_half() {
        let a = ZetaAtom::new(0, Sign::Minus);
        let z5 = ZetaAtom::plain(5);
        let raw = ZetaExpr::monomial(q(3, 1), &[a, z5]).unwrap();
        let v = eval_expr::<Dd>(&raw, 1e-12).unwrap();
        let rest = eval_expr::<Dd>(&ZetaExpr::monomial(q(-3, 2), &[z5]).unwrap(), 1e-12).unwrap();
        assert!(v.overlaps(&rest));
        let n = eval_expr::<Dd>(&normalize(&raw).unwrap(), 1e-12).unwrap();
        assert!(n.overlaps(&v));
    }

    #[test]
    fn unflagged_zeta_one_is_divergent() {
        let e = ZetaExpr::atom(ZetaAtom::plain(1));
        assert!(matches!(eval_expr::<Dd>(&e, 1e-6), Err(Error::Divergent(_))));
        let flagged = e.with_zeta_one_convention();
        assert_eq!(eval_expr::<Dd>(&flagged, 1e-6).unwrap().value(), Dd::from(0.0));
    }

    #[test]
    fn tolerance_is_met_for_large_coefficients() {
        let e = crate::reduction::reduce_signed(6, 5, Sign::Minus, Sign::Plus).unwrap();
        for tol in [1e-6, 1e-10, 1e-14] {
            assert!(eval_expr::<Dd>(&e, tol).unwrap().error_bound() <= tol);
        }
    }
}
