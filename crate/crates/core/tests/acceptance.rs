//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use dzeta::identities::{check_finite_identity, seeded_rational_points, tail_witness_b_odd, verify_partial_fraction, DEFAULT_SEED};
use dzeta::numeric::{double_tail_bound, double_zeta_direct, eval_expr, Enclosure};
use dzeta::partial_sums::{stuffle_decompose, zeta_partial_double};
use dzeta::reduction::{reduce_euler, reduce_even_s_t1, reduce_signed};
use dzeta::{normalize, Dd, Exact, Sign, SignedIndex, Truncation, ZetaAtom, ZetaExpr};
use num_traits::{One, Signed, Zero};

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

fn trunc(n: u64) -> Truncation {
    Truncation::new(n).unwrap()
}

fn idx(e: u32, s: Sign) -> SignedIndex {
    SignedIndex::new(e, s).unwrap()
}

fn sign_q(s: Sign) -> Exact {
    if s.is_plus() {
        Exact::one()
    } else {
        -Exact::one()
    }
}

fn all_signs() -> impl Iterator<Item = (Sign, Sign)> {
    SIGNS.into_iter().flat_map(|a| SIGNS.into_iter().map(move |b| (a, b)))
}

/// `(s, t)` with both at least `lo`, odd weight, weight at most `max_w`.
fn odd_weight_pairs(lo: u32, max_w: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for w in (3..=max_w).step_by(2) {
        for s in lo..=w - lo {
            v.push((s, w - s));
        }
    }
    v
}

type Outcome = Result<String, String>;

fn finite_identity() -> Outcome {
    let mut cases = 0;
    for s in 1..=5 {
        for t in 1..=5 {
            if (s + t) % 2 == 0 {
                continue;
            }
            for (sg, tg) in all_signs() {
                for n in 1..=30 {
                    if !check_finite_identity(s, t, sg, tg, trunc(n)).map_err(|e| e.to_string())? {
                        return Err(format!("fails at s={s} t={t} sigma={sg} tau={tg} N={n}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn stuffle() -> Outcome {
    let mut cases = 0;
    for s in 1..=4 {
        for t in 1..=4 {
            for (sg, tg) in all_signs() {
                let (ws, wt) = (sign_q(sg), sign_q(tg));
                let (mut zs, mut zt) = (Exact::zero(), Exact::zero());
                let (mut ps, mut pt) = (Exact::one(), Exact::one());
                for n in 1..=100u64 {
                    ps *= &ws;
                    pt *= &wt;
                    let k = Exact::from_integer(n.into());
                    zs += &ps / num_traits::pow(k.clone(), s as usize);
                    zt += &pt / num_traits::pow(k, t as usize);
                    let parts = stuffle_decompose::<Exact>(idx(s, sg), idx(t, tg), trunc(n));
                    if parts.sum() != &zs * &zt {
                        return Err(format!("fails at s={s} t={t} sigma={sg} tau={tg} N={n}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn partial_fractions() -> Outcome {
    let points = seeded_rational_points(DEFAULT_SEED, 100);
    if points.len() != 100 {
        return Err(format!("expected 100 points, got {}", points.len()));
    }
    let mut cases = 0;
    for s in 1..=6 {
        for t in 1..=6 {
            for (x, y) in &points {
                if !verify_partial_fraction(s, t, x, y).map_err(|e| e.to_string())? {
                    return Err(format!("fails at s={s} t={t} x={x} y={y}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn euler_consistency() -> Outcome {
    let pairs = odd_weight_pairs(2, 13);
    for &(s, t) in &pairs {
        let euler = normalize(&reduce_euler(s, t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let signed = normalize(&reduce_signed(s, t, Sign::Plus, Sign::Plus).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        if euler != signed {
            return Err(format!("s={s} t={t}: {euler} vs {signed}"));
        }
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn reflection() -> Outcome {
    let pairs = odd_weight_pairs(2, 11);
    let mut cases = 0;
    for &(s, t) in &pairs {
        for (sg, tg) in all_signs() {
            let lhs = reduce_signed(s, t, sg, tg).map_err(|e| e.to_string())?
                + reduce_signed(t, s, tg, sg).map_err(|e| e.to_string())?;
            let rhs = ZetaExpr::monomial(Exact::one(), &[ZetaAtom::new(s, sg), ZetaAtom::new(t, tg)])
                .map_err(|e| e.to_string())?
                - ZetaExpr::atom(ZetaAtom::new(s + t, sg * tg));
            let (lhs, rhs) = (normalize(&lhs).map_err(|e| e.to_string())?, normalize(&rhs).map_err(|e| e.to_string())?);
            if lhs != rhs {
                return Err(format!("s={s} t={t} sigma={sg} tau={tg}: {lhs} vs {rhs}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

/// `zeta(3)` by reverse f64 summation to `M` plus the integral tail, with a
/// crude rounding allowance. Returns `[lo, hi]`.
fn brute_zeta3() -> (f64, f64) {
    const M: u64 = 100_000;
    let mut acc = 0.0f64;
    for n in (1..=M).rev() {
        let x = n as f64;
        acc += 1.0 / (x * x * x);
    }
    let rounding = 4.0 * M as f64 * f64::EPSILON * 1.21;
    let lo_tail = 1.0 / (2.0 * ((M + 1) as f64).powi(2));
    let hi_tail = 1.0 / (2.0 * (M as f64).powi(2));
    (acc + lo_tail - rounding, acc + hi_tail + rounding)
}

fn cross_oracle() -> Outcome {
    let pairs = odd_weight_pairs(2, 11);
    let mut cases = 0;
    let mut max_terms = 0;
    for &(s, t) in &pairs {
        for (sg, tg) in all_signs() {
            let direct = double_zeta_direct::<Dd>(s, t, sg, tg, 1e-8).map_err(|e| format!("direct s={s} t={t}: {e}"))?;
            let expr = reduce_signed(s, t, sg, tg).map_err(|e| e.to_string())?;
            let reduced = eval_expr::<Dd>(&expr, 1e-10).map_err(|e| format!("reduced s={s} t={t}: {e}"))?;
            if !direct.enclosure.overlaps(&reduced) {
                return Err(format!("s={s} t={t} sigma={sg} tau={tg}: {} vs {}", direct.enclosure, reduced));
            }
            max_terms = max_terms.max(direct.terms);
            cases += 1;
        }
    }
    let (lo, hi) = brute_zeta3();
    let d = double_zeta_direct::<Dd>(2, 1, Sign::Plus, Sign::Plus, 1e-8).map_err(|e| e.to_string())?;
    for x in [lo, hi] {
        if !d.enclosure.contains(&Exact::from_float(x).unwrap()) {
            return Err(format!("zeta(2,1) = {} misses zeta(3) oracle [{lo}, {hi}]", d.enclosure));
        }
    }
    Ok(format!("{cases} cases, largest N {max_terms}; zeta(2,1) encloses zeta(3) in [{lo:.12}, {hi:.12}]"))
}

fn signed_t1() -> Outcome {
    for s in [2, 4, 6, 8] {
        let expr = reduce_even_s_t1(s, Sign::Minus).map_err(|e| e.to_string())?;
        let reduced = eval_expr::<Dd>(&expr, 1e-8).map_err(|e| e.to_string())?;
        let direct = double_zeta_direct::<Dd>(s, 1, Sign::Minus, Sign::Plus, 1e-8).map_err(|e| e.to_string())?;
        if !reduced.overlaps(&direct.enclosure) {
            return Err(format!("s={s}: {reduced} vs {}", direct.enclosure));
        }
    }
    Ok("s in {2,4,6,8}".into())
}

/// Upper bound on `|zeta_{4N} - zeta_N|`: exact for small `N`, otherwise an
/// enclosure-arithmetic sum of the terms with `N < n <= 4N`.
fn movement_upper(s: u32, t: u32, sg: Sign, tg: Sign, n: u64) -> Exact {
    if n <= 100 {
        let a = zeta_partial_double::<Exact>(idx(s, sg), idx(t, tg), trunc(4 * n));
        let b = zeta_partial_double::<Exact>(idx(s, sg), idx(t, tg), trunc(n));
        return (a - b).abs();
    }
    let mut inner = Enclosure::<Dd>::zero();
    let mut moved = Enclosure::<Dd>::zero();
    for k in 1..=4 * n {
        let r = Enclosure::<Dd>::recip_index(k);
        if k > n {
            let term = inner * r.powu(s);
            moved = if sg.is_plus() || k % 2 == 0 { moved + term } else { moved - term };
        }
        let rt = r.powu(t);
        inner = if tg.is_plus() || k % 2 == 0 { inner + rt } else { inner - rt };
    }
    let (lo, hi) = moved.interval();
    lo.abs().max(hi.abs())
}

fn tail_soundness() -> Outcome {
    let mut cases = 0;
    let mut tightest = f64::INFINITY;
    for s in 2..=5 {
        for t in 2..=5 {
            for (sg, tg) in all_signs() {
                for n in [10, 100, 1000] {
                    let bound = double_tail_bound(s, t, trunc(n)).map_err(|e| e.to_string())?;
                    let moved = movement_upper(s, t, sg, tg, n);
                    let b = Exact::from_float(bound).unwrap();
                    if moved > b {
                        return Err(format!("s={s} t={t} sigma={sg} tau={tg} N={n}: bound {bound:e}"));
                    }
                    if !moved.is_zero() {
                        use num_traits::ToPrimitive;
                        tightest = tightest.min((b / moved).to_f64().unwrap());
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases, smallest bound/movement ratio {tightest:.2}"))
}

fn witness() -> Outcome {
    let mut cases = 0;
    for (s, t) in odd_weight_pairs(1, 9) {
        for (sg, tg) in all_signs() {
            for b in (1..=t).step_by(2) {
                for n in 1..=50 {
                    let (lhs, rhs) = tail_witness_b_odd(s, t, sg, tg, b, trunc(n)).map_err(|e| e.to_string())?;
                    if lhs > rhs {
                        return Err(format!("s={s} t={t} sigma={sg} tau={tg} b={b} N={n}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("finite identity, s,t <= 5, N <= 30", finite_identity),
        ("stuffle, s,t <= 4, N <= 100", stuffle),
        ("partial fractions, s,t <= 6, 100 points", partial_fractions),
        ("signed vs classical reduction, weight <= 13", euler_consistency),
        ("symbolic reflection, weight <= 11", reflection),
        ("direct vs reduced numerics, weight <= 11", cross_oracle),
        ("t = 1 alternating case", signed_t1),
        ("tail bound soundness", tail_soundness),
        ("bound witness grid", witness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
