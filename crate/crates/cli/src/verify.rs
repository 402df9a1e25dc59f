use dzeta::identities::{
    check_finite_identity, check_shuffle_identity, check_symmetric_identity, seeded_rational_points,
    tail_witness_b_odd, verify_partial_fraction,
};
use dzeta::numeric::double_tail_bound;
use dzeta::partial_sums::{stuffle_decompose, zeta_partial_double, zeta_partial_single};
use dzeta::{Exact, Sign, SignedIndex, Truncation};
use num_traits::Signed;
use serde::Serialize;
use serde_json::json;

use crate::output::{CliError, Metadata, OutputRecord, Sink};
use crate::{Format, Precision, Suite};

pub const PARFRAC_POINTS: usize = 100;

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub suite: Suite,
    pub max_s: u32,
    pub max_t: u32,
    pub max_n: u64,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
struct Case {
    suite: &'static str,
    case: String,
    pass: bool,
}

fn trunc(n: u64) -> Truncation {
    Truncation::new(n).expect("n >= 1")
}

fn label(s: u32, t: u32, sigma: Sign, tau: Sign) -> String {
    format!("s={s} t={t} sigma={sigma} tau={tau}")
}

fn all_n(max_n: u64, mut f: impl FnMut(Truncation) -> dzeta::Result<bool>) -> dzeta::Result<bool> {
    for n in 1..=max_n {
        if !f(trunc(n))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn finite(g: &Grid, cases: &mut Vec<Case>) -> dzeta::Result<()> {
    for s in 1..=g.max_s {
        for t in 1..=g.max_t {
            if (s + t) % 2 == 0 {
                continue;
            }
            for sigma in SIGNS {
                for tau in SIGNS {
                    let pass = all_n(g.max_n, |n| check_finite_identity(s, t, sigma, tau, n))?;
                    cases.push(Case { suite: "finite", case: format!("{} N<={}", label(s, t, sigma, tau), g.max_n), pass });
                }
            }
        }
    }
    Ok(())
}

fn symmetric_or_shuffle(g: &Grid, shuffle: bool, cases: &mut Vec<Case>) -> dzeta::Result<()> {
    let (name, check): (&'static str, fn(u32, u32, &Exact, &Exact, Truncation) -> dzeta::Result<bool>) = if shuffle {
        ("shuffle", check_shuffle_identity)
    } else {
        ("symmetric", check_symmetric_identity)
    };
    for s in 1..=g.max_s {
        for t in 1..=g.max_t {
            for sigma in SIGNS {
                for tau in SIGNS {
                    let (sg, tg): (Exact, Exact) = (sigma.to_scalar(), tau.to_scalar());
                    let pass = all_n(g.max_n, |n| check(s, t, &sg, &tg, n))?;
                    cases.push(Case { suite: name, case: format!("{} N<={}", label(s, t, sigma, tau), g.max_n), pass });
                }
            }
        }
    }
    Ok(())
}

fn stuffle(g: &Grid, cases: &mut Vec<Case>) -> dzeta::Result<()> {
    for s in 1..=g.max_s {
        for t in 1..=g.max_t {
            for sigma in SIGNS {
                for tau in SIGNS {
                    let outer = SignedIndex::new(s, sigma)?;
                    let inner = SignedIndex::new(t, tau)?;
                    let pass = all_n(g.max_n, |n| {
                        let parts = stuffle_decompose::<Exact>(outer, inner, n);
                        let product =
                            zeta_partial_single::<Exact>(outer, n) * zeta_partial_single::<Exact>(inner, n);
                        Ok(parts.sum() == product)
                    })?;
                    cases.push(Case { suite: "stuffle", case: format!("{} N<={}", label(s, t, sigma, tau), g.max_n), pass });
                }
            }
        }
    }
    Ok(())
}

fn parfrac(g: &Grid, cases: &mut Vec<Case>) -> dzeta::Result<()> {
    let points = seeded_rational_points(g.seed, PARFRAC_POINTS);
    for s in 1..=g.max_s {
        for t in 1..=g.max_t {
            let mut pass = true;
            for (x, y) in &points {
                pass &= verify_partial_fraction(s, t, x, y)?;
            }
            cases.push(Case {
                suite: "parfrac",
                case: format!("s={s} t={t} points={} seed={}", points.len(), g.seed),
                pass,
            });
        }
    }
    Ok(())
}

fn tailbound(g: &Grid, cases: &mut Vec<Case>) -> dzeta::Result<()> {
    for s in 1..=g.max_s {
        for t in 1..=g.max_t {
            if (s + t) % 2 == 0 {
                continue;
            }
            for sigma in SIGNS {
                for tau in SIGNS {
                    for b in (1..=t).step_by(2) {
                        let pass = all_n(g.max_n, |n| {
                            let (bracket, bound) = tail_witness_b_odd(s, t, sigma, tau, b, n)?;
                            Ok(bracket <= bound)
                        })?;
                        cases.push(Case {
                            suite: "tailbound",
                            case: format!("witness {} b={b} N<={}", label(s, t, sigma, tau), g.max_n),
                            pass,
                        });
                    }
                }
            }
        }
    }
    for s in 2..=g.max_s {
        for t in 1..=g.max_t {
            for sigma in SIGNS {
                for tau in SIGNS {
                    let outer = SignedIndex::new(s, sigma)?;
                    let inner = SignedIndex::new(t, tau)?;
                    let pass = all_n(g.max_n, |n| {
                        let near = zeta_partial_double::<Exact>(outer, inner, n);
                        let far = zeta_partial_double::<Exact>(outer, inner, trunc(4 * n.get()));
                        let bound = Exact::from_float(double_tail_bound(s, t, n)?).expect("finite bound");
                        Ok((far - near).abs() <= bound)
                    })?;
                    cases.push(Case {
                        suite: "tailbound",
                        case: format!("movement {} N<={}", label(s, t, sigma, tau), g.max_n),
                        pass,
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn run(out: &mut Sink, precision: Precision, g: Grid, format: Format) -> Result<Result<(), CliError>, CliError> {
    if g.max_s == 0 || g.max_t == 0 || g.max_n == 0 {
        return Err(dzeta::Error::Precondition("max-s, max-t and max-N must be positive".into()).into());
    }
    if format == Format::Latex {
        return Err(CliError::Usage("verify supports --format text, json or csv".into()));
    }
    let suites = match g.suite {
        Suite::All => vec![Suite::Finite, Suite::Symmetric, Suite::Shuffle, Suite::Stuffle, Suite::Parfrac, Suite::Tailbound],
        one => vec![one],
    };
    let mut cases = Vec::new();
    for suite in suites {
        match suite {
            Suite::Finite => finite(&g, &mut cases)?,
            Suite::Symmetric => symmetric_or_shuffle(&g, false, &mut cases)?,
            Suite::Shuffle => symmetric_or_shuffle(&g, true, &mut cases)?,
            Suite::Stuffle => stuffle(&g, &mut cases)?,
            Suite::Parfrac => parfrac(&g, &mut cases)?,
            Suite::Tailbound => tailbound(&g, &mut cases)?,
            Suite::All => unreachable!(),
        }
    }
    let passed = cases.iter().filter(|c| c.pass).count();
    let total = cases.len();

    match format {
        Format::Json => {
            let request = json!({
                "command": "verify",
                "suite": format!("{:?}", g.suite).to_lowercase(),
                "max_s": g.max_s,
                "max_t": g.max_t,
                "max_N": g.max_n,
                "seed": g.seed,
            });
            let result = json!({ "cases": cases, "passed": passed, "total": total });
            out.json(&OutputRecord { request, result, metadata: Metadata::new(precision) });
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &cases {
                w.serialize(c)?;
            }
            out.bytes(&w.into_inner().map_err(|e| CliError::Io(e.into_error()))?);
        }
        _ => {
            for c in &cases {
                out.line(format!("{} {}: {}", c.suite, c.case, c.pass));
            }
            out.line(format!("summary: {passed}/{total} passed"));
        }
    }
    Ok(if passed == total {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} of {total} cases failed", total - passed)))
    })
}
