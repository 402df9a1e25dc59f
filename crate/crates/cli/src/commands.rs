use dzeta::format::{expr_to_latex, ExprJson};
use dzeta::numeric::{
    direct_tolerance_floor, double_zeta_direct_with, eval_expr, DirectEvaluation, DirectOptions,
};
use dzeta::reduction::{in_signed_domain, reduce_euler, reduce_even_s_t1, reduce_s1, reduce_signed};
use dzeta::{Enclosure, Error, Real, Sign, ZetaExpr};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{enclosure_json, enclosure_text, CliError, Metadata, OutputRecord, Sink};
use crate::{Format, Method, Params, Precision};

/// Default ceiling on direct-sum terms for the command line.
pub const CLI_MAX_TERMS: u64 = 100_000_000;

pub type Verdict = Result<(), CliError>;

macro_rules! dispatch {
    ($p:expr, $f:ident ( $($arg:expr),* )) => {
        match $p {
            Precision::F32 => $f::<f32>($($arg),*),
            Precision::F64 => $f::<f64>($($arg),*),
            Precision::Dd => $f::<dzeta::Dd>($($arg),*),
        }
    };
}

fn params_json(p: &Params) -> Value {
    json!({ "s": p.s, "t": p.t, "sigma": p.sigma.to_string(), "tau": p.tau.to_string() })
}

fn convention_flags(e: &ZetaExpr) -> Vec<String> {
    if e.uses_zeta_one_convention() {
        vec![dzeta::format::ZETA_ONE_FLAG.to_string()]
    } else {
        Vec::new()
    }
}

fn classical_form(p: &Params) -> dzeta::Result<ZetaExpr> {
    match (p.sigma, p.tau, p.t) {
        (Sign::Plus, Sign::Plus, 1) => reduce_s1(p.s),
        (sigma, Sign::Plus, 1) => reduce_even_s_t1(p.s, sigma),
        (Sign::Plus, Sign::Plus, _) => reduce_euler(p.s, p.t),
        _ => Err(Error::Precondition(format!(
            "no classical form for signs ({}, {}); drop --classical",
            p.sigma, p.tau
        ))),
    }
}

fn render(e: &ZetaExpr, format: Format, pi_powers: bool) -> String {
    match format {
        Format::Latex => expr_to_latex(e, pi_powers),
        _ => e.to_string(),
    }
}

pub fn reduce(
    out: &mut Sink,
    precision: Precision,
    p: Params,
    format: Format,
    compare_euler: bool,
    classical: bool,
    pi_powers: bool,
) -> Result<Verdict, CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage("reduce supports --format text, json or latex".into()));
    }
    let expr = if classical { classical_form(&p)? } else { reduce_signed(p.s, p.t, p.sigma, p.tau)? };
    let request = json!({
        "command": "reduce",
        "params": params_json(&p),
        "classical": classical,
        "compare_euler": compare_euler,
    });
    let mut metadata = Metadata::new(precision);
    metadata.flags = convention_flags(&expr);

    if !compare_euler {
        if format == Format::Json {
            out.json(&OutputRecord { request, result: serde_json::to_value(ExprJson::from(&expr)).unwrap(), metadata });
        } else {
            out.line(render(&expr, format, pi_powers));
        }
        return Ok(Ok(()));
    }

    if !(p.sigma.is_plus() && p.tau.is_plus()) {
        return Err(CliError::Usage("--compare-euler needs sigma = tau = +1".into()));
    }
    let euler = reduce_euler(p.s, p.t)?;
    let consistent = euler == expr;
    let verdict = if consistent { "consistent" } else { "inconsistent" };
    if format == Format::Json {
        let result = json!({
            "signed": ExprJson::from(&expr),
            "euler": ExprJson::from(&euler),
            "verdict": verdict,
        });
        out.json(&OutputRecord { request, result, metadata });
    } else {
        out.line(format!("signed: {}", render(&expr, format, pi_powers)));
        out.line(format!("euler: {}", render(&euler, format, pi_powers)));
        out.line(format!("verdict: {verdict}"));
    }
    Ok(if consistent { Ok(()) } else { Err(CliError::Verification("signed and classical forms differ".into())) })
}

/// Direct evaluation; when `relax` is set and the tolerance is out of reach
/// within the term ceiling, retries at the smallest reachable tolerance.
fn direct<F: Real>(p: &Params, tol: f64, max_terms: u64, relax: bool) -> dzeta::Result<(DirectEvaluation<F>, f64)> {
    let opts = DirectOptions { max_terms };
    match double_zeta_direct_with::<F>(p.s, p.t, p.sigma, p.tau, tol, opts) {
        Err(Error::Unreachable { .. }) if relax && p.s >= 2 => {
            let floor = direct_tolerance_floor::<F>(p.s, p.t, p.sigma, p.tau, max_terms)?;
            if floor <= tol {
                return double_zeta_direct_with::<F>(p.s, p.t, p.sigma, p.tau, tol, opts).map(|d| (d, tol));
            }
            double_zeta_direct_with::<F>(p.s, p.t, p.sigma, p.tau, floor, opts).map(|d| (d, floor))
        }
        other => other.map(|d| (d, tol)),
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("tolerance must be positive, got {tol}")))
    }
}

pub fn eval(
    out: &mut Sink,
    precision: Precision,
    p: Params,
    tol: f64,
    method: Method,
    format: Format,
    max_terms: u64,
) -> Result<Verdict, CliError> {
    dispatch!(precision, eval_in(out, precision, p, tol, method, format, max_terms))
}

fn eval_in<F: Real>(
    out: &mut Sink,
    precision: Precision,
    p: Params,
    tol: f64,
    method: Method,
    format: Format,
    max_terms: u64,
) -> Result<Verdict, CliError> {
    check_tol(tol)?;
    if !matches!(format, Format::Text | Format::Json) {
        return Err(CliError::Usage("eval supports --format text or json".into()));
    }
    if p.s == 0 || p.t == 0 {
        return Err(Error::Precondition("s and t must be positive".into()).into());
    }
    if p.s == 1 && p.sigma.is_plus() {
        return Err(Error::Divergent(format!("zeta(1,{};+1,{}) diverges", p.t, p.tau)).into());
    }
    let mut metadata = Metadata::new(precision);

    let reduced = if method != Method::Direct {
        let expr = reduce_signed(p.s, p.t, p.sigma, p.tau)?;
        metadata.flags.extend(convention_flags(&expr));
        Some(eval_expr::<F>(&expr, tol)?)
    } else {
        None
    };
    let direct = if method != Method::Reduced {
        let (d, used) = direct::<F>(&p, tol, max_terms, method == Method::Both)?;
        metadata.n_used = Some(d.terms);
        if used != tol {
            metadata.flags.push("direct_tolerance_relaxed".into());
        }
        if !d.rigorous {
            metadata.flags.push("direct_heuristic".into());
        }
        Some((d, used))
    } else {
        None
    };
    let overlap = match (&reduced, &direct) {
        (Some(r), Some((d, _))) => Some(r.overlaps(&d.enclosure)),
        _ => None,
    };

    if format == Format::Json {
        let mut result = serde_json::Map::new();
        if let Some(r) = &reduced {
            result.insert("reduced".into(), enclosure_json(r));
        }
        if let Some((d, used)) = &direct {
            result.insert("direct".into(), enclosure_json(&d.enclosure));
            result.insert("direct_tolerance".into(), json!(used));
        }
        if let Some(o) = overlap {
            result.insert("overlap".into(), json!(o));
        }
        let request = json!({
            "command": "eval",
            "params": params_json(&p),
            "tol": tol,
            "method": format!("{method:?}").to_lowercase(),
        });
        out.json(&OutputRecord { request, result: Value::Object(result), metadata });
    } else {
        if let Some(r) = &reduced {
            out.line(format!("reduced: {}", enclosure_text(r)));
        }
        if let Some((d, used)) = &direct {
            let kind = if d.rigorous { "rigorous" } else { "heuristic" };
            out.line(format!("direct: {} (N={}, {kind})", enclosure_text(&d.enclosure), d.terms));
            if *used != tol {
                out.line(format!("direct tolerance relaxed to {used:.3e} (term ceiling {max_terms})"));
            }
        }
        if let Some(o) = overlap {
            out.line(format!("overlap: {o}"));
        }
    }
    Ok(match overlap {
        Some(false) => Err(CliError::Verification("enclosures do not overlap".into())),
        _ => Ok(()),
    })
}

#[derive(Debug, Serialize)]
struct Row {
    s: u32,
    t: u32,
    sigma: String,
    tau: String,
    expression: ExprJson,
    reduced: Value,
    direct: Value,
    direct_terms: u64,
    direct_tolerance: f64,
    direct_rigorous: bool,
    overlap: bool,
}

pub fn table(
    out: &mut Sink,
    precision: Precision,
    max_weight: u32,
    tol: f64,
    direct_tol: Option<f64>,
    format: Format,
    max_terms: u64,
) -> Result<Verdict, CliError> {
    dispatch!(precision, table_in(out, precision, max_weight, tol, direct_tol, format, max_terms))
}

struct RowData<F> {
    p: Params,
    expr: ZetaExpr,
    reduced: Enclosure<F>,
    direct: DirectEvaluation<F>,
    direct_tol: f64,
    overlap: bool,
}

fn table_in<F: Real>(
    out: &mut Sink,
    precision: Precision,
    max_weight: u32,
    tol: f64,
    direct_tol: Option<f64>,
    format: Format,
    max_terms: u64,
) -> Result<Verdict, CliError> {
    check_tol(tol)?;
    let dtol = direct_tol.unwrap_or(tol);
    check_tol(dtol)?;
    if max_weight < 3 {
        return Err(Error::Precondition(format!("max_weight must be at least 3, got {max_weight}")).into());
    }
    if !matches!(format, Format::Csv | Format::Json) {
        return Err(CliError::Usage("table supports --format csv or json".into()));
    }
    let mut rows = Vec::new();
    for w in (3..=max_weight).step_by(2) {
        for s in 1..w {
            for sigma in [Sign::Plus, Sign::Minus] {
                for tau in [Sign::Plus, Sign::Minus] {
                    let t = w - s;
                    if !in_signed_domain(s, t, sigma, tau) {
                        continue;
                    }
                    let p = Params { s, t, sigma, tau };
                    let expr = reduce_signed(s, t, sigma, tau)?;
                    let reduced = eval_expr::<F>(&expr, tol)?;
                    let (direct, used) = direct::<F>(&p, dtol, max_terms, true)?;
                    let overlap = reduced.overlaps(&direct.enclosure);
                    rows.push(RowData { p, expr, reduced, direct, direct_tol: used, overlap });
                }
            }
        }
    }
    let all_overlap = rows.iter().all(|r| r.overlap);

    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "s", "t", "sigma", "tau", "expression", "reduced_value", "reduced_error", "direct_value",
                "direct_error", "direct_terms", "direct_tolerance", "direct_rigorous", "overlap",
            ])?;
            for r in &rows {
                let red = dzeta::format::DecimalEnclosure::from_enclosure(&r.reduced);
                let dir = dzeta::format::DecimalEnclosure::from_enclosure(&r.direct.enclosure);
                w.write_record([
                    r.p.s.to_string(),
                    r.p.t.to_string(),
                    r.p.sigma.to_string(),
                    r.p.tau.to_string(),
                    r.expr.to_string(),
                    red.value.to_fixed(),
                    red.error_bound.to_scientific(),
                    dir.value.to_fixed(),
                    dir.error_bound.to_scientific(),
                    r.direct.terms.to_string(),
                    format!("{:e}", r.direct_tol),
                    r.direct.rigorous.to_string(),
                    r.overlap.to_string(),
                ])?;
            }
            out.bytes(&w.into_inner().map_err(|e| CliError::Io(e.into_error()))?);
        }
        _ => {
            let json_rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    s: r.p.s,
                    t: r.p.t,
                    sigma: r.p.sigma.to_string(),
                    tau: r.p.tau.to_string(),
                    expression: ExprJson::from(&r.expr),
                    reduced: enclosure_json(&r.reduced),
                    direct: enclosure_json(&r.direct.enclosure),
                    direct_terms: r.direct.terms,
                    direct_tolerance: r.direct_tol,
                    direct_rigorous: r.direct.rigorous,
                    overlap: r.overlap,
                })
                .collect();
            let mut metadata = Metadata::new(precision);
            metadata.n_used = rows.iter().map(|r| r.direct.terms).max();
            if rows.iter().any(|r| r.expr.uses_zeta_one_convention()) {
                metadata.flags.push(dzeta::format::ZETA_ONE_FLAG.into());
            }
            if rows.iter().any(|r| !r.direct.rigorous) {
                metadata.flags.push("direct_heuristic".into());
            }
            if rows.iter().any(|r| r.direct_tol != dtol) {
                metadata.flags.push("direct_tolerance_relaxed".into());
            }
            let request = json!({
                "command": "table",
                "max_weight": max_weight,
                "tol": tol,
                "direct_tol": dtol,
            });
            let result = json!({ "rows": json_rows, "all_overlap": all_overlap });
            out.json(&OutputRecord { request, result, metadata });
        }
    }
    Ok(if all_overlap { Ok(()) } else { Err(CliError::Verification("some enclosures do not overlap".into())) })
}
