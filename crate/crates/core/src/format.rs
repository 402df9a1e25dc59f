//! Serialization of expressions and enclosures: JSON, LaTeX and decimal text.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{bernoulli, Sign};
use crate::expr::{ZetaAtom, ZetaExpr};
use crate::numeric::Enclosure;
use crate::scalar::Real;

/// Flag string for expressions using `zeta(1;1) = 0`.
pub const ZETA_ONE_FLAG: &str = "zeta_one_convention";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomJson {
    pub arg: u32,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub atoms: Vec<AtomJson>,
}

/// Wire form of a [`ZetaExpr`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprJson {
    pub terms: Vec<TermJson>,
    pub flags: Vec<String>,
}

impl From<&ZetaExpr> for ExprJson {
    fn from(e: &ZetaExpr) -> Self {
        let terms = e
            .terms()
            .iter()
            .map(|t| TermJson {
                coeff: t.coeff().to_string(),
                atoms: t.atoms().iter().map(|a| AtomJson { arg: a.arg(), sign: a.sign().value() }).collect(),
            })
            .collect();
        let flags = if e.uses_zeta_one_convention() { vec![ZETA_ONE_FLAG.to_string()] } else { Vec::new() };
        ExprJson { terms, flags }
    }
}

impl TryFrom<&ExprJson> for ZetaExpr {
    type Error = Error;
    fn try_from(j: &ExprJson) -> Result<ZetaExpr> {
        let mut e = ZetaExpr::zero();
        for t in &j.terms {
            let coeff = BigRational::from_str(&t.coeff).map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            let atoms = t
                .atoms
                .iter()
                .map(|a| Sign::from_i64(a.sign as i64).map(|s| ZetaAtom::new(a.arg, s)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse(e.to_string()))?;
            e.push_term(coeff, atoms).map_err(|e| Error::Parse(e.to_string()))?;
        }
        for flag in &j.flags {
            match flag.as_str() {
                ZETA_ONE_FLAG => e = e.with_zeta_one_convention(),
                other => return Err(Error::Parse(format!("unknown flag {other:?}"))),
            }
        }
        Ok(e)
    }
}

pub fn expr_to_json(e: &ZetaExpr) -> String {
    serde_json::to_string(&ExprJson::from(e)).expect("serializable")
}

pub fn expr_from_json(s: &str) -> Result<ZetaExpr> {
    let j: ExprJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    ZetaExpr::try_from(&j)
}

fn latex_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn latex_atom(a: ZetaAtom) -> String {
    match a.sign() {
        Sign::Plus => format!("\\zeta({})", a.arg()),
        Sign::Minus => format!("\\zeta({};-1)", a.arg()),
    }
}

fn latex_product(atoms: &[ZetaAtom], pi_power: u32) -> String {
    let mut out = String::new();
    match pi_power {
        0 => {}
        1 => out.push_str("\\pi"),
        p => out.push_str(&format!("\\pi^{{{p}}}")),
    }
    match atoms {
        [a, b] if a == b => out.push_str(&format!("{}^{{2}}", latex_atom(*a))),
        _ => atoms.iter().for_each(|a| out.push_str(&latex_atom(*a))),
    }
    out
}

/// `zeta(2k;sigma) = c pi^(2k)`, returning `c`.
fn even_zeta_pi_coefficient(a: ZetaAtom) -> BigRational {
    let two_k = a.arg();
    let k = two_k / 2;
    let mut c = bernoulli(two_k) * BigRational::from_integer(BigInt::one() << (two_k as usize)) / BigRational::from_integer(2.into());
    for j in 1..=two_k {
        c /= BigRational::from_integer(j.into());
    }
    if k % 2 == 0 {
        c = -c;
    }
    if !a.sign().is_plus() {
        c *= BigRational::new(1.into(), BigInt::one() << (two_k as usize - 1)) - BigRational::one();
    }
    c
}

/// LaTeX form. With `pi_powers`, every even-argument atom is replaced by its
/// rational multiple of a power of `pi` and like terms are merged.
pub fn expr_to_latex(e: &ZetaExpr, pi_powers: bool) -> String {
    let mut terms: Vec<(BigRational, Vec<ZetaAtom>, u32)> = Vec::new();
    if pi_powers {
        let mut merged: BTreeMap<(Vec<ZetaAtom>, u32), BigRational> = BTreeMap::new();
        for t in e.terms() {
            let mut c = t.coeff().clone();
            let mut rest = Vec::new();
            let mut power = 0;
            for &a in t.atoms() {
                if a.arg() >= 2 && a.arg() % 2 == 0 {
                    c *= even_zeta_pi_coefficient(a);
                    power += a.arg();
                } else {
                    rest.push(a);
                }
            }
            *merged.entry((rest, power)).or_insert_with(BigRational::zero) += c;
        }
        for ((atoms, power), c) in merged {
            if !c.is_zero() {
                terms.push((c, atoms, power));
            }
        }
    } else {
        terms = e.terms().iter().map(|t| (t.coeff().clone(), t.atoms().to_vec(), 0)).collect();
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, atoms, power)) in terms.iter().enumerate() {
        let product = latex_product(atoms, *power);
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let m = c.abs();
        if product.is_empty() {
            out.push_str(&latex_coeff(&m));
        } else if m.is_one() {
            out.push_str(&product);
        } else {
            out.push_str(&latex_coeff(&m));
            out.push_str(&product);
        }
    }
    out
}

/// A terminating decimal `digits * 10^exp`, normalized so `digits` has no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    digits: BigInt,
    exp: i32,
}

impl Decimal {
    pub fn new(digits: BigInt, exp: i32) -> Self {
        let mut d = Decimal { digits, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.digits.is_zero() {
            self.exp = 0;
            return;
        }
        let ten = BigInt::from(10);
        loop {
            let (q, r) = self.digits.div_rem(&ten);
            if !r.is_zero() {
                break;
            }
            self.digits = q;
            self.exp += 1;
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let p = BigInt::from(10).pow(self.exp.unsigned_abs());
        if self.exp >= 0 {
            BigRational::from_integer(&self.digits * p)
        } else {
            BigRational::new(self.digits.clone(), p)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_zero()
    }

    /// Fixed-point text, e.g. `-0.000125`.
    pub fn to_fixed(&self) -> String {
        let negative = self.digits.is_negative();
        let body = self.digits.abs().to_string();
        let text = if self.exp >= 0 {
            format!("{body}{}", "0".repeat(self.exp as usize))
        } else {
            let frac = (-self.exp) as usize;
            let padded = if body.len() <= frac { format!("{}{body}", "0".repeat(frac + 1 - body.len())) } else { body };
            let (int, fr) = padded.split_at(padded.len() - frac);
            format!("{int}.{fr}")
        };
        if negative {
            format!("-{text}")
        } else {
            text
        }
    }

    /// Scientific text, e.g. `1.3e-10`.
    pub fn to_scientific(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let negative = self.digits.is_negative();
        let body = self.digits.abs().to_string();
        let e = self.exp + body.len() as i32 - 1;
        let mantissa = if body.len() == 1 { body } else { format!("{}.{}", &body[..1], &body[1..]) };
        format!("{}{mantissa}e{e}", if negative { "-" } else { "" })
    }
}

impl FromStr for Decimal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Decimal> {
        let bad = || Error::Parse(format!("bad decimal {s:?}"));
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (negative, mantissa) = match mantissa.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let digits = if negative { -digits } else { digits };
        Ok(Decimal::new(digits, exp - frac.len() as i32))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fixed())
    }
}

/// `floor(log10(x))` for positive rational `x`.
fn decimal_exponent(x: &BigRational) -> i32 {
    let guess = x.to_f64().map(|v| v.log10().floor()).filter(|v| v.is_finite()).unwrap_or(0.0) as i32;
    let mut k = guess;
    while pow10(k) > *x {
        k -= 1;
    }
    while pow10(k + 1) <= *x {
        k += 1;
    }
    k
}

fn pow10(k: i32) -> BigRational {
    Decimal::new(BigInt::one(), k).to_rational()
}

/// `x` rounded up to two significant digits.
fn round_up_two_digits(x: &BigRational) -> Decimal {
    if x.is_zero() {
        return Decimal::new(BigInt::zero(), 0);
    }
    let j = decimal_exponent(x) - 1;
    let m = (x / pow10(j)).ceil().to_integer();
    Decimal::new(m, j)
}

/// Digits used when an exact value does not terminate.
const EXACT_DIGITS: i32 = 40;

/// An enclosure in decimal form: `value` carries only digits guaranteed by
/// `error_bound`, which is given to two significant digits, rounded up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalEnclosure {
    pub value: Decimal,
    pub error_bound: Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct EnclosureJson {
    value: String,
    error_bound: String,
}

impl DecimalEnclosure {
    /// Decimal form whose interval contains the interval of `e`.
    pub fn from_enclosure<F: Real>(e: &Enclosure<F>) -> Self {
        let v = e.value().to_rational();
        let err = if e.error_bound() == 0.0 {
            BigRational::zero()
        } else {
            BigRational::from_float(e.error_bound()).expect("finite bound")
        };
        Self::from_rationals(&v, &err)
    }

    pub fn from_rationals(v: &BigRational, err: &BigRational) -> Self {
        let k = if err.is_zero() {
            if let Some(d) = terminating(v) {
                return DecimalEnclosure { value: d, error_bound: Decimal::new(BigInt::zero(), 0) };
            }
            -EXACT_DIGITS
        } else {
            decimal_exponent(err)
        };
        let unit = pow10(k);
        let rounded = (v / &unit).round().to_integer();
        let value = Decimal::new(rounded, k);
        let total = err + (v - value.to_rational()).abs();
        DecimalEnclosure { value, error_bound: round_up_two_digits(&total) }
    }

    pub fn interval(&self) -> (BigRational, BigRational) {
        let v = self.value.to_rational();
        let e = self.error_bound.to_rational();
        (&v - &e, v + e)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let (lo, hi) = self.interval();
        &lo <= x && x <= &hi
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(EnclosureJson {
            value: self.value.to_fixed(),
            error_bound: self.error_bound.to_scientific(),
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: EnclosureJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let error_bound: Decimal = j.error_bound.parse()?;
        if error_bound.digits.sign() == BigSign::Minus {
            return Err(Error::Parse("negative error bound".into()));
        }
        Ok(DecimalEnclosure { value: j.value.parse()?, error_bound })
    }
}

impl fmt::Display for DecimalEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {}", self.value.to_fixed(), self.error_bound.to_scientific())
    }
}

/// Exact decimal form of `v` if its denominator is `2^a 5^b` and the expansion
/// is short.
fn terminating(v: &BigRational) -> Option<Decimal> {
    let mut d = v.denom().clone();
    let mut k = 0;
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    while d.is_even() {
        d /= &two;
        k += 1;
    }
    let mut m = 0;
    while (&d % &five).is_zero() {
        d /= &five;
        m += 1;
    }
    let places = k.max(m);
    if !d.is_one() || places > EXACT_DIGITS {
        return None;
    }
    let digits = (v * pow10(places)).to_integer();
    Some(Decimal::new(digits, -places))
}
