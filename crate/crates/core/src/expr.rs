//! Exact linear combinations of products of single zeta symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Sign;

/// Longest product of atoms a term may carry.
pub const MAX_PRODUCT_LEN: usize = 2;

/// The symbol `zeta(n; sigma)`.
///
/// `zeta(0; sigma)` stands for `-1/2` and `zeta(1; +1)` for `0` under the
/// regularization convention; both are eliminated by [`normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZetaAtom {
    arg: u32,
    sign: Sign,
}

impl ZetaAtom {
    pub fn new(arg: u32, sign: Sign) -> Self {
        ZetaAtom { arg, sign }
    }

    /// Unsigned `zeta(n)`.
    pub fn plain(arg: u32) -> Self {
        ZetaAtom::new(arg, Sign::Plus)
    }

    pub fn arg(self) -> u32 {
        self.arg
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn is_zeta_one(self) -> bool {
        self.arg == 1 && self.sign.is_plus()
    }
}

impl fmt::Display for ZetaAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "zeta({})", self.arg),
            Sign::Minus => write!(f, "zeta({};-1)", self.arg),
        }
    }
}

/// One term `coeff * atom_1 * ... * atom_k`, `k <= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    coeff: BigRational,
    atoms: Vec<ZetaAtom>,
}

impl Term {
    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn atoms(&self) -> &[ZetaAtom] {
        &self.atoms
    }
}

/// A rational linear combination of products of [`ZetaAtom`]s.
///
/// Expressions returned by the reducers and by [`normalize`] are in canonical
/// form, so structural equality is value equality of the symbolic form.
/// Arithmetic (`+`, `-`, [`ZetaExpr::scale`], [`ZetaExpr::try_mul`]) returns
/// raw expressions that should be normalized before comparison.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZetaExpr {
    terms: Vec<Term>,
    zeta_one_convention: bool,
}

impl ZetaExpr {
    pub fn zero() -> Self {
        ZetaExpr::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut e = ZetaExpr::zero();
        e.push_term(c, Vec::new()).expect("empty product");
        e
    }

    pub fn atom(a: ZetaAtom) -> Self {
        ZetaExpr::monomial(BigRational::one(), &[a]).expect("single atom")
    }

    pub fn monomial(coeff: BigRational, atoms: &[ZetaAtom]) -> Result<Self> {
        let mut e = ZetaExpr::zero();
        e.push_term(coeff, atoms.to_vec())?;
        Ok(e)
    }

    /// Appends a raw term. Products longer than two atoms are rejected.
    pub fn push_term(&mut self, coeff: BigRational, atoms: Vec<ZetaAtom>) -> Result<()> {
        if atoms.len() > MAX_PRODUCT_LEN {
            return Err(Error::pre(format!(
                "products of more than {MAX_PRODUCT_LEN} atoms are not supported"
            )));
        }
        self.terms.push(Term { coeff, atoms });
        Ok(())
    }

    /// Marks the expression as interpreting `zeta(1;+1)` as zero.
    pub fn with_zeta_one_convention(mut self) -> Self {
        self.zeta_one_convention = true;
        self
    }

    pub fn uses_zeta_one_convention(&self) -> bool {
        self.zeta_one_convention
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero())
    }

    /// Every distinct atom, sorted.
    pub fn atoms(&self) -> Vec<ZetaAtom> {
        let mut out: Vec<ZetaAtom> = self.terms.iter().flat_map(|t| t.atoms.iter().copied()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn scale(mut self, c: &BigRational) -> Self {
        for t in &mut self.terms {
            t.coeff = &t.coeff * c;
        }
        self
    }

    /// Product of two expressions; fails if a product would exceed two atoms.
    pub fn try_mul(&self, other: &ZetaExpr) -> Result<ZetaExpr> {
        let mut out = ZetaExpr::zero();
        out.zeta_one_convention = self.zeta_one_convention || other.zeta_one_convention;
        for a in &self.terms {
            for b in &other.terms {
                let mut atoms = a.atoms.clone();
                atoms.extend_from_slice(&b.atoms);
                out.push_term(&a.coeff * &b.coeff, atoms)?;
            }
        }
        Ok(out)
    }

    pub fn is_normalized(&self) -> bool {
        match normalize(self) {
            Ok(n) => n == *self,
            Err(_) => false,
        }
    }
}

impl Add for ZetaExpr {
    type Output = ZetaExpr;

    fn add(mut self, rhs: ZetaExpr) -> ZetaExpr {
        self.zeta_one_convention |= rhs.zeta_one_convention;
        self.terms.extend(rhs.terms);
        self
    }
}

impl Neg for ZetaExpr {
    type Output = ZetaExpr;

    fn neg(self) -> ZetaExpr {
        self.scale(&-BigRational::one())
    }
}

impl Sub for ZetaExpr {
    type Output = ZetaExpr;

    fn sub(self, rhs: ZetaExpr) -> ZetaExpr {
        self + (-rhs)
    }
}

/// Canonical form.
///
/// Rewrites `zeta(0;sigma)` to the factor `-1/2`, deletes terms containing
/// `zeta(1;+1)` when the convention flag is set, sorts atoms within terms,
/// merges like terms, drops zero coefficients and sorts terms by product
/// length and then by atoms. Idempotent.
pub fn normalize(e: &ZetaExpr) -> Result<ZetaExpr> {
    let minus_half = BigRational::new((-1).into(), 2.into());
    let mut merged: BTreeMap<(usize, Vec<ZetaAtom>), BigRational> = BTreeMap::new();
    'terms: for term in &e.terms {
        let mut coeff = term.coeff.clone();
        let mut atoms = Vec::with_capacity(term.atoms.len());
        for &a in &term.atoms {
            if a.arg == 0 {
                coeff *= &minus_half;
            } else if a.is_zeta_one() {
                if e.zeta_one_convention {
                    continue 'terms;
                }
                return Err(Error::UnflaggedZetaOne);
            } else {
                atoms.push(a);
            }
        }
        if coeff.is_zero() {
            continue;
        }
        atoms.sort();
        let slot = merged.entry((atoms.len(), atoms)).or_insert_with(BigRational::zero);
        *slot += coeff;
    }
    let terms = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((_, atoms), coeff)| Term { coeff, atoms })
        .collect();
    Ok(ZetaExpr { terms, zeta_one_convention: e.zeta_one_convention })
}

impl fmt::Display for ZetaExpr {
    /// Plain-text form, e.g. `3/2*zeta(4) - 1/2*zeta(2)^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let negative = term.coeff.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = term.coeff.abs();
            let product = atom_product_text(&term.atoms);
            match (magnitude.is_one(), product.is_empty()) {
                (_, true) => write!(f, "{magnitude}")?,
                (true, false) => f.write_str(&product)?,
                (false, false) => write!(f, "{magnitude}*{product}")?,
            }
        }
        Ok(())
    }
}

fn atom_product_text(atoms: &[ZetaAtom]) -> String {
    match atoms {
        [a, b] if a == b => format!("{a}^2"),
        _ => atoms.iter().map(ZetaAtom::to_string).collect::<Vec<_>>().join("*"),
    }
}
