//! Signed double zeta values `zeta(s, t; sigma, tau)` with `sigma, tau` in
//! `{-1, +1}`: exact finite partial sums, closed-form reduction of odd-weight
//! values to single zeta values, exact verification of the finite identities
//! behind that reduction, and numeric evaluation with rigorous error bounds.
//!
//! Exact work is done over [`Exact`]; numerics are generic over [`Real`] and
//! default to the double-double type [`Dd`].

pub mod error;
pub mod exact;
pub mod expr;
pub mod format;
pub mod identities;
pub mod numeric;
pub mod partial_sums;
pub mod reduction;
pub mod scalar;

pub use error::{Error, Result};
pub use exact::Sign;
pub use expr::{normalize, ZetaAtom, ZetaExpr};
pub use numeric::Enclosure;
pub use partial_sums::{SignedIndex, Truncation};
pub use scalar::{Real, Scalar};

/// Exact rational arithmetic.
pub type Exact = num_rational::BigRational;

/// Double-double working precision (about 106 significant bits).
pub type Dd = twofloat::TwoFloat;

pub type EnclosureDd = Enclosure<Dd>;
pub type EnclosureF64 = Enclosure<f64>;
pub type EnclosureF32 = Enclosure<f32>;
