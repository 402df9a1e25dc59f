//! Floating-point evaluation with rigorous absolute error bounds.

mod double;
mod enclosure;
mod eval;
mod single;

pub use double::{
    direct_tolerance_floor, double_tail_bound, double_zeta_direct, double_zeta_direct_with, DirectEvaluation, DirectOptions,
    DEFAULT_MAX_TERMS,
};
pub use enclosure::Enclosure;
pub use eval::{eval_expr, eval_expr_with};
pub use single::{
    ln2, zeta_direct, zeta_euler_maclaurin, zeta_single_value, SingleMethod, SingleOptions, AUTO_DIRECT_TERMS,
    DIRECT_TERM_LIMIT,
};

/// `pi^2 / 6` rounded up.
pub const ZETA2_UPPER: f64 = 1.644934066848227;
