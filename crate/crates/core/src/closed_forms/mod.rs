//! Exact Gauss sums and Gaussian periods in the cases where a formula is known.

mod index2;
mod periods;
mod quadratic;
mod semiprimitive;

pub use index2::{index2_params, index2_params_nominal, IndexTwoParams};
pub use periods::{
    cubic_roots, order3_roots, order4_roots, periods_order2, period_poly_order3, period_poly_order4, quadratic_character_sum_closed,
    quadratic_gauss_sum, quartic_roots, ClosedQuadraticSum, PeriodPolynomial,
};
pub use quadratic::QuadraticValue;
pub use semiprimitive::{
    semiprimitive_gauss_sum, semiprimitive_gauss_sums, semiprimitive_periods, SemiprimitivePeriods,
};

use num_bigint::{BigInt, BigUint};

pub(crate) fn big_pow(base: u64, exp: u64) -> BigInt {
    BigInt::from(BigUint::from(base).pow(exp as u32))
}
