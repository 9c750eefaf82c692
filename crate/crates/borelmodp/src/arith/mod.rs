//! Exact base arithmetic: the coefficient field, truncated p-adic integers,
//! Q_p elements and base-p binomial combinatorics.

mod comb;
mod field;
mod padic;
mod qp;

pub use comb::{
    digit_profile, digits, has_full_digit_period, is_primitive, lucas_binom, neg_binom, padic_binom,
    primitive_exponents, DigitProfile,
};
pub use field::{is_irreducible, is_prime, smallest_irreducible, Field, FieldConfig, FieldElem};
pub use padic::{PadicInt, DEFAULT_PREC_P};
pub use qp::Qp;
