//! Function algebra: atoms, sums and products on the poly-half-plane.

mod dsl;
mod expr;
mod poly;
mod sup;

pub use dsl::{fmt_complex, fmt_num};
pub use expr::{is_integer_power, pow_neg, ExpAtom, FnExpr, Node, ResLin};
pub use poly::{Monomial, Poly};
pub use sup::{sup_norm, sup_on_lines, sup_search, SupOptions};
