//! Exact arithmetic substrate: coefficient rings, matrices, finite fields and LLL.

pub mod finite_field;
pub mod lll;
pub mod matrix;
pub mod scalar;

pub use finite_field::{eigenvalue_orders, ExtFieldElem, FpPoly, MultiplicativeOrder};
pub use lll::{lll_reduce, LllParams};
pub use matrix::Matrix;
pub use scalar::{Fp, ModInt, Rational, Scalar};
