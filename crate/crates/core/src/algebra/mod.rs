//! Exact arithmetic kernel.

mod character;
mod eval;
mod expanded;
mod factored;
pub mod json;
mod monomial;
mod poly;
mod sum;
mod symbols;

pub use character::WeightCharacter;
pub use eval::{factored_equal, Checker, DEFAULT_SEED};
pub use expanded::ExpandedRational;
pub use factored::{FactoredRational, Factors};
pub use monomial::{Alphabet, Exponents, Monomial, Var};
pub use poly::Poly;
pub use sum::RationalSum;
pub use symbols::{brace, lambda_class, pochhammer, roof, LambdaParam};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
