use std::fmt;

use super::poly::Poly;
use crate::error::{Error, Result};

/// Quotient of two Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedRational {
    pub num: Poly,
    pub den: Poly,
}

impl ExpandedRational {
    pub fn new(num: Poly, den: Poly) -> Result<ExpandedRational> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("zero denominator".into()));
        }
        Ok(ExpandedRational { num, den })
    }

    pub fn from_poly(p: Poly) -> ExpandedRational {
        ExpandedRational { num: p, den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `a/b == c/d` iff `a*d - c*b == 0`.
    pub fn equals(&self, other: &ExpandedRational) -> bool {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }
}

impl fmt::Display for ExpandedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
