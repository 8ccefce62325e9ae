use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::expanded::ExpandedRational;
use super::monomial::{Alphabet, Monomial, Var};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Multiset of binomials `(1 + c*m)` keyed by the monomial `c*m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factors(BTreeMap<Monomial, i32>);

impl Factors {
    pub fn new() -> Factors {
        Factors::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, i32)> {
        self.0.iter().map(|(m, e)| (m, *e))
    }

    pub fn get(&self, cm: &Monomial) -> i32 {
        self.0.get(cm).copied().unwrap_or(0)
    }

    /// Adds `e` to the exponent of `(1 + cm)`; `cm` must be non-constant.
    pub fn insert(&mut self, cm: Monomial, e: i32) {
        debug_assert!(!cm.is_constant());
        if e == 0 {
            return;
        }
        let slot = self.0.entry(cm).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.0.retain(|_, v| *v != 0);
        }
    }

    pub fn merge(&mut self, other: &Factors) {
        for (m, e) in other.iter() {
            self.insert(m.clone(), e);
        }
    }

    pub fn inv(&self) -> Factors {
        Factors(self.0.iter().map(|(m, e)| (m.clone(), -e)).collect())
    }

    /// Product of the binomials raised to nonnegative exponents.
    pub fn expand_nonnegative(&self) -> Poly {
        let mut p = Poly::one();
        for (m, e) in self.iter() {
            debug_assert!(e >= 0);
            p = p.mul_binomial_pow(m, e as u32);
        }
        p
    }

    /// Orients every binomial so its exponent vector is lexicographically
    /// positive, returning the unit picked up: `1 + c*m = c*m * (1 + 1/(c*m))`.
    pub fn oriented(&self) -> (Monomial, Factors) {
        let mut unit = Monomial::one();
        let mut out = Factors::new();
        for (m, e) in self.iter() {
            if m.exps().leading_sign() < 0 {
                unit = unit.mul(&m.pow(e).expect("binomial key is nonzero"));
                out.insert(m.inv().expect("binomial key is nonzero"), e);
            } else {
                out.insert(m.clone(), e);
            }
        }
        (unit, out)
    }
}

/// A unit monomial times a product of binomials `(1 + c*m)^e`.
///
/// Binomials are kept exactly as constructed; `(1 - m)` and `-m(1 - 1/m)`
/// are different representations of the same function, and `balance`
/// depends on which one is stored. Orientation is only normalized inside
/// equality tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredRational {
    unit: Monomial,
    factors: Factors,
}

impl Default for FactoredRational {
    fn default() -> Self {
        FactoredRational::one()
    }
}

impl FactoredRational {
    pub fn one() -> FactoredRational {
        FactoredRational { unit: Monomial::one(), factors: Factors::new() }
    }

    pub fn zero() -> FactoredRational {
        FactoredRational { unit: Monomial::constant(BigRational::zero()), factors: Factors::new() }
    }

    pub fn monomial(m: Monomial) -> FactoredRational {
        FactoredRational { unit: m, factors: Factors::new() }
    }

    pub fn from_parts(unit: Monomial, factors: Factors) -> FactoredRational {
        if unit.is_zero() {
            return FactoredRational::zero();
        }
        FactoredRational { unit, factors }
    }

    /// `(1 + cm)^e`.
    pub fn binomial_pow(cm: &Monomial, e: i32) -> Result<FactoredRational> {
        FactoredRational::one().mul_binomial(cm, e)
    }

    /// `1 + cm`.
    pub fn one_plus(cm: &Monomial) -> FactoredRational {
        FactoredRational::binomial_pow(cm, 1).expect("positive exponent cannot fail")
    }

    /// `1 - m`.
    pub fn one_minus(m: &Monomial) -> FactoredRational {
        FactoredRational::one_plus(&m.neg())
    }

    /// `1 / (1 - m)`.
    pub fn inv_one_minus(m: &Monomial) -> Result<FactoredRational> {
        FactoredRational::binomial_pow(&m.neg(), -1)
    }

    pub fn unit(&self) -> &Monomial {
        &self.unit
    }

    pub fn factors(&self) -> &Factors {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Structural identity with 1.
    pub fn is_one(&self) -> bool {
        self.unit.is_one() && self.factors.is_empty()
    }

    /// Multiplies by `(1 + cm)^e`, folding constants into the unit.
    pub fn mul_binomial(mut self, cm: &Monomial, e: i32) -> Result<FactoredRational> {
        if e == 0 || self.is_zero() {
            return Ok(self);
        }
        if cm.is_zero() {
            return Ok(self);
        }
        if cm.is_constant() {
            let v = BigRational::one() + cm.coeff();
            if v.is_zero() {
                if e < 0 {
                    return Err(Error::DivisionByZero(format!("factor (1 + {cm}) vanishes")));
                }
                return Ok(FactoredRational::zero());
            }
            self.unit = self.unit.scale(&num_traits::pow::Pow::pow(&v, e));
            return Ok(self);
        }
        self.factors.insert(cm.clone(), e);
        Ok(self)
    }

    pub fn mul(&self, other: &FactoredRational) -> FactoredRational {
        if self.is_zero() || other.is_zero() {
            return FactoredRational::zero();
        }
        let mut factors = self.factors.clone();
        factors.merge(&other.factors);
        FactoredRational { unit: self.unit.mul(&other.unit), factors }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> FactoredRational {
        FactoredRational::from_parts(self.unit.mul(m), self.factors.clone())
    }

    pub fn inv(&self) -> Result<FactoredRational> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero".into()));
        }
        Ok(FactoredRational { unit: self.unit.inv()?, factors: self.factors.inv() })
    }

    pub fn div(&self, other: &FactoredRational) -> Result<FactoredRational> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<FactoredRational> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = FactoredRational::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Copy with every binomial oriented canonically; same function.
    pub fn normalized(&self) -> FactoredRational {
        if self.is_zero() {
            return self.clone();
        }
        let (u, factors) = self.factors.oriented();
        FactoredRational { unit: self.unit.mul(&u), factors }
    }

    /// Numerator over denominator as polynomials.
    pub fn expand(&self) -> ExpandedRational {
        let mut num = Poly::from_monomial(&self.unit);
        let mut den = Poly::one();
        for (m, e) in self.factors.iter() {
            if e > 0 {
                num = num.mul_binomial_pow(m, e as u32);
            } else {
                den = den.mul_binomial_pow(m, (-e) as u32);
            }
        }
        ExpandedRational::new(num, den).expect("binomial denominators are nonzero")
    }

    pub fn substitute(&self, v: Var, value: &Monomial) -> Result<FactoredRational> {
        let mut out = FactoredRational::monomial(self.unit.substitute(v, value)?);
        for (m, e) in self.factors.iter() {
            out = out.mul_binomial(&m.substitute(v, value)?, e)?;
        }
        Ok(out)
    }

    /// Sets `v = 0`; fails if `v` occurs with a negative power anywhere.
    pub fn substitute_zero(&self, v: Var) -> Result<FactoredRational> {
        let pole = || Error::Domain(format!("{v} = 0 is a pole"));
        let ue = self.unit.exps().get(v);
        if ue < 0 {
            return Err(pole());
        }
        let mut out = if ue > 0 { FactoredRational::zero() } else { FactoredRational::monomial(self.unit.clone()) };
        for (m, e) in self.factors.iter() {
            match m.exps().get(v) {
                0 => out = out.mul_binomial(m, e)?,
                x if x > 0 => {}
                _ => return Err(pole()),
            }
        }
        if ue > 0 {
            return Ok(FactoredRational::zero());
        }
        Ok(out)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self
            .unit
            .exps()
            .vars()
            .chain(self.factors.iter().flat_map(|(m, _)| m.exps().vars().collect::<Vec<_>>()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn check_alphabet(&self, a: &Alphabet) -> Result<()> {
        self.vars().into_iter().try_for_each(|v| a.check(v))
    }
}

impl From<Monomial> for FactoredRational {
    fn from(m: Monomial) -> FactoredRational {
        FactoredRational::monomial(m)
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num: Vec<_> = self.factors.iter().filter(|(_, e)| *e > 0).collect();
        let den: Vec<_> = self.factors.iter().filter(|(_, e)| *e < 0).collect();
        let show = |f: &mut fmt::Formatter<'_>, m: &Monomial, e: i32| -> fmt::Result {
            let s = m.to_string();
            if let Some(rest) = s.strip_prefix('-') {
                write!(f, "(1 - {rest})")?;
            } else {
                write!(f, "(1 + {s})")?;
            }
            if e.abs() != 1 {
                write!(f, "^{}", e.abs())?;
            }
            Ok(())
        };
        if !self.unit.is_one() || num.is_empty() {
            write!(f, "{}", self.unit)?;
        }
        for (m, e) in &num {
            show(f, m, *e)?;
        }
        if !den.is_empty() {
            write!(f, "/(")?;
            for (m, e) in &den {
                show(f, m, *e)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn q() -> Monomial {
        Monomial::var(Var::Q)
    }

    #[test]
    fn constant_binomials_fold() {
        let f = FactoredRational::one_plus(&Monomial::constant(rat(2)));
        assert!(f.factors().is_empty());
        assert_eq!(f.unit().coeff(), &rat(3));
        let z = FactoredRational::one_minus(&Monomial::one());
        assert!(z.is_zero());
        assert!(FactoredRational::inv_one_minus(&Monomial::one()).is_err());
    }

    #[test]
    fn multiplicities_merge() {
        let a = FactoredRational::one_minus(&q());
        let b = a.mul(&a).mul(&a.inv().unwrap());
        assert_eq!(b, a);
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn orientation_keeps_value() {
        let m = Monomial::t_ratio(2, 1);
        let f = FactoredRational::one_minus(&m);
        let n = f.normalized();
        assert_eq!(n.factors().get(&Monomial::t_ratio(1, 2).neg()), 1);
        assert!(f.expand().equals(&n.expand()));
    }

    #[test]
    fn substitution_can_vanish() {
        let f = FactoredRational::one_minus(&Monomial::var(Var::P(1)).mul(&Monomial::from_powers([(Var::T(1), -1)])));
        let g = f.substitute(Var::P(1), &Monomial::var(Var::T(1))).unwrap();
        assert!(g.is_zero());
        assert!(f.inv().unwrap().substitute(Var::P(1), &Monomial::var(Var::T(1))).is_err());
    }

    #[test]
    fn zero_substitution() {
        let h = Monomial::var(Var::Hbar);
        let f = FactoredRational::one_minus(&h).div(&FactoredRational::one_minus(&q())).unwrap();
        let g = f.substitute_zero(Var::Hbar).unwrap();
        assert_eq!(g, FactoredRational::inv_one_minus(&q()).unwrap());
        assert!(FactoredRational::monomial(h.inv().unwrap()).substitute_zero(Var::Hbar).is_err());
    }
}
