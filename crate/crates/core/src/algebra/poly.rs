use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::monomial::{Exponents, Monomial, Var};
use crate::error::Result;

/// Sparse Laurent polynomial with exact rational coefficients.
///
/// Exponents live on the doubled lattice, which is the same as working in
/// the square roots of the variables; no separate substitution is needed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Exponents, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::from_monomial(&Monomial::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::from_monomial(&Monomial::constant(c))
    }

    pub fn from_monomial(m: &Monomial) -> Poly {
        let mut p = Poly::zero();
        p.add_term(m.exps().clone(), m.coeff().clone());
        p
    }

    /// `1 + m`.
    pub fn one_plus(m: &Monomial) -> Poly {
        let mut p = Poly::one();
        p.add_term(m.exps().clone(), m.coeff().clone());
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().map(|(e, c)| e.is_one() && c.is_one()).unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial::new(c.clone(), e.clone()))
    }

    /// The single monomial if this polynomial has exactly one term.
    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        if m.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, c)| (e.mul(m.exps()), c * m.coeff())).collect() }
    }

    /// `self * (1 + m)^k` for `k >= 0`.
    pub fn mul_binomial_pow(&self, m: &Monomial, k: u32) -> Poly {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.add(&out.mul_monomial(m));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn substitute(&self, v: Var, value: &Monomial) -> Result<Poly> {
        let mut out = Poly::zero();
        for m in self.terms() {
            let s = m.substitute(v, value)?;
            out.add_term(s.exps().clone(), s.coeff().clone());
        }
        Ok(out)
    }

    /// Sets `v = 0`; fails on a negative power of `v`.
    pub fn substitute_zero(&self, v: Var) -> Result<Poly> {
        let mut out = Poly::zero();
        for m in self.terms() {
            match m.exps().get(v) {
                0 => out.add_term(m.exps().clone(), m.coeff().clone()),
                e if e > 0 => {}
                _ => return Err(crate::Error::Domain(format!("{v} = 0 is a pole"))),
            }
        }
        Ok(out)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.keys().flat_map(|e| e.vars())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl From<Monomial> for Poly {
    fn from(m: Monomial) -> Poly {
        Poly::from_monomial(&m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn difference_of_squares() {
        let q = Monomial::var(Var::Q);
        let lhs = Poly::one_plus(&q.neg()).mul(&Poly::one_plus(&q));
        let rhs = Poly::one_plus(&q.pow(2).unwrap().neg());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn half_powers_square_cleanly() {
        let s = Monomial::from_doubled(rat(1), [(Var::Q, 1)]);
        let p = Poly::one_plus(&s).mul(&Poly::one_plus(&s.neg()));
        assert!(p.terms().all(|m| m.exps().is_integral()));
        assert_eq!(p, Poly::one_plus(&Monomial::var(Var::Q).neg()));
    }

    #[test]
    fn cancellation_drops_terms() {
        let q = Poly::from_monomial(&Monomial::var(Var::Q));
        assert!(q.sub(&q).is_zero());
        assert!(Poly::one().is_one());
    }
}
