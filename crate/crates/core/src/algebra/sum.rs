use std::collections::BTreeMap;
use std::fmt;

use super::eval::Checker;
use super::expanded::ExpandedRational;
use super::factored::{FactoredRational, Factors};
use super::monomial::{Monomial, Var};
use super::poly::Poly;
use crate::error::Result;

/// A finite sum of `poly * prod (1 + c*m)^e`, used for series coefficients
/// where terms with different denominators accumulate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalSum {
    terms: BTreeMap<Factors, Poly>,
}

impl RationalSum {
    pub fn zero() -> RationalSum {
        RationalSum::default()
    }

    pub fn one() -> RationalSum {
        RationalSum::from_factored(&FactoredRational::one())
    }

    pub fn from_factored(f: &FactoredRational) -> RationalSum {
        let mut s = RationalSum::zero();
        s.add_term(f.factors().clone(), Poly::from_monomial(f.unit()));
        s
    }

    pub fn from_poly(p: Poly) -> RationalSum {
        let mut s = RationalSum::zero();
        s.add_term(Factors::new(), p);
        s
    }

    fn add_term(&mut self, f: Factors, p: Poly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(f).or_default();
        *slot = slot.add(&p);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Structurally empty. Use [`RationalSum::is_zero`] for the value test.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Factors, &Poly)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &RationalSum) -> RationalSum {
        let mut out = self.clone();
        for (f, p) in &other.terms {
            out.add_term(f.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &RationalSum) -> RationalSum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalSum {
        RationalSum { terms: self.terms.iter().map(|(f, p)| (f.clone(), p.neg())).collect() }
    }

    pub fn add_factored(&mut self, f: &FactoredRational) {
        self.add_term(f.factors().clone(), Poly::from_monomial(f.unit()));
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalSum {
        let mut out = RationalSum::zero();
        for (f, q) in &self.terms {
            out.add_term(f.clone(), q.mul(p));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> RationalSum {
        let mut out = RationalSum::zero();
        for (f, q) in &self.terms {
            out.add_term(f.clone(), q.mul_monomial(m));
        }
        out
    }

    pub fn mul_factored(&self, g: &FactoredRational) -> RationalSum {
        if g.is_zero() {
            return RationalSum::zero();
        }
        let mut out = RationalSum::zero();
        for (f, q) in &self.terms {
            let mut h = f.clone();
            h.merge(g.factors());
            out.add_term(h, q.mul_monomial(g.unit()));
        }
        out
    }

    pub fn substitute(&self, v: Var, value: &Monomial) -> Result<RationalSum> {
        let mut out = RationalSum::zero();
        for (f, p) in &self.terms {
            let g = FactoredRational::from_parts(Monomial::one(), f.clone()).substitute(v, value)?;
            let p = p.substitute(v, value)?;
            out.add_term(g.factors().clone(), p.mul_monomial(g.unit()));
        }
        Ok(out)
    }

    /// Sets `v = 0` termwise.
    pub fn substitute_zero(&self, v: Var) -> Result<RationalSum> {
        let mut out = RationalSum::zero();
        for (f, p) in &self.terms {
            let g = FactoredRational::from_parts(Monomial::one(), f.clone()).substitute_zero(v)?;
            let p = p.substitute_zero(v)?;
            if !g.is_zero() {
                out.add_term(g.factors().clone(), p.mul_monomial(g.unit()));
            }
        }
        Ok(out)
    }

    /// Same value with oriented binomials and merged terms.
    fn normalized(&self) -> RationalSum {
        let mut out = RationalSum::zero();
        for (f, p) in &self.terms {
            let (u, g) = f.oriented();
            out.add_term(g, p.mul_monomial(&u));
        }
        out
    }

    /// Combines everything over the common denominator.
    pub fn expand(&self) -> ExpandedRational {
        let n = self.normalized();
        if n.terms.is_empty() {
            return ExpandedRational::from_poly(Poly::zero());
        }
        let mut lo: BTreeMap<&Monomial, i32> = BTreeMap::new();
        for f in n.terms.keys() {
            for (m, _) in f.iter() {
                lo.entry(m).or_insert(0);
            }
        }
        for (m, low) in lo.iter_mut() {
            *low = n.terms.keys().map(|f| f.get(m)).min().unwrap_or(0);
        }
        let mut num = Poly::zero();
        for (f, p) in &n.terms {
            let mut rest = Factors::new();
            for (m, low) in &lo {
                rest.insert((*m).clone(), f.get(m) - low);
            }
            num = num.add(&p.mul(&rest.expand_nonnegative()));
        }
        let mut den = Poly::one();
        let mut common = Poly::one();
        for (m, low) in &lo {
            if *low < 0 {
                den = den.mul_binomial_pow(m, (-low) as u32);
            } else {
                common = common.mul_binomial_pow(m, *low as u32);
            }
        }
        ExpandedRational::new(num.mul(&common), den).expect("binomials are nonzero")
    }

    /// Exact zero test: cancel identical terms, try a modular witness, then
    /// expand over the common denominator.
    pub fn is_zero(&self, checker: &Checker) -> bool {
        let n = self.normalized();
        match n.terms.len() {
            0 => return true,
            1 => return false,
            _ => {}
        }
        let facs: Vec<(Poly, FactoredRational)> = n
            .terms
            .iter()
            .map(|(f, p)| (p.clone(), FactoredRational::from_parts(Monomial::one(), f.clone())))
            .collect();
        let mut vars: Vec<Var> = facs.iter().flat_map(|(p, f)| p.vars().chain(f.vars())).collect();
        vars.sort();
        vars.dedup();
        if checker.surely_nonzero(facs.iter().map(|(p, f)| (p, f)), &vars) {
            return false;
        }
        n.expand().is_zero()
    }

    pub fn equals(&self, other: &RationalSum, checker: &Checker) -> bool {
        self.sub(other).is_zero(checker)
    }

    /// The single factored term, if the sum has one.
    pub fn as_factored(&self) -> Option<FactoredRational> {
        if self.terms.is_empty() {
            return Some(FactoredRational::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (f, p) = self.terms.iter().next()?;
        Some(FactoredRational::from_parts(p.as_monomial()?, f.clone()))
    }
}

impl From<FactoredRational> for RationalSum {
    fn from(f: FactoredRational) -> RationalSum {
        RationalSum::from_factored(&f)
    }
}

impl fmt::Display for RationalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (fs, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let g = FactoredRational::from_parts(Monomial::one(), fs.clone());
            write!(f, "[{p}]*{g}")?;
        }
        Ok(())
    }
}
