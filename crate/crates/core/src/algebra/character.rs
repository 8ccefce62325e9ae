use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::monomial::{Exponents, Monomial};

/// Formal integer combination of torus weights.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeightCharacter {
    terms: BTreeMap<Exponents, i64>,
}

impl WeightCharacter {
    pub fn new() -> WeightCharacter {
        WeightCharacter::default()
    }

    pub fn from_weights<I: IntoIterator<Item = Monomial>>(ws: I) -> WeightCharacter {
        let mut c = WeightCharacter::new();
        for w in ws {
            c.add_weight(&w, 1);
        }
        c
    }

    /// Adds `mult * w`; the coefficient of `w` is ignored.
    pub fn add_weight(&mut self, w: &Monomial, mult: i64) {
        if mult == 0 {
            return;
        }
        let slot = self.terms.entry(w.exps().clone()).or_insert(0);
        *slot += mult;
        if *slot == 0 {
            self.terms.remove(w.exps());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(e, k)| (Monomial::new(BigRational::one(), e.clone()), *k))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of multiplicities.
    pub fn dim(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|k| *k > 0)
    }

    pub fn multiplicity(&self, w: &Monomial) -> i64 {
        self.terms.get(w.exps()).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &WeightCharacter) -> WeightCharacter {
        let mut out = self.clone();
        for (w, k) in other.iter() {
            out.add_weight(&w, k);
        }
        out
    }

    pub fn sub(&self, other: &WeightCharacter) -> WeightCharacter {
        let mut out = self.clone();
        for (w, k) in other.iter() {
            out.add_weight(&w, -k);
        }
        out
    }

    /// Every weight inverted.
    pub fn dual(&self) -> WeightCharacter {
        WeightCharacter { terms: self.terms.iter().map(|(e, k)| (e.inv(), *k)).collect() }
    }

    /// Every weight multiplied by `m`.
    pub fn twist(&self, m: &Monomial) -> WeightCharacter {
        WeightCharacter { terms: self.terms.iter().map(|(e, k)| (e.mul(m.exps()), *k)).collect() }
    }

    /// Tensor product.
    pub fn mul(&self, other: &WeightCharacter) -> WeightCharacter {
        let mut out = WeightCharacter::new();
        for (a, j) in self.iter() {
            for (b, k) in other.iter() {
                out.add_weight(&a.mul(&b), j * k);
            }
        }
        out
    }
}

impl fmt::Display for WeightCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, k)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if k != 1 {
                write!(f, "{k}*")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}
