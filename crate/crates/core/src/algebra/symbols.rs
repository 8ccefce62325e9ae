//! Pochhammer and brace symbols, lambda classes and the roof function.

use num_rational::BigRational;
use num_traits::One;

use super::character::WeightCharacter;
use super::factored::FactoredRational;
use super::monomial::{Exponents, Monomial, Var};
use crate::error::{Error, Result};

/// `(x)_d`. For `d < 0` this is `prod_{m=1}^{-d} 1/(1 - x q^{-m})`.
pub fn pochhammer(x: &Monomial, d: i32) -> Result<FactoredRational> {
    let mut out = FactoredRational::one();
    if d >= 0 {
        for m in 0..d {
            out = out.mul_binomial(&x.mul(&Monomial::q_pow(m)).neg(), 1)?;
        }
    } else {
        for m in 1..=-d {
            let w = x.mul(&Monomial::q_pow(-m));
            if w.is_one() {
                return Err(Error::Domain(format!("({x})_{d}: factor 1 - x*q^-{m} vanishes")));
            }
            out = out.mul_binomial(&w.neg(), -1)?;
        }
    }
    Ok(out)
}

/// `{x}_d = (hbar/x)_d / (q/x)_d`, optionally times `(-q^{1/2} hbar^{-1/2})^d`.
pub fn brace(x: &Monomial, d: i32, normalized: bool) -> Result<FactoredRational> {
    let xi = x.inv()?;
    let num = pochhammer(&Monomial::var(Var::Hbar).mul(&xi), d)?;
    let den = pochhammer(&Monomial::var(Var::Q).mul(&xi), d)?;
    let mut out = num.div(&den)?;
    if !normalized {
        let s = Monomial::from_doubled(-BigRational::one(), [(Var::Q, 1), (Var::Hbar, -1)]);
        out = out.mul_monomial(&s.pow(d)?);
    }
    Ok(out)
}

/// The parameter of a lambda class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaParam {
    FormalY,
    MinusOne,
    Value(Monomial),
}

impl LambdaParam {
    fn value(&self) -> Monomial {
        match self {
            LambdaParam::FormalY => Monomial::var(Var::Y),
            LambdaParam::MinusOne => Monomial::one().neg(),
            LambdaParam::Value(m) => m.clone(),
        }
    }
}

/// `prod (1 + y*mu)^mult`. A weight equal to 1 under `y = -1` gives zero.
pub fn lambda_class(w: &WeightCharacter, y: &LambdaParam) -> Result<FactoredRational> {
    let yv = y.value();
    let mut out = FactoredRational::one();
    for (mu, k) in w.iter() {
        if k < 0 {
            return Err(Error::Domain(format!(
                "lambda class of a virtual character (weight {mu} has multiplicity {k})"
            )));
        }
        out = out.mul_binomial(&yv.mul(&mu), k as i32)?;
    }
    Ok(out)
}

/// `prod s(mu)^mult` with `s(mu) = mu^{-1/2} / (1 - mu^{-1})`, which is the
/// same function as `-mu^{1/2}/(1 - mu)`.
pub fn roof(w: &WeightCharacter) -> Result<FactoredRational> {
    let mut out = FactoredRational::one();
    for (mu, k) in w.iter() {
        if mu.is_one() {
            return Err(Error::Domain("roof of the trivial weight".into()));
        }
        if !mu.exps().is_integral() {
            return Err(Error::Domain(format!("roof of the fractional weight {mu}")));
        }
        let k = k as i32;
        let half = Exponents::from_doubled(mu.exps().iter().map(|&(v, e)| (v, -e / 2 * k)));
        out = out.mul_monomial(&Monomial::new(BigRational::one(), half));
        out = out.mul_binomial(&mu.inv()?.neg(), -k)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::factored_equal;

    fn x() -> Monomial {
        Monomial::var(Var::X(1))
    }

    #[test]
    fn pochhammer_small() {
        assert!(pochhammer(&x(), 0).unwrap().is_one());
        let two = FactoredRational::one_minus(&x()).mul(&FactoredRational::one_minus(&x().times_var(Var::Q, 1)));
        assert_eq!(pochhammer(&x(), 2).unwrap(), two);
        let neg = FactoredRational::inv_one_minus(&x().times_var(Var::Q, -1)).unwrap();
        assert_eq!(pochhammer(&x(), -1).unwrap(), neg);
    }

    #[test]
    fn negative_pochhammer_domain_error() {
        let e = pochhammer(&Monomial::q_pow(2), -3).unwrap_err();
        assert!(e.to_string().contains("q^-2"), "{e}");
    }

    #[test]
    fn brace_values() {
        assert!(brace(&x(), 0, true).unwrap().is_one());
        let h = Monomial::var(Var::Hbar);
        let q = Monomial::var(Var::Q);
        let want = FactoredRational::one_minus(&h).div(&FactoredRational::one_minus(&q)).unwrap();
        assert!(factored_equal(&brace(&Monomial::one(), 1, true).unwrap(), &want));
        // {t2/t1}_{-1} = (1 - t1/t2) / (1 - hbar q^-1 t1/t2)
        let w = Monomial::t_ratio(1, 2).times_var(Var::Q, -1);
        let want = FactoredRational::one_minus(&Monomial::t_ratio(1, 2))
            .div(&FactoredRational::one_minus(&w.mul(&h)))
            .unwrap();
        assert!(factored_equal(&brace(&Monomial::t_ratio(2, 1), -1, true).unwrap(), &want));
    }

    #[test]
    fn brace_unnormalized_prefactor() {
        let b = brace(&Monomial::one(), 2, false).unwrap();
        let n = brace(&Monomial::one(), 2, true).unwrap();
        let ratio = b.div(&n).unwrap();
        assert!(ratio.factors().is_empty());
        assert_eq!(ratio.unit(), &Monomial::from_powers([(Var::Q, 1), (Var::Hbar, -1)]));
    }

    #[test]
    fn lambda_examples() {
        let t1 = Monomial::var(Var::T(1));
        let q = Monomial::var(Var::Q);
        let y = Monomial::var(Var::Y);
        let w = WeightCharacter::from_weights([t1.clone(), q.clone()]);
        let want = FactoredRational::one_plus(&y.mul(&t1)).mul(&FactoredRational::one_plus(&y.mul(&q)));
        assert_eq!(lambda_class(&w, &LambdaParam::FormalY).unwrap(), want);
        assert!(lambda_class(&WeightCharacter::new(), &LambdaParam::FormalY).unwrap().is_one());
        let mut two = WeightCharacter::new();
        two.add_weight(&q, 2);
        assert_eq!(
            lambda_class(&two, &LambdaParam::FormalY).unwrap(),
            FactoredRational::one_plus(&y.mul(&q)).pow(2).unwrap()
        );
        let mut virt = WeightCharacter::new();
        virt.add_weight(&q, -1);
        assert!(lambda_class(&virt, &LambdaParam::FormalY).is_err());
        assert!(lambda_class(&WeightCharacter::from_weights([Monomial::one()]), &LambdaParam::MinusOne)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn roof_single_weight() {
        // 1/(x^{1/2} - x^{-1/2}) = x^{1/2}/(x - 1)
        let w = WeightCharacter::from_weights([x()]);
        let r = roof(&w).unwrap();
        let half = Monomial::from_doubled(BigRational::one(), [(Var::X(1), 1)]);
        let want = FactoredRational::monomial(half.neg()).mul(&FactoredRational::inv_one_minus(&x()).unwrap());
        assert!(factored_equal(&r, &want));
        let mut zero = WeightCharacter::new();
        zero.add_weight(&x(), 1);
        zero.add_weight(&x(), -1);
        assert!(roof(&zero).unwrap().is_one());
        assert!(roof(&WeightCharacter::from_weights([Monomial::one()])).is_err());
    }
}
