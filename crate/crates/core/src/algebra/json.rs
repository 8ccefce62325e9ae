//! JSON shapes.
//!
//! * monomial: `{"coeff": "-3/2", "exponents": {"q": 1, "t1": -2}}`, exponents doubled
//! * factored: `{"unit": <monomial>, "factors": [{"binomial": {"coeff": "-1", "monomial": {"q": 2}}, "exp": -1}]}`,
//!   each binomial meaning `1 + coeff * monomial`
//! * character: `[{"weight": {"q": -2}, "mult": 1}]`
//! * polynomial: list of monomials; expanded rational: `{"num": .., "den": ..}`

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::character::WeightCharacter;
use super::expanded::ExpandedRational;
use super::factored::{FactoredRational, Factors};
use super::monomial::{Exponents, Monomial, Var};
use super::poly::Poly;
use crate::error::{Error, Result};

type ExpMap = BTreeMap<String, i32>;

fn exps_out(e: &Exponents) -> ExpMap {
    e.iter().map(|(v, k)| (v.to_string(), *k)).collect()
}

fn exps_in(m: &ExpMap) -> Result<Exponents> {
    let pairs: Result<Vec<(Var, i32)>> = m.iter().map(|(v, k)| Ok((Var::from_str(v)?, *k))).collect();
    Ok(Exponents::from_doubled(pairs?))
}

fn rat_in(s: &str) -> Result<BigRational> {
    BigRational::from_str(s).map_err(|_| Error::Invalid(format!("bad rational `{s}`")))
}

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    coeff: String,
    exponents: ExpMap,
}

impl From<&Monomial> for MonomialJson {
    fn from(m: &Monomial) -> Self {
        MonomialJson { coeff: m.coeff().to_string(), exponents: exps_out(m.exps()) }
    }
}

impl MonomialJson {
    fn parse(&self) -> Result<Monomial> {
        Ok(Monomial::new(rat_in(&self.coeff)?, exps_in(&self.exponents)?))
    }
}

#[derive(Serialize, Deserialize)]
struct BinomialJson {
    coeff: String,
    monomial: ExpMap,
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    binomial: BinomialJson,
    exp: i32,
}

#[derive(Serialize, Deserialize)]
struct FactoredJson {
    unit: MonomialJson,
    factors: Vec<FactorJson>,
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    weight: ExpMap,
    mult: i64,
}

#[derive(Serialize, Deserialize)]
struct ExpandedJson {
    num: Vec<MonomialJson>,
    den: Vec<MonomialJson>,
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonomialJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MonomialJson::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for FactoredRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactoredJson {
            unit: MonomialJson::from(self.unit()),
            factors: self
                .factors()
                .iter()
                .map(|(m, e)| FactorJson {
                    binomial: BinomialJson { coeff: m.coeff().to_string(), monomial: exps_out(m.exps()) },
                    exp: e,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactoredRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FactoredJson::deserialize(d)?;
        let build = || -> Result<FactoredRational> {
            let mut f = FactoredRational::monomial(j.unit.parse()?);
            for fj in &j.factors {
                let m = Monomial::new(rat_in(&fj.binomial.coeff)?, exps_in(&fj.binomial.monomial)?);
                f = f.mul_binomial(&m, fj.exp)?;
            }
            Ok(f)
        };
        build().map_err(serde::de::Error::custom)
    }
}

impl Serialize for WeightCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<WeightJson> = self.iter().map(|(w, k)| WeightJson { weight: exps_out(w.exps()), mult: k }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<WeightJson>::deserialize(d)?;
        let mut c = WeightCharacter::new();
        for w in v {
            let e = exps_in(&w.weight).map_err(serde::de::Error::custom)?;
            c.add_weight(&Monomial::new(BigRational::one(), e), w.mult);
        }
        Ok(c)
    }
}

fn poly_out(p: &Poly) -> Vec<MonomialJson> {
    p.terms().map(|m| MonomialJson::from(&m)).collect()
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        poly_out(self).serialize(s)
    }
}

impl Serialize for ExpandedRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpandedJson { num: poly_out(&self.num), den: poly_out(&self.den) }.serialize(s)
    }
}

impl Serialize for Factors {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactoredRational::from_parts(Monomial::one(), self.clone()).serialize(s)
    }
}
