//! Seeded evaluation modulo a prime, used only to prove inequality.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::factored::FactoredRational;
use super::monomial::{Exponents, Monomial, Var};
use super::poly::Poly;

pub const DEFAULT_SEED: u64 = 0x9e37_79b9;

const P: u64 = (1 << 61) - 1;
const ATTEMPTS: u32 = 4;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powm(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b);
        }
        b = mulm(b, b);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> u64 {
    powm(a, P - 2)
}

fn big_mod(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below p")
}

fn rat_mod(c: &BigRational) -> Option<u64> {
    let d = big_mod(c.denom());
    if d == 0 {
        return None;
    }
    Some(mulm(big_mod(c.numer()), invm(d)))
}

/// Each variable is evaluated at `s^2`, so half-integer powers are `s^k`.
struct Point(BTreeMap<Var, u64>);

impl Point {
    fn exps(&self, e: &Exponents) -> u64 {
        let mut acc = 1;
        for &(v, k) in e.iter() {
            let s = self.0[&v];
            let t = powm(s, k.unsigned_abs() as u64);
            acc = mulm(acc, if k < 0 { invm(t) } else { t });
        }
        acc
    }

    fn monomial(&self, m: &Monomial) -> Option<u64> {
        Some(mulm(rat_mod(m.coeff())?, self.exps(m.exps())))
    }

    fn poly(&self, p: &Poly) -> Option<u64> {
        let mut acc = 0;
        for m in p.terms() {
            acc = (acc + self.monomial(&m)?) % P;
        }
        Some(acc)
    }

    fn factored(&self, f: &FactoredRational) -> Option<u64> {
        let mut acc = self.monomial(f.unit())?;
        for (m, e) in f.factors().iter() {
            let b = (1 + self.monomial(m)?) % P;
            if b == 0 {
                if e < 0 {
                    return None;
                }
                return Some(0);
            }
            let t = powm(b, e.unsigned_abs() as u64);
            acc = mulm(acc, if e < 0 { invm(t) } else { t });
        }
        Some(acc)
    }
}

/// Equality oracle configuration. The seed only influences how quickly an
/// inequality is detected; a verdict of "equal" always comes from exact
/// expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checker {
    seed: u64,
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new(DEFAULT_SEED)
    }
}

impl Checker {
    pub fn new(seed: u64) -> Checker {
        Checker { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn points(&self, vars: &[Var]) -> impl Iterator<Item = Point> + '_ {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let vars = vars.to_vec();
        (0..ATTEMPTS).map(move |_| Point(vars.iter().map(|&v| (v, rng.gen_range(2..P))).collect()))
    }

    /// True only if `a != b` is certain from a modular evaluation.
    pub(crate) fn surely_different(&self, a: &FactoredRational, b: &FactoredRational) -> bool {
        let mut vars = a.vars();
        vars.extend(b.vars());
        vars.sort();
        vars.dedup();
        for pt in self.points(&vars) {
            if let (Some(x), Some(y)) = (pt.factored(a), pt.factored(b)) {
                return x != y;
            }
        }
        false
    }

    /// True only if the sum of `poly * factored` terms is certainly nonzero.
    pub(crate) fn surely_nonzero<'a, I>(&self, terms: I, vars: &[Var]) -> bool
    where
        I: Iterator<Item = (&'a Poly, &'a FactoredRational)> + Clone,
    {
        'pts: for pt in self.points(vars) {
            let mut acc = 0;
            for (p, f) in terms.clone() {
                let (Some(x), Some(y)) = (pt.poly(p), pt.factored(f)) else {
                    continue 'pts;
                };
                acc = (acc + mulm(x, y)) % P;
            }
            return acc != 0;
        }
        false
    }

    /// Exact equality of two factored rational functions.
    pub fn factored_equal(&self, a: &FactoredRational, b: &FactoredRational) -> bool {
        if a.is_zero() || b.is_zero() {
            return a.is_zero() && b.is_zero();
        }
        let c = a.normalized().mul(&b.normalized().inv().expect("nonzero"));
        if c.factors().is_empty() {
            return c.unit().is_one();
        }
        if self.surely_different(a, b) {
            return false;
        }
        let mut num = Poly::from_monomial(c.unit());
        let mut den = Poly::one();
        for (m, e) in c.factors().iter() {
            if e > 0 {
                num = num.mul_binomial_pow(m, e as u32);
            } else {
                den = den.mul_binomial_pow(m, (-e) as u32);
            }
        }
        num.sub(&den).is_zero()
    }
}

/// Exact equality with the default seed.
pub fn factored_equal(a: &FactoredRational, b: &FactoredRational) -> bool {
    Checker::default().factored_equal(a, b)
}
