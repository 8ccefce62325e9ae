use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A variable of the fixed alphabet.
///
/// `Nov(0)` is the single Novikov variable `Q`; `Nov(i)` for `i >= 1` is `Q_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T(u16),
    Q,
    Hbar,
    Y,
    Lambda,
    P(u16),
    X(u16),
    Nov(u16),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T(i) => write!(f, "t{i}"),
            Var::Q => write!(f, "q"),
            Var::Hbar => write!(f, "hbar"),
            Var::Y => write!(f, "y"),
            Var::Lambda => write!(f, "lambda"),
            Var::P(i) => write!(f, "P{i}"),
            Var::X(i) => write!(f, "x{i}"),
            Var::Nov(0) => write!(f, "Q"),
            Var::Nov(i) => write!(f, "Q{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Var> {
        let bad = || Error::Invalid(format!("unknown variable `{s}`"));
        let indexed = |rest: &str| -> Result<u16> {
            let i: u16 = rest.parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(bad());
            }
            Ok(i)
        };
        match s {
            "q" => Ok(Var::Q),
            "hbar" => Ok(Var::Hbar),
            "y" => Ok(Var::Y),
            "lambda" => Ok(Var::Lambda),
            "Q" => Ok(Var::Nov(0)),
            _ => {
                let (head, rest) = s.split_at(1);
                match head {
                    "t" => Ok(Var::T(indexed(rest)?)),
                    "P" => Ok(Var::P(indexed(rest)?)),
                    "x" => Ok(Var::X(indexed(rest)?)),
                    "Q" => Ok(Var::Nov(indexed(rest)?)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// The session alphabet `{t_1..t_n, q, hbar, y, lambda, P_1..P_r, x_1..x_r, Q, Q_1..Q_r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub r: usize,
    pub n: usize,
}

impl Alphabet {
    pub fn new(r: usize, n: usize) -> Result<Alphabet> {
        if r == 0 || r > n {
            return Err(Error::Invalid(format!("need 0 < r <= n, got r={r}, n={n}")));
        }
        Ok(Alphabet { r, n })
    }

    pub fn contains(&self, v: Var) -> bool {
        match v {
            Var::T(i) => (i as usize) <= self.n,
            Var::P(i) | Var::X(i) | Var::Nov(i) => (i as usize) <= self.r,
            Var::Q | Var::Hbar | Var::Y | Var::Lambda => true,
        }
    }

    pub fn check(&self, v: Var) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::Alphabet { var: v.to_string(), r: self.r, n: self.n })
        }
    }
}

/// Sparse exponent vector. Exponents are stored doubled, so `q^{1/2}` is `(Q, 1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents(Vec<(Var, i32)>);

impl Exponents {
    pub fn one() -> Exponents {
        Exponents(Vec::new())
    }

    /// Builds from `(variable, doubled exponent)` pairs in any order.
    pub fn from_doubled<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Exponents {
        let mut v: Vec<(Var, i32)> = pairs.into_iter().collect();
        v.sort_by_key(|p| p.0);
        let mut out: Vec<(Var, i32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        out.retain(|p| p.1 != 0);
        Exponents(out)
    }

    pub fn var(v: Var) -> Exponents {
        Exponents(vec![(v, 2)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, i32)> {
        self.0.iter()
    }

    /// Doubled exponent of `v`.
    pub fn get(&self, v: Var) -> i32 {
        self.0.binary_search_by_key(&v, |p| p.0).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Exponents) -> Exponents {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Exponents(out)
    }

    pub fn inv(&self) -> Exponents {
        Exponents(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Exponents {
        if k == 0 {
            return Exponents::one();
        }
        Exponents(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Sign of the first nonzero exponent in variable order.
    pub fn leading_sign(&self) -> i32 {
        self.0.first().map(|p| p.1.signum()).unwrap_or(0)
    }

    /// True when every exponent is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|p| p.1 % 2 == 0)
    }

    /// Removes `v` and returns its doubled exponent.
    pub fn take(&self, v: Var) -> (Exponents, i32) {
        let e = self.get(v);
        let rest = Exponents(self.0.iter().copied().filter(|p| p.0 != v).collect());
        (rest, e)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|p| p.0)
    }
}

/// Rational coefficient times a product of variables with half-integer exponents.
///
/// Ordering compares exponents first, then the coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Exponents,
    coeff: BigRational,
}

impl Monomial {
    pub fn new(coeff: BigRational, exps: Exponents) -> Monomial {
        if coeff.is_zero() {
            return Monomial { coeff, exps: Exponents::one() };
        }
        Monomial { coeff, exps }
    }

    pub fn one() -> Monomial {
        Monomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Monomial {
        Monomial::new(c, Exponents::one())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::new(BigRational::one(), Exponents::var(v))
    }

    /// `c * prod v^(e/2)` for doubled exponents `e`.
    pub fn from_doubled<I: IntoIterator<Item = (Var, i32)>>(c: BigRational, pairs: I) -> Monomial {
        Monomial::new(c, Exponents::from_doubled(pairs))
    }

    /// `prod v^e` with integer exponents and coefficient 1.
    pub fn from_powers<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Monomial {
        Monomial::from_doubled(BigRational::one(), pairs.into_iter().map(|(v, e)| (v, 2 * e)))
    }

    /// `t_i / t_j`.
    pub fn t_ratio(i: usize, j: usize) -> Monomial {
        Monomial::from_powers([(Var::T(i as u16), 1), (Var::T(j as u16), -1)])
    }

    pub fn q_pow(m: i32) -> Monomial {
        Monomial::from_powers([(Var::Q, m)])
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn exps(&self) -> &Exponents {
        &self.exps
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exps.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.is_one()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(&self.coeff * &other.coeff, self.exps.mul(&other.exps))
    }

    pub fn inv(&self) -> Result<Monomial> {
        if self.coeff.is_zero() {
            return Err(Error::DivisionByZero("inverse of the zero monomial".into()));
        }
        Ok(Monomial::new(self.coeff.recip(), self.exps.inv()))
    }

    pub fn div(&self, other: &Monomial) -> Result<Monomial> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<Monomial> {
        if k < 0 && self.coeff.is_zero() {
            return Err(Error::DivisionByZero("negative power of zero".into()));
        }
        let c = num_traits::pow::Pow::pow(&self.coeff, k);
        Ok(Monomial::new(c, self.exps.pow(k)))
    }

    pub fn scale(&self, c: &BigRational) -> Monomial {
        Monomial::new(&self.coeff * c, self.exps.clone())
    }

    pub fn neg(&self) -> Monomial {
        Monomial::new(-&self.coeff, self.exps.clone())
    }

    /// Same exponents, coefficient 1.
    pub fn unit_part(&self) -> Monomial {
        Monomial::new(BigRational::one(), self.exps.clone())
    }

    /// Multiplies by `v^k` for an integer `k`.
    pub fn times_var(&self, v: Var, k: i32) -> Monomial {
        Monomial::new(self.coeff.clone(), self.exps.mul(&Exponents::from_doubled([(v, 2 * k)])))
    }

    /// Replaces `v` by `value`. The doubled exponent of `v` must be even
    /// unless `value` has only even doubled exponents and coefficient 1.
    pub fn substitute(&self, v: Var, value: &Monomial) -> Result<Monomial> {
        let (rest, e) = self.exps.take(v);
        if e == 0 {
            return Ok(self.clone());
        }
        let base = Monomial::new(self.coeff.clone(), rest);
        if e % 2 == 0 {
            return Ok(base.mul(&value.pow(e / 2)?));
        }
        if !value.coeff.is_one() || value.exps.iter().any(|p| p.1 % 2 != 0) {
            return Err(Error::Domain(format!("cannot take a square root of `{value}` when substituting for {v}")));
        }
        let half = Exponents(value.exps.iter().map(|&(w, d)| (w, d / 2)).collect());
        Ok(base.mul(&Monomial::new(BigRational::one(), half.pow(e))))
    }

    pub fn check_alphabet(&self, a: &Alphabet) -> Result<()> {
        self.exps.vars().try_for_each(|v| a.check(v))
    }
}

fn fmt_exp(f: &mut fmt::Formatter<'_>, v: Var, e: i32) -> fmt::Result {
    if e == 2 {
        write!(f, "{v}")
    } else if e % 2 == 0 {
        write!(f, "{v}^{}", e / 2)
    } else {
        write!(f, "{v}^({e}/2)")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_one() {
            return write!(f, "{}", self.coeff);
        }
        let mut first = true;
        if self.coeff == -BigRational::one() {
            write!(f, "-")?;
        } else if !self.coeff.is_one() {
            if self.coeff.is_negative() || !self.coeff.is_integer() {
                write!(f, "({})", self.coeff)?;
            } else {
                write!(f, "{}", self.coeff)?;
            }
            first = false;
        }
        for &(v, e) in self.exps.iter() {
            if !first {
                write!(f, "*")?;
            }
            fmt_exp(f, v, e)?;
            first = false;
        }
        Ok(())
    }
}
