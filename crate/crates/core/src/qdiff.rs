//! Noncommutative q-difference operators in `S_i = q^{Q_i d/dQ_i}` and `Q_i`,
//! acting on truncated power series in `Q_1..Q_r`.
//!
//! Terms are stored as `c * S^b * Q^a` with every `Q` to the right. Moving
//! `Q_i^a` past `S_i^b` produces `q^{-a b}`. Coefficients must not involve
//! the Novikov variables.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::algebra::{Checker, FactoredRational, Monomial, Poly, RationalSum, Var};
use crate::error::{Error, Result};
use crate::gw::balance;
use crate::report::{CaseRecord, Report};

type Key = (Vec<i32>, Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    r: usize,
    terms: BTreeMap<Key, Poly>,
}

/// A word letter for [`canonicalize`].
#[derive(Clone, Debug)]
pub enum Letter {
    Coeff(Poly),
    /// `S_i^k`, `i` zero-based.
    Shift(usize, i32),
    /// `Q_i^k`, `i` zero-based.
    Nov(usize, u32),
}

impl DiffOperator {
    pub fn zero(r: usize) -> DiffOperator {
        DiffOperator { r, terms: BTreeMap::new() }
    }

    pub fn one(r: usize) -> DiffOperator {
        DiffOperator::scalar(r, Poly::one())
    }

    pub fn scalar(r: usize, c: Poly) -> DiffOperator {
        DiffOperator::term(r, c, vec![0; r], vec![0; r])
    }

    /// `c * S^shift * Q^qpow`.
    pub fn term(r: usize, c: Poly, shift: Vec<i32>, qpow: Vec<u32>) -> DiffOperator {
        assert_eq!(shift.len(), r);
        assert_eq!(qpow.len(), r);
        let mut op = DiffOperator::zero(r);
        op.add_term((shift, qpow), c);
        op
    }

    /// `S_i^k`, `i` zero-based.
    pub fn shift(r: usize, i: usize, k: i32) -> DiffOperator {
        let mut b = vec![0; r];
        b[i] = k;
        DiffOperator::term(r, Poly::one(), b, vec![0; r])
    }

    /// `Q_i^k`, `i` zero-based.
    pub fn nov(r: usize, i: usize, k: u32) -> DiffOperator {
        let mut a = vec![0; r];
        a[i] = k;
        DiffOperator::term(r, Poly::one(), vec![0; r], a)
    }

    fn add_term(&mut self, key: Key, c: Poly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(coefficient, shift, qpow)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Poly, &[i32], &[u32])> {
        self.terms.iter().map(|((b, a), c)| (c, b.as_slice(), a.as_slice()))
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOperator) -> DiffOperator {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOperator {
        DiffOperator { r: self.r, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn mul(&self, other: &DiffOperator) -> DiffOperator {
        assert_eq!(self.r, other.r);
        let mut out = DiffOperator::zero(self.r);
        for ((b1, a1), c1) in &self.terms {
            for ((b2, a2), c2) in &other.terms {
                let cross: i32 = a1.iter().zip(b2).map(|(&a, &b)| a as i32 * b).sum();
                let b: Vec<i32> = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
                let a: Vec<u32> = a1.iter().zip(a2).map(|(x, y)| x + y).collect();
                let c = c1.mul(c2).mul_monomial(&Monomial::q_pow(-cross));
                out.add_term((b, a), c);
            }
        }
        out
    }

    /// Applies the operator coefficient-wise. Degrees pushed past the
    /// truncation are dropped and flagged.
    pub fn apply(&self, s: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.r, s.r);
        let mut out = TruncatedSeries::zero(s.r, s.trunc);
        out.overflowed = s.overflowed;
        for ((b, a), c) in &self.terms {
            for (d, f) in &s.coeffs {
                let e: Vec<u32> = d.iter().zip(a).map(|(x, y)| x + y).collect();
                if e.iter().sum::<u32>() > s.trunc {
                    out.overflowed = true;
                    continue;
                }
                let qe: i32 = b.iter().zip(&e).map(|(&bi, &ei)| bi * ei as i32).sum();
                out.add(e, f.mul_poly(&c.mul_monomial(&Monomial::q_pow(qe))));
            }
        }
        out
    }

    /// Sets `v = 0` in every coefficient.
    pub fn substitute_zero(&self, v: Var) -> Result<DiffOperator> {
        let mut out = DiffOperator::zero(self.r);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.substitute_zero(v)?);
        }
        Ok(out)
    }

    /// Substitutes in every coefficient.
    pub fn substitute(&self, v: Var, value: &Monomial) -> Result<DiffOperator> {
        let mut out = DiffOperator::zero(self.r);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.substitute(v, value)?);
        }
        Ok(out)
    }
}

impl Serialize for DiffOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TermJson<'a> {
            coeff: &'a Poly,
            shift: &'a [i32],
            qpow: &'a [u32],
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (c, b, a) in self.terms() {
            seq.serialize_element(&TermJson { coeff: c, shift: b, qpow: a })?;
        }
        seq.end()
    }
}

/// Multiplies a word out into canonical form.
pub fn canonicalize(r: usize, word: &[Letter]) -> DiffOperator {
    word.iter().fold(DiffOperator::one(r), |acc, l| {
        let op = match l {
            Letter::Coeff(c) => DiffOperator::scalar(r, c.clone()),
            Letter::Shift(i, k) => DiffOperator::shift(r, *i, *k),
            Letter::Nov(i, k) => DiffOperator::nov(r, *i, *k),
        };
        acc.mul(&op)
    })
}

/// Power series in `Q_1..Q_r` truncated at total degree `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub r: usize,
    pub trunc: u32,
    coeffs: BTreeMap<Vec<u32>, RationalSum>,
    /// Set when an operation produced terms beyond the truncation.
    pub overflowed: bool,
}

impl TruncatedSeries {
    pub fn zero(r: usize, trunc: u32) -> TruncatedSeries {
        TruncatedSeries { r, trunc, coeffs: BTreeMap::new(), overflowed: false }
    }

    /// Builds from a coefficient function on all multi-degrees up to `trunc`.
    pub fn from_fn<F>(r: usize, trunc: u32, f: F) -> Result<TruncatedSeries>
    where
        F: Fn(&[u32]) -> Result<FactoredRational> + Sync,
    {
        let degrees = multi_degrees(r, trunc);
        let vals: Result<Vec<(Vec<u32>, RationalSum)>> =
            degrees.into_par_iter().map(|d| Ok((d.clone(), RationalSum::from_factored(&f(&d)?)))).collect();
        let mut s = TruncatedSeries::zero(r, trunc);
        for (d, v) in vals? {
            s.add(d, v);
        }
        Ok(s)
    }

    pub fn add(&mut self, d: Vec<u32>, v: RationalSum) {
        if v.is_empty() {
            return;
        }
        let slot = self.coeffs.entry(d).or_default();
        *slot = slot.add(&v);
    }

    pub fn coeff(&self, d: &[u32]) -> RationalSum {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn degrees(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.coeffs.keys()
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let mut out = self.clone();
        for (d, v) in &other.coeffs {
            out.add(d.clone(), v.neg());
        }
        out.overflowed |= other.overflowed;
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map<F>(&self, f: F) -> Result<TruncatedSeries>
    where
        F: Fn(&RationalSum) -> Result<RationalSum>,
    {
        let mut out = TruncatedSeries::zero(self.r, self.trunc);
        out.overflowed = self.overflowed;
        for (d, v) in &self.coeffs {
            out.add(d.clone(), f(v)?);
        }
        Ok(out)
    }
}

/// All multi-degrees of total degree at most `trunc`, graded then lexicographic.
pub fn multi_degrees(r: usize, trunc: u32) -> Vec<Vec<u32>> {
    (0..=trunc).flat_map(|d| crate::quot::compositions(d, r)).collect()
}

/// Zero after substituting `v = t_a` for each `a`, which is reduction modulo
/// `prod_a (1 - v/t_a)`.
pub fn vanishes_mod_relation(s: &RationalSum, v: Var, n: usize, checker: &Checker) -> Result<bool> {
    for a in 1..=n {
        if !s.substitute(v, &Monomial::var(Var::T(a as u16)))?.is_zero(checker) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P / t_i` with `P = P_1`.
fn a_i(i: usize) -> Monomial {
    Monomial::var(Var::P(1)).mul(&Monomial::from_powers([(Var::T(i as u16), -1)]))
}

/// `prod_{i=1}^n (1 - P S / t_i) - Q`.
pub fn build_pn_operator(n: usize) -> DiffOperator {
    let mut op = DiffOperator::one(1);
    for i in 1..=n {
        let f = DiffOperator::one(1).sub(&DiffOperator::term(1, Poly::from_monomial(&a_i(i)), vec![1], vec![0]));
        op = op.mul(&f);
    }
    op.sub(&DiffOperator::nov(1, 0, 1))
}

/// Coefficient `1 / prod_i (q P/t_i)_d`.
pub fn pn_icoefficient(n: usize, d: u32) -> Result<FactoredRational> {
    let mut f = FactoredRational::one();
    for i in 1..=n {
        for m in 1..=d as i32 {
            f = f.mul(&FactoredRational::inv_one_minus(&a_i(i).times_var(Var::Q, m))?);
        }
    }
    Ok(f)
}

pub fn build_pn_iseries(n: usize, trunc: u32) -> Result<TruncatedSeries> {
    TruncatedSeries::from_fn(1, trunc, |d| pn_icoefficient(n, d[0]))
}

/// A factor `1 - coeff * S^shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftMonomial {
    pub coeff: Monomial,
    pub shift: Vec<i32>,
}

/// For `prod (1 - M_i)` returns `(prod (1 - M_i), prod (1 - twin * M_i))`.
pub fn balance_operator(r: usize, factors: &[ShiftMonomial], twin: &Monomial) -> Result<(DiffOperator, DiffOperator)> {
    let mut num = DiffOperator::one(r);
    let mut den = DiffOperator::one(r);
    for f in factors {
        if f.shift.len() != r || f.shift.iter().all(|&b| b == 0) {
            return Err(Error::Domain(format!("factor 1 - {} S^{:?} has no shift", f.coeff, f.shift)));
        }
        if f.coeff.is_zero() || f.coeff.exps().vars().any(|v| matches!(v, Var::Nov(_))) {
            return Err(Error::Domain(format!("factor coefficient {} is not admissible", f.coeff)));
        }
        let m = DiffOperator::term(r, Poly::from_monomial(&f.coeff), f.shift.clone(), vec![0; r]);
        let tm = DiffOperator::term(r, Poly::from_monomial(&f.coeff.mul(twin)), f.shift.clone(), vec![0; r]);
        num = num.mul(&DiffOperator::one(r).sub(&m));
        den = den.mul(&DiffOperator::one(r).sub(&tm));
    }
    Ok((num, den))
}

fn pn_factors(n: usize) -> Vec<ShiftMonomial> {
    (1..=n).map(|i| ShiftMonomial { coeff: a_i(i), shift: vec![1] }).collect()
}

/// Relation `prod_a (1 - P_i/t_a) = 0`, applied to degrees with `d_i = 0`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Relation {
    pub var: Var,
    pub n: usize,
    /// Zero-based position of the degree that must vanish.
    pub index: usize,
}

/// Compares two series degree by degree, modulo `rel` where it applies.
pub(crate) fn compare_series(
    label: &str,
    lhs: &TruncatedSeries,
    rhs: &TruncatedSeries,
    rel: Option<Relation>,
    checker: &Checker,
) -> Vec<CaseRecord> {
    multi_degrees(lhs.r, lhs.trunc)
        .into_par_iter()
        .map(|d| {
            let id = format!("{label} d={d:?}");
            let (l, r) = (lhs.coeff(&d), rhs.coeff(&d));
            let diff = l.sub(&r);
            let rel = rel.filter(|x| d[x.index] == 0);
            let ok = match rel {
                Some(x) => vanishes_mod_relation(&diff, x.var, x.n, checker),
                None => Ok(diff.is_zero(checker)),
            };
            match (ok, rel) {
                (Ok(true), Some(x)) => {
                    CaseRecord::pass(id).with_detail(format!("holds modulo prod_a (1 - {}/t_a)", x.var))
                }
                (Ok(true), None) => CaseRecord::pass(id),
                (Ok(false), _) => CaseRecord::compare_sums(id, false, &l, &r),
                (Err(e), _) => CaseRecord::error(id, &e),
            }
        })
        .collect()
}

/// `D I = 0`, the balanced identity `N B_y(I) = T Q B_y(I)` with the twin
/// `T = prod (1 + y a_i S)`, and the same identity for the twin
/// `prod (1 - y a_i S)` against coefficients `prod (y q a_i)_d / (q a_i)_d`.
pub fn verify_compatibility(n: usize, trunc: u32, checker: &Checker) -> Result<Report> {
    let series = build_pn_iseries(n, trunc)?;
    let zero = TruncatedSeries::zero(1, trunc);
    let rel = Some(Relation { var: Var::P(1), n, index: 0 });
    let mut cases = compare_series("annihilation", &build_pn_operator(n).apply(&series), &zero, rel, checker);

    let by = series.map(|c| {
        let f = c.as_factored().ok_or_else(|| Error::Invalid("series coefficient is not a single product".into()))?;
        Ok(RationalSum::from_factored(&balance(&f)?))
    })?;
    let y = Monomial::var(Var::Y);
    let q1 = DiffOperator::nov(1, 0, 1);
    let (num, twin) = balance_operator(1, &pn_factors(n), &y.neg())?;
    cases.extend(compare_series("balanced", &num.apply(&by), &twin.mul(&q1).apply(&by), rel, checker));

    let literal = TruncatedSeries::from_fn(1, trunc, |d| {
        let mut f = pn_icoefficient(n, d[0])?;
        for i in 1..=n {
            for m in 1..=d[0] as i32 {
                f = f.mul(&FactoredRational::one_minus(&a_i(i).mul(&y).times_var(Var::Q, m)));
            }
        }
        Ok(f)
    })?;
    let (num, twin) = balance_operator(1, &pn_factors(n), &y)?;
    cases.extend(compare_series("literal", &num.apply(&literal), &twin.mul(&q1).apply(&literal), rel, checker));
    Ok(Report::new(format!("verify-ops --n {n} --trunc {trunc}"), cases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn q() -> Monomial {
        Monomial::var(Var::Q)
    }

    #[test]
    fn generator_relation() {
        let qs = canonicalize(1, &[Letter::Nov(0, 1), Letter::Shift(0, 1)]);
        let want = DiffOperator::term(1, Poly::from_monomial(&q().inv().unwrap()), vec![1], vec![1]);
        assert_eq!(qs, want);
        let q2s = canonicalize(1, &[Letter::Nov(0, 2), Letter::Shift(0, 1)]);
        let want = DiffOperator::term(1, Poly::from_monomial(&Monomial::q_pow(-2)), vec![1], vec![2]);
        assert_eq!(q2s, want);
        let c = Poly::constant(rat(5));
        assert_eq!(canonicalize(1, &[Letter::Coeff(c.clone())]), DiffOperator::scalar(1, c));
    }

    #[test]
    fn exponent_is_a_product() {
        // Q^2 S^3 = q^{-6} S^3 Q^2
        let op = canonicalize(1, &[Letter::Nov(0, 2), Letter::Shift(0, 3)]);
        let (c, b, a) = op.terms().next().unwrap();
        assert_eq!((b, a), (&[3][..], &[2][..]));
        assert_eq!(c, &Poly::from_monomial(&Monomial::q_pow(-6)));
    }

    #[test]
    fn shift_and_nov_actions() {
        let s = TruncatedSeries::from_fn(1, 4, |_| Ok(FactoredRational::one())).unwrap();
        let shifted = DiffOperator::shift(1, 0, 1).apply(&s);
        for d in 0..=4u32 {
            assert_eq!(shifted.coeff(&[d]), RationalSum::from_poly(Poly::from_monomial(&Monomial::q_pow(d as i32))));
        }
        let one = TruncatedSeries::from_fn(1, 3, |d| {
            Ok(if d[0] == 0 { FactoredRational::one() } else { FactoredRational::zero() })
        })
        .unwrap();
        let qone = DiffOperator::nov(1, 0, 1).apply(&one);
        assert_eq!(qone.coeff(&[1]), RationalSum::one());
        assert!(qone.coeff(&[0]).is_empty());
    }

    #[test]
    fn truncation_overflow_is_flagged() {
        let s = TruncatedSeries::from_fn(1, 2, |_| Ok(FactoredRational::one())).unwrap();
        let out = DiffOperator::nov(1, 0, 1).apply(&s);
        assert!(out.overflowed);
        assert!(out.coeff(&[3]).is_empty());
    }

    #[test]
    fn pn_objects() {
        let op = build_pn_operator(2);
        let s = |i: usize| DiffOperator::term(1, Poly::from_monomial(&a_i(i)), vec![1], vec![0]);
        let want =
            DiffOperator::one(1).sub(&s(1)).mul(&DiffOperator::one(1).sub(&s(2))).sub(&DiffOperator::nov(1, 0, 1));
        assert_eq!(op, want);
        let series = build_pn_iseries(2, 1).unwrap();
        assert_eq!(series.coeff(&[0]), RationalSum::one());
        let want = FactoredRational::inv_one_minus(&a_i(1).times_var(Var::Q, 1))
            .unwrap()
            .mul(&FactoredRational::inv_one_minus(&a_i(2).times_var(Var::Q, 1)).unwrap());
        assert_eq!(series.coeff(&[1]), RationalSum::from_factored(&want));
    }

    #[test]
    fn balance_operator_examples() {
        let h = Monomial::var(Var::Hbar);
        let f = [ShiftMonomial { coeff: a_i(1), shift: vec![1] }];
        let (n, t) = balance_operator(1, &f, &h).unwrap();
        assert_eq!(n, DiffOperator::one(1).sub(&DiffOperator::term(1, Poly::from_monomial(&a_i(1)), vec![1], vec![0])));
        assert_eq!(
            t,
            DiffOperator::one(1).sub(&DiffOperator::term(1, Poly::from_monomial(&a_i(1).mul(&h)), vec![1], vec![0]))
        );
        let (n, t) = balance_operator(1, &[], &h).unwrap();
        assert_eq!((n, t), (DiffOperator::one(1), DiffOperator::one(1)));
        let (_, t) = balance_operator(1, &pn_factors(2), &h).unwrap();
        assert_eq!(t.len(), 3);
        assert!(balance_operator(1, &[ShiftMonomial { coeff: a_i(1), shift: vec![0] }], &h).is_err());
    }

    #[test]
    fn compatibility_holds() {
        let c = Checker::default();
        for (n, trunc) in [(2, 5), (3, 4)] {
            let rep = verify_compatibility(n, trunc, &c).unwrap();
            let bad: Vec<_> = rep.cases.iter().filter(|x| !x.passed()).map(|x| x.id.clone()).collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
        let rep = verify_compatibility(2, 0, &c).unwrap();
        assert!(rep.all_passed());
        assert_eq!(rep.cases.len(), 3);
    }

    #[test]
    fn mixed_sign_pairing_fails() {
        // B_y from the class-level balance does not pair with prod(1 - y a_i S).
        let c = Checker::default();
        let series = build_pn_iseries(2, 1).unwrap();
        let by = series.map(|s| Ok(RationalSum::from_factored(&balance(&s.as_factored().unwrap())?))).unwrap();
        let (num, twin) = balance_operator(1, &pn_factors(2), &Monomial::var(Var::Y)).unwrap();
        let lhs = num.apply(&by);
        let rhs = twin.mul(&DiffOperator::nov(1, 0, 1)).apply(&by);
        assert!(!lhs.coeff(&[1]).equals(&rhs.coeff(&[1]), &c));
    }

    #[test]
    fn relation_needed_only_at_degree_zero() {
        let c = Checker::default();
        let series = build_pn_iseries(3, 2).unwrap();
        let out = build_pn_operator(3).apply(&series);
        assert!(!out.coeff(&[0]).is_zero(&c));
        assert!(vanishes_mod_relation(&out.coeff(&[0]), Var::P(1), 3, &c).unwrap());
        assert!(out.coeff(&[1]).is_zero(&c));
        assert!(out.coeff(&[2]).is_zero(&c));
    }
}
