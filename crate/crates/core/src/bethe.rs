//! Abelianized twisted J-function of `(P^{n-1})^r`, its balanced class, the
//! q-difference equations it satisfies, and the specialization to the
//! Bethe equations of `T*G(r,n)`.
//!
//! Indices `i` in public functions are 1-based.

use rayon::prelude::*;

use crate::algebra::{rat, Checker, FactoredRational, Monomial, Poly, RationalSum, Var};
use crate::error::{Error, Result};
use crate::gw::balance;
use crate::qdiff::{compare_series, multi_degrees, DiffOperator, Relation, TruncatedSeries};
use crate::report::{CaseRecord, Report};

fn p(k: usize) -> Monomial {
    Monomial::var(Var::P(k as u16))
}

fn t(a: usize) -> Monomial {
    Monomial::var(Var::T(a as u16))
}

fn x(k: usize) -> Monomial {
    Monomial::var(Var::X(k as u16))
}

fn y() -> Monomial {
    Monomial::var(Var::Y)
}

fn lambda() -> Monomial {
    Monomial::var(Var::Lambda)
}

fn hbar() -> Monomial {
    Monomial::var(Var::Hbar)
}

/// `a / b` for monomials with nonzero `b`.
fn over(a: &Monomial, b: &Monomial) -> Monomial {
    a.div(b).expect("nonzero monomial")
}

/// `prod_{m=-inf}^{N} (1 - q^m w) / prod_{m=-inf}^{0} (1 - q^m w)`.
pub fn infinite_ratio(w: &Monomial, n: i32) -> Result<FactoredRational> {
    let mut f = FactoredRational::one();
    if n >= 0 {
        for m in 1..=n {
            f = f.mul(&FactoredRational::one_minus(&w.times_var(Var::Q, m)));
        }
    } else {
        for m in n + 1..=0 {
            f = f.mul(&FactoredRational::inv_one_minus(&w.times_var(Var::Q, m))?);
        }
    }
    Ok(f)
}

/// The same ratio for `(1 + y q^m w)`.
fn infinite_ratio_y(w: &Monomial, n: i32) -> Result<FactoredRational> {
    infinite_ratio(&w.mul(&y()).neg(), n)
}

/// Truncation points of every block of an abelian coefficient. The plain
/// coefficient at `d` has `t_num = t_den = d` and `phi = phi_y = d_k - d_l`;
/// intermediate stages of an operator application move single entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockForm {
    pub n: usize,
    /// Upper limit of `prod_m (1 + y q^m P_k/t_a)`.
    pub t_num: Vec<i32>,
    /// Upper limit of `prod_m (1 - q^m P_k/t_a)` in the denominator.
    pub t_den: Vec<i32>,
    /// `phi[k][l]` is the limit of the `(1 - q^m lambda P_k/P_l)` ratio.
    pub phi: Vec<Vec<i32>>,
    /// `phi_y[k][l]` is the limit of the `(1 + y q^m lambda P_k/P_l)` ratio.
    pub phi_y: Vec<Vec<i32>>,
}

impl BlockForm {
    pub fn at(n: usize, d: &[u32]) -> BlockForm {
        let d: Vec<i32> = d.iter().map(|&v| v as i32).collect();
        let diff: Vec<Vec<i32>> = d.iter().map(|&a| d.iter().map(|&b| a - b).collect()).collect();
        BlockForm { n, t_num: d.clone(), t_den: d, phi: diff.clone(), phi_y: diff }
    }

    pub fn rank(&self) -> usize {
        self.t_den.len()
    }

    /// The coefficient; the balanced partners are included when `balanced`.
    pub fn eval(&self, balanced: bool) -> Result<FactoredRational> {
        let r = self.rank();
        let mut f = FactoredRational::one();
        for k in 0..r {
            for a in 1..=self.n {
                let w = over(&p(k + 1), &t(a));
                for m in 1..=self.t_den[k] {
                    f = f.mul(&FactoredRational::inv_one_minus(&w.times_var(Var::Q, m))?);
                }
                if balanced {
                    for m in 1..=self.t_num[k] {
                        f = f.mul(&FactoredRational::one_plus(&w.mul(&y()).times_var(Var::Q, m)));
                    }
                }
            }
            for l in (0..r).filter(|&l| l != k) {
                let w = lambda().mul(&over(&p(k + 1), &p(l + 1)));
                f = f.mul(&infinite_ratio(&w, self.phi[k][l])?);
                if balanced {
                    f = f.div(&infinite_ratio_y(&w, self.phi_y[k][l])?)?;
                }
            }
        }
        Ok(f)
    }
}

/// Coefficient of `Q^d` in the twisted J-function, or in its balanced class.
pub fn abelian_j_coefficient(n: usize, dvec: &[u32], balanced: bool) -> Result<FactoredRational> {
    BlockForm::at(n, dvec).eval(balanced)
}

pub fn abelian_series(r: usize, n: usize, trunc: u32, balanced: bool) -> Result<TruncatedSeries> {
    TruncatedSeries::from_fn(r, trunc, |d| abelian_j_coefficient(n, d, balanced))
}

/// `1 - c * S^shift`.
fn one_minus_shift(r: usize, c: Monomial, shift: &[(usize, i32)]) -> DiffOperator {
    let mut b = vec![0; r];
    for &(k, e) in shift {
        b[k] += e;
    }
    DiffOperator::one(r).sub(&DiffOperator::term(r, Poly::from_monomial(&c), b, vec![0; r]))
}

/// The six factor groups of the operators for index `i` (1-based), in the
/// order `D1 = f[0] f[1] f[2]` and `D2 = f[3] f[4] Q_i f[5]`.
fn operator_factors(i: usize, r: usize, n: usize) -> [DiffOperator; 6] {
    let k = i - 1;
    let q = Monomial::var(Var::Q);
    let others: Vec<usize> = (0..r).filter(|&j| j != k).collect();
    let prod = |fs: Vec<DiffOperator>| fs.into_iter().fold(DiffOperator::one(r), |a, b| a.mul(&b));
    let yl = y().mul(&lambda());
    let lq = lambda().mul(&q);
    [
        prod(
            others
                .iter()
                .map(|&j| one_minus_shift(r, yl.mul(&over(&p(i), &p(j + 1))).neg(), &[(k, 1), (j, -1)]))
                .collect(),
        ),
        prod(others.iter().map(|&j| one_minus_shift(r, lq.mul(&over(&p(j + 1), &p(i))), &[(j, 1), (k, -1)])).collect()),
        prod((1..=n).map(|a| one_minus_shift(r, over(&p(i), &t(a)), &[(k, 1)])).collect()),
        prod(
            others
                .iter()
                .map(|&j| one_minus_shift(r, yl.mul(&q).mul(&over(&p(j + 1), &p(i))).neg(), &[(j, 1), (k, -1)]))
                .collect(),
        ),
        prod((1..=n).map(|a| one_minus_shift(r, y().mul(&over(&p(i), &t(a))).neg(), &[(k, 1)])).collect()),
        prod(others.iter().map(|&j| one_minus_shift(r, lq.mul(&over(&p(i), &p(j + 1))), &[(k, 1), (j, -1)])).collect()),
    ]
}

/// `(D1, D2)` for index `i` (1-based).
pub fn build_bethe_operators(i: usize, r: usize, n: usize) -> Result<(DiffOperator, DiffOperator)> {
    if i == 0 || i > r {
        return Err(Error::Invalid(format!("index {i} outside 1..={r}")));
    }
    let [f0, f1, f2, g0, g1, g2] = operator_factors(i, r, n);
    let d1 = f0.mul(&f1).mul(&f2);
    let d2 = g0.mul(&g1).mul(&DiffOperator::nov(r, i - 1, 1)).mul(&g2);
    Ok((d1, d2))
}

/// Closed forms of the coefficient of `Q^{d + e_i}` after each stage of
/// applying `D1` (A1..A3) and `D2` (B1..B3).
pub fn staged_forms(i: usize, n: usize, d: &[u32]) -> [BlockForm; 6] {
    let k = i - 1;
    let di = d[k] as i32;
    let base = BlockForm::at(n, d);
    let others: Vec<usize> = (0..d.len()).filter(|&j| j != k).collect();
    let set = |f: &mut BlockForm, kj: [i32; 2], jk: [i32; 2]| {
        for &j in &others {
            let dj = d[j] as i32;
            f.phi[k][j] = di - dj + kj[0];
            f.phi_y[k][j] = di - dj + kj[1];
            f.phi[j][k] = dj - di + jk[0];
            f.phi_y[j][k] = dj - di + jk[1];
        }
    };
    let mut a1 = base.clone();
    a1.t_num[k] = di + 1;
    set(&mut a1, [1, 1], [-1, -1]);
    let mut a2 = a1.clone();
    set(&mut a2, [1, 1], [0, -1]);
    let mut a3 = a2.clone();
    set(&mut a3, [1, 0], [0, -1]);
    let mut b1 = base.clone();
    set(&mut b1, [1, 0], [0, 0]);
    let mut b2 = b1.clone();
    b2.t_num[k] = di + 1;
    let mut b3 = b2.clone();
    set(&mut b3, [1, 0], [0, -1]);
    [a1, a2, a3, b1, b2, b3]
}

/// `D1 J = D2 J` for every index, balanced and at `y = 0`, plus the staged
/// closed forms against direct application. Degrees with `d_i = 0` hold
/// modulo the relation in `P_i`.
pub fn verify_appendix_b(r: usize, n: usize, trunc: u32, checker: &Checker) -> Result<Report> {
    let jb = abelian_series(r, n, trunc, true)?;
    let ju = abelian_series(r, n, trunc, false)?;
    let per_index: Result<Vec<Vec<CaseRecord>>> = (1..=r)
        .into_par_iter()
        .map(|i| {
            let rel = Some(Relation { var: Var::P(i as u16), n, index: i - 1 });
            let (d1, d2) = build_bethe_operators(i, r, n)?;
            let mut cases = compare_series(&format!("i={i} balanced"), &d1.apply(&jb), &d2.apply(&jb), rel, checker);
            let (u1, u2) = (d1.substitute_zero(Var::Y)?, d2.substitute_zero(Var::Y)?);
            cases.extend(compare_series(&format!("i={i} unbalanced"), &u1.apply(&ju), &u2.apply(&ju), rel, checker));
            cases.extend(staged_cases(i, r, n, trunc, &jb, checker)?);
            Ok(cases)
        })
        .collect();
    Ok(Report::new(format!("verify-appendix-b --r {r} --n {n} --trunc {trunc}"), per_index?.concat()))
}

fn staged_cases(
    i: usize,
    r: usize,
    n: usize,
    trunc: u32,
    jb: &TruncatedSeries,
    checker: &Checker,
) -> Result<Vec<CaseRecord>> {
    let [f0, f1, f2, g0, g1, g2] = operator_factors(i, r, n);
    let qi = DiffOperator::nov(r, i - 1, 1);
    let a1 = f2;
    let a2 = f1.mul(&a1);
    let a3 = f0.mul(&a2);
    let b1 = qi.mul(&g2);
    let b2 = g1.mul(&b1);
    let b3 = g0.mul(&b2);
    let applied: Vec<TruncatedSeries> = [a1, a2, a3, b1, b2, b3].iter().map(|op| op.apply(jb)).collect();
    let names = ["A1", "A2", "A3", "B1", "B2", "B3"];
    if trunc == 0 {
        return Ok(Vec::new());
    }
    let cases = multi_degrees(r, trunc - 1)
        .into_par_iter()
        .flat_map_iter(|d| {
            let mut e = d.clone();
            e[i - 1] += 1;
            let forms = staged_forms(i, n, &d);
            let mut out = Vec::new();
            for (s, form) in forms.iter().enumerate() {
                let id = format!("i={i} {} d={d:?}", names[s]);
                out.push(match form.eval(true) {
                    Ok(f) => {
                        let lhs = RationalSum::from_factored(&f);
                        let rhs = applied[s].coeff(&e);
                        CaseRecord::compare_sums(id, lhs.equals(&rhs, checker), &lhs, &rhs)
                    }
                    Err(err) => CaseRecord::error(id, &err),
                });
            }
            let id = format!("i={i} A3=B3 d={d:?}");
            out.push(if forms[2] == forms[5] {
                CaseRecord::pass(id)
            } else {
                CaseRecord::fail(id, "staged block limits differ", None)
            });
            out
        })
        .collect();
    Ok(cases)
}

/// `J` at `y = 0` equals the twisted J-function, and balancing the twisted
/// coefficients factor by factor reproduces `J`.
pub fn verify_abelian_degenerations(r: usize, n: usize, trunc: u32, checker: &Checker) -> Result<Report> {
    let cases = multi_degrees(r, trunc)
        .into_par_iter()
        .flat_map_iter(|d| {
            let run = || -> Result<[CaseRecord; 2]> {
                let jb = abelian_j_coefficient(n, &d, true)?;
                let ju = abelian_j_coefficient(n, &d, false)?;
                let y0 = jb.substitute_zero(Var::Y)?;
                let bal = balance(&ju)?;
                Ok([
                    CaseRecord::compare_factored(
                        format!("abelian y=0 d={d:?}"),
                        checker.factored_equal(&y0, &ju),
                        &y0,
                        &ju,
                    ),
                    CaseRecord::compare_factored(
                        format!("abelian balance d={d:?}"),
                        checker.factored_equal(&bal, &jb),
                        &bal,
                        &jb,
                    ),
                ])
            };
            run().unwrap_or_else(|e| {
                [
                    CaseRecord::error(format!("abelian y=0 d={d:?}"), &e),
                    CaseRecord::error(format!("abelian balance d={d:?}"), &e),
                ]
            })
        })
        .collect();
    Ok(Report::new(format!("abelian-degenerations --r {r} --n {n} --trunc {trunc}"), cases))
}

/// `S = 1`, `q = 1`, `y = -hbar`, `Q_i` kept as commuting variables.
pub fn specialize_operator(op: &DiffOperator) -> Result<Poly> {
    let mut out = Poly::zero();
    for (c, _, a) in op.terms() {
        let mut c = c.substitute(Var::Q, &Monomial::one())?.substitute(Var::Y, &hbar().neg())?;
        for (k, &e) in a.iter().enumerate() {
            if e > 0 {
                c = c.mul_monomial(&Monomial::from_powers([(Var::Nov(k as u16 + 1), e as i32)]));
            }
        }
        out = out.add(&c);
    }
    Ok(out)
}

/// `a + b` as `a (1 + b/a)`.
fn binomial(a: &Monomial, b: &Monomial) -> Result<FactoredRational> {
    Ok(FactoredRational::monomial(a.clone()).mul(&FactoredRational::one_plus(&b.div(a)?)))
}

fn poly_one_minus(m: &Monomial) -> Poly {
    Poly::one_plus(&m.neg())
}

/// Left side of the Bethe equation for `i` with parameters `k`, `s`:
/// `prod_j (x_i/t_j - 1)/(k x_i/t_j - s) + (-1)^r Q prod_{j != i} (k x_j - s x_i)/(k x_i - s x_j)`.
pub fn bethe_lhs(i: usize, r: usize, n: usize, k: &Monomial, s: &Monomial) -> Result<RationalSum> {
    let minus_one = Monomial::constant(rat(-1));
    let mut first = FactoredRational::one();
    for j in 1..=n {
        let u = over(&x(i), &t(j));
        first = first.mul(&binomial(&minus_one, &u)?).div(&binomial(&s.neg(), &k.mul(&u))?)?;
    }
    let mut second = FactoredRational::monomial(sign(r).times_var(Var::Nov(0), 1));
    for j in (1..=r).filter(|&j| j != i) {
        second = second
            .mul(&binomial(&s.mul(&x(i)).neg(), &k.mul(&x(j)))?)
            .div(&binomial(&s.mul(&x(j)).neg(), &k.mul(&x(i)))?)?;
    }
    let mut out = RationalSum::from_factored(&first);
    out.add_factored(&second);
    Ok(out)
}

/// Each step from the specialized operator difference to the Bethe equation
/// with `k = hbar`, `s = 1`, for every index `i`.
pub fn bethe_correspondence(r: usize, n: usize, checker: &Checker) -> Result<Report> {
    let per_index: Result<Vec<Vec<CaseRecord>>> =
        (1..=r).into_par_iter().map(|i| bethe_chain(i, r, n, checker)).collect();
    Ok(Report::new(format!("verify-bethe --r {r} --n {n}"), per_index?.concat()))
}

fn sign(e: usize) -> Monomial {
    Monomial::constant(rat(if e.is_multiple_of(2) { 1 } else { -1 }))
}

fn bethe_chain(i: usize, r: usize, n: usize, checker: &Checker) -> Result<Vec<CaseRecord>> {
    let others: Vec<usize> = (1..=r).filter(|&j| j != i).collect();
    let pij = |j: usize| over(&p(i), &p(j));
    let pji = |j: usize| over(&p(j), &p(i));
    let pit = |a: usize| over(&p(i), &t(a));
    let h = hbar();
    let l = lambda();
    let big_q = Monomial::var(Var::Nov(0));
    let prod_poly = |ms: Vec<Monomial>| ms.iter().fold(Poly::one(), |acc, m| acc.mul(&poly_one_minus(m)));
    let prod_fact =
        |ms: Vec<Monomial>| ms.iter().fold(FactoredRational::one(), |acc, m| acc.mul(&FactoredRational::one_minus(m)));
    let mut cases = Vec::new();
    let ok_poly = |id: String, lhs: &Poly, rhs: &Poly| {
        let (a, b) = (RationalSum::from_poly(lhs.clone()), RationalSum::from_poly(rhs.clone()));
        CaseRecord::compare_sums(id, lhs.sub(rhs).is_zero(), &a, &b)
    };
    let ok_sum = |id: String, lhs: &RationalSum, rhs: &RationalSum| {
        CaseRecord::compare_sums(id, lhs.equals(rhs, checker), lhs, rhs)
    };

    // S0: the specialized operator difference as a difference of two products.
    let (d1, d2) = build_bethe_operators(i, r, n)?;
    let g = specialize_operator(&d1.sub(&d2))?;
    let qi = Monomial::var(Var::Nov(i as u16));
    let mut first: Vec<Monomial> = others.iter().map(|&j| h.mul(&l).mul(&pij(j))).collect();
    first.extend(others.iter().map(|&j| l.mul(&pji(j))));
    first.extend((1..=n).map(pit));
    let mut second: Vec<Monomial> = others.iter().map(|&j| h.mul(&l).mul(&pji(j))).collect();
    second.extend((1..=n).map(|a| h.mul(&pit(a))));
    second.extend(others.iter().map(|&j| l.mul(&pij(j))));
    let diff = prod_poly(first).sub(&prod_poly(second).mul_monomial(&qi));
    cases.push(ok_poly(format!("i={i} S0 specialization"), &g, &diff));

    // S1: lambda = 1, Q_i = Q.
    let mut num: Vec<Monomial> = others.iter().map(|&j| h.mul(&pij(j))).collect();
    num.extend(others.iter().map(|&j| pji(j)));
    num.extend((1..=n).map(pit));
    let mut den: Vec<Monomial> = others.iter().map(|&j| h.mul(&pji(j))).collect();
    den.extend((1..=n).map(|a| h.mul(&pit(a))));
    den.extend(others.iter().map(|&j| pij(j)));
    let s1 = prod_poly(num.clone()).sub(&prod_poly(den.clone()).mul_monomial(&big_q));
    let diff1 = diff.substitute(Var::Lambda, &Monomial::one())?.substitute(Var::Nov(i as u16), &big_q)?;
    cases.push(ok_poly(format!("i={i} S1 phi"), &diff1, &s1));

    // S2: divided by the second product.
    let den_f = prod_fact(den);
    let mut s2 = RationalSum::from_factored(&prod_fact(num).div(&den_f)?);
    s2.add_factored(&FactoredRational::monomial(big_q.neg()));
    let s1_over = RationalSum::from_poly(s1).mul_factored(&den_f.inv()?);
    cases.push(ok_sum(format!("i={i} S2 ratio"), &s2, &s1_over));

    // S3: (1 - P_j/P_i)/(1 - P_i/P_j) = -P_j/P_i.
    let monos = others.iter().fold(Monomial::one(), |acc, &j| acc.mul(&pji(j)));
    let mut core_num: Vec<Monomial> = (1..=n).map(pit).collect();
    core_num.extend(others.iter().map(|&j| h.mul(&pij(j))));
    let mut core_den: Vec<Monomial> = (1..=n).map(|a| h.mul(&pit(a))).collect();
    core_den.extend(others.iter().map(|&j| h.mul(&pji(j))));
    let core = prod_fact(core_num).div(&prod_fact(core_den))?;
    let mut s3 = RationalSum::from_factored(&core.mul_monomial(&sign(r - 1).mul(&monos)));
    s3.add_factored(&FactoredRational::monomial(big_q.neg()));
    cases.push(ok_sum(format!("i={i} S3 sign"), &s3, &s2));

    // S4: multiplied by (-1)^(r-1).
    let mut s4 = RationalSum::from_factored(&core.mul_monomial(&monos));
    s4.add_factored(&FactoredRational::monomial(sign(r).mul(&big_q)));
    cases.push(ok_sum(format!("i={i} S4 normalized"), &s4, &s3.mul_monomial(&sign(r - 1))));

    // S5: divided by prod_j (P_j - hbar P_i)/(P_i - hbar P_j).
    let mut bfac = FactoredRational::one();
    let mut tail = FactoredRational::monomial(sign(r).mul(&big_q));
    for &j in &others {
        bfac = bfac.mul(&binomial(&p(j), &h.mul(&p(i)).neg())?).div(&binomial(&p(i), &h.mul(&p(j)).neg())?)?;
        tail = tail.mul(&binomial(&p(i).neg(), &h.mul(&p(j)))?).div(&binomial(&p(j).neg(), &h.mul(&p(i)))?)?;
    }
    let head = (1..=n).try_fold(FactoredRational::one(), |acc, a| -> Result<FactoredRational> {
        acc.mul(&FactoredRational::one_minus(&pit(a))).div(&FactoredRational::one_minus(&h.mul(&pit(a))))
    })?;
    let mut s5 = RationalSum::from_factored(&head);
    s5.add_factored(&tail);
    cases.push(ok_sum(format!("i={i} S5 final"), &s5, &s4.mul_factored(&bfac.inv()?)));

    // Bethe equation with k = hbar, s = 1.
    let s5x = (1..=r).try_fold(s5, |acc, k| acc.substitute(Var::P(k as u16), &x(k)))?;
    let bethe = bethe_lhs(i, r, n, &h, &Monomial::one())?;
    cases.push(ok_sum(format!("i={i} Bethe"), &s5x, &bethe).with_detail("k = hbar, s = 1"));

    // hbar = 0 in the final form.
    let mut classical = RationalSum::from_poly(prod_poly((1..=n).map(|a| over(&x(i), &t(a))).collect()));
    let mut tail0 = FactoredRational::monomial(sign(r).mul(&big_q));
    for &j in &others {
        tail0 = tail0.mul_monomial(&over(&x(i).neg(), &x(j).neg()));
    }
    classical.add_factored(&tail0);
    let lim = s5x.substitute_zero(Var::Hbar);
    cases.push(match lim {
        Ok(v) => ok_sum(format!("i={i} hbar=0"), &v, &classical),
        Err(e) => CaseRecord::error(format!("i={i} hbar=0"), &e),
    });
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Monomial {
        lambda().mul(&over(&p(1), &p(2)))
    }

    #[test]
    fn infinite_ratio_examples() {
        assert!(infinite_ratio(&w(), 0).unwrap().is_one());
        let two = FactoredRational::one_minus(&w().times_var(Var::Q, 1))
            .mul(&FactoredRational::one_minus(&w().times_var(Var::Q, 2)));
        assert_eq!(infinite_ratio(&w(), 2).unwrap(), two);
        assert_eq!(infinite_ratio(&w(), -1).unwrap(), FactoredRational::inv_one_minus(&w()).unwrap());
        assert!(infinite_ratio(&Monomial::one(), -1).is_err());
    }

    #[test]
    fn infinite_ratio_telescopes() {
        let c = Checker::default();
        for n in -3..=3 {
            let lhs = infinite_ratio(&w(), n).unwrap().div(&infinite_ratio(&w(), n - 1).unwrap()).unwrap();
            assert!(c.factored_equal(&lhs, &FactoredRational::one_minus(&w().times_var(Var::Q, n))), "N={n}");
        }
    }

    #[test]
    fn rank_one_is_projective_space() {
        let c = Checker::default();
        for d in 0..4 {
            let a = abelian_j_coefficient(3, &[d], false).unwrap();
            let b = crate::qdiff::pn_icoefficient(3, d).unwrap();
            assert!(c.factored_equal(&a, &b));
        }
        assert!(abelian_j_coefficient(3, &[0, 0], true).unwrap().is_one());
    }

    #[test]
    fn rank_two_instance() {
        let c = Checker::default();
        let got = abelian_j_coefficient(2, &[1, 0], false).unwrap();
        let mut want = FactoredRational::one();
        for a in 1..=2 {
            want = want.mul(&FactoredRational::inv_one_minus(&over(&p(1), &t(a)).times_var(Var::Q, 1)).unwrap());
        }
        want = want.mul(&FactoredRational::one_minus(&w().times_var(Var::Q, 1)));
        let w21 = lambda().mul(&over(&p(2), &p(1)));
        want = want.mul(&FactoredRational::inv_one_minus(&w21).unwrap());
        assert!(c.factored_equal(&got, &want));
    }

    #[test]
    fn rank_one_operators() {
        let (d1, d2) = build_bethe_operators(1, 1, 2).unwrap();
        let pt = |a| DiffOperator::term(1, Poly::from_monomial(&over(&p(1), &t(a))), vec![1], vec![0]);
        let ypt = |a| DiffOperator::term(1, Poly::from_monomial(&over(&p(1), &t(a)).mul(&y())), vec![1], vec![0]);
        let one = DiffOperator::one(1);
        assert_eq!(d1, one.sub(&pt(1)).mul(&one.sub(&pt(2))));
        assert_eq!(d2, one.add(&ypt(1)).mul(&one.add(&ypt(2))).mul(&DiffOperator::nov(1, 0, 1)));
        assert!(build_bethe_operators(2, 1, 2).is_err());
    }

    #[test]
    fn lambda_zero_collapses_cross_factors() {
        let (d1, d2) = build_bethe_operators(1, 2, 2).unwrap();
        let (e1, e2) = build_bethe_operators(1, 1, 2).unwrap();
        let lift = |op: &DiffOperator| {
            op.terms().fold(DiffOperator::zero(2), |acc, (c, b, a)| {
                acc.add(&DiffOperator::term(2, c.clone(), vec![b[0], 0], vec![a[0], 0]))
            })
        };
        assert_eq!(d1.substitute_zero(Var::Lambda).unwrap(), lift(&e1));
        assert_eq!(d2.substitute_zero(Var::Lambda).unwrap(), lift(&e2));
    }

    #[test]
    fn appendix_identities() {
        let c = Checker::default();
        for (r, n, trunc) in [(1, 2, 3), (2, 2, 2), (2, 3, 2)] {
            let rep = verify_appendix_b(r, n, trunc, &c).unwrap();
            let bad: Vec<_> = rep.cases.iter().filter(|x| !x.passed()).map(|x| x.id.clone()).collect();
            assert!(bad.is_empty(), "{r} {n}: {bad:?}");
        }
    }

    #[test]
    fn negative_limits_are_exercised() {
        let f = BlockForm::at(2, &[0, 2]);
        assert_eq!(f.phi[0][1], -2);
        let v = f.eval(true).unwrap();
        assert!(v.factors().iter().any(|(_, e)| e < 0));
    }

    #[test]
    fn staged_closing_forms_agree() {
        let forms = staged_forms(1, 3, &[1, 2]);
        assert_eq!(forms[2], forms[5]);
        assert_ne!(forms[0], forms[3]);
    }

    #[test]
    fn abelian_degenerations_hold() {
        let c = Checker::default();
        assert!(verify_abelian_degenerations(2, 3, 2, &c).unwrap().all_passed());
    }

    #[test]
    fn bethe_chain_holds() {
        let c = Checker::default();
        for (r, n) in [(1, 2), (2, 3)] {
            let rep = bethe_correspondence(r, n, &c).unwrap();
            let bad: Vec<_> = rep.cases.iter().filter(|x| !x.passed()).map(|x| x.id.clone()).collect();
            assert!(bad.is_empty(), "{r} {n}: {bad:?}");
        }
    }

    #[test]
    fn display_with_plain_factor_is_not_the_specialization() {
        let (d1, d2) = build_bethe_operators(1, 1, 2).unwrap();
        let g = specialize_operator(&d1.sub(&d2)).unwrap();
        let pt = |a| poly_one_minus(&over(&p(1), &t(a)));
        let displayed = pt(1).mul(&pt(2)).sub(&pt(1).mul(&pt(2)).mul_monomial(&Monomial::var(Var::Nov(1))));
        assert!(!g.sub(&displayed).is_zero());
    }
}
