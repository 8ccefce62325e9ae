//! Localized I-function coefficients of `G(r,n)`, vertex coefficients of
//! `T*G(r,n)`, and the balancing operator `B_y` relating them.

use rayon::prelude::*;

use crate::algebra::{
    brace, lambda_class, roof, Checker, FactoredRational, LambdaParam, Monomial, RationalSum, Var, WeightCharacter,
};
use crate::error::{Error, Result};
use crate::quot::{
    compositions, enumerate_fixed_points, grassmannian_cotangent_lambda_minus1, quasimap_bijection, rho,
    tangent_weights, GrassFixedPoint, QuasimapFixedPoint,
};
use crate::report::{CaseRecord, Report};

fn check_dvec(g: &GrassFixedPoint, dvec: &[u32]) -> Result<()> {
    if dvec.len() != g.r {
        return Err(Error::Invalid(format!("degree vector {dvec:?} must have length {}", g.r)));
    }
    Ok(())
}

fn tq(i: usize, j: usize, m: i32) -> Monomial {
    Monomial::t_ratio(i, j).mul(&Monomial::q_pow(m))
}

/// `1 / (A' B' C')` at the fixed point `g` for the composition `dvec`.
pub fn i_coefficient_direct(g: &GrassFixedPoint, dvec: &[u32]) -> Result<FactoredRational> {
    check_dvec(g, dvec)?;
    let mut den = FactoredRational::one();
    let comp = g.complement();
    for (k, &i) in g.subset.iter().enumerate() {
        let di = dvec[k] as i32;
        for &j in &comp {
            for m in 1..=di {
                den = den.mul(&FactoredRational::one_minus(&tq(i, j, m)));
            }
        }
        for m in 1..=di {
            den = den.mul(&FactoredRational::one_minus(&Monomial::q_pow(m)));
        }
        for (l, &j) in g.subset.iter().enumerate() {
            if l == k {
                continue;
            }
            let dj = dvec[l] as i32;
            for m in -di..=-di + dj - 1 {
                den = den.mul(&FactoredRational::one_minus(&tq(i, j, -m)));
            }
        }
    }
    den.inv()
}

/// Sum of [`i_coefficient_direct`] over all compositions of `d`.
pub fn i_coefficient_total(g: &GrassFixedPoint, d: u32) -> Result<RationalSum> {
    let mut s = RationalSum::zero();
    for dvec in compositions(d, g.r) {
        s.add_factored(&i_coefficient_direct(g, &dvec)?);
    }
    Ok(s)
}

/// `lambda_{-1}(T*G)|_g * sum_x 1/lambda_{-1}(T*_x Quot)` over fixed points
/// supported at zero lying over `g`.
pub fn j_coefficient_geometric(g: &GrassFixedPoint, d: u32) -> Result<RationalSum> {
    let pre = grassmannian_cotangent_lambda_minus1(g);
    let mut s = RationalSum::zero();
    for x in enumerate_fixed_points(g.r, g.n, d, true)?.into_iter().filter(|x| rho(x) == *g) {
        let lam = lambda_class(&tangent_weights(&x).dual(), &LambdaParam::MinusOne)?;
        if lam.is_zero() {
            return Err(Error::Domain(format!("lambda_-1 of the cotangent space vanishes at {x:?}")));
        }
        s.add_factored(&pre.div(&lam)?);
    }
    Ok(s)
}

/// `B_y`: every factor `(1 - m)^e` gains the partner `(1 + y m)^(-e)`.
pub fn balance(f: &FactoredRational) -> Result<FactoredRational> {
    let y = Monomial::var(Var::Y);
    let mut out = f.clone();
    for (cm, e) in f.factors().iter() {
        if *cm.coeff() != -num_rational::BigRational::from_integer(1.into()) {
            let shown = FactoredRational::binomial_pow(cm, 1)?;
            return Err(Error::Domain(format!("factor {shown} is not of the form (1 - m)")));
        }
        out = out.mul_binomial(&y.mul(&cm.neg()), -e)?;
    }
    Ok(out)
}

/// `y = -hbar/q`.
pub fn specialize_y(f: &FactoredRational) -> Result<FactoredRational> {
    let v = Monomial::from_powers([(Var::Q, -1), (Var::Hbar, 1)]).neg();
    f.substitute(Var::Y, &v)
}

/// The PSZ hypergeometric coefficient at `g`, indices relabelled by the subset.
pub fn vertex_coefficient_psz(g: &GrassFixedPoint, dvec: &[u32], normalized: bool) -> Result<FactoredRational> {
    check_dvec(g, dvec)?;
    let mut v = FactoredRational::one();
    for (k, &i) in g.subset.iter().enumerate() {
        let di = dvec[k] as i32;
        for (l, &j) in g.subset.iter().enumerate() {
            let dj = dvec[l] as i32;
            v = v.div(&brace(&Monomial::t_ratio(j, i), di - dj, normalized)?)?;
        }
        for j in 1..=g.n {
            v = v.mul(&brace(&Monomial::t_ratio(j, i), di, normalized)?);
        }
    }
    if !normalized {
        let d: i32 = dvec.iter().map(|&x| x as i32).sum();
        let half = Monomial::from_doubled(num_rational::BigRational::from_integer(1.into()), [(Var::Q, 1)]);
        v = v.mul_monomial(&half.pow(g.n as i32 * d)?);
    }
    Ok(v)
}

/// Character of `H^0 - H^1` of `O(m)` on `P^1`: `1 + q + ... + q^m` for
/// `m >= 0`, zero for `m = -1`, `-(q^{m+1} + ... + q^{-1})` below.
fn euler_characteristic(w: &Monomial, m: i32, mult: i64, out: &mut WeightCharacter) {
    if m >= 0 {
        for k in 0..=m {
            out.add_weight(&w.mul(&Monomial::q_pow(k)), mult);
        }
    } else {
        for k in m + 1..=-1 {
            out.add_weight(&w.mul(&Monomial::q_pow(k)), -mult);
        }
    }
}

/// Virtual tangent character at a quasimap fixed point:
/// `H(T^{1/2}) + H(hbar (T^{1/2})^dual) - T_p X`.
pub fn virtual_tangent(qp: &QuasimapFixedPoint) -> WeightCharacter {
    // Summands (weight, multiplicity, line bundle degree) of T^{1/2}.
    let mut half: Vec<(Monomial, i64, i32)> = Vec::new();
    for (k, &i) in qp.subset.iter().enumerate() {
        let di = qp.degrees[k] as i32;
        for j in 1..=qp.n {
            half.push((Monomial::t_ratio(j, i).mul(&Monomial::q_pow(-di)), 1, di));
        }
        for (l, &kk) in qp.subset.iter().enumerate() {
            let dk = qp.degrees[l] as i32;
            half.push((Monomial::t_ratio(kk, i).mul(&Monomial::q_pow(dk - di)), -1, di - dk));
        }
    }
    let hbar = Monomial::var(Var::Hbar);
    let mut t = WeightCharacter::new();
    for (w, mult, deg) in &half {
        euler_characteristic(w, *deg, *mult, &mut t);
        let dual = hbar.mul(&w.inv().expect("weights are units"));
        euler_characteristic(&dual, -deg, *mult, &mut t);
    }
    let g = qp.grass();
    for &i in &g.subset {
        for j in g.complement() {
            t.add_weight(&Monomial::t_ratio(j, i), -1);
            t.add_weight(&hbar.mul(&Monomial::t_ratio(i, j)), -1);
        }
    }
    t
}

/// `roof(T_vir)` at a quasimap fixed point, before normalization.
pub fn vertex_coefficient_localization(qp: &QuasimapFixedPoint) -> Result<FactoredRational> {
    roof(&virtual_tangent(qp))
}

/// The monomial `(-q^{1/2} hbar^{-1/2})^{nd}` separating the roof
/// contribution from the normalized vertex coefficient.
pub fn localization_prefactor(qp: &QuasimapFixedPoint) -> Monomial {
    let s = Monomial::from_doubled(-num_rational::BigRational::from_integer(1.into()), [(Var::Q, 1), (Var::Hbar, -1)]);
    s.pow((qp.n as i32) * (qp.degree() as i32)).expect("nonzero")
}

pub fn vertex_coefficient_localization_normalized(qp: &QuasimapFixedPoint) -> Result<FactoredRational> {
    let raw = vertex_coefficient_localization(qp)?;
    Ok(raw.mul_monomial(&localization_prefactor(qp).inv()?))
}

/// `B_{-hbar/q}(I_d)` for one composition.
pub fn balanced_specialized(g: &GrassFixedPoint, dvec: &[u32]) -> Result<FactoredRational> {
    specialize_y(&balance(&i_coefficient_direct(g, dvec)?)?)
}

fn dvec_id(g: &GrassFixedPoint, dvec: &[u32]) -> String {
    format!("I={:?} d={:?}", g.subset, dvec)
}

fn grid(r: usize, n: usize, dmax: u32) -> Result<Vec<(GrassFixedPoint, Vec<u32>)>> {
    let mut out = Vec::new();
    for g in GrassFixedPoint::all(r, n)? {
        for d in 0..=dmax {
            for dvec in compositions(d, r) {
                out.push((g.clone(), dvec));
            }
        }
    }
    Ok(out)
}

/// Main theorem: `B_{-hbar/q}(I_d|_g) = V_g^d` for every composition up to `dmax`.
pub fn verify_main_theorem(r: usize, n: usize, dmax: u32, checker: &Checker) -> Result<Report> {
    let cases = grid(r, n, dmax)?
        .par_iter()
        .map(|(g, dvec)| {
            let id = dvec_id(g, dvec);
            let run = || -> Result<CaseRecord> {
                let lhs = balanced_specialized(g, dvec)?;
                let rhs = vertex_coefficient_psz(g, dvec, true)?;
                Ok(CaseRecord::compare_factored(id.clone(), checker.factored_equal(&lhs, &rhs), &lhs, &rhs))
            };
            run().unwrap_or_else(|e| CaseRecord::error(id.clone(), &e))
        })
        .collect();
    Ok(Report::new(format!("verify-main --r {r} --n {n} --dmax {dmax}"), cases))
}

/// Both cross-path oracles: direct vs geometric I-coefficients per total
/// degree, and PSZ vs localization vertex coefficients per composition.
pub fn verify_cross_paths(r: usize, n: usize, dmax: u32, checker: &Checker) -> Result<Report> {
    let mut jobs: Vec<(GrassFixedPoint, u32)> = Vec::new();
    for g in GrassFixedPoint::all(r, n)? {
        for d in 0..=dmax {
            jobs.push((g.clone(), d));
        }
    }
    let mut cases: Vec<CaseRecord> = jobs
        .par_iter()
        .map(|(g, d)| {
            let id = format!("i-vs-j I={:?} d={d}", g.subset);
            let run = || -> Result<CaseRecord> {
                let lhs = i_coefficient_total(g, *d)?;
                let rhs = j_coefficient_geometric(g, *d)?;
                Ok(CaseRecord::compare_sums(id.clone(), lhs.equals(&rhs, checker), &lhs, &rhs))
            };
            run().unwrap_or_else(|e| CaseRecord::error(id.clone(), &e))
        })
        .collect();
    let vertex: Vec<CaseRecord> = grid(r, n, dmax)?
        .par_iter()
        .map(|(g, dvec)| {
            let id = format!("psz-vs-roof {}", dvec_id(g, dvec));
            let run = || -> Result<CaseRecord> {
                let qp = QuasimapFixedPoint { n: g.n, r: g.r, subset: g.subset.clone(), degrees: dvec.clone() };
                let qp = quasimap_bijection(&qp.to_quot())?;
                let lhs = vertex_coefficient_localization_normalized(&qp)?;
                let rhs = vertex_coefficient_psz(g, dvec, true)?;
                Ok(CaseRecord::compare_factored(id.clone(), checker.factored_equal(&lhs, &rhs), &lhs, &rhs))
            };
            run().unwrap_or_else(|e| CaseRecord::error(id.clone(), &e))
        })
        .collect();
    cases.extend(vertex);
    Ok(Report::new(format!("verify-cross --r {r} --n {n} --dmax {dmax}"), cases))
}

/// `hbar -> 0` in the vertex gives `I_d`; `y -> 0` undoes `B_y`; `I_d` is
/// always in the domain of `B_y`.
pub fn verify_degenerations(r: usize, n: usize, dmax: u32, checker: &Checker) -> Result<Report> {
    let cases: Vec<CaseRecord> = grid(r, n, dmax)?
        .par_iter()
        .flat_map_iter(|(g, dvec)| {
            let id = dvec_id(g, dvec);
            let hbar = || -> Result<CaseRecord> {
                let i = i_coefficient_direct(g, dvec)?;
                let v = vertex_coefficient_psz(g, dvec, true)?.substitute_zero(Var::Hbar)?;
                Ok(CaseRecord::compare_factored(format!("hbar=0 {id}"), checker.factored_equal(&v, &i), &v, &i))
            };
            let y = || -> Result<CaseRecord> {
                let i = i_coefficient_direct(g, dvec)?;
                let b = balance(&i)?.substitute_zero(Var::Y)?;
                Ok(CaseRecord::compare_factored(format!("y=0 {id}"), checker.factored_equal(&b, &i), &b, &i))
            };
            [
                hbar().unwrap_or_else(|e| CaseRecord::error(format!("hbar=0 {id}"), &e)),
                y().unwrap_or_else(|e| CaseRecord::error(format!("y=0 {id}"), &e)),
            ]
        })
        .collect();
    Ok(Report::new(format!("verify-degenerations --r {r} --n {n} --dmax {dmax}"), cases))
}

/// Vertex coefficient of `T*P^1` at the point `i` written out with ordinary
/// products: `prod_{m<d} (1 - hbar q^m)(1 - hbar w q^m) / prod_{m<=d} (1 - q^m)(1 - w q^m)`
/// with `w = t_i/t_j`.
pub fn p1_vertex_explicit(i: usize, d: u32) -> Result<FactoredRational> {
    let j = 3 - i;
    let w = Monomial::t_ratio(i, j);
    let h = Monomial::var(Var::Hbar);
    let mut v = FactoredRational::one();
    for m in 0..d as i32 {
        v = v.mul(&FactoredRational::one_minus(&h.mul(&Monomial::q_pow(m))));
        v = v.mul(&FactoredRational::one_minus(&h.mul(&w).mul(&Monomial::q_pow(m))));
    }
    for m in 1..=d as i32 {
        v = v.mul(&FactoredRational::inv_one_minus(&Monomial::q_pow(m))?);
        v = v.mul(&FactoredRational::inv_one_minus(&w.mul(&Monomial::q_pow(m)))?);
    }
    Ok(v)
}

/// `B_{-hbar/q}(I_d)` at both fixed points of `P^1` against the explicit products.
pub fn verify_p1_example(dmax: u32, checker: &Checker) -> Result<Report> {
    let mut cases = Vec::new();
    for i in 1..=2 {
        let g = GrassFixedPoint::new(2, 1, vec![i])?;
        for d in 1..=dmax {
            let lhs = balanced_specialized(&g, &[d])?;
            let rhs = p1_vertex_explicit(i, d)?;
            cases.push(CaseRecord::compare_factored(
                format!("p{i} d={d}"),
                checker.factored_equal(&lhs, &rhs),
                &lhs,
                &rhs,
            ));
        }
    }
    Ok(Report::new(format!("worked-example --dmax {dmax}"), cases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::factored_equal;

    fn g(n: usize, s: &[usize]) -> GrassFixedPoint {
        GrassFixedPoint::new(n, s.len(), s.to_vec()).unwrap()
    }

    fn om(m: &Monomial) -> FactoredRational {
        FactoredRational::one_minus(m)
    }

    fn op(m: &Monomial) -> FactoredRational {
        FactoredRational::one_plus(m)
    }

    #[test]
    fn p1_worked_example() {
        assert!(verify_p1_example(3, &Checker::default()).unwrap().all_passed());
        let c = Checker::default();
        let wrong = p1_vertex_explicit(2, 1).unwrap();
        assert!(!c.factored_equal(&balanced_specialized(&g(2, &[1]), &[1]).unwrap(), &wrong));
    }

    #[test]
    fn i_direct_examples() {
        let q = Monomial::q_pow(1);
        let want = om(&q).mul(&om(&tq(1, 2, 1))).inv().unwrap();
        assert_eq!(i_coefficient_direct(&g(2, &[1]), &[1]).unwrap(), want);
        assert!(i_coefficient_direct(&g(3, &[1, 2]), &[0, 0]).unwrap().is_one());
        let want = om(&tq(1, 3, 1)).mul(&om(&q)).mul(&om(&Monomial::t_ratio(2, 1))).inv().unwrap();
        assert_eq!(i_coefficient_direct(&g(3, &[1, 2]), &[1, 0]).unwrap(), want);
    }

    #[test]
    fn geometric_examples() {
        let c = Checker::default();
        let want = RationalSum::from_factored(&i_coefficient_direct(&g(2, &[1]), &[1]).unwrap());
        assert!(j_coefficient_geometric(&g(2, &[1]), 1).unwrap().equals(&want, &c));
        assert!(j_coefficient_geometric(&g(3, &[2]), 0).unwrap().equals(&RationalSum::one(), &c));
        let gg = g(4, &[1, 2]);
        assert!(j_coefficient_geometric(&gg, 2).unwrap().equals(&i_coefficient_total(&gg, 2).unwrap(), &c));
    }

    #[test]
    fn balance_examples() {
        let y = Monomial::var(Var::Y);
        let q = Monomial::q_pow(1);
        let u = tq(1, 2, 1);
        let f = om(&q).mul(&om(&u)).inv().unwrap();
        let want = op(&y.mul(&q)).mul(&op(&y.mul(&u))).mul(&f);
        assert_eq!(balance(&f).unwrap(), want);
        assert_eq!(balance(&f).unwrap().substitute_zero(Var::Y).unwrap(), f);
        let v = Monomial::var(Var::T(3));
        let f = om(&v).div(&om(&u)).unwrap();
        let want = om(&v).mul(&op(&y.mul(&u))).div(&om(&u).mul(&op(&y.mul(&v)))).unwrap();
        assert_eq!(balance(&f).unwrap(), want);
        assert!(balance(&op(&q)).is_err());
    }

    #[test]
    fn psz_examples() {
        let gg = g(2, &[1]);
        assert!(vertex_coefficient_psz(&gg, &[0], true).unwrap().is_one());
        let h = Monomial::var(Var::Hbar);
        let q = Monomial::q_pow(1);
        let want = om(&h).mul(&om(&h.mul(&Monomial::t_ratio(1, 2)))).div(&om(&q).mul(&om(&tq(1, 2, 1)))).unwrap();
        assert!(factored_equal(&vertex_coefficient_psz(&gg, &[1], true).unwrap(), &want));
    }

    #[test]
    fn psz_cross_terms_for_two_three() {
        // {t2/t1}_{1}^{-1}{t2/t1}_{1} cancels; {t1/t2}_{-1}^{-1}{t1/t2}_0 survives.
        let gg = g(3, &[1, 2]);
        let v = vertex_coefficient_psz(&gg, &[1, 0], true).unwrap();
        let mut want = brace(&Monomial::t_ratio(1, 2), -1, true).unwrap().inv().unwrap();
        for j in [1, 3] {
            want = want.mul(&brace(&Monomial::t_ratio(j, 1), 1, true).unwrap());
        }
        assert!(factored_equal(&v, &want));
    }

    #[test]
    fn unnormalized_psz_prefactor() {
        let gg = g(2, &[1]);
        let raw = vertex_coefficient_psz(&gg, &[2], false).unwrap();
        let norm = vertex_coefficient_psz(&gg, &[2], true).unwrap();
        let ratio = raw.div(&norm).unwrap();
        assert!(ratio.factors().is_empty());
        // (-1)^{nd} (q^2/hbar)^{nd/2}
        assert_eq!(ratio.unit(), &Monomial::from_powers([(Var::Q, 4), (Var::Hbar, -2)]));
    }

    #[test]
    fn p1_virtual_tangent() {
        let qp = QuasimapFixedPoint { n: 2, r: 1, subset: vec![1], degrees: vec![1] };
        let h = Monomial::var(Var::Hbar);
        let mut want = WeightCharacter::from_weights([Monomial::q_pow(-1), tq(2, 1, -1)]);
        want.add_weight(&h, -1);
        want.add_weight(&h.mul(&Monomial::t_ratio(1, 2)), -1);
        assert_eq!(virtual_tangent(&qp), want);
        let qp0 = QuasimapFixedPoint { n: 2, r: 1, subset: vec![1], degrees: vec![0] };
        assert!(virtual_tangent(&qp0).is_empty());
        assert!(vertex_coefficient_localization(&qp0).unwrap().is_one());
    }

    #[test]
    fn p1_virtual_tangent_degree_three() {
        let qp = QuasimapFixedPoint { n: 2, r: 1, subset: vec![1], degrees: vec![3] };
        let h = Monomial::var(Var::Hbar);
        let mut want = WeightCharacter::new();
        for k in 1..=3 {
            want.add_weight(&Monomial::q_pow(-k), 1);
            want.add_weight(&tq(2, 1, -k), 1);
            want.add_weight(&h.mul(&Monomial::q_pow(k - 1)), -1);
            want.add_weight(&h.mul(&tq(1, 2, k - 1)), -1);
        }
        assert_eq!(virtual_tangent(&qp), want);
    }

    #[test]
    fn localization_matches_psz_p1() {
        for d in 0..=3 {
            for s in [1, 2] {
                let qp = QuasimapFixedPoint { n: 2, r: 1, subset: vec![s], degrees: vec![d] };
                let lhs = vertex_coefficient_localization_normalized(&qp).unwrap();
                let rhs = vertex_coefficient_psz(&g(2, &[s]), &[d], true).unwrap();
                assert!(factored_equal(&lhs, &rhs), "d={d} s={s}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn localization_dimension_of_t_vir() {
        // H(T^{1/2}) and its dual partner have total rank dim T*G(r,n), which T_pX removes.
        for qp in enumerate_fixed_points(2, 4, 2, true).unwrap().iter().map(|p| quasimap_bijection(p).unwrap()) {
            assert_eq!(virtual_tangent(&qp).dim(), 0, "{qp:?}");
        }
    }

    #[test]
    fn main_theorem_small() {
        let c = Checker::default();
        assert!(verify_main_theorem(1, 2, 3, &c).unwrap().all_passed());
        assert!(verify_main_theorem(2, 3, 2, &c).unwrap().all_passed());
    }

    #[test]
    fn cross_paths_small() {
        let rep = verify_cross_paths(2, 3, 2, &Checker::default()).unwrap();
        let bad: Vec<_> = rep.cases.iter().filter(|c| !c.passed()).map(|c| c.id.clone()).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn degenerations_small() {
        assert!(verify_degenerations(2, 3, 2, &Checker::default()).unwrap().all_passed());
    }
}
