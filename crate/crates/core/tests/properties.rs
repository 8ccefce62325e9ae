use std::collections::BTreeMap;

use proptest::prelude::*;

use qkbalance::algebra::{
    factored_equal, lambda_class, pochhammer, ratio, roof, Checker, ExpandedRational, FactoredRational, LambdaParam,
    Monomial, Poly, RationalSum, Var, WeightCharacter,
};
use qkbalance::qdiff::{canonicalize, multi_degrees, DiffOperator, Letter, TruncatedSeries};

const VARS: [Var; 4] = [Var::T(1), Var::T(2), Var::Q, Var::Hbar];

fn coeff() -> impl Strategy<Value = (i64, i64)> {
    prop::sample::select(vec![(1, 1), (-1, 1), (2, 1), (-3, 1), (1, 2), (-2, 3)])
}

/// Monomials with doubled exponents in `[-4, 4]`, so half-integers occur.
fn monomial() -> impl Strategy<Value = Monomial> {
    (coeff(), prop::collection::vec(-4i32..=4, VARS.len()))
        .prop_map(|((n, d), e)| Monomial::from_doubled(ratio(n, d), VARS.iter().copied().zip(e)))
}

/// Integral, non-constant weights with coefficient 1.
fn weight() -> impl Strategy<Value = Monomial> {
    (-2i32..=2, -2i32..=2)
        .prop_filter("nontrivial", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| Monomial::t_ratio(1, 2).pow(a).unwrap().mul(&Monomial::q_pow(b)))
}

fn character() -> impl Strategy<Value = WeightCharacter> {
    prop::collection::vec((weight(), 1i64..=2), 0..4).prop_map(|ws| {
        let mut c = WeightCharacter::new();
        for (w, m) in ws {
            c.add_weight(&w, m);
        }
        c
    })
}

fn factored() -> impl Strategy<Value = FactoredRational> {
    (monomial(), prop::collection::vec((monomial(), -2i32..=2), 0..4)).prop_map(|(u, fs)| {
        let mut f = FactoredRational::monomial(u);
        for (m, e) in fs {
            if let Ok(g) = f.clone().mul_binomial(&m, e) {
                f = g;
            }
        }
        f
    })
}

fn letter(r: usize) -> impl Strategy<Value = Letter> {
    prop_oneof![
        (coeff(), -2i32..=2).prop_map(|((n, d), e)| {
            Letter::Coeff(Poly::from_monomial(&Monomial::from_powers([(Var::P(1), e)]).scale(&ratio(n, d))))
        }),
        (0..r, -2i32..=2).prop_map(|(i, k)| Letter::Shift(i, k)),
        (0..r, 0u32..=2).prop_map(|(i, k)| Letter::Nov(i, k)),
    ]
}

fn word(r: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(r), 0..5)
}

fn series(r: usize, trunc: u32) -> impl Strategy<Value = TruncatedSeries> {
    let n = multi_degrees(r, trunc).len();
    prop::collection::vec(monomial(), n).prop_map(move |ms| {
        let mut s = TruncatedSeries::zero(r, trunc);
        for (d, m) in multi_degrees(r, trunc).into_iter().zip(ms) {
            s.add(d, RationalSum::from_poly(Poly::from_monomial(&m)));
        }
        s
    })
}

fn same_series(a: &TruncatedSeries, b: &TruncatedSeries) -> bool {
    let c = Checker::default();
    multi_degrees(a.r, a.trunc).iter().all(|d| a.coeff(d).equals(&b.coeff(d), &c))
}

/// Applies a word letter by letter, rightmost first, straight from the
/// definitions `S_i: c_d -> q^{d_i} c_d` and `Q_i: d -> d + e_i`.
fn apply_word(word: &[Letter], s: &TruncatedSeries) -> TruncatedSeries {
    let mut cur: BTreeMap<Vec<u32>, RationalSum> =
        multi_degrees(s.r, s.trunc).into_iter().map(|d| (d.clone(), s.coeff(&d))).collect();
    for l in word.iter().rev() {
        cur = match l {
            Letter::Coeff(c) => cur.into_iter().map(|(d, v)| (d, v.mul_poly(c))).collect(),
            Letter::Shift(i, k) => cur
                .into_iter()
                .map(|(d, v)| {
                    let m = Monomial::q_pow(k * d[*i] as i32);
                    (d, v.mul_monomial(&m))
                })
                .collect(),
            Letter::Nov(i, k) => cur
                .into_iter()
                .filter_map(|(mut d, v)| {
                    d[*i] += k;
                    (d.iter().sum::<u32>() <= s.trunc).then_some((d, v))
                })
                .collect(),
        };
    }
    let mut out = TruncatedSeries::zero(s.r, s.trunc);
    for (d, v) in cur {
        out.add(d, v);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn factored_product_matches_expanded(a in factored(), b in factored()) {
        let (ea, eb) = (a.expand(), b.expand());
        let prod = ExpandedRational::new(ea.num.mul(&eb.num), ea.den.mul(&eb.den)).unwrap();
        prop_assert!(a.mul(&b).expand().equals(&prod));
    }

    #[test]
    fn factored_division_round_trip(a in factored(), b in factored()) {
        prop_assume!(!b.is_zero());
        let back = a.mul(&b).div(&b).unwrap();
        prop_assert!(factored_equal(&back, &a));
    }

    #[test]
    fn verdicts_do_not_depend_on_seed(a in factored(), b in factored(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let x = a.mul(&b);
        let y = b.mul(&a);
        prop_assert!(Checker::new(s1).factored_equal(&x, &y));
        let v1 = Checker::new(s1).factored_equal(&a, &b);
        prop_assert_eq!(v1, Checker::new(s2).factored_equal(&a, &b));
        prop_assert_eq!(v1, a.expand().equals(&b.expand()));
    }

    #[test]
    fn pochhammer_cocycle(a in -4i32..=4, b in -4i32..=4, k in -2i32..=2) {
        let x = Monomial::t_ratio(1, 2).mul(&Monomial::q_pow(k));
        let lhs = pochhammer(&x, a + b).unwrap();
        let rhs = pochhammer(&x, a).unwrap().mul(&pochhammer(&x.mul(&Monomial::q_pow(a)), b).unwrap());
        prop_assert!(factored_equal(&lhs, &rhs));
    }

    #[test]
    fn lambda_is_multiplicative(v in character(), w in character()) {
        let y = LambdaParam::FormalY;
        let lhs = lambda_class(&v.add(&w), &y).unwrap();
        let rhs = lambda_class(&v, &y).unwrap().mul(&lambda_class(&w, &y).unwrap());
        prop_assert!(factored_equal(&lhs, &rhs));
        let m = LambdaParam::MinusOne;
        let lhs = lambda_class(&v.add(&w), &m).unwrap();
        let rhs = lambda_class(&v, &m).unwrap().mul(&lambda_class(&w, &m).unwrap());
        prop_assert!(factored_equal(&lhs, &rhs));
    }

    #[test]
    fn roof_is_a_homomorphism(v in character(), w in character()) {
        let lhs = roof(&v.add(&w)).unwrap();
        let rhs = roof(&v).unwrap().mul(&roof(&w).unwrap());
        prop_assert!(factored_equal(&lhs, &rhs));
        let diff = roof(&v.add(&w).sub(&w)).unwrap();
        prop_assert!(factored_equal(&diff, &roof(&v).unwrap()));
    }

    #[test]
    fn half_exponents_are_closed(m in monomial(), k in -3i32..=3, j in -3i32..=3) {
        prop_assert!(m.mul(&m).exps().is_integral());
        prop_assert!(m.mul(&m.inv().unwrap()).is_one());
        prop_assert_eq!(m.pow(k).unwrap().pow(j).unwrap(), m.pow(k * j).unwrap());
        let f = FactoredRational::monomial(m.clone());
        prop_assert!(f.expand().equals(&ExpandedRational::from_poly(Poly::from_monomial(&m))));
    }

    #[test]
    fn canonicalize_is_multiplicative((r, a, b) in (1usize..=2).prop_flat_map(|r| (Just(r), word(r), word(r)))) {
        let ab: Vec<Letter> = a.iter().chain(&b).cloned().collect();
        let whole = canonicalize(r, &ab);
        prop_assert_eq!(&whole, &canonicalize(r, &a).mul(&canonicalize(r, &b)));
        prop_assert_eq!(DiffOperator::one(r).mul(&whole), whole);
    }

    #[test]
    fn action_matches_letter_definitions(a in word(2), s in series(2, 3)) {
        let op = canonicalize(2, &a);
        prop_assert!(same_series(&op.apply(&s), &apply_word(&a, &s)));
    }

    #[test]
    fn action_respects_products(a in word(2), b in word(2), s in series(2, 3)) {
        let (oa, ob) = (canonicalize(2, &a), canonicalize(2, &b));
        prop_assert!(same_series(&oa.mul(&ob).apply(&s), &oa.apply(&ob.apply(&s))));
    }
}

#[test]
fn shift_eigen_action() {
    for d in multi_degrees(2, 4) {
        for i in 0..2 {
            let mut s = TruncatedSeries::zero(2, 4);
            s.add(d.clone(), RationalSum::one());
            let out = DiffOperator::shift(2, i, 1).apply(&s);
            let want = RationalSum::from_poly(Poly::from_monomial(&Monomial::q_pow(d[i] as i32)));
            assert_eq!(out.coeff(&d), want);
            assert_eq!(out.degrees().count(), 1);
        }
    }
}
