//! Torus-fixed points of the Quot scheme of `P^1` and their tangent weights.
//!
//! A fixed point is a choice of `r` coordinate lines `delta` together with
//! orders of vanishing `a_i` at `0` and `b_i` at infinity.

use itertools::Itertools;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::algebra::{lambda_class, FactoredRational, LambdaParam, Monomial, WeightCharacter};
use crate::error::{Error, Result};
use crate::report::{CaseRecord, Report};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotFixedPoint {
    pub n: usize,
    pub r: usize,
    /// 1-based, strictly increasing.
    pub delta: Vec<usize>,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GrassFixedPoint {
    pub n: usize,
    pub r: usize,
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuasimapFixedPoint {
    pub n: usize,
    pub r: usize,
    pub subset: Vec<usize>,
    pub degrees: Vec<u32>,
}

fn check_subset(n: usize, r: usize, s: &[usize]) -> Result<()> {
    if r == 0 || r > n {
        return Err(Error::Invalid(format!("need 0 < r <= n, got r={r}, n={n}")));
    }
    if s.len() != r {
        return Err(Error::Invalid(format!("subset {s:?} must have {r} elements")));
    }
    if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&i| i == 0 || i > n) {
        return Err(Error::Invalid(format!("subset {s:?} must be increasing within 1..={n}")));
    }
    Ok(())
}

impl GrassFixedPoint {
    pub fn new(n: usize, r: usize, subset: Vec<usize>) -> Result<GrassFixedPoint> {
        check_subset(n, r, &subset)?;
        Ok(GrassFixedPoint { n, r, subset })
    }

    /// Indices in `1..=n` not in the subset.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|j| !self.subset.contains(j)).collect()
    }

    pub fn all(r: usize, n: usize) -> Result<Vec<GrassFixedPoint>> {
        check_subset(n, r, &(1..=r).collect::<Vec<_>>())?;
        Ok((1..=n).combinations(r).map(|subset| GrassFixedPoint { n, r, subset }).collect())
    }
}

impl QuotFixedPoint {
    pub fn new(n: usize, r: usize, delta: Vec<usize>, a: Vec<u32>, b: Vec<u32>) -> Result<QuotFixedPoint> {
        check_subset(n, r, &delta)?;
        if a.len() != r || b.len() != r {
            return Err(Error::Invalid(format!("degree vectors must have length {r}")));
        }
        Ok(QuotFixedPoint { n, r, delta, a, b })
    }

    pub fn degree(&self) -> u32 {
        self.a.iter().chain(&self.b).sum()
    }

    pub fn is_supported_at_zero(&self) -> bool {
        self.b.iter().all(|&x| x == 0)
    }

    fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|j| !self.delta.contains(j)).collect()
    }
}

impl QuasimapFixedPoint {
    /// The Quot point supported at zero with `a = degrees`.
    pub fn to_quot(&self) -> QuotFixedPoint {
        QuotFixedPoint { n: self.n, r: self.r, delta: self.subset.clone(), a: self.degrees.clone(), b: vec![0; self.r] }
    }

    pub fn grass(&self) -> GrassFixedPoint {
        GrassFixedPoint { n: self.n, r: self.r, subset: self.subset.clone() }
    }

    pub fn degree(&self) -> u32 {
        self.degrees.iter().sum()
    }
}

/// All ordered `parts`-tuples of nonnegative integers summing to `d`, in
/// increasing lexicographic order.
pub fn compositions(d: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(d: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=d {
            prefix.push(k);
            rec(d - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(d, parts, &mut Vec::new(), &mut out);
    out
}

/// Fixed points of degree `d`: subsets first, then degree data, both lexicographic.
pub fn enumerate_fixed_points(r: usize, n: usize, d: u32, supported_at_zero: bool) -> Result<Vec<QuotFixedPoint>> {
    let mut out = Vec::new();
    for g in GrassFixedPoint::all(r, n)? {
        if supported_at_zero {
            for a in compositions(d, r) {
                out.push(QuotFixedPoint { n, r, delta: g.subset.clone(), a, b: vec![0; r] });
            }
        } else {
            for ab in compositions(d, 2 * r) {
                let (a, b) = ab.split_at(r);
                out.push(QuotFixedPoint { n, r, delta: g.subset.clone(), a: a.to_vec(), b: b.to_vec() });
            }
        }
    }
    Ok(out)
}

fn tq(j: usize, i: usize, m: i32) -> Monomial {
    Monomial::t_ratio(j, i).mul(&Monomial::q_pow(m))
}

/// Tangent space at a fixed point as a sum of four weight families.
pub fn tangent_weights(p: &QuotFixedPoint) -> WeightCharacter {
    let mut w = WeightCharacter::new();
    let comp = p.complement();
    for (k, &i) in p.delta.iter().enumerate() {
        let (ai, bi) = (p.a[k] as i32, p.b[k] as i32);
        for &j in &comp {
            for s in 0..=ai + bi {
                w.add_weight(&tq(j, i, -ai + s), 1);
            }
        }
        for s in (0..=ai + bi).filter(|&s| s != ai) {
            w.add_weight(&Monomial::q_pow(-ai + s), 1);
        }
        for (l, &j) in p.delta.iter().enumerate() {
            if l == k {
                continue;
            }
            let (aj, bj) = (p.a[l] as i32, p.b[l] as i32);
            for s in -ai..=-ai + aj - 1 {
                w.add_weight(&tq(j, i, s), 1);
            }
            for s in bi - bj + 1..=bi {
                w.add_weight(&tq(j, i, s), 1);
            }
        }
    }
    w
}

/// `lambda_y` of the cotangent space, from the dual of the tangent weights.
pub fn cotangent_lambda_y(p: &QuotFixedPoint) -> Result<FactoredRational> {
    if !p.is_supported_at_zero() {
        return Err(Error::Domain("cotangent product formula needs a point supported at zero".into()));
    }
    lambda_class(&tangent_weights(p).dual(), &LambdaParam::FormalY)
}

/// The same class assembled from the three explicit products `A * B * C`.
pub fn cotangent_lambda_abc(p: &QuotFixedPoint, y: &LambdaParam) -> Result<FactoredRational> {
    if !p.is_supported_at_zero() {
        return Err(Error::Domain("cotangent product formula needs a point supported at zero".into()));
    }
    let mut w = WeightCharacter::new();
    let comp = p.complement();
    for (k, &i) in p.delta.iter().enumerate() {
        let di = p.a[k] as i32;
        for &j in &comp {
            for m in 0..=di {
                w.add_weight(&tq(i, j, m), 1);
            }
        }
        for m in 1..=di {
            w.add_weight(&Monomial::q_pow(m), 1);
        }
        for (l, &j) in p.delta.iter().enumerate() {
            if l != k {
                let dj = p.a[l] as i32;
                for m in -di..=-di + dj - 1 {
                    w.add_weight(&tq(i, j, -m), 1);
                }
            }
        }
    }
    lambda_class(&w, y)
}

pub fn rho(p: &QuotFixedPoint) -> GrassFixedPoint {
    GrassFixedPoint { n: p.n, r: p.r, subset: p.delta.clone() }
}

/// `prod_{i in I, j not in I} (1 - t_i/t_j)`.
pub fn grassmannian_cotangent_lambda_minus1(g: &GrassFixedPoint) -> FactoredRational {
    let mut f = FactoredRational::one();
    for &i in &g.subset {
        for j in g.complement() {
            f = f.mul(&FactoredRational::one_minus(&Monomial::t_ratio(i, j)));
        }
    }
    f
}

pub fn quasimap_bijection(p: &QuotFixedPoint) -> Result<QuasimapFixedPoint> {
    if !p.is_supported_at_zero() {
        return Err(Error::Domain("quasimap correspondence needs a point supported at zero".into()));
    }
    Ok(QuasimapFixedPoint { n: p.n, r: p.r, subset: p.delta.clone(), degrees: p.a.clone() })
}

/// Fixed-point counts `C(n,r) C(d+r-1,r-1)` and tangent dimensions
/// `nd + r(n-r)` over all `r <= n <= nmax`, `d <= dmax`.
pub fn verify_counts(nmax: usize, dmax: u32) -> Result<Report> {
    let mut cases = Vec::new();
    for n in 1..=nmax {
        for r in 1..=n {
            for d in 0..=dmax {
                let pts = enumerate_fixed_points(r, n, d, true)?;
                let want = binomial(n as u64, r as u64) * binomial(d as u64 + r as u64 - 1, r as u64 - 1);
                let id = format!("r={r} n={n} d={d}");
                cases.push(if pts.len() as u64 == want {
                    CaseRecord::pass(format!("count {id}"))
                } else {
                    CaseRecord::fail(format!("count {id}"), format!("{} points, expected {want}", pts.len()), None)
                });
                let dim = (n * d as usize + r * (n - r)) as i64;
                let bad = pts.iter().find(|p| {
                    let w = tangent_weights(p);
                    !w.is_effective() || w.dim() != dim
                });
                cases.push(match bad {
                    None => CaseRecord::pass(format!("dimension {id}")),
                    Some(p) => CaseRecord::fail(
                        format!("dimension {id}"),
                        format!("point {p:?} has tangent dimension {}, expected {dim}", tangent_weights(p).dim()),
                        None,
                    ),
                });
            }
        }
    }
    Ok(Report::new(format!("invariants --nmax {nmax} --dmax {dmax}"), cases))
}
