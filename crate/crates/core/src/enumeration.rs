//! Short-vector enumeration (Fincke–Pohst), minimal norms, dual minimal
//! norms, generation tests and orthogonal projections.
//!
//! The enumeration works with the integral Gram–Schmidt data of the Gram
//! matrix: with `d_k` the leading principal minors and `λ` the integral
//! Gram–Schmidt coefficients, the form splits as
//! `Q(x) = Σ_k t_k² / (d_k d_{k+1})` where
//! `t_k = d_{k+1} x_k + Σ_{i>k} λ_{ik} x_i` is an integer. Scaling by a common
//! multiple of the denominators turns every pruning test into an integer
//! comparison, and the admissible range of each coordinate comes from an
//! exact integer square root.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{LatticeError, Result};
use crate::gram::{GramMatrix, IntMatrix};
use crate::hnf;
use crate::intops::{self, ExactInt};
use crate::rational::{RationalMatrix, RationalVector};
use crate::reduction::{lll_big, lll_reduce};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ShortVector {
    pub norm: i64,
    pub coords: Vec<i64>,
}

/// All nonzero lattice vectors of norm at most `bound`, one per `±` pair,
/// first nonzero coordinate positive, sorted by norm then coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVectorList {
    pub bound: BigRational,
    pub vectors: Vec<ShortVector>,
}

impl ShortVectorList {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Representatives of norm exactly `m`.
    pub fn of_norm(&self, m: i64) -> impl Iterator<Item = &ShortVector> {
        self.vectors.iter().filter(move |v| v.norm == m)
    }

    /// Number of vectors of norm exactly `m`, counting both signs.
    pub fn count_of_norm(&self, m: i64) -> usize {
        2 * self.of_norm(m).count()
    }
}

struct Plan<T> {
    n: usize,
    /// `d[k+1]`, the multiplier of `x_k` in `t_k`
    dk1: Vec<T>,
    /// `lam[i][k]` for `i > k`
    lam: Vec<Vec<T>>,
    /// per-level weight `w_k`, with `Σ w_k t_k² = Q(x) * scale`
    w: Vec<T>,
    budget: T,
}

/// Integral Gram–Schmidt data: `(d, lam)` with `d[0] = 1`.
fn integral_gram_schmidt<T: ExactInt>(g: &GramMatrix) -> Option<(Vec<T>, Vec<Vec<T>>)> {
    let n = g.rank();
    let mut d = vec![T::from_i64(1); n + 1];
    let mut lam = vec![vec![T::nil(); n]; n];
    for k in 0..n {
        for j in 0..=k {
            let mut u = T::from_i64(g.get(k, j));
            for i in 0..j {
                u = d[i + 1].mul(&u)?.sub(&lam[k][i].mul(&lam[j][i])?)?.div_exact(&d[i])?;
            }
            if j < k {
                lam[k][j] = u;
            } else {
                d[k + 1] = u;
            }
        }
    }
    Some((d, lam))
}

fn lcm<T: ExactInt>(a: &T, b: &T) -> Option<T> {
    a.div_exact(&a.gcd(b))?.mul(b)
}

fn make_plan<T: ExactInt>(g: &GramMatrix, bound: &BigRational) -> Option<Plan<T>> {
    let n = g.rank();
    let (d, lam) = integral_gram_schmidt::<T>(g)?;
    let mut l = T::from_i64(1);
    let mut p = Vec::with_capacity(n);
    for k in 0..n {
        let pk = d[k].mul(&d[k + 1])?;
        l = lcm(&l, &pk)?;
        p.push(pk);
    }
    let bd = T::from_big(bound.denom())?;
    let bn = T::from_big(bound.numer())?;
    let w = p.iter().map(|pk| l.div_exact(pk)?.mul(&bd)).collect::<Option<Vec<T>>>()?;
    let budget = bn.mul(&l)?;
    Some(Plan { n, dk1: d[1..].to_vec(), lam, w, budget })
}

/// Conservative test that an `i128` run cannot overflow: the budget and the
/// centre sums `Σ λ x` stay far below the limit for every admissible `x`.
fn fits_i128(g: &GramMatrix, plan: &Plan<i128>, bound: &BigRational) -> bool {
    let limit: i128 = 1 << 100;
    if plan.budget.abs() > limit || plan.w.iter().any(|w| w.abs() > limit) {
        return false;
    }
    // |x_i| <= sqrt(bound * (G^-1)_ii)
    let adj = g.adjugate();
    let det = g.det();
    let mut xmax = Vec::with_capacity(plan.n);
    for (i, row) in adj.iter().enumerate() {
        let v = (bound * BigRational::from_integer(row[i].clone()) / BigRational::from_integer(det.clone())).ceil();
        let Some(v) = v.to_integer().to_i128() else { return false };
        xmax.push(v.isqrt() + 1);
    }
    for k in 0..plan.n {
        let mut s: i128 = plan.dk1[k].abs().saturating_mul(xmax[k]);
        for i in k + 1..plan.n {
            s = s.saturating_add(plan.lam[i][k].abs().saturating_mul(xmax[i]));
        }
        if s > limit {
            return false;
        }
    }
    true
}

fn walk<T: ExactInt, F: FnMut(&[i64]) -> ControlFlow<()>>(
    plan: &Plan<T>,
    k: usize,
    x: &mut [i64],
    rem: &T,
    zero_above: bool,
    f: &mut F,
) -> ControlFlow<()> {
    const OVF: &str = "enumeration arithmetic overflow";
    let mut c = T::nil();
    for i in k + 1..plan.n {
        if x[i] != 0 {
            c = c.add(&plan.lam[i][k].mul(&T::from_i64(x[i])).expect(OVF)).expect(OVF);
        }
    }
    let s = rem.div_floor(&plan.w[k]).expect(OVF).isqrt();
    let dk = &plan.dk1[k];
    let neg_s = T::nil().sub(&s).expect(OVF);
    let mut lo = neg_s.sub(&c).expect(OVF).div_ceil(dk).expect(OVF).to_i64().expect(OVF);
    let hi = s.sub(&c).expect(OVF).div_floor(dk).expect(OVF).to_i64().expect(OVF);
    if zero_above {
        lo = lo.max(0);
    }
    for xv in lo..=hi {
        x[k] = xv;
        if k == 0 {
            if !(zero_above && xv == 0) {
                if let ControlFlow::Break(()) = f(x) {
                    x[k] = 0;
                    return ControlFlow::Break(());
                }
            }
        } else {
            let t = dk.mul(&T::from_i64(xv)).expect(OVF).add(&c).expect(OVF);
            let used = t.mul(&t).expect(OVF).mul(&plan.w[k]).expect(OVF);
            let next = rem.sub(&used).expect(OVF);
            debug_assert!(!next.is_neg());
            if let ControlFlow::Break(()) = walk(plan, k - 1, x, &next, zero_above && xv == 0, f) {
                x[k] = 0;
                return ControlFlow::Break(());
            }
        }
    }
    x[k] = 0;
    ControlFlow::Continue(())
}

/// Visit every nonzero vector `x` (coordinates in `g`'s own basis) with
/// `x^T g x <= bound`, one per `±` pair (the last nonzero coordinate is
/// positive). No reduction is applied; callers pass a reduced Gram matrix
/// for speed.
pub(crate) fn visit_raw<F: FnMut(&[i64]) -> ControlFlow<()>>(g: &GramMatrix, bound: &BigRational, mut f: F) {
    let n = g.rank();
    if n == 0 || !bound.is_positive() {
        return;
    }
    let mut x = vec![0i64; n];
    if let Some(plan) = make_plan::<i128>(g, bound) {
        if fits_i128(g, &plan, bound) {
            let budget = plan.budget;
            let _ = walk(&plan, n - 1, &mut x, &budget, true, &mut f);
            return;
        }
    }
    let plan = make_plan::<BigInt>(g, bound).expect("bigint arithmetic does not overflow");
    let budget = plan.budget.clone();
    let _ = walk(&plan, n - 1, &mut x, &budget, true, &mut f);
}

fn canonical_sign(v: &mut [i64]) {
    if let Some(&first) = v.iter().find(|&&c| c != 0) {
        if first < 0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
    }
}

fn apply_transform(u: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    u.iter()
        .map(|row| {
            let s: i128 = row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
            i64::try_from(s).expect("coordinate overflow")
        })
        .collect()
}

/// Stream every short vector of `g` (coordinates in `g`'s basis, canonical
/// sign) together with its norm. Order is unspecified; the visitor may stop
/// the walk early.
pub fn for_each_short_vector<F>(g: &GramMatrix, bound: &BigRational, mut f: F)
where
    F: FnMut(&[i64], i64) -> ControlFlow<()>,
{
    if g.rank() == 0 {
        return;
    }
    let red = lll_reduce(g);
    visit_raw(&red.gram, bound, |y| {
        let norm = red.gram.norm(y) as i64;
        let mut x = apply_transform(&red.transform, y);
        canonical_sign(&mut x);
        f(&x, norm)
    });
}

pub fn short_vectors(g: &GramMatrix, bound: &BigRational) -> ShortVectorList {
    let mut vectors = Vec::new();
    for_each_short_vector(g, bound, |x, norm| {
        vectors.push(ShortVector { norm, coords: x.to_vec() });
        ControlFlow::Continue(())
    });
    vectors.sort();
    ShortVectorList { bound: bound.clone(), vectors }
}

pub fn short_vectors_up_to(g: &GramMatrix, bound: i64) -> ShortVectorList {
    short_vectors(g, &BigRational::from_integer(BigInt::from(bound)))
}

/// Smallest positive norm.
pub fn min_norm(g: &GramMatrix) -> i64 {
    assert!(g.rank() > 0, "minimal norm of the zero lattice");
    let red = lll_reduce(g);
    min_norm_of_reduced(&red.gram)
}

fn min_norm_of_reduced(g: &GramMatrix) -> i64 {
    let m0 = g.diag().into_iter().min().expect("nonzero rank");
    let mut best = m0;
    if m0 > 1 {
        visit_raw(g, &BigRational::from_integer(BigInt::from(m0 - 1)), |y| {
            best = best.min(g.norm(y) as i64);
            ControlFlow::Continue(())
        });
    }
    best
}

/// Minimal norm of the dual lattice, found by enumerating the integral
/// lattice with Gram `det(G) G^{-1}` and dividing by `det(G)`.
pub fn min_dual_norm(g: &GramMatrix) -> BigRational {
    let det = g.det();
    let (reduced, _) = lll_big(g.adjugate());
    let scaled = GramMatrix::from_big_unchecked(&reduced).expect("reduced adjugate fits in 64 bits");
    BigRational::new(BigInt::from(min_norm_of_reduced(&scaled)), det)
}

/// Vectors of norm `<= bound` generate the whole lattice over Z.
pub fn generated_by_norms_up_to(g: &GramMatrix, bound: i64) -> bool {
    let list = short_vectors_up_to(g, bound);
    let coords: Vec<Vec<i64>> = list.vectors.into_iter().map(|v| v.coords).collect();
    hnf::spans_full_lattice(&coords, g.rank())
}

/// Counts of vectors (both signs) of norms `1..=up_to`.
pub fn norm_counts(g: &GramMatrix, up_to: i64) -> Vec<usize> {
    let list = short_vectors_up_to(g, up_to);
    let mut counts = vec![0usize; up_to.max(0) as usize];
    for v in &list.vectors {
        counts[(v.norm - 1) as usize] += 2;
    }
    counts
}

/// Orthogonal projection of `v` onto `L ⊗ Q`, where `L` is the sublattice of
/// `q` spanned by the columns of `basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    /// Coefficients of `π(v)` in the basis of `L`.
    pub coords: RationalVector,
    pub norm: BigRational,
    /// All inner products of `π(v)` with the basis of `L` are integers.
    pub in_dual: bool,
}

pub fn project_onto_sublattice(q: &GramMatrix, basis: &IntMatrix, v: &[i64]) -> Result<Projection> {
    let gl = q.congruence(basis)?;
    let m = gl.len();
    if m == 0 {
        return Ok(Projection { coords: RationalVector::zeros(0), norm: BigRational::zero(), in_dual: true });
    }
    if intops::det_big(&intops::to_big_matrix(&gl)).is_zero() {
        return Err(LatticeError::SingularSublattice);
    }
    let qv = q.apply(v);
    // rhs_i = (basis_i, v)
    let rhs: Vec<i128> = (0..m)
        .map(|j| basis.iter().zip(&qv).map(|(row, &y)| row[j] as i128 * y as i128).sum())
        .collect();
    let rhs_q = RationalVector(rhs.iter().map(|&r| BigRational::from_integer(BigInt::from(r))).collect());
    let glq = RationalMatrix::from_integers(&gl);
    let coords = glq.solve(&rhs_q)?;
    let inner = glq.mul_vec(&coords);
    debug_assert_eq!(inner, rhs_q);
    let in_dual = inner.is_integral();
    let norm = coords.0.iter().zip(&inner.0).fold(BigRational::zero(), |acc, (a, b)| acc + a * b);
    Ok(Projection { coords, norm, in_dual })
}

pub(crate) fn int_bound(b: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(b))
}

/// `true` if every listed vector is primitive and the list is canonical.
#[cfg(test)]
pub(crate) fn is_canonical(list: &ShortVectorList) -> bool {
    list.vectors.windows(2).all(|w| w[0] < w[1])
        && list.vectors.iter().all(|v| v.coords.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::rational::rat;
    use crate::reduction::randomize_basis;

    #[test]
    fn hand_enumerated_square_lattice() {
        let b = GramMatrix::identity(2);
        let list = short_vectors_up_to(&b, 2);
        let got: Vec<(i64, Vec<i64>)> = list.vectors.iter().map(|v| (v.norm, v.coords.clone())).collect();
        assert_eq!(
            got,
            vec![(1, vec![0, 1]), (1, vec![1, 0]), (2, vec![1, -1]), (2, vec![1, 1])]
        );
        assert!(is_canonical(&list));
    }

    #[test]
    fn empty_when_bound_below_minimum() {
        let g = GramMatrix::diagonal(&[2]).unwrap();
        assert!(short_vectors_up_to(&g, 1).is_empty());
        assert!(short_vectors(&g, &rat(1, 2)).is_empty());
    }

    #[test]
    fn rational_bound_is_exact() {
        let a2 = GramMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(short_vectors(&a2, &rat(5, 2)).len(), 3);
        assert_eq!(short_vectors(&a2, &rat(199, 100)).len(), 0);
    }

    #[test]
    fn minimal_norms() {
        assert_eq!(min_norm(&GramMatrix::identity(1)), 1);
        assert_eq!(min_norm(&catalog("E8").unwrap()), 2);
        assert_eq!(min_norm(&catalog("An(2)").unwrap()), 2);
    }

    #[test]
    fn dual_minimal_norms() {
        assert_eq!(min_dual_norm(&GramMatrix::diagonal(&[2]).unwrap()), rat(1, 2));
        assert_eq!(min_dual_norm(&catalog("An(2)").unwrap()), rat(2, 3));
        assert_eq!(min_dual_norm(&catalog("E8").unwrap()), rat(2, 1));
        assert_eq!(min_dual_norm(&catalog("Dn(4)").unwrap()), rat(1, 1));
    }

    #[test]
    fn generation_tests() {
        assert!(generated_by_norms_up_to(&GramMatrix::identity(3), 1));
        assert!(!generated_by_norms_up_to(&GramMatrix::diagonal(&[1, 4]).unwrap(), 1));
        assert!(generated_by_norms_up_to(&GramMatrix::diagonal(&[1, 4]).unwrap(), 4));
        assert!(generated_by_norms_up_to(&catalog("E8").unwrap(), 2));
    }

    #[test]
    fn e8_has_240_roots_in_any_basis() {
        let e8 = catalog("E8").unwrap();
        assert_eq!(short_vectors_up_to(&e8, 2).count_of_norm(2), 240);
        let g = randomize_basis(&e8, 3);
        assert_eq!(norm_counts(&g, 2), vec![0, 240]);
    }

    #[test]
    fn projections() {
        let q = catalog("E8").unwrap().direct_sum(&GramMatrix::identity(1));
        let basis: IntMatrix = (0..9).map(|i| (0..8).map(|j| i64::from(i == j)).collect()).collect();
        let mut v = vec![0; 9];
        v[8] = 1;
        let p = project_onto_sublattice(&q, &basis, &v).unwrap();
        assert!(p.coords.is_zero());
        assert_eq!(p.norm, rat(0, 1));
        assert!(p.in_dual);

        let b = GramMatrix::identity(2);
        let p = project_onto_sublattice(&b, &vec![vec![1], vec![0]], &[1, 1]).unwrap();
        assert_eq!(p.coords.0, vec![rat(1, 1)]);
        assert_eq!(p.norm, rat(1, 1));

        let a2 = GramMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let p = project_onto_sublattice(&a2, &vec![vec![1], vec![0]], &[0, 1]).unwrap();
        assert_eq!(p.coords.0, vec![rat(1, 2)]);
        assert_eq!(p.norm, rat(1, 2));
        assert!(p.in_dual);

        let err = project_onto_sublattice(&b, &vec![vec![1, 2], vec![1, 2]], &[1, 0]).unwrap_err();
        assert_eq!(err, LatticeError::SingularSublattice);
    }
}
