//! LLL reduction of Gram matrices with δ = 3/4, carried out with the
//! integral (fraction-free) formulation so every comparison is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gram::{GramMatrix, IntMatrix};
use crate::intops::{self, ExactInt};

/// An LLL-reduced Gram matrix together with the unimodular change of basis
/// that produced it: `transform^T * original * transform == gram`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedBasis {
    pub gram: GramMatrix,
    /// Columns are the reduced basis vectors in original coordinates.
    pub transform: IntMatrix,
}

pub fn lll_reduce(g: &GramMatrix) -> ReducedBasis {
    let rows = g.rows();
    let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    if let Some((gram, h)) = lll_generic(small) {
        if let (Some(gram), Some(h)) = (to_i64(&gram), to_i64(&h)) {
            return finish(g, gram, h);
        }
    }
    let (gram, h) = lll_big(intops::to_big_matrix(&rows));
    let gram = intops::big_to_i64_matrix(&gram).expect("reduced Gram fits in 64 bits");
    let h = intops::big_to_i64_matrix(&h).expect("LLL transform fits in 64 bits");
    finish(g, gram, h)
}

fn finish(g: &GramMatrix, gram: IntMatrix, transform: IntMatrix) -> ReducedBasis {
    debug_assert_eq!(g.congruence(&transform).unwrap(), gram);
    ReducedBasis { gram: GramMatrix::from_rows_unchecked(&gram), transform }
}

fn to_i64(m: &[Vec<i128>]) -> Option<IntMatrix> {
    m.iter().map(|r| r.iter().map(|v| i64::try_from(*v).ok()).collect()).collect()
}

/// LLL on an arbitrary-size positive-definite integer Gram matrix. Returns
/// the reduced Gram matrix and the transform (columns = new basis).
pub(crate) fn lll_big(gram: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    lll_generic(gram).expect("bigint arithmetic does not overflow")
}

struct Lll<T> {
    b: Vec<Vec<T>>,
    h: Vec<Vec<T>>,
    d: Vec<T>,
    lam: Vec<Vec<T>>,
}

fn lll_generic<T: ExactInt>(gram: Vec<Vec<T>>) -> Option<(Vec<Vec<T>>, Vec<Vec<T>>)> {
    let n = gram.len();
    let h: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::from_i64(1) } else { T::nil() }).collect())
        .collect();
    if n <= 1 {
        return Some((gram, h));
    }
    let mut st = Lll { d: vec![T::nil(); n + 1], lam: vec![vec![T::nil(); n]; n], b: gram, h };
    st.d[0] = T::from_i64(1);
    st.d[1] = st.b[0][0].clone();
    let (three, four) = (T::from_i64(3), T::from_i64(4));
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = st.b[k][j].clone();
                for i in 0..j {
                    u = st.d[i + 1].mul(&u)?.sub(&st.lam[k][i].mul(&st.lam[j][i])?)?.div_exact(&st.d[i])?;
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    assert!(!u.is_nil() && !u.is_neg(), "Gram matrix is not positive definite");
                    st.d[k + 1] = u;
                }
            }
        }
        st.red(k, k - 1)?;
        let lhs = four.mul(&st.d[k + 1])?.mul(&st.d[k - 1])?;
        let l = &st.lam[k][k - 1];
        let rhs = three.mul(&st.d[k].mul(&st.d[k])?)?.sub(&four.mul(&l.mul(l)?)?)?;
        if lhs < rhs {
            st.swap(k, kmax)?;
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                st.red(k, l)?;
            }
            k += 1;
        }
    }
    Some((st.b, st.h))
}

impl<T: ExactInt> Lll<T> {
    fn red(&mut self, k: usize, l: usize) -> Option<()> {
        let two = T::from_i64(2);
        let dl = self.d[l + 1].clone();
        let lam = self.lam[k][l].clone();
        let abs2 = if lam.is_neg() { T::nil().sub(&lam)? } else { lam.clone() }.mul(&two)?;
        if abs2 <= dl {
            return Some(());
        }
        // nearest integer to lam / dl
        let q = two.mul(&lam)?.add(&dl)?.div_floor(&two.mul(&dl)?)?;
        let n = self.b.len();
        for row in self.h.iter_mut() {
            row[k] = row[k].sub(&q.mul(&row[l])?)?;
        }
        let bkk = self.b[k][k]
            .sub(&two.mul(&q)?.mul(&self.b[k][l])?)?
            .add(&q.mul(&q)?.mul(&self.b[l][l])?)?;
        for j in 0..n {
            if j == k {
                continue;
            }
            let v = self.b[k][j].sub(&q.mul(&self.b[l][j])?)?;
            self.b[k][j] = v.clone();
            self.b[j][k] = v;
        }
        self.b[k][k] = bkk;
        self.lam[k][l] = lam.sub(&q.mul(&dl)?)?;
        for i in 0..l {
            self.lam[k][i] = self.lam[k][i].sub(&q.mul(&self.lam[l][i])?)?;
        }
        Some(())
    }

    fn swap(&mut self, k: usize, kmax: usize) -> Option<()> {
        for row in self.h.iter_mut() {
            row.swap(k, k - 1);
        }
        self.b.swap(k, k - 1);
        for row in self.b.iter_mut() {
            row.swap(k, k - 1);
        }
        for j in 0..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = self.lam[k - 1][j].clone();
            self.lam[k - 1][j] = t;
        }
        let lam = self.lam[k][k - 1].clone();
        let bnew = self.d[k - 1].mul(&self.d[k + 1])?.add(&lam.mul(&lam)?)?.div_exact(&self.d[k])?;
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = self.d[k + 1].mul(&self.lam[i][k - 1])?.sub(&lam.mul(&t)?)?.div_exact(&self.d[k])?;
            self.lam[i][k - 1] = bnew.mul(&t)?.add(&lam.mul(&self.lam[i][k])?)?.div_exact(&self.d[k + 1])?;
        }
        self.d[k] = bnew;
        Some(())
    }
}

/// Exact check of size reduction (|μ_ij| ≤ 1/2) and the Lovász condition at δ = 3/4.
pub fn is_lll_reduced(g: &GramMatrix) -> bool {
    let n = g.rank();
    let gr = |i: usize, j: usize| BigRational::from_integer(BigInt::from(g.get(i, j)));
    let mut mu = vec![vec![BigRational::from_integer(BigInt::from(0)); n]; n];
    let mut bstar: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..i {
            let mut v = gr(i, j);
            for k in 0..j {
                v -= &mu[j][k] * &mu[i][k] * &bstar[k];
            }
            mu[i][j] = v / &bstar[j];
        }
        let mut v = gr(i, i);
        for k in 0..i {
            v -= &mu[i][k] * &mu[i][k] * &bstar[k];
        }
        bstar.push(v);
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    for i in 0..n {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 && bstar[i] < (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &bstar[i - 1] {
            return false;
        }
    }
    true
}

/// A deterministic pseudo-random unimodular `U` (entries bounded by 3 in
/// absolute value) for `seed`.
pub fn random_unimodular(n: usize, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = intops::identity(n);
    if n >= 2 {
        for _ in 0..6 * n {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let s: i64 = if rng.random_bool(0.5) { 1 } else { -1 };
            // column i += s * column j, kept only if entries stay within bound
            if u.iter().all(|row| (row[i] + s * row[j]).abs() <= 3) {
                for row in u.iter_mut() {
                    row[i] += s * row[j];
                }
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let signs: Vec<i64> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
    (0..n).map(|r| (0..n).map(|c| u[r][perm[c]] * signs[c]).collect()).collect()
}

/// `U^T G U` for the seed's pseudo-random unimodular `U`; isometric to `G`.
pub fn randomize_basis(g: &GramMatrix, seed: u64) -> GramMatrix {
    randomize_basis_with_transform(g, seed).0
}

pub fn randomize_basis_with_transform(g: &GramMatrix, seed: u64) -> (GramMatrix, IntMatrix) {
    let u = random_unimodular(g.rank(), seed);
    let rows = g.congruence(&u).expect("randomized Gram fits in 64 bits");
    (GramMatrix::from_rows_unchecked(&rows), u)
}

/// Inverse of a unimodular integer matrix.
pub(crate) fn unimodular_inverse(u: &[Vec<i64>]) -> IntMatrix {
    let inv = crate::rational::RationalMatrix::from_integers(u).inverse().expect("unimodular matrix is invertible");
    let ints = inv.to_integers().expect("inverse of a unimodular matrix is integral");
    intops::big_to_i64_matrix(&ints).expect("inverse fits in 64 bits")
}

#[cfg(test)]
pub(crate) fn det_i64(u: &[Vec<i64>]) -> BigInt {
    intops::det_big(&intops::to_big_matrix(u))
}

#[cfg(test)]
pub(crate) fn is_unimodular(u: &[Vec<i64>]) -> bool {
    det_i64(u).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    #[test]
    fn reduced_input_is_unchanged() {
        let a = GramMatrix::diagonal(&[1, 1, 2]).unwrap();
        let r = lll_reduce(&a);
        assert_eq!(r.gram, a);
        assert_eq!(r.transform, intops::identity(3));
        let a2 = GramMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(lll_reduce(&a2).gram, a2);
    }

    #[test]
    fn reduces_a_skewed_binary_form() {
        // basis (1,0), (7,1) of Z^2
        let g = GramMatrix::from_rows(&[vec![1, 7], vec![7, 50]]).unwrap();
        let r = lll_reduce(&g);
        assert_eq!(r.gram, GramMatrix::identity(2));
        assert!(is_unimodular(&r.transform));
    }

    #[test]
    fn randomized_e8_reduces_to_norm_two_basis() {
        let e8 = catalog("E8").unwrap();
        for seed in 0..20 {
            let (g, u) = randomize_basis_with_transform(&e8, seed);
            assert!(is_unimodular(&u));
            assert!(u.iter().flatten().all(|x| x.abs() <= 3));
            assert_eq!(g.det(), BigInt::one());
            let r = lll_reduce(&g);
            assert!(is_lll_reduced(&r.gram));
            assert!(is_unimodular(&r.transform));
            assert_eq!(g.congruence(&r.transform).unwrap(), r.gram.rows());
            assert!(r.gram.diag().iter().all(|&x| x == 2), "seed {seed}: {:?}", r.gram.diag());
        }
    }

    #[test]
    fn randomization_is_deterministic() {
        let g = catalog("Dn(4)").unwrap();
        assert_eq!(randomize_basis(&g, 7), randomize_basis(&g, 7));
        assert_eq!(random_unimodular(5, 3), random_unimodular(5, 3));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let u = random_unimodular(6, 11);
        let inv = unimodular_inverse(&u);
        assert_eq!(intops::mat_mul(&u, &inv).unwrap(), intops::identity(6));
    }
}
