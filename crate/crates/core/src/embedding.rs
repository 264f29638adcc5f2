//! Representations of one lattice by another, with exact certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::enumeration::{min_norm, short_vectors_up_to};
use crate::error::{LatticeError, Result};
use crate::gram::{GramMatrix, IntMatrix};
use crate::hnf;
use crate::intops;
use crate::reduction::{lll_big, lll_reduce, unimodular_inverse};

/// A bilinear-form-preserving injection `source -> target`. Column `j` of
/// `map` is the image of the `j`-th source basis vector in target
/// coordinates, so `map^T G_target map = G_source`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub source: GramMatrix,
    pub target: GramMatrix,
    pub map: IntMatrix,
}

impl Embedding {
    /// Build and verify an embedding certificate.
    pub fn new(source: GramMatrix, target: GramMatrix, map: IntMatrix) -> Result<Embedding> {
        let e = Embedding { source, target, map };
        if e.map.len() != e.target.rank() || e.map.iter().any(|r| r.len() != e.source.rank()) {
            return Err(LatticeError::InvalidEmbedding(format!(
                "map must be {}x{}",
                e.target.rank(),
                e.source.rank()
            )));
        }
        if !e.verify() {
            return Err(LatticeError::InvalidEmbedding("map does not preserve the bilinear form".into()));
        }
        Ok(e)
    }

    pub fn identity(g: &GramMatrix) -> Embedding {
        Embedding { source: g.clone(), target: g.clone(), map: intops::identity(g.rank()) }
    }

    /// `map^T G_target map == G_source`, checked exactly. A positive-definite
    /// source Gram makes the columns independent, so this also certifies
    /// injectivity.
    pub fn verify(&self) -> bool {
        self.target.congruence(&self.map).is_ok_and(|g| g == self.source.rows())
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        intops::transpose(&self.map)
    }

    /// `self ∘ inner`: if `inner: L2 -> L1` and `self: L1 -> Q`, the result is `L2 -> Q`.
    pub fn compose(&self, inner: &Embedding) -> Result<Embedding> {
        if inner.target != self.source {
            return Err(LatticeError::InvalidEmbedding("composition of mismatched embeddings".into()));
        }
        let map = intops::mat_mul(&self.map, &inner.map)
            .ok_or_else(|| LatticeError::Overflow("composed embedding".into()))?;
        Embedding::new(inner.source.clone(), self.target.clone(), map)
    }

    /// Block-diagonal embedding `L1 ⊕ L2 -> Q1 ⊕ Q2`.
    pub fn direct_sum(&self, other: &Embedding) -> Embedding {
        let (n1, m1) = (self.target.rank(), self.source.rank());
        let (n2, m2) = (other.target.rank(), other.source.rank());
        let mut map = vec![vec![0i64; m1 + m2]; n1 + n2];
        for i in 0..n1 {
            map[i][..m1].copy_from_slice(&self.map[i]);
        }
        for i in 0..n2 {
            map[n1 + i][m1..].copy_from_slice(&other.map[i]);
        }
        let e = Embedding {
            source: self.source.direct_sum(&other.source),
            target: self.target.direct_sum(&other.target),
            map,
        };
        debug_assert!(e.verify());
        e
    }

    /// Same rank and determinant: the image has index 1, so this is an isometry.
    pub fn is_isometry(&self) -> bool {
        self.source.rank() == self.target.rank() && self.source.det() == self.target.det()
    }
}

struct Candidate {
    v: Vec<i64>,
    gv: Vec<i64>,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Rank/determinant obstructions that rule out an embedding `l -> q` outright.
fn obviously_impossible(q: &GramMatrix, l: &GramMatrix) -> bool {
    if l.rank() > q.rank() {
        return true;
    }
    if l.rank() == q.rank() {
        // a full-rank sublattice has det(L) = det(Q) * index^2
        let (quot, rem) = l.det().div_rem(&q.det());
        if !rem.is_zero() || quot.sqrt().pow(2) != quot {
            return true;
        }
    }
    false
}

/// Decide whether `q` represents `l`; returns a verified certificate if so.
///
/// The basis of `l` is LLL-reduced and placed vector by vector in
/// decreasing-norm order. Candidates for each basis vector are all vectors
/// of `q` with the required norm; a candidate is kept only if its inner
/// products with the already placed images match the Gram of `l`. The
/// search is exhaustive, so `None` means no embedding exists.
pub fn represents(q: &GramMatrix, l: &GramMatrix) -> Option<Embedding> {
    let (n, m) = (q.rank(), l.rank());
    if m == 0 {
        return Some(Embedding { source: l.clone(), target: q.clone(), map: vec![Vec::new(); n] });
    }
    if obviously_impossible(q, l) {
        return None;
    }
    let red = lll_reduce(l);
    let lg = &red.gram;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(lg.get(i, i)));
    let max_norm = lg.get(order[0], order[0]);
    let list = short_vectors_up_to(q, max_norm);

    // candidates per level, both signs; the first level keeps one sign only
    let mut levels: Vec<Vec<Candidate>> = Vec::with_capacity(m);
    for (lvl, &idx) in order.iter().enumerate() {
        let norm = lg.get(idx, idx);
        let mut cands = Vec::new();
        for sv in list.of_norm(norm) {
            let gv = q.apply(&sv.coords);
            if lvl > 0 {
                cands.push(Candidate { v: sv.coords.iter().map(|c| -c).collect(), gv: gv.iter().map(|c| -c).collect() });
            }
            cands.push(Candidate { v: sv.coords.clone(), gv });
        }
        if cands.is_empty() {
            return None;
        }
        levels.push(cands);
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    if !place(0, &order, lg, &levels, &mut chosen) {
        return None;
    }
    // columns of the map for the reduced basis, in basis order
    let mut reduced_map = vec![vec![0i64; m]; n];
    for (lvl, &idx) in order.iter().enumerate() {
        let c = &levels[lvl][chosen[lvl]];
        for i in 0..n {
            reduced_map[i][idx] = c.v[i];
        }
    }
    // reduced basis = original basis * U, so original = reduced * U^{-1}
    let map = intops::mat_mul(&reduced_map, &unimodular_inverse(&red.transform)).expect("embedding map fits in i64");
    let e = Embedding { source: l.clone(), target: q.clone(), map };
    assert!(e.verify(), "embedding search produced an invalid certificate");
    Some(e)
}

fn place(lvl: usize, order: &[usize], lg: &GramMatrix, levels: &[Vec<Candidate>], chosen: &mut Vec<usize>) -> bool {
    if lvl == order.len() {
        return true;
    }
    let idx = order[lvl];
    'cands: for (ci, c) in levels[lvl].iter().enumerate() {
        for (s, &cs) in chosen.iter().enumerate() {
            let placed = &levels[s][cs];
            if dot(&placed.v, &c.gv) != lg.get(idx, order[s]) as i128 {
                continue 'cands;
            }
        }
        chosen.push(ci);
        if place(lvl + 1, order, lg, levels, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// An isometry `g1 -> g2` if the lattices are isometric.
pub fn is_isometric(g1: &GramMatrix, g2: &GramMatrix) -> Option<Embedding> {
    if g1.rank() != g2.rank() || g1.det() != g2.det() {
        return None;
    }
    if g1.rank() == 0 {
        return Some(Embedding::identity(g1));
    }
    if min_norm(g1) != min_norm(g2) {
        return None;
    }
    let e = represents(g2, g1)?;
    debug_assert!(e.is_isometry());
    Some(e)
}

/// Gram matrix (LLL-reduced) and basis (columns, in `q` coordinates) of the
/// vectors of `q` orthogonal to every vector in `vectors`.
pub fn complement_of_vectors(q: &GramMatrix, vectors: &[Vec<i64>]) -> Result<(GramMatrix, IntMatrix)> {
    let n = q.rank();
    let constraints: Vec<Vec<BigInt>> =
        vectors.iter().map(|v| q.apply(v).into_iter().map(BigInt::from).collect()).collect();
    let kernel = hnf::integer_kernel(&constraints, n);
    let r = kernel.len();
    if r == 0 {
        return Ok((GramMatrix::empty(), vec![Vec::new(); n]));
    }
    let qb = intops::to_big_matrix(&q.rows());
    let qk: Vec<Vec<BigInt>> = kernel
        .iter()
        .map(|k| (0..n).map(|i| (0..n).map(|j| &qb[i][j] * &k[j]).sum()).collect())
        .collect();
    let gram: Vec<Vec<BigInt>> =
        (0..r).map(|a| (0..r).map(|b| kernel[a].iter().zip(&qk[b]).map(|(x, y)| x * y).sum()).collect()).collect();
    let (reduced, h) = lll_big(gram);
    // new basis vector j = Σ_i h[i][j] kernel[i]
    let basis_big: Vec<Vec<BigInt>> = (0..n)
        .map(|coord| (0..r).map(|j| (0..r).map(|i| &h[i][j] * &kernel[i][coord]).sum()).collect())
        .collect();
    let basis = intops::big_to_i64_matrix(&basis_big)
        .ok_or_else(|| LatticeError::Overflow("complement basis exceeds 64 bits".into()))?;
    let g = GramMatrix::from_big_unchecked(&reduced)?;
    debug_assert_eq!(q.congruence(&basis).unwrap(), g.rows());
    Ok((g, basis))
}

/// Orthogonal complement of the image of `e` in its target.
pub fn orthogonal_complement(e: &Embedding) -> Result<GramMatrix> {
    Ok(complement_of_vectors(&e.target, &e.columns())?.0)
}

/// Split a unimodular sublattice off as an orthogonal direct summand.
/// Returns the complement `C` and an isometry `source ⊕ C -> target`.
pub fn unimodular_summand_split(e: &Embedding) -> Result<(GramMatrix, Embedding)> {
    let det = e.source.det();
    if !det.is_one() {
        return Err(LatticeError::NotUnimodular(det.to_string()));
    }
    let (c, basis) = complement_of_vectors(&e.target, &e.columns())?;
    let map: IntMatrix = e.map.iter().zip(&basis).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
    let cert = Embedding::new(e.source.direct_sum(&c), e.target.clone(), map)?;
    assert!(cert.is_isometry(), "unimodular sublattice failed to split off");
    Ok((c, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::reduction::randomize_basis;

    fn diag(d: &[i64]) -> GramMatrix {
        GramMatrix::diagonal(d).unwrap()
    }

    #[test]
    fn a_represents_c_with_the_expected_images() {
        let a = diag(&[1, 1, 2]);
        let c = diag(&[2, 2, 2]);
        let e = represents(&a, &c).expect("A represents C");
        assert!(e.verify());
        let hand = Embedding::new(c.clone(), a.clone(), vec![vec![1, 1, 0], vec![1, -1, 0], vec![0, 0, 1]]);
        assert!(hand.is_ok());
    }

    #[test]
    fn b_and_c_do_not_represent_a() {
        let a = diag(&[1, 1, 2]);
        assert!(represents(&diag(&[1, 1]), &a).is_none());
        assert!(represents(&diag(&[2, 2, 2]), &a).is_none());
    }

    #[test]
    fn isometry_checks() {
        let d4 = catalog("Dn(4)").unwrap();
        let e = is_isometric(&d4, &randomize_basis(&d4, 5)).unwrap();
        assert!(e.is_isometry());
        assert!(is_isometric(&catalog("E8").unwrap(), &GramMatrix::identity(8)).is_none());
        assert!(is_isometric(&diag(&[2]), &diag(&[1])).is_none());
        assert!(is_isometric(&diag(&[1, 2]), &diag(&[2, 1])).is_some());
    }

    #[test]
    fn complements() {
        let b = GramMatrix::identity(2);
        let e = Embedding::new(diag(&[1]), b.clone(), vec![vec![1], vec![0]]).unwrap();
        assert_eq!(orthogonal_complement(&e).unwrap(), diag(&[1]));
        let e = Embedding::new(diag(&[2]), b.clone(), vec![vec![1], vec![1]]).unwrap();
        assert_eq!(orthogonal_complement(&e).unwrap(), diag(&[2]));
    }

    #[test]
    fn splitting_unimodular_summands() {
        let b = GramMatrix::identity(2);
        let e = Embedding::new(diag(&[1]), b, vec![vec![1], vec![0]]).unwrap();
        let (c, cert) = unimodular_summand_split(&e).unwrap();
        assert_eq!(c, diag(&[1]));
        assert!(cert.is_isometry());

        let e8 = catalog("E8").unwrap();
        let a2 = catalog("An(2)").unwrap();
        let q = e8.direct_sum(&a2);
        let e = represents(&q, &e8).unwrap();
        let (c, _) = unimodular_summand_split(&e).unwrap();
        assert!(is_isometric(&c, &a2).is_some());

        let e = represents(&q, &a2).unwrap();
        assert!(matches!(unimodular_summand_split(&e), Err(LatticeError::NotUnimodular(d)) if d == "3"));
    }

    #[test]
    fn invalid_certificates_are_rejected() {
        let b = GramMatrix::identity(2);
        assert!(Embedding::new(diag(&[2]), b.clone(), vec![vec![1], vec![0]]).is_err());
        assert!(Embedding::new(diag(&[1]), b, vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn composition_and_sums() {
        let a = diag(&[1, 1, 2]);
        let c = diag(&[2, 2, 2]);
        let ac = represents(&a, &c).unwrap();
        let c2 = diag(&[2, 2]);
        let cc2 = represents(&c, &c2).unwrap();
        let composed = ac.compose(&cc2).unwrap();
        assert_eq!(composed.source, c2);
        assert!(composed.verify());
        let sum = ac.direct_sum(&Embedding::identity(&catalog("E8").unwrap()));
        assert!(sum.verify());
        assert_eq!(sum.target.rank(), 11);
    }

    #[test]
    fn empty_source_is_represented() {
        let e = represents(&diag(&[3]), &GramMatrix::empty()).unwrap();
        assert!(e.verify());
    }
}
