//! Orthogonal decomposition into indecomposable summands (Kneser's method).

use std::ops::ControlFlow;

use num_bigint::BigInt;
use serde::Serialize;

use crate::embedding::{complement_of_vectors, is_isometric, Embedding};
use crate::enumeration::{int_bound, norm_counts, visit_raw};
use crate::gram::{GramMatrix, IntMatrix};
use crate::intops::{self, ExactInt};
use crate::reduction::lll_reduce;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// LLL-reduced, sorted by `(rank, det, Gram)`.
    pub summands: Vec<GramMatrix>,
    /// `embeddings[i]` maps `summands[i]` into the decomposed lattice.
    pub embeddings: Vec<Embedding>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// The isometry `summand_0 ⊕ summand_1 ⊕ ... -> original`.
    pub fn reassemble(&self) -> Option<Embedding> {
        let first = self.embeddings.first()?;
        let target = first.target.clone();
        let n = target.rank();
        let mut source = GramMatrix::empty();
        let mut map: IntMatrix = vec![Vec::new(); n];
        for e in &self.embeddings {
            source = source.direct_sum(&e.source);
            for (row, img) in map.iter_mut().zip(&e.map) {
                row.extend_from_slice(img);
            }
        }
        let e = Embedding::new(source, target, map).ok()?;
        e.is_isometry().then_some(e)
    }

    /// Invariants that agree on isometric summands, one entry per summand,
    /// sorted. Equal keys are necessary for equal multisets; see
    /// [`same_summands`] for the exact test.
    pub fn invariant_key(&self) -> Vec<(usize, BigInt, Vec<usize>)> {
        let mut key: Vec<_> = self
            .summands
            .iter()
            .map(|s| {
                let top = s.diag().into_iter().max().unwrap_or(0);
                (s.rank(), s.det(), norm_counts(s, top))
            })
            .collect();
        key.sort();
        key
    }
}

/// Rational span tracker: fraction-free row echelon, on `i128` until an
/// operation overflows.
enum QSpan {
    Small(Vec<(usize, Vec<i128>)>),
    Big(Vec<(usize, Vec<BigInt>)>),
}

/// Reduce `r` against the echelon rows; `None` on overflow.
fn reduce<T: ExactInt>(rows: &[(usize, Vec<T>)], mut r: Vec<T>) -> Option<Vec<T>> {
    for (p, row) in rows {
        if r[*p].is_nil() {
            continue;
        }
        let (a, b) = (row[*p].clone(), r[*p].clone());
        let mut g = T::nil();
        for (x, y) in r.iter_mut().zip(row) {
            *x = a.mul(x)?.sub(&b.mul(y)?)?;
            g = g.gcd(x);
        }
        if !g.is_nil() && g != T::from_i64(1) {
            for x in r.iter_mut() {
                *x = x.div_exact(&g)?;
            }
        }
    }
    Some(r)
}

fn pivot<T: ExactInt>(r: &[T]) -> Option<usize> {
    r.iter().position(|x| !x.is_nil())
}

impl QSpan {
    fn new() -> Self {
        QSpan::Small(Vec::new())
    }

    fn rank(&self) -> usize {
        match self {
            QSpan::Small(rows) => rows.len(),
            QSpan::Big(rows) => rows.len(),
        }
    }

    /// Adds `v` if it is independent of the span so far.
    fn insert(&mut self, v: &[i64]) -> bool {
        if let QSpan::Small(rows) = self {
            match reduce(rows, v.iter().map(|&x| x as i128).collect()) {
                Some(r) => {
                    return match pivot(&r) {
                        Some(p) => {
                            rows.push((p, r));
                            true
                        }
                        None => false,
                    }
                }
                None => {
                    let big = rows
                        .iter()
                        .map(|(p, r)| (*p, r.iter().map(|&x| BigInt::from(x)).collect()))
                        .collect();
                    *self = QSpan::Big(big);
                }
            }
        }
        let QSpan::Big(rows) = self else { unreachable!() };
        let r = reduce(rows, v.iter().map(|&x| BigInt::from(x)).collect()).expect("bigint arithmetic does not overflow");
        match pivot(&r) {
            Some(p) => {
                rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

struct Component {
    span: QSpan,
    /// Independent member vectors and their images under the Gram matrix.
    basis: Vec<Vec<i64>>,
    gbasis: Vec<Vec<i64>>,
}

impl Component {
    fn push(&mut self, v: &[i64], gv: &[i64]) {
        if self.span.insert(v) {
            self.basis.push(v.to_vec());
            self.gbasis.push(gv.to_vec());
        }
    }

    fn touches(&self, v: &[i64]) -> bool {
        self.gbasis.iter().any(|gb| dot(gb, v) != 0)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Join `v` to every component it is not orthogonal to; returns the rank
/// of the component that now contains it.
fn absorb(comps: &mut Vec<Component>, v: &[i64], gv: &[i64]) -> usize {
    let touched: Vec<usize> = (0..comps.len()).filter(|&i| comps[i].touches(v)).collect();
    if let [only] = touched[..] {
        comps[only].push(v, gv);
        return comps[only].span.rank();
    }
    let mut merged = Component { span: QSpan::new(), basis: Vec::new(), gbasis: Vec::new() };
    for &i in touched.iter().rev() {
        let c = comps.swap_remove(i);
        for (b, gb) in c.basis.iter().zip(&c.gbasis) {
            merged.push(b, gb);
        }
    }
    merged.push(v, gv);
    let rank = merged.span.rank();
    comps.push(merged);
    rank
}

/// Rational bases of the spans of the connected components of the graph of
/// indecomposable vectors, working in the basis of the reduced Gram `r`.
fn component_bases(r: &GramMatrix) -> Vec<Vec<Vec<i64>>> {
    let n = r.rank();
    let top = r.diag().into_iter().max().unwrap_or(0);
    // (vector, G·vector, norm) for every vector shorter than the current level
    let mut shorter: Vec<(Vec<i64>, Vec<i64>, i64)> = Vec::new();
    let mut comps: Vec<Component> = Vec::new();
    let mut full = false;
    for level in 1..=top {
        let mut this_level = Vec::new();
        visit_raw(r, &int_bound(level), |y| {
            let norm = r.norm(y) as i64;
            if norm != level {
                return ControlFlow::Continue(());
            }
            let gy = r.apply(y);
            let indecomposable = shorter.iter().all(|(_, gx, nx)| dot(gx, y).abs() < *nx as i128);
            if indecomposable && absorb(&mut comps, y, &gy) == n {
                full = true;
                return ControlFlow::Break(());
            }
            if level < top {
                this_level.push((y.to_vec(), gy, norm));
            }
            ControlFlow::Continue(())
        });
        if full {
            break;
        }
        shorter.extend(this_level);
    }
    let mut bases: Vec<Vec<Vec<i64>>> = comps.into_iter().map(|c| c.basis).collect();
    bases.sort();
    bases
}

/// Split `g` into indecomposable orthogonal summands.
///
/// Vectors of norm up to the largest diagonal entry of the reduced Gram are
/// enumerated level by level. A vector `v` is indecomposable unless some
/// shorter `x` has `|(x, v)| >= (x, x)`. Indecomposable vectors are joined
/// when their inner product is nonzero; each connected component spans one
/// summand, obtained as the orthogonal complement of the other components.
pub fn indecomposable_summands(g: &GramMatrix) -> Decomposition {
    let n = g.rank();
    if n == 0 {
        return Decomposition { summands: Vec::new(), embeddings: Vec::new() };
    }
    let red = lll_reduce(g);
    let bases = component_bases(&red.gram);
    let rank_sum: usize = bases.iter().map(|b| b.len()).sum();
    assert_eq!(rank_sum, n, "indecomposable vectors do not span the lattice");

    let mut parts: Vec<(GramMatrix, IntMatrix)> = Vec::new();
    if bases.len() == 1 {
        parts.push((red.gram.clone(), intops::identity(n)));
    } else {
        for i in 0..bases.len() {
            let others: Vec<Vec<i64>> =
                bases.iter().enumerate().filter(|&(j, _)| j != i).flat_map(|(_, b)| b.iter().cloned()).collect();
            let (s, basis) = complement_of_vectors(&red.gram, &others).expect("summand basis fits in 64 bits");
            assert_eq!(s.rank(), bases[i].len(), "component complement has the wrong rank");
            parts.push((s, basis));
        }
    }

    let mut out: Vec<(GramMatrix, Embedding)> = parts
        .into_iter()
        .map(|(s, basis)| {
            let map = intops::mat_mul(&red.transform, &basis).expect("summand basis fits in 64 bits");
            let e = Embedding::new(s.clone(), g.clone(), map).expect("summand embedding verifies");
            (s, e)
        })
        .collect();

    let product: BigInt = out.iter().map(|(s, _)| s.det()).product();
    assert_eq!(product, g.det(), "summands do not have index 1 in the lattice");
    for a in 0..out.len() {
        for b in a + 1..out.len() {
            for u in out[a].1.columns() {
                for v in out[b].1.columns() {
                    assert_eq!(g.inner(&u, &v), 0, "summands are not orthogonal");
                }
            }
        }
    }

    out.sort_by(|x, y| (x.0.rank(), x.0.det(), &x.0).cmp(&(y.0.rank(), y.0.det(), &y.0)));
    let (summands, embeddings) = out.into_iter().unzip();
    Decomposition { summands, embeddings }
}

pub fn is_indecomposable(g: &GramMatrix) -> bool {
    g.rank() > 0 && indecomposable_summands(g).len() == 1
}

/// No summand of `g1` is isometric to a summand of `g2`.
pub fn coprime(g1: &GramMatrix, g2: &GramMatrix) -> bool {
    let (d1, d2) = (indecomposable_summands(g1), indecomposable_summands(g2));
    !d1.summands.iter().any(|a| d2.summands.iter().any(|b| is_isometric(a, b).is_some()))
}

/// The two multisets of lattices agree up to isometry.
pub fn same_summands(a: &[GramMatrix], b: &[GramMatrix]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        for (j, y) in b.iter().enumerate() {
            if !used[j] && is_isometric(x, y).is_some() {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}
