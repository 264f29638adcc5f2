//! Standard lattices by name.
//!
//! `Zn(k)`, `An(k)`, `Dn(k)` and `Dnplus(k)` are built from explicit integer
//! (or half-integer) bases; `E6`, `E7`, `E8` from their Cartan matrices.
//! `Leech` is generated from the extended binary Golay code and
//! `Lambda23` is the orthogonal complement of a minimal Leech vector.

use std::ops::ControlFlow;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::embedding::complement_of_vectors;
use crate::enumeration::{for_each_short_vector, int_bound};
use crate::error::{LatticeError, Result};
use crate::gram::GramMatrix;
use crate::hnf;
use crate::reduction::lll_big;

/// Names accepted by [`catalog`], for help output.
pub const NAMES: &[&str] = &["Zn(k)", "An(k)", "Dn(k)", "Dnplus(k)", "E6", "E7", "E8", "Leech", "Lambda23"];

pub fn catalog(name: &str) -> Result<GramMatrix> {
    let name = name.trim();
    let unknown = || LatticeError::UnknownName(name.to_string());
    if let Some((family, rest)) = name.split_once('(') {
        let arg = rest.strip_suffix(')').ok_or_else(unknown)?.trim();
        let k: usize = arg.parse().map_err(|_| unknown())?;
        if k == 0 {
            return Err(unknown());
        }
        return match family.trim() {
            "Zn" => Ok(GramMatrix::identity(k)),
            "An" => Ok(root_a(k)),
            "Dn" => Ok(root_d(k)),
            "Dnplus" if k % 4 == 0 => Ok(d_plus(k)),
            _ => Err(unknown()),
        };
    }
    match name {
        "E6" => Ok(root_e(6)),
        "E7" => Ok(root_e(7)),
        "E8" => Ok(root_e(8)),
        "Leech" => Ok(leech().clone()),
        "Lambda23" => Ok(lambda23().clone()),
        _ => Err(unknown()),
    }
}

fn gram_of_rows(basis: &[Vec<i64>], scale_sq: i64) -> GramMatrix {
    let n = basis.len();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: i64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
                    debug_assert_eq!(s % scale_sq, 0);
                    s / scale_sq
                })
                .collect()
        })
        .collect();
    GramMatrix::from_rows(&rows).expect("catalog basis is independent")
}

fn root_a(k: usize) -> GramMatrix {
    let rows: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    GramMatrix::from_rows(&rows).expect("A_k Cartan matrix is positive definite")
}

/// `{x in Z^k : sum x even}` with basis `e_i - e_{i+1}`, `e_{k-1} + e_k`.
fn root_d(k: usize) -> GramMatrix {
    if k == 1 {
        return GramMatrix::diagonal(&[4]).expect("positive");
    }
    let mut basis = Vec::with_capacity(k);
    for i in 0..k - 1 {
        let mut v = vec![0i64; k];
        v[i] = 1;
        v[i + 1] = -1;
        basis.push(v);
    }
    let mut v = vec![0i64; k];
    v[k - 2] = 1;
    v[k - 1] = 1;
    basis.push(v);
    gram_of_rows(&basis, 1)
}

/// `D_k ∪ (D_k + (1/2, ..., 1/2))`, integral and unimodular for `k ≡ 0 mod 4`.
fn d_plus(k: usize) -> GramMatrix {
    // work in doubled coordinates
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for i in 0..k - 1 {
        let mut v = vec![0i64; k];
        v[i] = 2;
        v[i + 1] = -2;
        gens.push(v);
    }
    let mut v = vec![0i64; k];
    v[k - 2] = 2;
    v[k - 1] = 2;
    gens.push(v);
    gens.push(vec![1i64; k]);
    let basis = small(&hnf::span_basis(&gens, k));
    reduce(gram_of_rows(&basis, 4))
}

/// Cartan matrix of `E_n` in Bourbaki labelling: chain 1-3-4-5-...-n, node 2 on node 4.
fn root_e(n: usize) -> GramMatrix {
    let mut edges = vec![(1, 3), (3, 4), (2, 4)];
    for a in 4..n {
        edges.push((a, a + 1));
    }
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        rows[a - 1][b - 1] = -1;
        rows[b - 1][a - 1] = -1;
    }
    GramMatrix::from_rows(&rows).expect("E_n Cartan matrix is positive definite")
}

fn small(rows: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    crate::intops::big_to_i64_matrix(rows).expect("catalog basis fits in 64 bits")
}

fn reduce(g: GramMatrix) -> GramMatrix {
    crate::reduction::lll_reduce(&g).gram
}

/// Generator rows of the extended binary Golay code: the cyclic shifts of
/// `1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11` modulo `x^23 - 1`, each extended
/// by an overall parity bit.
pub fn golay_generators() -> Vec<[u8; 24]> {
    const POLY: [usize; 7] = [0, 2, 4, 5, 6, 10, 11];
    (0..12)
        .map(|shift| {
            let mut w = [0u8; 24];
            for &e in &POLY {
                w[(e + shift) % 23] = 1;
            }
            w[23] = (w[..23].iter().map(|&b| b as u32).sum::<u32>() % 2) as u8;
            w
        })
        .collect()
}

/// Integer basis (rows) of `sqrt(8)` times the Leech lattice, in the
/// standard coordinates where vectors are congruent mod 2 to a codeword
/// pattern: generated by `2c` for Golay generators `c`, by `4(e_0 ± e_i)`, and
/// by `(-3, 1, ..., 1)`.
pub fn leech_scaled_basis() -> Vec<Vec<i64>> {
    let mut gens: Vec<Vec<i64>> = golay_generators().iter().map(|w| w.iter().map(|&b| 2 * b as i64).collect()).collect();
    for i in 1..24 {
        let mut v = vec![0i64; 24];
        v[0] = 4;
        v[i] = 4;
        gens.push(v.clone());
        v[i] = -4;
        gens.push(v);
    }
    let mut odd = vec![1i64; 24];
    odd[0] = -3;
    gens.push(odd);
    small(&hnf::span_basis(&gens, 24))
}

pub fn leech() -> &'static GramMatrix {
    static LEECH: OnceLock<GramMatrix> = OnceLock::new();
    LEECH.get_or_init(|| {
        let b = leech_scaled_basis();
        assert_eq!(b.len(), 24);
        let rows: Vec<Vec<BigInt>> = (0..24)
            .map(|i| {
                (0..24)
                    .map(|j| {
                        let s: i64 = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
                        let (q, r) = s.div_rem(&8);
                        assert!(r.is_zero(), "Leech inner product not divisible by 8");
                        BigInt::from(q)
                    })
                    .collect()
            })
            .collect();
        let (reduced, _) = lll_big(rows);
        GramMatrix::from_big_unchecked(&reduced).expect("reduced Leech Gram fits in 64 bits")
    })
}

pub fn lambda23() -> &'static GramMatrix {
    static LAMBDA23: OnceLock<GramMatrix> = OnceLock::new();
    LAMBDA23.get_or_init(|| {
        let leech = leech();
        let mut minimal: Option<Vec<i64>> = None;
        for_each_short_vector(leech, &int_bound(4), |x, norm| {
            if norm == 4 {
                minimal = Some(x.to_vec());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        let v = minimal.expect("Leech lattice has vectors of norm 4");
        complement_of_vectors(leech, &[v]).expect("complement of a nonzero vector").0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::min_norm;
    use num_traits::One;

    fn weight(w: &[u8; 24]) -> u32 {
        w.iter().map(|&b| b as u32).sum()
    }

    #[test]
    fn golay_code_has_the_right_weights() {
        let gens = golay_generators();
        let mut weights = std::collections::BTreeMap::new();
        for mask in 0u32..(1 << 12) {
            let mut w = [0u8; 24];
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for k in 0..24 {
                        w[k] ^= g[k];
                    }
                }
            }
            *weights.entry(weight(&w)).or_insert(0) += 1;
        }
        let expect: std::collections::BTreeMap<u32, i32> = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)].into();
        assert_eq!(weights, expect);
    }

    #[test]
    fn small_catalog_entries() {
        assert_eq!(catalog("Zn(3)").unwrap(), GramMatrix::identity(3));
        assert_eq!(catalog("An(2)").unwrap().det(), BigInt::from(3));
        assert_eq!(catalog("Dn(4)").unwrap().det(), BigInt::from(4));
        assert_eq!(catalog("Dn(5)").unwrap().det(), BigInt::from(4));
        assert_eq!(catalog("Dn(1)").unwrap(), GramMatrix::diagonal(&[4]).unwrap());
        assert_eq!(catalog("E6").unwrap().det(), BigInt::from(3));
        assert_eq!(catalog("E7").unwrap().det(), BigInt::from(2));
        assert_eq!(catalog("E8").unwrap().det(), BigInt::one());
        assert_eq!(catalog(" E8 ").unwrap(), catalog("E8").unwrap());
    }

    #[test]
    fn d_plus_lattices() {
        let d12 = catalog("Dnplus(12)").unwrap();
        assert_eq!(d12.rank(), 12);
        assert_eq!(d12.det(), BigInt::one());
        assert_eq!(min_norm(&d12), 2);
        let d8 = catalog("Dnplus(8)").unwrap();
        assert_eq!(d8.det(), BigInt::one());
        assert!(matches!(catalog("Dnplus(6)"), Err(LatticeError::UnknownName(_))));
    }

    #[test]
    fn unknown_names() {
        for bad in ["F4", "Zn(0)", "Zn(x)", "Zn(3", "Leech2", ""] {
            assert!(matches!(catalog(bad), Err(LatticeError::UnknownName(_))), "{bad}");
        }
    }

    #[test]
    fn leech_is_even_unimodular_without_roots() {
        let l = catalog("Leech").unwrap();
        assert_eq!(l.rank(), 24);
        assert_eq!(l.det(), BigInt::one());
        assert!(l.diag().iter().all(|d| d % 2 == 0));
        assert_eq!(min_norm(&l), 4);
    }

    #[test]
    fn lambda23_has_discriminant_four() {
        let l = catalog("Lambda23").unwrap();
        assert_eq!(l.rank(), 23);
        assert_eq!(l.det(), BigInt::from(4));
    }
}
