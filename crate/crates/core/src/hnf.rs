//! Integer row echelon (Hermite) forms, spans and kernels over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Bring `rows` into Hermite normal form using unimodular row operations,
/// pivoting only in the first `pivot_cols` columns (remaining columns are
/// carried along). Returns the number of pivot rows; those come first, and
/// every later row is zero in the pivot columns.
pub fn echelon(rows: &mut Vec<Vec<BigInt>>, pivot_cols: usize) -> usize {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| at or below r becomes the pivot
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = rows[r].clone();
            for i in 0..r {
                let q = rows[i][c].div_floor(&pivot_row[c]);
                if !q.is_zero() {
                    for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// Hermite basis (as rows) of the Z-span of `vectors`, each of length `n`.
pub fn span_basis(vectors: &[Vec<i64>], n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> =
        vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rank = echelon(&mut rows, n);
    rows.truncate(rank);
    rows
}

/// True iff `vectors` generate all of Z^n (full rank and index 1).
pub fn spans_full_lattice(vectors: &[Vec<i64>], n: usize) -> bool {
    let basis = span_basis(vectors, n);
    basis.len() == n && index_of_square_basis(&basis).is_one()
}

/// Index in Z^n of the lattice spanned by a Hermite basis of full rank:
/// the product of the pivots.
pub fn index_of_square_basis(basis: &[Vec<BigInt>]) -> BigInt {
    let mut idx = BigInt::one();
    let mut col = 0;
    for row in basis {
        while col < row.len() && row[col].is_zero() {
            col += 1;
        }
        if col == row.len() {
            return BigInt::zero();
        }
        idx *= &row[col];
        col += 1;
    }
    idx
}

/// Basis of `{x in Z^n : M x = 0}` for an integer matrix `M` given as rows
/// of length `n`.
pub fn integer_kernel(m: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let k = m.len();
    // row j = (column j of M | e_j)
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut r: Vec<BigInt> = m.iter().map(|mr| mr[j].clone()).collect();
            r.extend((0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let rank = echelon(&mut rows, k);
    rows.into_iter().skip(rank).map(|r| r[k..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn span_of_even_vectors_has_index_two() {
        let basis = span_basis(&[vec![1, 1], vec![1, -1]], 2);
        assert_eq!(basis.len(), 2);
        assert_eq!(index_of_square_basis(&basis), BigInt::from(2));
        assert!(!spans_full_lattice(&[vec![1, 1], vec![1, -1]], 2));
        assert!(spans_full_lattice(&[vec![1, 1], vec![0, 1], vec![3, 3]], 2));
    }

    #[test]
    fn rank_deficient_span() {
        assert!(!spans_full_lattice(&[vec![1, 0, 0], vec![0, 1, 0]], 3));
        assert_eq!(span_basis(&[vec![2, 4], vec![3, 6]], 2).len(), 1);
    }

    #[test]
    fn kernel_of_single_row() {
        let m = big(&[&[1, 1, 0]]);
        let ker = integer_kernel(&m, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let dot: BigInt = v.iter().zip(&m[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        // the kernel basis must be primitive: together with (1,0,0) it spans Z^3
        let mut all: Vec<Vec<i64>> = ker.iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        all.push(vec![1, 0, 0]);
        assert!(spans_full_lattice(&all, 3));
    }

    #[test]
    fn kernel_with_common_factor() {
        // 2x + 4y = 0 has kernel generated by (2, -1)
        let ker = integer_kernel(&big(&[&[2, 4]]), 2);
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        assert_eq!(BigInt::from(2) * &v[0] + BigInt::from(4) * &v[1], BigInt::zero());
        assert_eq!(v[0].abs(), BigInt::from(2));
    }
}
