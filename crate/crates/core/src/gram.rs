//! Gram matrices of positive-definite integral lattices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LatticeError, Result};
use crate::intops;
use crate::rational::RationalMatrix;

/// Integer matrix stored as rows. Embedding maps and basis transforms use it
/// with one column per image vector.
pub type IntMatrix = Vec<Vec<i64>>;

/// Symmetric positive-definite integer matrix, i.e. a classically integral
/// lattice given up to isometry. Rank 0 is allowed and acts as the identity
/// for [`GramMatrix::direct_sum`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GramMatrix {
    rank: usize,
    entries: Vec<i64>,
}

/// Validate and build a Gram matrix of the given rank.
pub fn make_gram(rank: usize, entries: &[Vec<i64>]) -> Result<GramMatrix> {
    if entries.len() != rank {
        return Err(LatticeError::Shape { rank, row: entries.len(), len: 0 });
    }
    GramMatrix::from_rows(entries)
}

impl GramMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<GramMatrix> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(LatticeError::Shape { rank: n, row: i, len: r.len() });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::NotSymmetric { row: i, col: j });
                }
            }
        }
        let minors = intops::leading_minors_big(rows);
        if let Some((k, v)) = minors.iter().enumerate().skip(1).find(|(_, v)| !v.is_positive()) {
            return Err(LatticeError::NotPositiveDefinite { minor: k, value: v.to_string() });
        }
        Ok(Self::from_rows_unchecked(rows))
    }

    /// Caller guarantees the matrix is symmetric positive-definite.
    pub(crate) fn from_rows_unchecked(rows: &[Vec<i64>]) -> GramMatrix {
        let n = rows.len();
        let entries: Vec<i64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        debug_assert_eq!(entries.len(), n * n);
        GramMatrix { rank: n, entries }
    }

    pub(crate) fn from_big_unchecked(rows: &[Vec<BigInt>]) -> Result<GramMatrix> {
        let small = intops::big_to_i64_matrix(rows)
            .ok_or_else(|| LatticeError::Overflow("Gram entry does not fit in 64 bits".into()))?;
        Ok(Self::from_rows_unchecked(&small))
    }

    pub fn empty() -> GramMatrix {
        GramMatrix { rank: 0, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> GramMatrix {
        Self::diagonal(&vec![1; n]).expect("identity is positive definite")
    }

    pub fn diagonal(diag: &[i64]) -> Result<GramMatrix> {
        let n = diag.len();
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { diag[i] } else { 0 }).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.rank + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.rank..(i + 1) * self.rank]
    }

    pub fn rows(&self) -> IntMatrix {
        (0..self.rank).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.get(i, i)).collect()
    }

    /// `x^T G y` for coordinate vectors in this basis.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> i128 {
        let mut s: i128 = 0;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            let mut t: i128 = 0;
            for j in 0..self.rank {
                t += self.get(i, j) as i128 * y[j] as i128;
            }
            s += x[i] as i128 * t;
        }
        s
    }

    pub fn norm(&self, x: &[i64]) -> i128 {
        self.inner(x, x)
    }

    /// `G x` as an integer vector.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|i| {
                let s: i128 = (0..self.rank).map(|j| self.get(i, j) as i128 * x[j] as i128).sum();
                i64::try_from(s).expect("G x overflows i64")
            })
            .collect()
    }

    /// Leading principal minors `d_1, ..., d_n` (all positive).
    pub fn leading_minors(&self) -> Vec<BigInt> {
        intops::leading_minors_big(&self.rows()).split_off(1)
    }

    /// Determinant (discriminant), computed fraction-free.
    pub fn det(&self) -> BigInt {
        self.leading_minors().pop().unwrap_or_else(BigInt::one)
    }

    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let n = self.rank + other.rank;
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..self.rank {
            for j in 0..self.rank {
                rows[i][j] = self.get(i, j);
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                rows[self.rank + i][self.rank + j] = other.get(i, j);
            }
        }
        Self::from_rows_unchecked(&rows)
    }

    /// Orthogonal direct sum of `k` copies.
    pub fn power(&self, k: usize) -> GramMatrix {
        (0..k).fold(GramMatrix::empty(), |acc, _| acc.direct_sum(self))
    }

    /// Multiply the bilinear form by `m >= 1`.
    pub fn scale(&self, m: i64) -> Result<GramMatrix> {
        if m < 1 {
            return Err(LatticeError::Parse { pos: 0, msg: format!("scale factor {m} must be at least 1") });
        }
        let entries = self
            .entries
            .iter()
            .map(|&v| v.checked_mul(m).ok_or_else(|| LatticeError::Overflow(format!("{v} * {m}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(GramMatrix { rank: self.rank, entries })
    }

    /// Gram matrix of the dual lattice, the exact inverse `G^{-1}`.
    pub fn dual_gram(&self) -> RationalMatrix {
        RationalMatrix::from_integers(&self.rows()).inverse().expect("positive-definite matrix is invertible")
    }

    /// `det(G) * G^{-1}`, an integral Gram matrix of the rescaled dual.
    pub fn adjugate(&self) -> Vec<Vec<BigInt>> {
        let det = BigRational::from_integer(self.det());
        self.dual_gram().scale(&det).to_integers().expect("adjugate of an integer matrix is integral")
    }

    /// `T^T G T` for an `n x m` integer matrix `T` (columns are vectors in this basis).
    pub fn congruence(&self, t: &[Vec<i64>]) -> Result<IntMatrix> {
        if t.len() != self.rank {
            return Err(LatticeError::InvalidEmbedding(format!(
                "map has {} rows, lattice has rank {}",
                t.len(),
                self.rank
            )));
        }
        let m = t.first().map_or(0, Vec::len);
        let cols: Vec<Vec<i64>> = (0..m).map(|j| t.iter().map(|r| r[j]).collect()).collect();
        let mut out = vec![vec![0i64; m]; m];
        for a in 0..m {
            let ga = self.apply(&cols[a]);
            for b in a..m {
                let v: i128 = ga.iter().zip(&cols[b]).map(|(&x, &y)| x as i128 * y as i128).sum();
                let v = i64::try_from(v).map_err(|_| LatticeError::Overflow("congruence entry".into()))?;
                out[a][b] = v;
                out[b][a] = v;
            }
        }
        Ok(out)
    }

    /// Text format: rank on the first line, then one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.rank);
        for i in 0..self.rank {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse the text format. Lines starting with `#` and blank lines are skipped.
    pub fn from_text(text: &str) -> Result<GramMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(LatticeError::Parse { pos: 0, msg: "empty Gram file".into() })?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| LatticeError::Parse { pos: 0, msg: format!("bad rank line `{}`", first.trim()) })?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = lines
                .next()
                .ok_or(LatticeError::Parse { pos: text.len(), msg: format!("expected {n} matrix rows") })?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| LatticeError::Parse { pos: ln, msg: format!("bad integer on line {}", ln + 1) })?;
            rows.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(LatticeError::Parse { pos: ln, msg: "trailing data after matrix".into() });
        }
        make_gram(n, &rows)
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for GramMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        GramMatrix::from_text(&text).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.entries.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rank {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn make_gram_accepts_identity_and_a() {
        assert_eq!(make_gram(1, &[vec![1]]).unwrap(), GramMatrix::identity(1));
        let a = make_gram(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(a, GramMatrix::diagonal(&[1, 1, 2]).unwrap());
        assert_eq!(a.det(), BigInt::from(2));
    }

    #[test]
    fn make_gram_rejects_indefinite() {
        let err = make_gram(2, &[vec![1, 2], vec![2, 1]]).unwrap_err();
        assert_eq!(err, LatticeError::NotPositiveDefinite { minor: 2, value: "-3".into() });
    }

    #[test]
    fn make_gram_rejects_asymmetric_and_ragged() {
        assert_eq!(
            make_gram(2, &[vec![2, 1], vec![0, 2]]).unwrap_err(),
            LatticeError::NotSymmetric { row: 0, col: 1 }
        );
        assert!(matches!(make_gram(2, &[vec![2, 1], vec![1]]), Err(LatticeError::Shape { .. })));
        assert!(matches!(make_gram(2, &[vec![1]]), Err(LatticeError::Shape { .. })));
        assert!(matches!(make_gram(1, &[vec![0]]), Err(LatticeError::NotPositiveDefinite { minor: 1, .. })));
    }

    #[test]
    fn direct_sum_and_scale() {
        let z = GramMatrix::identity(1);
        assert_eq!(z.direct_sum(&z), GramMatrix::identity(2));
        assert_eq!(z.direct_sum(&GramMatrix::empty()), z);
        assert_eq!(GramMatrix::empty().direct_sum(&z), z);
        assert_eq!(z.scale(2).unwrap(), GramMatrix::diagonal(&[2]).unwrap());
        let c = GramMatrix::identity(3).scale(2).unwrap();
        assert_eq!(c, GramMatrix::diagonal(&[2, 2, 2]).unwrap());
        assert_eq!(c.det(), BigInt::from(8));
        assert_eq!(c.scale(1).unwrap(), c);
        assert!(c.scale(0).is_err());
        assert_eq!(GramMatrix::empty().det(), BigInt::one());
    }

    #[test]
    fn dual_of_scaled_line() {
        let g = GramMatrix::diagonal(&[2]).unwrap();
        assert_eq!(g.dual_gram().get(0, 0), &rat(1, 2));
        let a2 = GramMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(a2.adjugate(), vec![vec![BigInt::from(2), BigInt::from(-1)], vec![BigInt::from(-1), BigInt::from(2)]]);
    }

    #[test]
    fn text_format_is_exact() {
        let a2 = GramMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(a2.to_text(), "2\n2 -1\n-1 2\n");
        let parsed = GramMatrix::from_text("# A2 root lattice\n2\n2 -1\n# middle comment\n-1 2\n").unwrap();
        assert_eq!(parsed, a2);
        assert!(GramMatrix::from_text("2\n2 1\n").is_err());
        assert!(GramMatrix::from_text("1\n1\n1\n").is_err());
        assert!(GramMatrix::from_text("1\nx\n").is_err());
    }

    #[test]
    fn congruence_matches_definition() {
        let g = GramMatrix::diagonal(&[1, 1, 2]).unwrap();
        // images (1,1,0), (1,-1,0), (0,0,1) as columns
        let t = vec![vec![1, 1, 0], vec![1, -1, 0], vec![0, 0, 1]];
        assert_eq!(g.congruence(&t).unwrap(), vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
    }
}
