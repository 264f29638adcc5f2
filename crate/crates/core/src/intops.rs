//! Integer arithmetic shared by the fraction-free algorithms.
//!
//! Hot loops run on `i128` with checked operations; any overflow makes the
//! caller retry on `BigInt`, so results never depend on the machine width.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait ExactInt: Clone + Ord + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_i64(&self) -> Option<i64>;
    fn nil() -> Self {
        Self::from_i64(0)
    }
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Exact division; callers only use it where the remainder is zero.
    fn div_exact(&self, o: &Self) -> Option<Self>;
    fn div_floor(&self, o: &Self) -> Option<Self>;
    fn div_ceil(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    /// Floor of the square root of a non-negative value.
    fn isqrt(&self) -> Self;
}

impl ExactInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        debug_assert!(*o != 0 && self % o == 0, "inexact division {self} / {o}");
        self.checked_div(*o)
    }
    fn div_floor(&self, o: &Self) -> Option<Self> {
        if *o == 0 || (*self == i128::MIN && *o == -1) {
            return None;
        }
        Some(Integer::div_floor(self, o))
    }
    fn div_ceil(&self, o: &Self) -> Option<Self> {
        if *o == 0 || (*self == i128::MIN && *o == -1) {
            return None;
        }
        Some(Integer::div_ceil(self, o))
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn isqrt(&self) -> Self {
        debug_assert!(*self >= 0);
        Roots::sqrt(self)
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        debug_assert!((self % o).is_zero());
        Some(self / o)
    }
    fn div_floor(&self, o: &Self) -> Option<Self> {
        Some(Integer::div_floor(self, o))
    }
    fn div_ceil(&self, o: &Self) -> Option<Self> {
        Some(Integer::div_ceil(self, o))
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn isqrt(&self) -> Self {
        Roots::sqrt(self)
    }
}

/// Leading principal minors `d[0] = 1, d[1], ..., d[n]` by fraction-free
/// (Bareiss) elimination without pivoting. Stops at the first minor that is
/// zero, since elimination cannot continue past it; the returned vector is
/// then shorter than `n + 1`.
pub(crate) fn leading_minors<T: ExactInt>(m: &[Vec<T>]) -> Option<Vec<T>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut minors = Vec::with_capacity(n + 1);
    minors.push(T::from_i64(1));
    let mut prev = T::from_i64(1);
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_nil() || pivot.is_neg() {
            return Some(minors);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = pivot.mul(&a[i][j])?.sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = v.div_exact(&prev)?;
            }
        }
        prev = pivot;
    }
    Some(minors)
}

pub(crate) fn leading_minors_big(m: &[Vec<i64>]) -> Vec<BigInt> {
    let small: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    if let Some(d) = leading_minors(&small) {
        return d.iter().map(|v| BigInt::from(*v)).collect();
    }
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    leading_minors(&big).expect("bigint arithmetic does not overflow")
}

/// Determinant of a square integer matrix (any sign) by Bareiss with row pivoting.
pub(crate) fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub(crate) fn to_big_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

pub(crate) fn big_to_i64_matrix(m: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| r.iter().map(|v| ToPrimitive::to_i64(v)).collect::<Option<Vec<_>>>())
        .collect()
}

/// Integer matrix product `a * b` (a is p×q, b is q×r), checked into `i64`.
pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let p = a.len();
    let q = b.len();
    let r = if q == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; r]; p];
    for i in 0..p {
        for j in 0..r {
            let mut s: i128 = 0;
            for k in 0..q {
                s += a[i][k] as i128 * b[k][j] as i128;
            }
            out[i][j] = i64::try_from(s).ok()?;
        }
    }
    Some(out)
}

pub(crate) fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub(crate) fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}
