//! Exact dense linear algebra over `ℚ`.
//!
//! Nothing in this module touches floating point. Elimination always takes the
//! first nonzero pivot in column order so traces are reproducible.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always normalized with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is {rows}×{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense row-major matrix of rationals with positive dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!("{} entries for a {rows}×{cols} matrix", data.len())));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_integers<const N: usize>(rows: &[[i64; N]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| int(x))).collect();
        Self::new(rows.len(), N, data).expect("nonempty integer matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self::new(rows, cols, data).expect("positive dimensions")
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// First asymmetric position, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        (0..self.rows)
            .flat_map(|i| (i + 1..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// `self + t·I`.
    pub fn shifted(&self, t: &Rational) -> Result<Self, LinalgError> {
        self.require_square()?;
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols + i] += t;
        }
        Ok(m)
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    /// `(s, N)` with `s` the least common denominator and `N = s·M` integral.
    pub fn integer_form(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let s = self.common_denominator();
        let rows =
            self.data.chunks(self.cols).map(|r| r.iter().map(|q| q.numer() * (&s / q.denom())).collect()).collect();
        (s, rows)
    }

    /// Exact solution of `self · x = rhs`, verified by substitution.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        let n = self.require_square()?;
        if rhs.len() != n {
            return Err(LinalgError::DimensionMismatch(format!("rhs of length {} for {n} unknowns", rhs.len())));
        }
        let mut a = self.to_rows();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LinalgError::Singular)?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let inv = a[col][col].recip();
            for j in col..n {
                a[col][j] *= &inv;
            }
            b[col] *= &inv;
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
        let check = self.mul_vec(&b)?;
        assert_eq!(check, rhs, "exact residual must vanish");
        Ok(b)
    }

    /// Exact determinant: clear denominators, run Bareiss over `ℤ`, rescale.
    pub fn determinant(&self) -> Result<Rational, LinalgError> {
        let n = self.require_square()?;
        let (s, ints) = self.integer_form();
        let det = bareiss_determinant(ints);
        Ok(Rational::new(det, num_traits::pow(s, n)))
    }

    /// Exact rank by rational row reduction.
    #[allow(clippy::needless_range_loop)]
    pub fn rank(&self) -> usize {
        let mut a = self.to_rows();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot);
            for r in rank + 1..self.rows {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &a[rank][col];
                for j in col..self.cols {
                    let t = &f * &a[rank][j];
                    a[r][j] -= t;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Coefficients `c₀, …, c_n` of `det(t·I + M) = Σ cₖ tᵏ`, lowest degree
    /// first, by exact interpolation through `t = 0, …, n`.
    pub fn shifted_characteristic_polynomial(&self) -> Result<Vec<Rational>, LinalgError> {
        let n = self.require_square()?;
        let values: Vec<Rational> =
            (0..=n).map(|k| self.shifted(&int(k as i64)).and_then(|m| m.determinant())).collect::<Result<_, _>>()?;
        Ok(interpolate_on_naturals(&values))
    }

    /// Positive semidefiniteness of a symmetric matrix, decided exactly.
    ///
    /// Fraction-free symmetric elimination with diagonal pivots on the
    /// integer form. After pivoting on a positive entry the trailing block is
    /// a positive multiple of the Schur complement, which is PSD iff the
    /// matrix is. A negative pivot refutes PSD, and a zero pivot is allowed
    /// only when its whole row vanishes (the index is then dropped).
    /// [`shifted_characteristic_polynomial`](Self::shifted_characteristic_polynomial)
    /// gives an independent, slower route to the same answer.
    pub fn is_psd(&self) -> Result<bool, LinalgError> {
        self.require_square()?;
        if let Some((row, col)) = self.asymmetry() {
            return Err(LinalgError::NotSymmetric { row, col });
        }
        let (_, mut a) = self.integer_form();
        let mut live: Vec<usize> = (0..self.rows).collect();
        let mut prev = BigInt::one();
        while let Some((&k, rest)) = live.split_first() {
            let rest = rest.to_vec();
            let pivot = a[k][k].clone();
            if pivot.is_negative() {
                return Ok(false);
            }
            if pivot.is_zero() {
                if rest.iter().any(|&j| !a[k][j].is_zero()) {
                    return Ok(false);
                }
            } else {
                for &i in &rest {
                    for &j in &rest {
                        let v = &a[i][j] * &pivot - &a[i][k] * &a[k][j];
                        a[i][j] = v / &prev;
                    }
                }
                prev = pivot;
            }
            live = rest;
        }
        Ok(true)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Bareiss fraction-free elimination. Every intermediate value is itself a
/// minor of the input, so entries stay bounded by Hadamard's inequality.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(pivot) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != k {
            a.swap(k, pivot);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Monomial coefficients (lowest first) of the unique polynomial of degree
/// `≤ values.len() - 1` taking `values[k]` at `t = k`.
fn interpolate_on_naturals(values: &[Rational]) -> Vec<Rational> {
    let n = values.len();
    // Newton divided differences on nodes 0, 1, …, n-1.
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / int(level as i64);
        }
    }
    // Horner expansion of Σ dd[k] · Π_{j<k} (t - j).
    let mut coeffs = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        // coeffs ← coeffs · (t - k) + dd[k]
        let mut next = vec![Rational::zero(); n];
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d + 1 < n {
                next[d + 1] += c;
            }
            next[d] -= c * int(k as i64);
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    coeffs
}
