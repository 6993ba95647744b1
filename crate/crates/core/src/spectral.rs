//! Exact linear algebra over the integers: characteristic polynomials,
//! determinants, primitivity, and certified Perron roots.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::{largest_real_root, IntPolynomial, RootInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("matrix rows have inconsistent lengths (expected {expected}, row {row} has {found})")]
    NotSquare { expected: usize, row: usize, found: usize },
    #[error("entry ({0}, {1}) is negative")]
    NegativeEntry(usize, usize),
    #[error("matrix has no real eigenvalue")]
    NoRealEigenvalue,
    #[error("empty matrix")]
    Empty,
}

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, SpectralError> {
        let n = rows.len();
        if n == 0 {
            return Err(SpectralError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(SpectralError::NotSquare { expected: n, row: i, found: row.len() });
            }
            data.extend(row);
        }
        Ok(IntMatrix { n, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, SpectralError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows().map(<[BigInt]>::to_vec).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|x| x.is_positive())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.n, v.len(), "dimension mismatch");
        self.rows()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_vec_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.n, v.len(), "dimension mismatch");
        self.rows()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + b * a)
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        (0..e).fold(IntMatrix::identity(self.n), |acc, _| acc.mul(self))
    }

    /// `P M P^-1` for the index permutation `i -> (i + shift) mod n`.
    pub fn conjugate_by_shift(&self, shift: usize) -> IntMatrix {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.set((i + shift) % n, (j + shift) % n, self.get(i, j).clone());
            }
        }
        out
    }

    /// `x I - M` evaluated at an integer.
    pub fn shifted_identity_minus(&self, x: &BigInt) -> IntMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = -&*v;
        }
        for i in 0..self.n {
            out.data[i * self.n + i] += x;
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in self.rows() {
            let line: Vec<String> = r.iter().map(ToString::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, r) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let line: Vec<String> = r.iter().map(|c| format!("{c:>w$}")).collect();
            write!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// JSON form: array of rows, each an array of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for r in self.rows() {
            let row: Vec<String> = r.iter().map(ToString::to_string).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// `det(xI - M)` by the division-free Berkowitz recurrence.
pub fn char_poly(m: &IntMatrix) -> IntPolynomial {
    let n = m.dim();
    // High-degree-first coefficients of the leading principal minor's polynomial.
    let mut p: Vec<BigInt> = vec![BigInt::one()];
    for k in 0..n {
        // Toeplitz column: 1, -a_kk, -R C, -R A C, ..., -R A^(k-1) C.
        let mut t = Vec::with_capacity(k + 2);
        t.push(BigInt::one());
        t.push(-m.get(k, k));
        let mut v: Vec<BigInt> = (0..k).map(|i| m.get(i, k).clone()).collect();
        for step in 0..k {
            let rc: BigInt = (0..k).map(|j| m.get(k, j) * &v[j]).sum();
            t.push(-rc);
            if step + 1 < k {
                v = (0..k)
                    .map(|i| (0..k).map(|j| m.get(i, j) * &v[j]).sum())
                    .collect();
            }
        }
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate().take(i + 1) {
                *slot += &t[i - j] * pj;
            }
        }
        p = next;
    }
    p.reverse();
    IntPolynomial::new(p)
}

/// Exact determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.dim();
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Primitivity {
    pub primitive: bool,
    /// Smallest `e` with `M^e` entrywise positive.
    pub exponent: Option<u32>,
}

pub fn wielandt_bound(n: usize) -> u32 {
    let n = n as u32;
    (n.saturating_sub(1)).pow(2) + 1
}

/// Primitivity by boolean matrix powers, capped at the Wielandt bound.
pub fn is_primitive(m: &IntMatrix) -> Result<Primitivity, SpectralError> {
    let n = m.dim();
    let mut pattern = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if v.is_negative() {
                return Err(SpectralError::NegativeEntry(i, j));
            }
            pattern[i * n + j] = v.is_positive();
        }
    }
    let mut power = pattern.clone();
    for e in 1..=wielandt_bound(n) {
        if power.iter().all(|&b| b) {
            return Ok(Primitivity { primitive: true, exponent: Some(e) });
        }
        let mut next = vec![false; n * n];
        for i in 0..n {
            for k in 0..n {
                if power[i * n + k] {
                    for j in 0..n {
                        next[i * n + j] |= pattern[k * n + j];
                    }
                }
            }
        }
        power = next;
    }
    Ok(Primitivity { primitive: false, exponent: None })
}

/// Certified interval of width below `eps` around the largest real
/// eigenvalue, which is the Perron root when `m` is primitive.
pub fn spectral_radius(m: &IntMatrix, eps: &BigRational) -> Result<RootInterval, SpectralError> {
    if let Ok(p) = is_primitive(m) {
        if !p.primitive {
            log::warn!("spectral_radius on a non-primitive matrix; returning the largest real eigenvalue");
        }
    }
    largest_real_root(&char_poly(m), eps).ok_or(SpectralError::NoRealEigenvalue)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> IntMatrix {
        IntMatrix::from_i64_rows(&[
            &[3, 2, 0, 0, 0, 2],
            &[6, 3, 2, 4, 0, 4],
            &[12, 6, 3, 6, 0, 8],
            &[0, 0, 2, 3, 2, 0],
            &[4, 0, 4, 6, 3, 2],
            &[6, 0, 8, 12, 6, 3],
        ])
        .unwrap()
    }

    #[test]
    fn char_poly_of_identity() {
        let expected = IntPolynomial::from_high_first(&[1, -1]).pow(3);
        assert_eq!(char_poly(&IntMatrix::identity(3)), expected);
    }

    #[test]
    fn char_poly_of_a_factors_as_printed() {
        let p = |c: &[i64]| IntPolynomial::from_high_first(c);
        let expected = &(&p(&[1, -1]).pow(2) * &p(&[1, 1]).pow(2)) * &p(&[1, -18, 1]);
        assert_eq!(char_poly(&a()), expected);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&a()), BigInt::one());
        assert_eq!(determinant(&IntMatrix::identity(4)), BigInt::one());
        let swap = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(determinant(&swap), BigInt::from(-1));
        let singular = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(determinant(&singular).is_zero());
    }

    #[test]
    fn primitivity_examples() {
        assert_eq!(
            is_primitive(&a()).unwrap(),
            Primitivity { primitive: true, exponent: Some(2) }
        );
        assert!(!is_primitive(&IntMatrix::identity(3)).unwrap().primitive);
        let cyc = IntMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]).unwrap();
        assert_eq!(
            is_primitive(&cyc).unwrap(),
            Primitivity { primitive: false, exponent: None }
        );
        let neg = IntMatrix::from_i64_rows(&[&[1, -1], &[1, 1]]).unwrap();
        assert_eq!(is_primitive(&neg), Err(SpectralError::NegativeEntry(0, 1)));
    }

    #[test]
    fn wielandt_matrix_hits_the_bound() {
        // Classic extremal example: exponent (n-1)^2 + 1.
        let w = IntMatrix::from_i64_rows(&[
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 1, 0, 0],
        ])
        .unwrap();
        assert_eq!(is_primitive(&w).unwrap().exponent, Some(10));
    }

    #[test]
    fn perron_root_of_a() {
        let eps = BigRational::new(1.into(), 1_000_000_000.into());
        let r = spectral_radius(&a(), &eps).unwrap();
        assert!(r.width() < eps);
        assert!(r.contains_f64(9.0 + 4.0 * 5f64.sqrt()));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = IntMatrix::from_rows(vec![vec![1.into(), 2.into()], vec![3.into()]]);
        assert!(matches!(err, Err(SpectralError::NotSquare { .. })));
    }
}
