//! Dense complex matrices and vectors.
//!
//! `CMatrix` is stored row-major and may be rectangular; operators (the
//! matrices every analysis routine accepts) must additionally be square,
//! finite and of dimension at most [`MAX_DIM`]. See [`CMatrix::ensure_operator`].

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest operator dimension accepted by the analysis routines.
pub const MAX_DIM: usize = 64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "entries: expected {} values for a {rows}x{cols} matrix, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Square matrix from real row-major values.
    pub fn from_real(dim: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), dim * dim, "expected dim*dim values");
        Self {
            rows: dim,
            cols: dim,
            data: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[CVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Validates that the matrix can be treated as an operator.
    pub fn ensure_operator(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::InvalidInput(format!(
                "operator must be square, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Err(Error::InvalidInput("dim must be positive".into()));
        }
        if self.rows > MAX_DIM {
            return Err(Error::TooLarge {
                dim: self.rows,
                max: MAX_DIM,
            });
        }
        if !self.is_finite() {
            return Err(Error::InvalidInput("entries must be finite".into()));
        }
        Ok(())
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn columns(&self) -> Vec<CVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self - z I`.
    pub fn shift(&self, z: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] -= z;
        }
        m
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        CVector(
            (0..self.rows)
                .map(|i| {
                    self.data[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(&v.0)
                        .map(|(&a, &b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, k: u32) -> CMatrix {
        assert!(self.is_square());
        let mut result = CMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }

    pub fn frobenius_norm(&self) -> f64 {
        l2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_range(&self, start: usize, end: usize) -> CMatrix {
        CMatrix::from_fn(self.rows, end - start, |i, j| self[(i, start + j)])
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&CMatrix]) -> CMatrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[&CMatrix]) -> CMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = CMatrix::zeros(n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r + i, c + j)] = b[(i, j)];
                }
            }
            r += b.rows;
            c += b.cols;
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Dense complex vector.
/// Euclidean norm, rescaled when squares would overflow or underflow.
fn l2(z: &[Complex64]) -> f64 {
    let s = z.iter().map(|x| x.norm_sqr()).sum::<f64>();
    if s.is_finite() && s > 1e-280 {
        return s.sqrt();
    }
    let m = z.iter().map(|x| x.re.abs().max(x.im.abs())).fold(0.0, f64::max);
    if m == 0.0 || !m.is_finite() {
        return if m == 0.0 { 0.0 } else { f64::INFINITY };
    }
    m * z.iter().map(|x| (x / m).norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CVector(pub Vec<Complex64>);

impl CVector {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![ZERO; dim])
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = ONE;
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        l2(&self.0)
    }

    /// `<self, other>`, linear in the first argument.
    pub fn inner(&self, other: &CVector) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn scale(&self, s: Complex64) -> CVector {
        CVector(self.0.iter().map(|&z| z * s).collect())
    }

    pub fn normalized(&self) -> CVector {
        let n = self.norm();
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for &CVector {
    type Output = CVector;

    fn add(self, rhs: &CVector) -> CVector {
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CVector {
    type Output = CVector;

    fn sub(self, rhs: &CVector) -> CVector {
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

// Wire format: {"dim": d, "entries": [[re, im], ...]} row-major. Rectangular
// matrices carry an extra "cols" field.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cols: Option<usize>,
    entries: Vec<[f64; 2]>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            dim: self.rows,
            cols: (!self.is_square()).then_some(self.cols),
            entries: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let cols = raw.cols.unwrap_or(raw.dim);
        if raw.dim == 0 {
            return Err(D::Error::custom("dim: must be a positive integer"));
        }
        if raw.entries.len() != raw.dim * cols {
            return Err(D::Error::custom(format!(
                "entries: expected {} [re, im] pairs for dim {}, found {}",
                raw.dim * cols,
                raw.dim,
                raw.entries.len()
            )));
        }
        if raw.entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(D::Error::custom("entries: all values must be finite"));
        }
        Ok(CMatrix {
            rows: raw.dim,
            cols,
            data: raw.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for CVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VectorJson {
            dim: self.len(),
            entries: self.0.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = VectorJson::deserialize(deserializer)?;
        if raw.entries.len() != raw.dim {
            return Err(D::Error::custom(format!(
                "entries: expected {} [re, im] pairs, found {}",
                raw.dim,
                raw.entries.len()
            )));
        }
        Ok(CVector(raw.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_product() {
        let a = CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]);
        let p = a.pow(5);
        assert_eq!(p, CMatrix::from_real(2, &[1.0, 5.0, 0.0, 1.0]));
        assert_eq!(a.pow(0), CMatrix::identity(2));
    }

    #[test]
    fn json_round_trip_and_field_errors() {
        let a = CMatrix::from_fn(2, 2, |i, j| Complex64::new(i as f64, j as f64 - 0.5));
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.starts_with("{\"dim\":2,\"entries\""));
        let back: CMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(a, back);

        let err = serde_json::from_str::<CMatrix>(r#"{"dim": 2, "entries": [[1,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("entries"));
        let err = serde_json::from_str::<CMatrix>(r#"{"entries": [[1,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("dim"));
    }

    #[test]
    fn operator_validation() {
        assert!(CMatrix::zeros(2, 3).ensure_operator().is_err());
        assert!(matches!(
            CMatrix::identity(65).ensure_operator(),
            Err(Error::TooLarge { dim: 65, .. })
        ));
        let mut bad = CMatrix::identity(2);
        bad[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(bad.ensure_operator().is_err());
    }

    #[test]
    fn inner_is_linear_in_first_argument() {
        let x = CVector(vec![I, ONE]);
        let y = CVector(vec![ONE, ONE]);
        assert_eq!(x.scale(I).inner(&y), I * x.inner(&y));
        assert_eq!(x.inner(&y.scale(I)), -I * x.inner(&y));
    }
}
