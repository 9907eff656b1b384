use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    /// Builds a matrix from row-major data, rejecting wrong lengths and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn diag(d: &[C64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in d.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let v: Vec<C64> = d.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    pub fn scalar(z: C64) -> Self {
        Self { rows: 1, cols: 1, data: vec![z] }
    }

    /// Column vector.
    pub fn col_vec(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * z).collect() }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    /// `self + z·I`.
    pub fn shift(&self, z: C64) -> Self {
        assert!(self.is_square(), "shift of non-square matrix");
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols + i] += z;
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (j, z) in self.row(i).iter().enumerate() {
                sums[j] += z.norm();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Induced ∞-norm (max row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows).map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Copy of rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols, "block out of range");
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "set_block out of range");
        for i in 0..b.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(b.row(i));
        }
    }

    /// Assembles a block matrix. `None` entries are zero blocks; every block
    /// row must have a consistent height and every block column a consistent
    /// width, determined from the `Some` entries or from `row_dims`/`col_dims`.
    pub fn assemble(row_dims: &[usize], col_dims: &[usize], blocks: &[Vec<Option<&CMat>>]) -> Self {
        assert_eq!(blocks.len(), row_dims.len(), "block row count");
        let rows: usize = row_dims.iter().sum();
        let cols: usize = col_dims.iter().sum();
        let mut m = Self::zeros(rows, cols);
        let mut r0 = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            assert_eq!(brow.len(), col_dims.len(), "block column count");
            let mut c0 = 0;
            for (bj, b) in brow.iter().enumerate() {
                if let Some(b) = b {
                    assert_eq!(b.shape(), (row_dims[bi], col_dims[bj]), "block ({bi},{bj}) shape");
                    m.set_block(r0, c0, b);
                }
                c0 += col_dims[bj];
            }
            r0 += row_dims[bi];
        }
        m
    }

    pub fn hstack(parts: &[&CMat]) -> Self {
        let rows = parts.first().map_or(0, |p| p.rows);
        let dims: Vec<usize> = parts.iter().map(|p| p.cols).collect();
        let row: Vec<Option<&CMat>> = parts.iter().map(|&p| Some(p)).collect();
        Self::assemble(&[rows], &dims, &[row])
    }

    pub fn vstack(parts: &[&CMat]) -> Self {
        let cols = parts.first().map_or(0, |p| p.cols);
        let dims: Vec<usize> = parts.iter().map(|p| p.rows).collect();
        let blocks: Vec<Vec<Option<&CMat>>> = parts.iter().map(|&p| vec![Some(p)]).collect();
        Self::assemble(&dims, &[cols], &blocks)
    }

    pub fn matmul(&self, other: &CMat) -> Self {
        assert_eq!(self.cols, other.rows, "matmul inner dimension");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        if m == 0 {
            return Self { rows: n, cols: m, data: out };
        }
        let kernel = |(i, orow): (usize, &mut [C64])| {
            let arow = &self.data[i * k..(i + 1) * k];
            for (p, &a) in arow.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[p * m..(p + 1) * m];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        };
        if n * k * m >= 1 << 18 {
            out.par_chunks_mut(m).enumerate().for_each(kernel);
        } else {
            out.chunks_mut(m).enumerate().for_each(kernel);
        }
        Self { rows: n, cols: m, data: out }
    }

    /// `self += w·a·b` without a temporary.
    pub(crate) fn mul_acc(&mut self, w: f64, a: &CMat, b: &CMat) {
        assert_eq!((self.rows, a.cols, self.cols), (a.rows, b.rows, b.cols), "mul_acc shapes");
        let m = self.cols;
        for i in 0..self.rows {
            let orow = &mut self.data[i * m..(i + 1) * m];
            for (p, &x) in a.data[i * a.cols..(i + 1) * a.cols].iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                let xw = x * w;
                for (o, &y) in orow.iter_mut().zip(&b.data[p * m..(p + 1) * m]) {
                    *o += xw * y;
                }
            }
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum()).collect()
    }

    /// Entrywise distance ‖self − other‖_F.
    pub fn dist_fro(&self, other: &CMat) -> f64 {
        assert_eq!(self.shape(), other.shape(), "dist_fro shape");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(12) {
            write!(f, "  ")?;
            for z in self.row(i).iter().take(8) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!(self.shape(), rhs.shape(), "add shape");
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!(self.shape(), rhs.shape(), "sub shape");
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs)
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale_real(-1.0)
    }
}

impl Add for CMat {
    type Output = CMat;
    fn add(self, rhs: CMat) -> CMat {
        &self + &rhs
    }
}

impl Sub for CMat {
    type Output = CMat;
    fn sub(self, rhs: CMat) -> CMat {
        &self - &rhs
    }
}

impl Mul for CMat {
    type Output = CMat;
    fn mul(self, rhs: CMat) -> CMat {
        self.matmul(&rhs)
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_nan_and_bad_length() {
        assert!(matches!(CMat::new(2, 2, vec![ZERO; 3]), Err(Error::DimensionMismatch(_))));
        let mut d = vec![ZERO; 4];
        d[2] = C64::new(f64::NAN, 0.0);
        assert_eq!(CMat::new(2, 2, d), Err(Error::NonFinite));
    }

    #[test]
    fn assemble_places_blocks() {
        let a = CMat::identity(2);
        let b = CMat::from_real_rows(&[vec![5.0], vec![6.0]]);
        let m = CMat::assemble(&[2, 1], &[2, 1], &[vec![Some(&a), Some(&b)], vec![None, None]]);
        assert_eq!(m.shape(), (3, 3));
        assert_eq!(m[(1, 1)], ONE);
        assert_eq!(m[(1, 2)], C64::new(6.0, 0.0));
        assert_eq!(m[(2, 2)], ZERO);
    }

    #[test]
    fn matmul_small() {
        let a = CMat::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = CMat::from_fn(2, 2, |i, j| C64::new(0.0, (i + j) as f64));
        let c = &a * &b;
        assert_eq!(c[(0, 0)], C64::new(0.0, 2.0));
        assert_eq!(c[(1, 1)], C64::new(0.0, 3.0 + 8.0));
    }

    #[test]
    fn adjoint_conjugates() {
        let a = CMat::from_fn(2, 3, |i, j| C64::new(i as f64, j as f64));
        let h = a.adjoint();
        assert_eq!(h.shape(), (3, 2));
        assert_eq!(h[(2, 1)], C64::new(1.0, -2.0));
    }
}
