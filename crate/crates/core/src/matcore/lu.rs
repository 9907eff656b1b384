use super::cmat::{CMat, C64, ONE, ZERO};
use crate::{Error, Result};

/// Relative pivot threshold below which a matrix is declared singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// LU factorization with partial pivoting, `P·A = L·U` packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMat,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &CMat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!("LU of {}x{} matrix", a.rows(), a.cols())));
        }
        let n = a.rows();
        let tol = PIVOT_TOL * a.norm_max();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= tol || pmax == 0.0 {
                return Err(Error::SingularMatrix { pivot: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let inv = ONE / lu[(k, k)];
            let pivot_row: Vec<C64> = lu.row(k)[k + 1..].to_vec();
            for i in k + 1..n {
                let f = lu[(i, k)] * inv;
                lu[(i, k)] = f;
                if f != ZERO {
                    let row = &mut lu.row_mut(i)[k + 1..];
                    for (x, &u) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn solve(&self, b: &CMat) -> Result<CMat> {
        let n = self.dim();
        if b.rows() != n {
            return Err(Error::DimensionMismatch(format!("rhs has {} rows, system {n}", b.rows())));
        }
        let m = b.cols();
        let mut x = CMat::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        for i in 0..n {
            for k in 0..i {
                let f = self.lu[(i, k)];
                if f != ZERO {
                    for j in 0..m {
                        let v = x[(k, j)];
                        x[(i, j)] -= f * v;
                    }
                }
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let f = self.lu[(i, k)];
                if f != ZERO {
                    for j in 0..m {
                        let v = x[(k, j)];
                        x[(i, j)] -= f * v;
                    }
                }
            }
            let inv = ONE / self.lu[(i, i)];
            for j in 0..m {
                x[(i, j)] *= inv;
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &[C64]) -> Result<Vec<C64>> {
        Ok(self.solve(&CMat::col_vec(b))?.into_vec())
    }

    pub fn determinant(&self) -> C64 {
        let n = self.dim();
        let mut det: C64 = (0..n).map(|i| self.lu[(i, i)]).product();
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                det = -det;
            }
        }
        det
    }
}

/// Solves `A·X = B` with partial pivoting.
pub fn solve_linear(a: &CMat, b: &CMat) -> Result<CMat> {
    Lu::factor(a)?.solve(b)
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    Lu::factor(a)?.solve(&CMat::identity(a.rows()))
}

/// `(λI − A)⁻¹`.
pub fn resolvent(a: &CMat, lambda: C64) -> Result<CMat> {
    let shifted = (-a).shift(lambda);
    inverse(&shifted)
}
