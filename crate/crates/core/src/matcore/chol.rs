use super::cmat::{CMat, C64};
use crate::{Error, Result};

/// Upper triangular `R` with `RᴴR = A` for Hermitian positive definite `A`.
/// Fails with `SingularMatrix` when a pivot is not positive and with
/// `InvalidInput` when `A` is not Hermitian to `1e-12` relative.
pub fn cholesky(a: &CMat) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("Cholesky of {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    if a.dist_fro(&a.adjoint()) > 1e-12 * a.norm_fro() {
        return Err(Error::InvalidInput("Cholesky needs a Hermitian matrix".into()));
    }
    let mut r = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= r[(k, j)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::SingularMatrix { pivot: j });
        }
        let rjj = d.sqrt();
        r[(j, j)] = C64::new(rjj, 0.0);
        for i in j + 1..n {
            let mut s = a[(j, i)];
            for k in 0..j {
                s -= r[(k, j)].conj() * r[(k, i)];
            }
            r[(j, i)] = s / rjj;
        }
    }
    Ok(r)
}
