use crate::matcore::{matrix_exponential, operator_norm, CMat};
use crate::{Error, Result};

/// `C(t)`: solution of `Ü = AU`, `U(0) = I`, `U̇(0) = 0`, read off the upper
/// left block of `exp(t·[[0, I], [A, 0]])`.
pub fn cosine_family(a: &CMat, t: f64) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("cosine family of {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let id = CMat::identity(n);
    let big = CMat::assemble(&[n, n], &[n, n], &[vec![None, Some(&id)], vec![Some(a), None]]);
    Ok(matrix_exponential(&big, t)?.block(0, n, 0, n))
}

/// ‖C(t+s) + C(t−s) − 2C(t)C(s)‖.
pub fn dalembert_check(a: &CMat, t: f64, s: f64) -> Result<f64> {
    let (ct, cs) = (cosine_family(a, t)?, cosine_family(a, s)?);
    let sum = &cosine_family(a, t + s)? + &cosine_family(a, t - s)?;
    Ok(operator_norm(&(&sum - &(&ct * &cs).scale_real(2.0))))
}

/// Passing threshold `10⁻⁸(1 + ‖C(t)‖‖C(s)‖)`.
pub fn dalembert_tolerance(a: &CMat, t: f64, s: f64) -> Result<f64> {
    Ok(1e-8 * (1.0 + operator_norm(&cosine_family(a, t)?) * operator_norm(&cosine_family(a, s)?)))
}
