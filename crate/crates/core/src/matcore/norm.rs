use super::cmat::CMat;
use super::eig::hessenberg_in_place;

/// Induced 2-norm (largest singular value).
pub fn operator_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if a.rows() == 1 || a.cols() == 1 {
        return a.norm_fro();
    }
    // scale first so the Gram matrix cannot overflow or underflow
    let s = a.norm_max();
    if s == 0.0 {
        return 0.0;
    }
    let b = a.scale_real(1.0 / s);
    let gram = if b.rows() >= b.cols() { &b.adjoint() * &b } else { &b * &b.adjoint() };
    s * largest_hermitian_eigenvalue(&gram).max(0.0).sqrt()
}

/// Largest eigenvalue of a Hermitian matrix by tridiagonalisation and Sturm
/// bisection.
pub fn largest_hermitian_eigenvalue(a: &CMat) -> f64 {
    let n = a.rows();
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    let mut t = a.clone();
    hessenberg_in_place(&mut t);
    let d: Vec<f64> = (0..n).map(|i| t[(i, i)].re).collect();
    let e2: Vec<f64> = (1..n).map(|i| t[(i, i - 1)].norm_sqr()).collect();
    let e: Vec<f64> = e2.iter().map(|x| x.sqrt()).collect();
    let mut bound = 0.0f64;
    for i in 0..n {
        let r = d[i].abs() + if i > 0 { e[i - 1] } else { 0.0 } + if i + 1 < n { e[i] } else { 0.0 };
        bound = bound.max(r);
    }
    if bound == 0.0 {
        return 0.0;
    }
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = d[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let prev = if q.abs() < tiny { -tiny } else { q };
            q = d[i] - x - e2[i - 1] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (-bound, bound * (1.0 + 4.0 * f64::EPSILON));
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}
