use super::cmat::{CMat, C64, ONE, ZERO};

/// Householder reflector `I − τ·v·vᴴ` that maps `x` onto a multiple of `e₁`.
/// Returns `(v, τ, β)` with `v[0] = 1` and the image `β·e₁`.
pub(crate) fn householder(x: &[C64]) -> (Vec<C64>, C64, C64) {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut v = x.to_vec();
    if norm == 0.0 {
        v[0] = ONE;
        return (v, ZERO, ZERO);
    }
    let x0 = x[0];
    let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
    let beta = -phase * norm;
    let v0 = x0 - beta;
    for z in v.iter_mut().skip(1) {
        *z /= v0;
    }
    v[0] = ONE;
    let tau = (beta - x0) / beta;
    (v, tau, beta)
}

/// Complete QR factorisation `A = Q·R` of an `n×m` matrix.
#[derive(Clone, Debug)]
pub struct Qr {
    pub q: CMat,
    pub r: CMat,
}

impl Qr {
    pub fn factor(a: &CMat) -> Self {
        let (n, m) = a.shape();
        let mut r = a.clone();
        let mut q = CMat::identity(n);
        for k in 0..m.min(n.saturating_sub(1)) {
            let x: Vec<C64> = (k..n).map(|i| r[(i, k)]).collect();
            let (v, tau, _) = householder(&x);
            if tau == ZERO {
                continue;
            }
            // R ← (I − τ v vᴴ) R on rows k..n
            for j in k..m {
                let s: C64 = (k..n).map(|i| v[i - k].conj() * r[(i, j)]).sum();
                let s = s * tau;
                for i in k..n {
                    r[(i, j)] -= v[i - k] * s;
                }
            }
            // Q ← Q (I − τ v vᴴ)ᴴ so that Q stays the accumulated product
            for i in 0..n {
                let s: C64 = (k..n).map(|p| q[(i, p)] * v[p - k]).sum();
                let s = s * tau.conj();
                for p in k..n {
                    q[(i, p)] -= s * v[p - k].conj();
                }
            }
            for i in k + 1..n {
                r[(i, k)] = ZERO;
            }
        }
        Self { q, r }
    }

    /// Numerical rank from the diagonal of R.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let d: Vec<f64> = (0..self.r.rows().min(self.r.cols())).map(|i| self.r[(i, i)].norm()).collect();
        let max = d.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return 0;
        }
        d.iter().filter(|&&x| x > rel_tol * max).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_and_is_unitary() {
        let a = CMat::from_fn(5, 3, |i, j| C64::new((i * 3 + j) as f64 % 7.0 - 2.0, (i as f64 - j as f64) * 0.3));
        let qr = Qr::factor(&a);
        let back = &qr.q * &qr.r;
        assert!(back.dist_fro(&a) < 1e-12);
        let qhq = &qr.q.adjoint() * &qr.q;
        assert!(qhq.dist_fro(&CMat::identity(5)) < 1e-12);
        for i in 1..5 {
            for j in 0..i.min(3) {
                assert_eq!(qr.r[(i, j)], ZERO);
            }
        }
    }

    #[test]
    fn rank_detects_duplicate_columns() {
        let a = CMat::from_real_rows(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]]);
        assert_eq!(Qr::factor(&a).rank(1e-12), 1);
    }
}
