#![allow(dead_code)]

use dynbc::matcore::{CMat, C64};
use dynbc::stability::BlockSystem2x2;
use rand::rngs::StdRng;
use rand::Rng;

pub type M2 = [[C64; 2]; 2];

/// `e^{tA}` of a 2×2 matrix by the closed form
/// `e^{μt}(cosh(δt)I + sinh(δt)/δ·(A − μI))`, `μ = tr/2`, `δ² = μ² − det`.
pub fn expm2(a: M2, t: f64) -> M2 {
    let mu = (a[0][0] + a[1][1]) / 2.0;
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let delta = (mu * mu - det).sqrt();
    let c = (delta * t).cosh();
    let s = if delta.norm() < 1e-12 { C64::new(t, 0.0) } else { (delta * t).sinh() / delta };
    let e = (mu * t).exp();
    [
        [e * (c + s * (a[0][0] - mu)), e * s * a[0][1]],
        [e * s * a[1][0], e * (c + s * (a[1][1] - mu))],
    ]
}

pub fn m2_to_cmat(a: M2) -> CMat {
    CMat::from_rows(&[a[0].to_vec(), a[1].to_vec()]).unwrap()
}

pub fn cplx(rng: &mut StdRng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut StdRng, r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |_, _| cplx(rng))
}

pub fn random_vec(rng: &mut StdRng, n: usize) -> Vec<C64> {
    (0..n).map(|_| cplx(rng)).collect()
}

/// Diagonal with real parts in `[lo, hi]` (both negative) and random
/// imaginary parts.
pub fn hurwitz_diagonal(rng: &mut StdRng, n: usize, lo: f64, hi: f64) -> CMat {
    let d: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(lo..hi), rng.gen_range(-2.0..2.0))).collect();
    CMat::diag(&d)
}

/// Hurwitz diagonal plus a strictly upper triangular part (non-normal).
pub fn hurwitz_nonnormal(rng: &mut StdRng, n: usize, lo: f64, hi: f64, skew: f64) -> CMat {
    let mut a = hurwitz_diagonal(rng, n, lo, hi);
    for i in 0..n {
        for j in i + 1..n {
            a[(i, j)] = cplx(rng) * skew;
        }
    }
    a
}

/// `i·S` with S random Hermitian: generator of a unitary group.
pub fn skew_hermitian(rng: &mut StdRng, n: usize) -> CMat {
    let s = random_matrix(rng, n, n);
    let herm = (&s + &s.adjoint()).scale_real(0.5);
    herm.scale(C64::new(0.0, 1.0))
}

/// Random couplings rescaled so that `M = target` for the attached bounds.
pub fn with_target_m(sys: BlockSystem2x2, rng: &mut StdRng, target: f64) -> BlockSystem2x2 {
    let b = sys.bounds.expect("bounds attached");
    let (p, q) = sys.dims();
    let j = random_matrix(rng, p, q);
    let k = random_matrix(rng, q, p);
    let (nj, nk) = (dynbc::matcore::operator_norm(&j), dynbc::matcore::operator_norm(&k));
    let prod = target * b.eps1 * b.eps2 / (b.m1 * b.m2);
    let scale = prod.sqrt();
    BlockSystem2x2 { j: j.scale_real(scale / nj), k: k.scale_real(scale / nk), ..sys }
}

/// Uniform plate initial data `sin(πx) + x²` with zero velocity.
pub fn plate_initial(nodes: usize) -> Vec<C64> {
    let h = 1.0 / (nodes as f64 - 1.0);
    let mut z: Vec<C64> = (0..nodes)
        .map(|i| {
            let x = i as f64 * h;
            C64::new((std::f64::consts::PI * x).sin() + x * x, 0.0)
        })
        .collect();
    z.extend(std::iter::repeat_n(C64::new(0.0, 0.0), nodes));
    z
}
