use super::cmat::{CMat, C64};
use super::lu::solve_linear;
use crate::{Error, Result};

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA13: f64 = 5.371920351148152;

fn lin(terms: &[(f64, &CMat)], n: usize) -> CMat {
    let mut out = CMat::zeros(n, n);
    for (c, m) in terms {
        for (o, &x) in out.as_mut_slice().iter_mut().zip(m.as_slice()) {
            *o += x * *c;
        }
    }
    out
}

fn pade_low(a: &CMat, b: &[f64]) -> (CMat, CMat) {
    let n = a.rows();
    let id = CMat::identity(n);
    let a2 = a * a;
    let mut powers = vec![id.clone(), a2.clone()];
    while powers.len() * 2 < b.len() {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let u_terms: Vec<(f64, &CMat)> = powers.iter().enumerate().map(|(k, p)| (b[2 * k + 1], p)).collect();
    let v_terms: Vec<(f64, &CMat)> = powers.iter().enumerate().map(|(k, p)| (b[2 * k], p)).collect();
    let u = a * &lin(&u_terms, n);
    let v = lin(&v_terms, n);
    (u, v)
}

fn pade13(a: &CMat) -> (CMat, CMat) {
    let n = a.rows();
    let b = &B13;
    let id = CMat::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * &lin(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    let u = a * &(&inner_u + &lin(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)], n));
    let inner_v = &a6 * &lin(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n);
    let v = &inner_v + &lin(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)], n);
    (u, v)
}

/// `e^{tA}` by scaling and squaring with diagonal Padé approximants
/// (degree up to 13).
pub fn matrix_exponential(a: &CMat, t: f64) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("expm of {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    if n == 0 || t == 0.0 {
        return Ok(CMat::identity(n));
    }
    let ta = a.scale(C64::new(t, 0.0));
    if !ta.is_finite() {
        return Err(Error::Overflow);
    }
    let norm = ta.norm_one();
    if !norm.is_finite() {
        return Err(Error::Overflow);
    }
    let (u, v, s) = match THETA.iter().find(|(_, th)| norm <= *th) {
        Some(&(m, _)) => {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let (u, v) = pade_low(&ta, b);
            (u, v, 0)
        }
        None => {
            let s = ((norm / THETA13).log2().ceil()).max(0.0) as i32;
            let scaled = ta.scale_real(2f64.powi(-s));
            let (u, v) = pade13(&scaled);
            (u, v, s)
        }
    };
    let p = &v + &u;
    let q = &v - &u;
    let mut r = solve_linear(&q, &p).map_err(|_| Error::Overflow)?;
    for _ in 0..s {
        r = &r * &r;
        if !r.is_finite() || r.norm_max() > 1e300 {
            return Err(Error::Overflow);
        }
    }
    if !r.is_finite() || r.norm_max() > 1e300 {
        return Err(Error::Overflow);
    }
    Ok(r)
}
