use rayon::prelude::*;

use crate::matcore::{matrix_exponential, operator_norm, spectral_abscissa, CMat};
use crate::{Error, Result};

/// Constants of an envelope `‖e^{tG}‖ ≤ M·e^{εt}` on a sample set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthBound {
    pub spectral_abscissa: f64,
    pub transient_m: f64,
    pub epsilon_used: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundednessReport {
    pub bounded: bool,
    pub observed_sup: f64,
    /// Least-squares slope of ln‖e^{tG}‖ against ln t over the last decade.
    pub final_slope: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
}

const SLOPE_TOL: f64 = 1e-3;
const VALIDATION_GROWTH: f64 = 0.05;

/// Default margin for the growth exponent.
fn default_margin(abscissa: f64) -> f64 {
    if abscissa == 0.0 {
        1e-6
    } else {
        1e-3 * abscissa.abs()
    }
}

/// `0` followed by `count` log-spaced times in `[t_min, t_max]`.
pub fn log_times(t_min: f64, t_max: f64, count: usize) -> Vec<f64> {
    let mut ts = vec![0.0];
    if count == 1 {
        ts.push(t_max);
        return ts;
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    ts.extend((0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()));
    ts
}

fn norms_at(g: &CMat, ts: &[f64]) -> Result<Vec<f64>> {
    ts.par_iter().map(|&t| matrix_exponential(g, t).map(|e| operator_norm(&e))).collect()
}

fn envelope(norms: &[f64], ts: &[f64], eps: f64) -> f64 {
    norms.iter().zip(ts).map(|(n, t)| n * (-eps * t).exp()).fold(1.0, f64::max)
}

/// Sampled envelope constants with `ε = abscissa + margin`. `margin = None`
/// selects `10⁻³|abscissa|` (or `10⁻⁶` at zero abscissa). The constant is
/// re-estimated on a grid twice as fine; growth beyond 5 % is an error.
pub fn growth_bound(g: &CMat, t_max: f64, samples: usize, margin: Option<f64>) -> Result<GrowthBound> {
    if samples < 16 {
        return Err(Error::InvalidInput(format!("growth_bound needs at least 16 samples, got {samples}")));
    }
    if !(t_max > 0.0) {
        return Err(Error::InvalidInput(format!("T_max must be positive, got {t_max}")));
    }
    let abscissa = spectral_abscissa(g)?;
    let eps = abscissa + margin.unwrap_or_else(|| default_margin(abscissa));
    let t_min = t_max * 1e-6;
    let coarse_t = log_times(t_min, t_max, samples);
    let coarse = envelope(&norms_at(g, &coarse_t)?, &coarse_t, eps);
    let fine_t = log_times(t_min, t_max, 2 * samples - 1);
    let fine = envelope(&norms_at(g, &fine_t)?, &fine_t, eps);
    if fine > coarse * (1.0 + VALIDATION_GROWTH) {
        return Err(Error::NonConvergedValidation { ratio: fine / coarse });
    }
    Ok(GrowthBound { spectral_abscissa: abscissa, transient_m: coarse.max(fine), epsilon_used: eps })
}

/// Samples `‖e^{tG}‖` at `t₀·2^{k/J}` up to `T_max` (each doubling by
/// squaring) and reports bounded iff the sup stays below `bound` with no
/// growth trend over the final decade.
pub fn check_boundedness(g: &CMat, t_max: f64, bound: f64) -> Result<BoundednessReport> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidInput(format!("T_max must be positive, got {t_max}")));
    }
    const PER_DOUBLING: usize = 8;
    let doublings = 24usize;
    let t0 = t_max / 2f64.powi(doublings as i32);
    let base: Vec<CMat> = (0..PER_DOUBLING)
        .into_par_iter()
        .map(|j| matrix_exponential(g, t0 * 2f64.powf(j as f64 / PER_DOUBLING as f64)))
        .collect::<Result<_>>()?;
    let mut times = Vec::new();
    let mut norms = Vec::new();
    let mut overflow = false;
    for (j, start) in base.into_iter().enumerate() {
        let mut e = start;
        let mut t = t0 * 2f64.powf(j as f64 / PER_DOUBLING as f64);
        while t <= t_max * (1.0 + 1e-12) {
            let nrm = operator_norm(&e);
            if !nrm.is_finite() || nrm > 1e300 {
                overflow = true;
                break;
            }
            times.push(t);
            norms.push(nrm);
            e = &e * &e;
            t *= 2.0;
        }
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let times: Vec<f64> = order.iter().map(|&i| times[i]).collect();
    let norms: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let observed_sup = if overflow { f64::INFINITY } else { norms.iter().copied().fold(1.0, f64::max) };
    let final_slope = final_decade_slope(&times, &norms, t_max);
    let bounded = observed_sup <= bound && final_slope <= SLOPE_TOL;
    Ok(BoundednessReport { bounded, observed_sup, final_slope, times, norms })
}

fn final_decade_slope(times: &[f64], norms: &[f64], t_max: f64) -> f64 {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(norms)
        .filter(|(t, _)| **t >= t_max / 10.0 * (1.0 - 1e-12))
        .map(|(t, n)| (t.ln(), n.max(f64::MIN_POSITIVE).ln()))
        .collect();
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::re;

    #[test]
    fn normal_decay_has_unit_constant() {
        let gb = growth_bound(&CMat::diag_real(&[-1.0, -1.0]), 20.0, 32, None).unwrap();
        assert!((gb.spectral_abscissa + 1.0).abs() < 1e-12);
        assert!((gb.transient_m - 1.0).abs() < 1e-9);
        assert!(gb.epsilon_used >= gb.spectral_abscissa);
    }

    #[test]
    fn underflow_counts_as_bounded() {
        let r = check_boundedness(&CMat::diag_real(&[-50.0]), 1e3, 10.0).unwrap();
        assert!(r.bounded);
        assert!(r.final_slope <= 0.0);
    }

    #[test]
    fn zero_generator() {
        let gb = growth_bound(&CMat::zeros(1, 1), 10.0, 16, None).unwrap();
        assert_eq!(gb.spectral_abscissa, 0.0);
        assert!((gb.transient_m - 1.0).abs() < 1e-12);
        assert!((gb.epsilon_used - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn too_few_samples() {
        assert!(growth_bound(&CMat::zeros(1, 1), 1.0, 8, None).is_err());
    }

    #[test]
    fn nilpotent_shear_is_unbounded() {
        let g = CMat::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        let r = check_boundedness(&g, 1e3, 1e6).unwrap();
        assert!(!r.bounded);
        assert!((r.final_slope - 1.0).abs() < 0.05, "{}", r.final_slope);
    }

    #[test]
    fn rotation_is_bounded() {
        let g = CMat::from_rows(&[vec![re(0.0), re(2.0)], vec![re(-2.0), re(0.0)]]).unwrap();
        let r = check_boundedness(&g, 1e3, 1e6).unwrap();
        assert!(r.bounded);
        assert!((r.observed_sup - 1.0).abs() < 1e-8);
    }

    #[test]
    fn exploding_generator_is_reported_not_raised() {
        let r = check_boundedness(&CMat::diag_real(&[5.0]), 1e3, 1e6).unwrap();
        assert!(!r.bounded);
        assert!(r.observed_sup.is_infinite());
    }
}
