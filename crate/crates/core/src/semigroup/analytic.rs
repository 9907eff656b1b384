use rayon::prelude::*;

use crate::matcore::{inverse, operator_norm, spectral_abscissa, CMat, C64};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalyticityVerdict {
    ConsistentWithAnalytic,
    Inconsistent,
}

impl AnalyticityVerdict {
    pub fn name(self) -> &'static str {
        match self {
            AnalyticityVerdict::ConsistentWithAnalytic => "consistent_with_analytic",
            AnalyticityVerdict::Inconsistent => "inconsistent",
        }
    }
}

/// Ray angles (degrees), radii and the acceptance threshold of a resolvent
/// probe.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSettings {
    pub omega: f64,
    pub thetas_deg: Vec<f64>,
    pub radii: Vec<f64>,
    pub threshold: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self { omega: 1.0, thetas_deg: vec![85.0, 88.0, 90.0], radii: log_radii(1e-2, 1e6, 8), threshold: 1e3 }
    }
}

/// Log-spaced radii from `r_min` to `r_max` with `per_decade` points per
/// decade (both ends included).
pub fn log_radii(r_min: f64, r_max: f64, per_decade: usize) -> Vec<f64> {
    let decades = (r_max / r_min).log10();
    let count = (decades * per_decade as f64).ceil() as usize + 1;
    (0..count).map(|i| r_min * 10f64.powf(decades * i as f64 / (count - 1) as f64)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorialityReport {
    pub omega: f64,
    pub thetas_deg: Vec<f64>,
    /// Per angle: sup over radii of ‖λ(λ − G + ω)⁻¹‖.
    pub sup_norms: Vec<f64>,
    /// Probe points `(θ°, r)` that fell on the spectrum.
    pub flagged: Vec<(f64, f64)>,
    pub threshold: f64,
    pub verdict: AnalyticityVerdict,
}

/// Samples ‖λR(λ, G − ω)‖ along rays `λ = re^{iθ}`.
pub fn check_analyticity(g: &CMat, settings: &ProbeSettings) -> Result<SectorialityReport> {
    let s = spectral_abscissa(g)?;
    if !(settings.omega > s) {
        return Err(Error::InvalidInput(format!("omega {} must exceed the spectral abscissa {s}", settings.omega)));
    }
    let shifted = g.shift(C64::new(-settings.omega, 0.0));
    let points: Vec<(usize, f64)> =
        (0..settings.thetas_deg.len()).flat_map(|i| settings.radii.iter().map(move |&r| (i, r))).collect();
    let values: Vec<Option<f64>> = points
        .par_iter()
        .map(|&(i, r)| {
            let lambda = C64::from_polar(r, settings.thetas_deg[i].to_radians());
            match inverse(&(-&shifted).shift(lambda)) {
                Ok(res) => Ok(Some(r * operator_norm(&res))),
                Err(Error::SingularMatrix { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut sup_norms = vec![0.0f64; settings.thetas_deg.len()];
    let mut flagged = Vec::new();
    for (&(i, r), v) in points.iter().zip(&values) {
        match v {
            Some(x) => sup_norms[i] = sup_norms[i].max(*x),
            None => {
                sup_norms[i] = f64::INFINITY;
                flagged.push((settings.thetas_deg[i], r));
            }
        }
    }
    let verdict = if sup_norms.iter().all(|&x| x <= settings.threshold) {
        AnalyticityVerdict::ConsistentWithAnalytic
    } else {
        AnalyticityVerdict::Inconsistent
    };
    Ok(SectorialityReport {
        omega: settings.omega,
        thetas_deg: settings.thetas_deg.clone(),
        sup_norms,
        flagged,
        threshold: settings.threshold,
        verdict,
    })
}
