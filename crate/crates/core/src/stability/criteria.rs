use super::{dyson_phillips, BlockSystem2x2};
use crate::matcore::{eigenvalues, matrix_exponential, spectral_abscissa, vec_norm, C64};
use crate::semigroup::check_boundedness;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    UniformlyExponentiallyStable,
    Inconclusive,
}

impl StabilityVerdict {
    pub fn name(self) -> &'static str {
        match self {
            StabilityVerdict::UniformlyExponentiallyStable => "uniformly_exponentially_stable",
            StabilityVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// `∫₀^T ‖e^{tℋ}z‖dt` plus the tail allowance against `M₀/(1 − M)‖z‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralCheck {
    pub integral: f64,
    pub tail: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityCertificate {
    pub m: f64,
    pub m0: f64,
    pub verdict: StabilityVerdict,
    pub spectral_abscissa: f64,
    /// Empty unless the verdict is stable.
    pub integral_checks: Vec<IntegralCheck>,
}

impl StabilityCertificate {
    /// A stable verdict must come with a negative abscissa and passing
    /// integral bounds.
    pub fn consistent(&self) -> bool {
        match self.verdict {
            StabilityVerdict::UniformlyExponentiallyStable => {
                self.spectral_abscissa < 0.0 && self.integral_checks.iter().all(|c| c.holds)
            }
            StabilityVerdict::Inconclusive => true,
        }
    }
}

/// Smallness criterion `M < 1`. On a stable verdict the integral bound is
/// tested on each probe over `[0, T]` with `e^{max(ε₁,ε₂)T} = 10⁻⁶`, adding the
/// tail allowance `M₀e^{εT}/|ε|·‖z‖`.
pub fn smallness_criterion(sys: &BlockSystem2x2, probes: &[Vec<C64>], steps: usize) -> Result<StabilityCertificate> {
    let b = sys.bounds.ok_or(Error::BoundsMissing)?;
    let m = sys.m_constant()?;
    let m0 = sys.m0_constant()?;
    let full = sys.assembled();
    let abscissa = spectral_abscissa(&full)?;
    if !(m < 1.0) {
        return Ok(StabilityCertificate {
            m,
            m0,
            verdict: StabilityVerdict::Inconclusive,
            spectral_abscissa: abscissa,
            integral_checks: Vec::new(),
        });
    }
    if probes.iter().any(|z| z.len() != full.rows()) {
        return Err(Error::DimensionMismatch("probe length differs from the system".into()));
    }
    let steps = steps.max(1);
    let eps = b.eps1.max(b.eps2);
    let t_end = 1e6f64.ln() / eps.abs();
    let dt = t_end / steps as f64;
    let step = matrix_exponential(&full, dt)?;
    let integral_checks = probes
        .iter()
        .map(|z| {
            let mut state = z.clone();
            let mut prev = vec_norm(&state);
            let mut integral = 0.0;
            for _ in 0..steps {
                state = step.mul_vec(&state);
                let cur = vec_norm(&state);
                integral += 0.5 * dt * (prev + cur);
                prev = cur;
            }
            let nz = vec_norm(z);
            let tail = m0 * (eps * t_end).exp() / eps.abs() * nz;
            let bound = m0 / (1.0 - m) * nz;
            IntegralCheck { integral, tail, bound, holds: integral + tail <= bound }
        })
        .collect();
    Ok(StabilityCertificate {
        m,
        m0,
        verdict: StabilityVerdict::UniformlyExponentiallyStable,
        spectral_abscissa: abscissa,
        integral_checks,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoupledBoundednessReport {
    /// ε₁ < 0 or ε₂ < 0.
    pub premise: bool,
    pub bounded: bool,
    pub observed_sup: f64,
    pub final_slope: f64,
    /// Terms `S_k`, k ≥ 2, vanish identically on a probe grid.
    pub series_terminates: bool,
    /// The premise implies the observed conclusion.
    pub agreement: bool,
}

/// Boundedness for a system without E←F coupling.
pub fn coupled_boundedness(sys: &BlockSystem2x2, t_max: f64) -> Result<CoupledBoundednessReport> {
    if sys.j.norm_max() != 0.0 {
        return Err(Error::PremiseViolated("J must vanish".into()));
    }
    let b = sys.bounds.ok_or(Error::BoundsMissing)?;
    let premise = b.eps1 < 0.0 || b.eps2 < 0.0;
    let report = check_boundedness(&sys.assembled(), t_max, 1e6)?;
    let exp = dyson_phillips(sys, 1.0, 16, 3)?;
    let series_terminates = exp.terms[2..].iter().all(|t| t.max_abs() == 0.0);
    Ok(CoupledBoundednessReport {
        premise,
        bounded: report.bounded,
        observed_sup: report.observed_sup,
        final_slope: report.final_slope,
        series_terminates,
        agreement: !premise || report.bounded,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisjointnessReport {
    pub h_imaginary: Vec<C64>,
    pub lb_imaginary: Vec<C64>,
    /// Smallest distance between the two near-imaginary sets (∞ if either is empty).
    pub min_distance: f64,
    pub disjoint: bool,
}

/// Compares the eigenvalues of H and Lb lying within `tol` of iℝ.
pub fn spectral_disjointness(sys: &BlockSystem2x2, tol: f64) -> Result<DisjointnessReport> {
    let near = |ev: Vec<C64>| ev.into_iter().filter(|z| z.re.abs() <= tol).collect::<Vec<_>>();
    let h_imaginary = near(eigenvalues(&sys.h)?);
    let lb_imaginary = near(eigenvalues(&sys.lb)?);
    let min_distance = h_imaginary
        .iter()
        .flat_map(|a| lb_imaginary.iter().map(move |b| (a - b).norm()))
        .fold(f64::INFINITY, f64::min);
    Ok(DisjointnessReport { h_imaginary, lb_imaginary, min_distance, disjoint: min_distance > tol })
}
