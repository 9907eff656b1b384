//! 2×2 block systems `ℋ = [[H, J], [K, Lb]]`: the Dyson–Phillips series,
//! its zero pattern and L¹ estimates, and the stability and boundedness
//! criteria built on them.

mod criteria;
mod dyson;

pub use criteria::{
    coupled_boundedness, smallness_criterion, spectral_disjointness, CoupledBoundednessReport, DisjointnessReport,
    IntegralCheck, StabilityCertificate, StabilityVerdict,
};
pub use dyson::{
    dyson_phillips, verify_l1_estimates, verify_zero_pattern, DysonPhillipsExpansion, EstimateCheck, L1Report,
    ZeroPatternReport,
};

use crate::coupling::ReducedSystem;
use crate::matcore::{operator_norm, spectral_abscissa, CMat};
use crate::semigroup::{growth_bound, GrowthBound};
use crate::{Error, Result};

/// Envelope constants `‖e^{tH}‖ ≤ M₁e^{ε₁t}`, `‖e^{tLb}‖ ≤ M₂e^{ε₂t}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub m1: f64,
    pub eps1: f64,
    pub m2: f64,
    pub eps2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockSystem2x2 {
    pub h: CMat,
    pub j: CMat,
    pub k: CMat,
    pub lb: CMat,
    pub bounds: Option<Bounds>,
}

impl BlockSystem2x2 {
    pub fn new(h: CMat, j: CMat, k: CMat, lb: CMat) -> Result<Self> {
        let (p, q) = (h.rows(), lb.rows());
        if !h.is_square() || !lb.is_square() || j.shape() != (p, q) || k.shape() != (q, p) {
            return Err(Error::DimensionMismatch(format!(
                "H {:?}, J {:?}, K {:?}, Lb {:?}",
                h.shape(),
                j.shape(),
                k.shape(),
                lb.shape()
            )));
        }
        Ok(Self { h, j, k, lb, bounds: None })
    }

    /// Scalar blocks, convenient for small examples.
    pub fn scalar(h: f64, j: f64, k: f64, lb: f64) -> Self {
        let s = |x: f64| CMat::diag_real(&[x]);
        Self { h: s(h), j: s(j), k: s(k), lb: s(lb), bounds: None }
    }

    pub fn with_bounds(mut self, b: Bounds) -> Result<Self> {
        let ok = |x: f64| x.is_finite();
        if !(b.m1 >= 1.0 && b.m2 >= 1.0 && b.eps1 <= 0.0 && b.eps2 <= 0.0)
            || ![b.m1, b.m2, b.eps1, b.eps2].into_iter().all(ok)
        {
            return Err(Error::InvalidInput(format!("bounds need M >= 1 and eps <= 0, got {b:?}")));
        }
        self.bounds = Some(b);
        Ok(self)
    }

    /// Attaches envelope constants from sampled growth bounds of H and Lb.
    /// Fails with `PremiseViolated` when a block has positive abscissa.
    pub fn with_estimated_bounds(self) -> Result<Self> {
        let (m1, eps1) = block_envelope(&self.h, "H")?;
        let (m2, eps2) = block_envelope(&self.lb, "Lb")?;
        self.with_bounds(Bounds { m1, eps1, m2, eps2 })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.h.rows(), self.lb.rows())
    }

    pub fn assembled(&self) -> CMat {
        let (p, q) = self.dims();
        CMat::assemble(&[p, q], &[p, q], &[vec![Some(&self.h), Some(&self.j)], vec![Some(&self.k), Some(&self.lb)]])
    }

    /// `M = M₁M₂‖J‖‖K‖/(ε₁ε₂)`; infinite unless both exponents are negative.
    pub fn m_constant(&self) -> Result<f64> {
        let b = self.bounds.ok_or(Error::BoundsMissing)?;
        if !(b.eps1 < 0.0 && b.eps2 < 0.0) {
            return Ok(f64::INFINITY);
        }
        Ok(b.m1 * b.m2 * operator_norm(&self.j) * operator_norm(&self.k) / (b.eps1 * b.eps2))
    }

    /// `M₀ = M₁/|ε₁| + M₂/|ε₂| + M₁M₂(‖J‖ + ‖K‖)/(ε₁ε₂)`.
    pub fn m0_constant(&self) -> Result<f64> {
        let b = self.bounds.ok_or(Error::BoundsMissing)?;
        if !(b.eps1 < 0.0 && b.eps2 < 0.0) {
            return Ok(f64::INFINITY);
        }
        let cross = b.m1 * b.m2 / (b.eps1 * b.eps2);
        Ok(b.m1 / b.eps1.abs()
            + b.m2 / b.eps2.abs()
            + cross * operator_norm(&self.j)
            + cross * operator_norm(&self.k))
    }
}

/// `(M, ε)` for one diagonal block. Marginal blocks (abscissa 0 up to
/// rounding) get margin 0 so that ε ≤ 0; an empty block contributes `(1, −1)`.
fn block_envelope(g: &CMat, name: &str) -> Result<(f64, f64)> {
    if g.rows() == 0 {
        return Ok((1.0, -1.0));
    }
    let a = spectral_abscissa(g)?;
    let marginal_tol = 1e-12 * operator_norm(g).max(1.0);
    let gb: GrowthBound = if a.abs() <= marginal_tol {
        let gb = growth_bound(g, 1e3, 64, Some(-a))?;
        GrowthBound { epsilon_used: 0.0, ..gb }
    } else if a < 0.0 {
        growth_bound(g, 50.0 / a.abs(), 64, None)?
    } else {
        return Err(Error::PremiseViolated(format!("block {name} has spectral abscissa {a:.3e} > 0")));
    };
    Ok((gb.transient_m.max(1.0), gb.epsilon_used.min(0.0)))
}

/// Splits a reduced generator at the start of a named block; `"boundary"`
/// cuts between the interior (u, v) and boundary (x, y) coordinates.
pub fn split_blocks(sys: &ReducedSystem, cut: &str) -> Result<BlockSystem2x2> {
    let at = match cut {
        "boundary" => sys.block_map.boundary_start(),
        name => sys.block_map.get(name).ok_or_else(|| Error::UnknownCut(name.to_string()))?.range.start,
    };
    let n = sys.dim();
    let g = &sys.g;
    BlockSystem2x2::new(g.block(0, at, 0, at), g.block(0, at, at, n), g.block(at, n, 0, at), g.block(at, n, at, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::assemble;
    use crate::discretize::build_interval_plate;
    use crate::matcore::re;

    #[test]
    fn plate_boundary_block_is_four_by_four() {
        let p = build_interval_plate(8).unwrap();
        let sys = assemble(&p, Some(re(1.0))).unwrap();
        let b = split_blocks(&sys, "boundary").unwrap();
        assert_eq!(b.dims(), (16, 4));
        assert_eq!(split_blocks(&sys, "x").unwrap().dims(), (16, 4));
        assert!(matches!(split_blocks(&sys, "w"), Err(Error::UnknownCut(_))));
    }

    #[test]
    fn uncoupled_plate_has_zero_k() {
        let p = build_interval_plate(8).unwrap().with_coupling_scale(0.0);
        let b = split_blocks(&assemble(&p, Some(re(1.0))).unwrap(), "boundary").unwrap();
        assert_eq!(b.k.norm_max(), 0.0);
    }

    #[test]
    fn scalar_constants() {
        let s = BlockSystem2x2::scalar(-1.0, 1.0, 1.0, -2.0)
            .with_bounds(Bounds { m1: 1.0, eps1: -1.0, m2: 1.0, eps2: -2.0 })
            .unwrap();
        assert!((s.m_constant().unwrap() - 0.5).abs() < 1e-15);
        assert!((s.m0_constant().unwrap() - 2.5).abs() < 1e-15);
        assert!(matches!(BlockSystem2x2::scalar(-1.0, 0.0, 0.0, -1.0).m_constant(), Err(Error::BoundsMissing)));
    }

    #[test]
    fn estimated_bounds_of_normal_blocks() {
        let s = BlockSystem2x2::scalar(-1.0, 1.0, 1.0, 0.0).with_estimated_bounds().unwrap();
        let b = s.bounds.unwrap();
        assert!((b.m1 - 1.0).abs() < 1e-9 && (b.eps1 + 1.0).abs() < 2e-3);
        assert_eq!(b.eps2, 0.0);
        assert!(BlockSystem2x2::scalar(1.0, 0.0, 0.0, -1.0).with_estimated_bounds().is_err());
    }

    #[test]
    fn dimension_check() {
        assert!(BlockSystem2x2::new(CMat::zeros(2, 2), CMat::zeros(2, 1), CMat::zeros(2, 1), CMat::zeros(1, 1)).is_err());
    }
}
