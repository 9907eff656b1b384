use rayon::prelude::*;

use super::BlockSystem2x2;
use crate::matcore::{convolve, matrix_exponential, operator_norm, vec_norm, CMat, SampledMatrixFunction, C64};
use crate::{Error, Result};

/// Terms `S₀ … S_{k_max}` of the Dyson–Phillips series on a shared grid.
#[derive(Clone, Debug)]
pub struct DysonPhillipsExpansion {
    pub terms: Vec<SampledMatrixFunction>,
    /// Sizes of the E and F blocks.
    pub split: (usize, usize),
    /// ‖Σ_k S_k(T) − e^{Tℋ}‖.
    pub partial_sum_error: f64,
}

impl DysonPhillipsExpansion {
    /// `Σ_k S_k(t_i)` at grid index `i`.
    pub fn partial_sum(&self, i: usize) -> CMat {
        self.terms.iter().skip(1).fold(self.terms[0].samples()[i].clone(), |acc, s| &acc + &s.samples()[i])
    }

    /// Entry `(r, c)` (1-based, as in the block matrix) of term `k` at index `i`.
    pub fn entry(&self, k: usize, r: usize, c: usize, i: usize) -> CMat {
        let (p, q) = self.split;
        let rows = if r == 1 { (0, p) } else { (p, p + q) };
        let cols = if c == 1 { (0, p) } else { (p, p + q) };
        self.terms[k].samples()[i].block(rows.0, rows.1, cols.0, cols.1)
    }
}

fn block_diag(a: &CMat, b: &CMat) -> CMat {
    CMat::assemble(&[a.rows(), b.rows()], &[a.cols(), b.cols()], &[vec![Some(a), None], vec![None, Some(b)]])
}

/// Samples `e^{t_i X}` by one exponential of the step and propagation.
fn propagate(x: &CMat, t_end: f64, steps: usize) -> Result<SampledMatrixFunction> {
    let step = matrix_exponential(x, t_end / steps as f64)?;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(CMat::identity(x.rows()));
    for i in 0..steps {
        let next = &step * &samples[i];
        samples.push(next);
    }
    SampledMatrixFunction::new(crate::matcore::uniform_grid(t_end, steps), samples)
}

/// Block form of the recursion: the E rows of `S_k` are `e^{·H} * (J·S_{k−1}^{(2,·)})`
/// and the F rows are `e^{·Lb} * (K·S_{k−1}^{(1,·)})`, trapezoid quadrature.
pub fn dyson_phillips(sys: &BlockSystem2x2, t_end: f64, steps: usize, k_max: usize) -> Result<DysonPhillipsExpansion> {
    if steps == 0 || !(t_end > 0.0) {
        return Err(Error::InvalidInput(format!("need steps >= 1 and T > 0, got {steps}, {t_end}")));
    }
    let (p, q) = sys.dims();
    let eh = propagate(&sys.h, t_end, steps)?;
    let el = propagate(&sys.lb, t_end, steps)?;
    let s0 = SampledMatrixFunction::new(
        eh.time_grid().to_vec(),
        eh.samples().iter().zip(el.samples()).map(|(a, b)| block_diag(a, b)).collect(),
    )?;
    let mut terms = vec![s0];
    for _ in 0..k_max {
        let prev = terms.last().expect("S0 present");
        let top_in = prev.map(|s| &sys.j * &s.block(p, p + q, 0, p + q));
        let bottom_in = prev.map(|s| &sys.k * &s.block(0, p, 0, p + q));
        let (top, bottom) = rayon::join(|| convolve(&eh, &top_in), || convolve(&el, &bottom_in));
        let (top, bottom) = (top?, bottom?);
        let samples = top.samples().iter().zip(bottom.samples()).map(|(a, b)| CMat::vstack(&[a, b])).collect();
        terms.push(SampledMatrixFunction::new(top.time_grid().to_vec(), samples)?);
    }
    let mut exp = DysonPhillipsExpansion { terms, split: (p, q), partial_sum_error: 0.0 };
    let exact = matrix_exponential(&sys.assembled(), t_end)?;
    exp.partial_sum_error = operator_norm(&(&exp.partial_sum(steps) - &exact));
    Ok(exp)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroPatternReport {
    /// Max entry of the blocks that must vanish, over terms and samples.
    pub max_violation: f64,
    pub blocks_checked: usize,
}

impl ZeroPatternReport {
    pub fn holds(&self) -> bool {
        self.max_violation == 0.0
    }
}

/// Even terms have zero off-diagonal blocks, odd terms zero diagonal blocks.
pub fn verify_zero_pattern(exp: &DysonPhillipsExpansion) -> ZeroPatternReport {
    let mut max_violation = 0.0f64;
    let mut blocks_checked = 0;
    for (k, term) in exp.terms.iter().enumerate() {
        let pairs = if k % 2 == 0 { [(1, 2), (2, 1)] } else { [(1, 1), (2, 2)] };
        for (r, c) in pairs {
            blocks_checked += 1;
            for i in 0..term.len() {
                max_violation = max_violation.max(exp.entry(k, r, c, i).norm_max());
            }
        }
    }
    ZeroPatternReport { max_violation, blocks_checked }
}

/// One instance of an L¹ estimate: `∫₀^T ‖S_k^{(r,c)}(t)z‖ dt ≤ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateCheck {
    /// 1 to 4, in the order (11) even, (22) even, (12) odd, (21) odd.
    pub estimate: usize,
    pub n: usize,
    pub probe: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct L1Report {
    pub checks: Vec<EstimateCheck>,
    pub m: f64,
}

impl L1Report {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// Largest `lhs / rhs` (0 when every right side is 0 with left side 0).
    pub fn worst_ratio(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| if c.rhs > 0.0 { c.lhs / c.rhs } else if c.lhs > 0.0 { f64::INFINITY } else { 0.0 })
            .fold(0.0, f64::max)
    }
}

const L1_SLACK: f64 = 1e-2;

fn l1_norm(exp: &DysonPhillipsExpansion, k: usize, r: usize, c: usize, z: &[C64]) -> f64 {
    let len = exp.terms[k].len();
    let h = exp.terms[k].step();
    let vals: Vec<f64> = (0..len).map(|i| vec_norm(&exp.entry(k, r, c, i).mul_vec(z))).collect();
    h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[len - 1]))
}

/// Checks the four L¹ estimates for every `n` with `2n + 1 ≤ k_max` on the
/// probe vectors `xs ⊂ E` and `ys ⊂ F`, with 1 % quadrature slack.
pub fn verify_l1_estimates(
    sys: &BlockSystem2x2,
    exp: &DysonPhillipsExpansion,
    xs: &[Vec<C64>],
    ys: &[Vec<C64>],
) -> Result<L1Report> {
    let b = sys.bounds.ok_or(Error::BoundsMissing)?;
    if !(b.eps1 < 0.0 && b.eps2 < 0.0) {
        return Err(Error::PremiseViolated("L1 estimates need eps1, eps2 < 0".into()));
    }
    let (p, q) = sys.dims();
    if xs.iter().any(|x| x.len() != p) || ys.iter().any(|y| y.len() != q) || exp.split != (p, q) {
        return Err(Error::DimensionMismatch("probe vectors or expansion do not match the system".into()));
    }
    let t_end = *exp.terms[0].time_grid().last().expect("non-empty grid");
    if (b.eps1.max(b.eps2) * t_end).exp() > 1e-6 {
        return Err(Error::InvalidInput(format!("T = {t_end} leaves a tail above 1e-6")));
    }
    let m = sys.m_constant()?;
    let (nj, nk) = (operator_norm(&sys.j), operator_norm(&sys.k));
    let cross = b.m1 * b.m2 / (b.eps1 * b.eps2);
    let k_max = exp.terms.len() - 1;
    let mut jobs = Vec::new();
    for n in 0..=k_max / 2 {
        for (i, x) in xs.iter().enumerate() {
            jobs.push((1, n, i, 2 * n, 1, 1, x, b.m1 / b.eps1.abs()));
            if 2 * n < k_max {
                jobs.push((4, n, i, 2 * n + 1, 2, 1, x, cross * nk));
            }
        }
        for (i, y) in ys.iter().enumerate() {
            jobs.push((2, n, i, 2 * n, 2, 2, y, b.m2 / b.eps2.abs()));
            if 2 * n < k_max {
                jobs.push((3, n, i, 2 * n + 1, 1, 2, y, cross * nj));
            }
        }
    }
    let mut checks: Vec<EstimateCheck> = jobs
        .par_iter()
        .map(|&(estimate, n, probe, k, r, c, z, coeff)| {
            let lhs = l1_norm(exp, k, r, c, z);
            let rhs = m.powi(n as i32) * coeff * vec_norm(z);
            EstimateCheck { estimate, n, probe, lhs, rhs, holds: lhs <= rhs * (1.0 + L1_SLACK) }
        })
        .collect();
    checks.sort_by_key(|c| (c.n, c.estimate, c.probe));
    Ok(L1Report { checks, m })
}
