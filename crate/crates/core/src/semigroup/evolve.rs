use crate::coupling::ReducedSystem;
use crate::discretize::DiscreteProblem;
use crate::matcore::{matrix_exponential, operator_norm, uniform_grid, vec_norm, CMat, C64};
use crate::{Error, Result};

/// States `e^{t_i G}u₀` on a uniform grid together with the propagator norms.
#[derive(Clone, Debug)]
pub struct EvolutionTrace {
    pub time_grid: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    /// ‖e^{t_i G}‖ (induced 2-norm).
    pub norms: Vec<f64>,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.time_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time_grid.is_empty()
    }

    pub fn final_state(&self) -> &[C64] {
        self.states.last().map_or(&[], Vec::as_slice)
    }
}

/// One exponential of the step, then repeated application.
pub fn evolve(g: &CMat, u0: &[C64], t_end: f64, steps: usize) -> Result<EvolutionTrace> {
    if steps == 0 || !(t_end > 0.0) {
        return Err(Error::InvalidInput(format!("evolve needs steps >= 1 and T > 0, got {steps}, {t_end}")));
    }
    if !g.is_square() || g.rows() != u0.len() {
        return Err(Error::DimensionMismatch(format!(
            "generator {}x{}, initial state {}",
            g.rows(),
            g.cols(),
            u0.len()
        )));
    }
    let time_grid = uniform_grid(t_end, steps);
    let step = matrix_exponential(g, t_end / steps as f64)?;
    let mut states = Vec::with_capacity(steps + 1);
    let mut norms = Vec::with_capacity(steps + 1);
    let mut prop = CMat::identity(g.rows());
    states.push(u0.to_vec());
    norms.push(1.0);
    for _ in 0..steps {
        let next = step.mul_vec(states.last().expect("non-empty"));
        prop = &step * &prop;
        if !prop.is_finite() || next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Overflow);
        }
        norms.push(operator_norm(&prop));
        states.push(next);
    }
    Ok(EvolutionTrace { time_grid, states, norms })
}

/// ‖L(Au + Cu̇) − B₁u − B₂u̇ − B₃Lu − B₄Lu̇‖ at sample `index` of a trace
/// evolved with the generator of `sys`.
pub fn wentzell_residual(p: &DiscreteProblem, sys: &ReducedSystem, trace: &EvolutionTrace, index: usize) -> Result<f64> {
    if index == 0 || index >= trace.len() {
        return Err(Error::InvalidInput(format!("sample index {index} outside 1..{}", trace.len())));
    }
    if sys.lift.rows() != 2 * p.dim_x() {
        return Err(Error::BlockMapMismatch(format!(
            "system lifts to {} physical entries, problem has 2x{}",
            sys.lift.rows(),
            p.dim_x()
        )));
    }
    let (u, v) = sys.physical(&trace.states[index])?;
    Ok(vec_norm(&boundary_defect(p, &u, &v)))
}

pub(crate) fn boundary_defect(p: &DiscreteProblem, u: &[C64], v: &[C64]) -> Vec<C64> {
    let acc: Vec<C64> = p.a().mul_vec(u).iter().zip(p.c().mul_vec(v)).map(|(a, c)| a + c).collect();
    let lhs = p.l().mul_vec(&acc);
    let lu = p.l().mul_vec(u);
    let lv = p.l().mul_vec(v);
    let parts = [p.b1().mul_vec(u), p.b2().mul_vec(v), p.b3().mul_vec(&lu), p.b4().mul_vec(&lv)];
    lhs.iter()
        .enumerate()
        .map(|(i, z)| parts.iter().fold(*z, |acc, part| acc - part[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::re;

    #[test]
    fn zero_generator_keeps_state() {
        let tr = evolve(&CMat::zeros(2, 2), &[re(1.0), re(-2.0)], 3.0, 5).unwrap();
        for s in &tr.states {
            assert_eq!(s, &vec![re(1.0), re(-2.0)]);
        }
        assert!(tr.norms.iter().all(|&n| (n - 1.0).abs() < 1e-12));
    }

    #[test]
    fn scalar_decay() {
        let tr = evolve(&CMat::diag_real(&[-1.0]), &[re(1.0)], 1.0, 10).unwrap();
        assert!((tr.final_state()[0].re - (-1f64).exp()).abs() < 1e-12);
        assert_eq!(tr.time_grid.len(), 11);
    }

    #[test]
    fn bad_arguments() {
        assert!(evolve(&CMat::zeros(1, 1), &[re(1.0)], 1.0, 0).is_err());
        assert!(evolve(&CMat::zeros(1, 1), &[re(1.0)], -1.0, 4).is_err());
        assert!(matches!(evolve(&CMat::zeros(2, 2), &[re(1.0)], 1.0, 4), Err(Error::DimensionMismatch(_))));
    }
}
