use super::stencil::fornberg;
use super::{build_custom, selection, CaseTag, DiscreteProblem, Grid1D, Metadata, ProblemSpec};
use crate::matcore::{CMat, C64};
use crate::Result;

/// Strongly damped wave `ü = αu'' + u̇''` on (0, 1) with u(0) = 0 and a
/// dynamic condition at x = 1. Unknowns are the node values at
/// x = h, 2h, …, 1.
pub fn build_strongly_damped_interval(alpha: C64, beta: [C64; 4], n: usize) -> Result<DiscreteProblem> {
    let grid = Grid1D::new(n)?;
    let h = grid.h();
    let size = n + 1;
    let mut d2 = CMat::zeros(size, size);
    let inv_h2 = 1.0 / (h * h);
    for i in 0..n {
        if i > 0 {
            d2[(i, i - 1)] = C64::new(inv_h2, 0.0);
        }
        d2[(i, i)] = C64::new(-2.0 * inv_h2, 0.0);
        d2[(i, i + 1)] = C64::new(inv_h2, 0.0);
    }
    let back = |k: usize| 1.0 - k as f64 * h;
    let w2 = fornberg(1.0, &[back(0), back(1), back(2), back(3)], 2);
    for (k, w) in w2.iter().enumerate() {
        d2[(n, n - k)] = C64::new(*w, 0.0);
    }
    let w1 = fornberg(1.0, &[back(0), back(1), back(2)], 1);
    let mut du = CMat::zeros(1, size);
    for (k, w) in w1.iter().enumerate() {
        du[(0, n - k)] = C64::new(*w, 0.0);
    }
    build_custom(ProblemSpec {
        a: d2.scale(alpha),
        c: d2,
        l: selection(&[n], size),
        b1: du.scale(-beta[0]),
        b2: du.scale(-beta[1]),
        b3: CMat::scalar(beta[2]),
        b4: CMat::scalar(beta[3]),
        case: CaseTag::StrongDampingBounded,
        meta: Metadata {
            scenario: "strongly_damped_interval".into(),
            grid: Some(grid),
            boundary_nodes: Some(vec![n]),
            coordinates: Some((1..=size).map(|i| grid.x(i)).collect()),
            coefficients: vec![
                ("n".into(), n.to_string()),
                ("alpha".into(), alpha.to_string()),
                ("beta".into(), format!("{beta:?}")),
            ],
        },
    })
}
