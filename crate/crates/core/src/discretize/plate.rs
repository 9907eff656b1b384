use super::stencil::fornberg;
use super::{build_custom, real_row, selection, CaseTag, Grid1D, Metadata, ProblemSpec};
use super::DiscreteProblem;
use crate::matcore::CMat;
use crate::{Error, Result};

/// Nodes used for the one-sided fourth derivative at an end point (ghost
/// node included).
const D4_POINTS: usize = 7;
const D3_POINTS: usize = 5;

/// Grid values as linear combinations of the stored unknowns, with the ghost
/// nodes beyond each end eliminated through u'' = ±u' − u.
struct GhostGrid {
    n: usize,
    a: f64,
    b: f64,
}

impl GhostGrid {
    fn new(grid: &Grid1D) -> Self {
        let h = grid.h();
        let n = grid.n_interior() + 2;
        // central differences in u''(0) = u'(0) − u(0) solved for u_{-1};
        // the right end is the mirror image
        let a = (0.5 * h - 1.0) / (1.0 + 0.5 * h);
        let b = (2.0 - h * h) / (1.0 + 0.5 * h);
        Self { n, a, b }
    }

    fn value(&self, k: isize) -> Vec<f64> {
        let n = self.n as isize;
        let mut r = vec![0.0; self.n];
        if (0..n).contains(&k) {
            r[k as usize] = 1.0;
        } else if k == -1 {
            r[1] = self.a;
            r[0] = self.b;
        } else if k == n {
            r[self.n - 2] = self.a;
            r[self.n - 1] = self.b;
        } else {
            unreachable!("stencil reaches beyond the ghost layer");
        }
        r
    }

    /// Weighted combination of grid values `Σ w_k u_{idx_k}`.
    fn combine(&self, idx: impl IntoIterator<Item = isize>, w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (k, &wk) in idx.into_iter().zip(w) {
            for (o, v) in out.iter_mut().zip(self.value(k)) {
                *o += wk * v;
            }
        }
        out
    }
}

/// Damped plate-like equation on (0, 1) with dynamic boundary conditions at
/// both ends. Unknowns are the `n + 2` node values including x = 0 and x = 1.
pub fn build_interval_plate(n: usize) -> Result<DiscreteProblem> {
    if n < 8 {
        return Err(Error::InvalidSize(format!("plate grid needs n >= 8, got {n}")));
    }
    let grid = Grid1D::new(n)?;
    let h = grid.h();
    let g = GhostGrid::new(&grid);
    let size = g.n;
    let mut a = CMat::zeros(size, size);
    let mut c = CMat::zeros(size, size);
    let d4 = [1.0, -4.0, 6.0, -4.0, 1.0].map(|w| -w / h.powi(4));
    let d2 = [1.0, -2.0, 1.0].map(|w| w / (h * h));
    let d1 = [-0.5 / h, 0.0, 0.5 / h];
    for i in 1..size - 1 {
        let i = i as isize;
        a.row_mut(i as usize).copy_from_slice(&real_row(&g.combine(i - 2..=i + 2, &d4)));
        c.row_mut(i as usize).copy_from_slice(&real_row(&g.combine(i - 1..=i + 1, &d2)));
    }
    let mut b1 = CMat::zeros(2, size);
    let mut b2 = CMat::zeros(2, size);
    let ends = [(0isize, 1isize), (size as isize - 1, -1)];
    for (j, &(node, dir)) in ends.iter().enumerate() {
        let x0 = grid.x(node as usize);
        let idx = |count: usize| (-1..count as isize - 1).map(move |k| node + dir * k);
        let xs = |count: usize| idx(count).map(|k| k as f64 * h).collect::<Vec<_>>();
        let w4 = fornberg(x0, &xs(D4_POINTS), 4);
        let w3 = fornberg(x0, &xs(D3_POINTS), 3);
        let neg_u4: Vec<f64> = g.combine(idx(D4_POINTS), &w4).iter().map(|v| -v).collect();
        a.row_mut(node as usize).copy_from_slice(&real_row(&neg_u4));
        let row = node as usize;
        let central = [row as isize - 1, row as isize, row as isize + 1];
        c.row_mut(row).copy_from_slice(&real_row(&g.combine(central, &d2)));
        let u3 = g.combine(idx(D3_POINTS), &w3);
        let u1 = g.combine(central, &d1);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let force: Vec<f64> = u3.iter().zip(&u1).map(|(t, o)| -sign * t + sign * o).collect();
        b1.row_mut(j).copy_from_slice(&real_row(&force));
        let damp: Vec<f64> = u1.iter().map(|o| sign * o).collect();
        b2.row_mut(j).copy_from_slice(&real_row(&damp));
    }
    let minus_id = CMat::identity(2).scale_real(-1.0);
    build_custom(ProblemSpec {
        a,
        c,
        l: selection(&[0, size - 1], size),
        b1,
        b2,
        b3: minus_id.clone(),
        b4: minus_id,
        case: CaseTag::BoundedTrace,
        meta: Metadata {
            scenario: "interval_plate".into(),
            grid: Some(grid),
            boundary_nodes: Some(vec![0, size - 1]),
            coordinates: Some((0..size).map(|i| grid.x(i)).collect()),
            coefficients: vec![("n".into(), n.to_string())],
        },
    })
}
