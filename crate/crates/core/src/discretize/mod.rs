//! Finite-difference instances of the abstract data `(A, C, L, B₁..B₄)`.

mod damped;
mod network;
mod plate;
mod stencil;

pub use damped::build_strongly_damped_interval;
pub use network::{build_network_wave, NetworkGraph};
pub use plate::build_interval_plate;
pub use stencil::fornberg;

use crate::matcore::{CMat, Qr, C64};
use crate::{Error, Result};

/// Which structural case of the reduction applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// L defined only on the position space; velocity boundary values are
    /// independent coordinates.
    UnboundedTrace,
    /// L acts on positions and velocities alike.
    BoundedTrace,
    /// Damping dominates; only `Lv = y` constrains the domain.
    StrongDampingUnbounded,
    /// Damping dominates and L acts on both components.
    StrongDampingBounded,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::UnboundedTrace => "unbounded_trace",
            CaseTag::BoundedTrace => "bounded_trace",
            CaseTag::StrongDampingUnbounded => "strong_damping_unbounded",
            CaseTag::StrongDampingBounded => "strong_damping_bounded",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::UnboundedTrace, Self::BoundedTrace, Self::StrongDampingUnbounded, Self::StrongDampingBounded]
            .into_iter()
            .find(|c| c.name() == s)
    }
}

/// Uniform grid on `[0, 1]` with `n_interior` interior nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    n_interior: usize,
    h: f64,
}

impl Grid1D {
    pub fn new(n_interior: usize) -> Result<Self> {
        if n_interior < 4 {
            return Err(Error::InvalidSize(format!("grid needs at least 4 interior nodes, got {n_interior}")));
        }
        Ok(Self { n_interior, h: 1.0 / (n_interior as f64 + 1.0) })
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Coordinate of node `i` (node 0 is x = 0, node n+1 is x = 1).
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metadata {
    pub scenario: String,
    pub grid: Option<Grid1D>,
    /// Node indices selected by L, when L is a selection.
    pub boundary_nodes: Option<Vec<usize>>,
    /// Physical x-coordinate of each X-grid node, when meaningful.
    pub coordinates: Option<Vec<f64>>,
    pub coefficients: Vec<(String, String)>,
}

/// Operator data for one discretised problem.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteProblem {
    a: CMat,
    c: CMat,
    l: CMat,
    b1: CMat,
    b2: CMat,
    b3: CMat,
    b4: CMat,
    case: CaseTag,
    meta: Metadata,
}

/// Raw fields for [`build_custom`].
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub a: CMat,
    pub c: CMat,
    pub l: CMat,
    pub b1: CMat,
    pub b2: CMat,
    pub b3: CMat,
    pub b4: CMat,
    pub case: CaseTag,
    pub meta: Metadata,
}

const RANK_TOL: f64 = 1e-10;

/// Validates user-supplied operator data.
pub fn build_custom(spec: ProblemSpec) -> Result<DiscreteProblem> {
    let ProblemSpec { a, c, l, b1, b2, b3, b4, case, meta } = spec;
    let n = a.rows();
    let m = l.rows();
    let shape_err = |what: &str, got: (usize, usize), want: (usize, usize)| {
        Error::DimensionMismatch(format!("{what} is {}x{}, expected {}x{}", got.0, got.1, want.0, want.1))
    };
    if n == 0 {
        return Err(Error::InvalidSize("empty state space".into()));
    }
    for (name, mat, want) in [
        ("A", &a, (n, n)),
        ("C", &c, (n, n)),
        ("L", &l, (m, n)),
        ("B1", &b1, (m, n)),
        ("B2", &b2, (m, n)),
        ("B3", &b3, (m, m)),
        ("B4", &b4, (m, m)),
    ] {
        if mat.shape() != want {
            return Err(shape_err(name, mat.shape(), want));
        }
    }
    if m > n {
        return Err(Error::RankDeficientL { rank: n, rows: m });
    }
    if m > 0 {
        let rank = Qr::factor(&l.adjoint()).rank(RANK_TOL);
        if rank < m || l.norm_max() == 0.0 {
            return Err(Error::RankDeficientL { rank, rows: m });
        }
    }
    Ok(DiscreteProblem { a, c, l, b1, b2, b3, b4, case, meta })
}

impl DiscreteProblem {
    pub fn a(&self) -> &CMat {
        &self.a
    }
    pub fn c(&self) -> &CMat {
        &self.c
    }
    pub fn l(&self) -> &CMat {
        &self.l
    }
    pub fn b1(&self) -> &CMat {
        &self.b1
    }
    pub fn b2(&self) -> &CMat {
        &self.b2
    }
    pub fn b3(&self) -> &CMat {
        &self.b3
    }
    pub fn b4(&self) -> &CMat {
        &self.b4
    }
    pub fn case(&self) -> CaseTag {
        self.case
    }
    pub fn meta(&self) -> &Metadata {
        &self.meta
    }
    pub fn dim_x(&self) -> usize {
        self.a.rows()
    }
    pub fn dim_dx(&self) -> usize {
        self.l.rows()
    }
    /// The boundary velocity space is identified with ∂X.
    pub fn dim_dy(&self) -> usize {
        self.l.rows()
    }

    /// Same problem with B₁ and B₂ multiplied by `s`.
    pub fn with_coupling_scale(&self, s: f64) -> Self {
        let z = C64::new(s, 0.0);
        let mut p = self.clone();
        p.b1 = self.b1.scale(z);
        p.b2 = self.b2.scale(z);
        p.meta.coefficients.push(("coupling_scale".into(), format!("{s}")));
        p
    }

    /// Same data under another case tag.
    pub fn with_case(&self, case: CaseTag) -> Self {
        let mut p = self.clone();
        p.case = case;
        p
    }
}

/// Row selection matrix: row `r` is `e_{idx[r]}ᵀ`.
pub(crate) fn selection(idx: &[usize], n: usize) -> CMat {
    let mut l = CMat::zeros(idx.len(), n);
    for (r, &i) in idx.iter().enumerate() {
        l[(r, i)] = C64::new(1.0, 0.0);
    }
    l
}

pub(crate) fn real_row(row: &[f64]) -> Vec<C64> {
    row.iter().map(|&x| C64::new(x, 0.0)).collect()
}
