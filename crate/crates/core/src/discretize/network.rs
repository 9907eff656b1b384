use super::{build_custom, selection, CaseTag, DiscreteProblem, Grid1D, Metadata, ProblemSpec};
use crate::matcore::{CMat, C64};
use crate::{Error, Result};

/// Finite metric graph whose edges are copies of [0, 1] oriented from the
/// start vertex to the end vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkGraph {
    n_vertices: usize,
    incidence: Vec<(usize, usize)>,
    edge_grids: Vec<Grid1D>,
}

impl NetworkGraph {
    pub fn new(n_vertices: usize, incidence: Vec<(usize, usize)>, edge_grids: Vec<Grid1D>) -> Result<Self> {
        if incidence.is_empty() {
            return Err(Error::InvalidSize("network needs at least one edge".into()));
        }
        if incidence.len() != edge_grids.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} edges but {} edge grids",
                incidence.len(),
                edge_grids.len()
            )));
        }
        if let Some(&(s, t)) = incidence.iter().find(|&&(s, t)| s >= n_vertices || t >= n_vertices) {
            return Err(Error::DimensionMismatch(format!("edge ({s},{t}) names a vertex >= {n_vertices}")));
        }
        let g = Self { n_vertices, incidence, edge_grids };
        if !g.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(g)
    }

    /// Every edge gets the same grid.
    pub fn uniform(n_vertices: usize, incidence: Vec<(usize, usize)>, n: usize) -> Result<Self> {
        let grid = Grid1D::new(n)?;
        let e = incidence.len();
        Self::new(n_vertices, incidence, vec![grid; e])
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.incidence.len()
    }

    pub fn incidence(&self) -> &[(usize, usize)] {
        &self.incidence
    }

    pub fn edge_grids(&self) -> &[Grid1D] {
        &self.edge_grids
    }

    fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(s, t) in &self.incidence {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..self.n_vertices).all(|v| find(&mut parent, v) == root)
    }

    /// Total unknowns: one shared value per vertex plus the interior nodes.
    pub fn dofs(&self) -> usize {
        self.n_vertices + self.edge_grids.iter().map(Grid1D::n_interior).sum::<usize>()
    }

    /// Index of node `k` (0..=n+1) of edge `e`; the end nodes are the shared
    /// vertex unknowns.
    pub fn node_index(&self, e: usize, k: usize) -> usize {
        let n = self.edge_grids[e].n_interior();
        let (s, t) = self.incidence[e];
        if k == 0 {
            s
        } else if k == n + 1 {
            t
        } else {
            self.n_vertices + self.edge_grids[..e].iter().map(Grid1D::n_interior).sum::<usize>() + k - 1
        }
    }

    /// Row extracting the outward normal derivative of edge `e` at its start
    /// (`at_end = false`) or end vertex, by one-sided second-order differences.
    pub fn normal_derivative(&self, e: usize, at_end: bool) -> Vec<f64> {
        let grid = self.edge_grids[e];
        let n = grid.n_interior();
        let mut row = vec![0.0; self.dofs()];
        let w = [1.5 / grid.h(), -2.0 / grid.h(), 0.5 / grid.h()];
        for (j, wj) in w.iter().enumerate() {
            let k = if at_end { n + 1 - j } else { j };
            row[self.node_index(e, k)] += wj;
        }
        row
    }

    /// Row of the one-sided second derivative along edge `e` at one end.
    fn end_second_derivative(&self, e: usize, at_end: bool) -> Vec<f64> {
        let grid = self.edge_grids[e];
        let n = grid.n_interior();
        let h2 = grid.h() * grid.h();
        let mut row = vec![0.0; self.dofs()];
        for (j, wj) in [2.0, -5.0, 4.0, -1.0].iter().enumerate() {
            let k = if at_end { n + 1 - j } else { j };
            row[self.node_index(e, k)] += wj / h2;
        }
        row
    }
}

/// Wave equation on a network with continuity at the vertices and dynamic
/// Kirchhoff-type vertex conditions
/// `ẅ = P·Φ·∂_ν u + M·w + N·ẇ`.
pub fn build_network_wave(graph: &NetworkGraph, m: &CMat, n: &CMat, p: &CMat, phi: &CMat) -> Result<DiscreteProblem> {
    let v = graph.n_vertices();
    let e = graph.n_edges();
    for (name, mat, want) in [("M", m, (v, v)), ("N", n, (v, v)), ("P", p, (v, v)), ("Phi", phi, (v, e))] {
        if mat.shape() != want {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, expected {}x{}",
                mat.rows(),
                mat.cols(),
                want.0,
                want.1
            )));
        }
    }
    let dofs = graph.dofs();
    let mut a = CMat::zeros(dofs, dofs);
    let mut degree = vec![0usize; v];
    for edge in 0..e {
        let grid = graph.edge_grids()[edge];
        let inv_h2 = 1.0 / (grid.h() * grid.h());
        for k in 1..=grid.n_interior() {
            let row = graph.node_index(edge, k);
            for (dk, w) in [(k - 1, 1.0), (k, -2.0), (k + 1, 1.0)] {
                a[(row, graph.node_index(edge, dk))] += C64::new(w * inv_h2, 0.0);
            }
        }
        let (s, t) = graph.incidence()[edge];
        for (vertex, at_end) in [(s, false), (t, true)] {
            degree[vertex] += 1;
            for (j, w) in graph.end_second_derivative(edge, at_end).into_iter().enumerate() {
                a[(vertex, j)] += C64::new(w, 0.0);
            }
        }
    }
    for (vertex, &d) in degree.iter().enumerate() {
        for j in 0..dofs {
            a[(vertex, j)] /= d as f64;
        }
    }
    // flux[h, :] = Σ_j φ_hj ∂_ν u_j(h)
    let mut flux = CMat::zeros(v, dofs);
    for edge in 0..e {
        let (s, t) = graph.incidence()[edge];
        for (vertex, at_end) in [(s, false), (t, true)] {
            let w = phi[(vertex, edge)];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, d) in graph.normal_derivative(edge, at_end).into_iter().enumerate() {
                flux[(vertex, j)] += w * d;
            }
        }
    }
    let b1 = p * &flux;
    build_custom(ProblemSpec {
        a,
        c: CMat::zeros(dofs, dofs),
        l: selection(&(0..v).collect::<Vec<_>>(), dofs),
        b1,
        b2: CMat::zeros(v, dofs),
        b3: m.clone(),
        b4: n.clone(),
        case: CaseTag::BoundedTrace,
        meta: Metadata {
            scenario: "network_wave".into(),
            grid: graph.edge_grids().first().copied(),
            boundary_nodes: Some((0..v).collect()),
            coordinates: None,
            coefficients: vec![
                ("vertices".into(), v.to_string()),
                ("edges".into(), format!("{:?}", graph.incidence())),
            ],
        },
    })
}
