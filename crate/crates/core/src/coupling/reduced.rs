use std::ops::Range;

use super::constrained::free_to_physical;
use super::{default_lambda, dirichlet_operator, kernel_basis, which_for, DirichletOperator, Which};
use crate::discretize::{CaseTag, DiscreteProblem};
use crate::matcore::{cholesky, inverse, CMat, C64};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormTag {
    /// Unbounded trace, product space Y × X × ∂Y × ∂X.
    G,
    /// Bounded trace, product space V × X × ∂X × ∂X.
    GUnderline,
    /// Strong damping with unbounded trace.
    H,
    /// Strong damping with bounded trace.
    HUnderline,
}

impl FormTag {
    pub fn name(self) -> &'static str {
        match self {
            FormTag::G => "G",
            FormTag::GUnderline => "G_underline",
            FormTag::H => "H",
            FormTag::HUnderline => "H_underline",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub name: &'static str,
    pub range: Range<usize>,
}

/// Named consecutive index ranges `u, v, x, y` of a reduced generator:
/// position, velocity, boundary position, boundary velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMap {
    blocks: Vec<Block>,
}

impl BlockMap {
    fn from_dims(dims: [(&'static str, usize); 4]) -> Self {
        let mut start = 0;
        let blocks = dims
            .iter()
            .map(|&(name, d)| {
                let b = Block { name, range: start..start + d };
                start += d;
                b
            })
            .collect();
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn get(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn dim(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.range.end)
    }

    /// Index where the boundary coordinates begin.
    pub fn boundary_start(&self) -> usize {
        self.get("x").map_or(self.dim(), |b| b.range.start)
    }
}

/// Block generator similar to the reduction matrix, with the similarity pair
/// `G = U·𝔸_c·U⁻¹` relative to the free coordinates of
/// [`assemble_a_constrained`](super::assemble_a_constrained).
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub g: CMat,
    pub block_map: BlockMap,
    pub u: CMat,
    pub u_inv: CMat,
    pub lambda: C64,
    pub form: FormTag,
    pub dirichlet: DirichletOperator,
    /// Maps G-coordinates to the physical pair `(u, u̇)`.
    pub lift: CMat,
    pub case: CaseTag,
}

impl ReducedSystem {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    /// ‖U·U⁻¹ − I‖_F.
    pub fn inverse_defect(&self) -> f64 {
        (&self.u * &self.u_inv).dist_fro(&CMat::identity(self.dim()))
    }

    /// Physical position and velocity of a state in G-coordinates.
    pub fn physical(&self, state: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
        if state.len() != self.dim() {
            return Err(Error::BlockMapMismatch(format!("state has {} entries, system {}", state.len(), self.dim())));
        }
        let z = self.lift.mul_vec(state);
        let n = z.len() / 2;
        Ok((z[..n].to_vec(), z[n..].to_vec()))
    }

    /// Conjugates the position block by `t`: `G ↦ S·G·S⁻¹` with
    /// `S = diag(t, I, I, I)`.
    pub fn weighted(&self, t: &CMat) -> Result<Self> {
        let ub = self.block_map.get("u").expect("every form has a u block").range.clone();
        if t.shape() != (ub.len(), ub.len()) {
            return Err(Error::DimensionMismatch(format!(
                "weight is {}x{}, u block has {} entries",
                t.rows(),
                t.cols(),
                ub.len()
            )));
        }
        let n = self.dim();
        let mut s = CMat::identity(n);
        s.set_block(ub.start, ub.start, t);
        let mut s_inv = CMat::identity(n);
        s_inv.set_block(ub.start, ub.start, &inverse(t)?);
        Ok(Self {
            g: &(&s * &self.g) * &s_inv,
            u: &s * &self.u,
            u_inv: &self.u_inv * &s_inv,
            lift: &self.lift * &s_inv,
            ..self.clone()
        })
    }

    /// Conjugation into the discrete phase-space norm. With damping the
    /// position block is weighted by `I − C₀` (graph norm of the damping on
    /// ker L, plate and strongly damped families). Without damping and with
    /// `A₀` Hermitian negative definite it is weighted by the Cholesky factor
    /// `T` of `−A₀` (energy norm, `‖Tu‖² = −⟨A₀u, u⟩`), which turns the
    /// undamped interior block into a skew-Hermitian one.
    pub fn phase_space_weighted(&self, p: &DiscreteProblem) -> Result<Self> {
        self.weighted(&phase_space_weight(p, self.block_map.get("u").expect("u block").range.len())?)
    }
}

fn phase_space_weight(p: &DiscreteProblem, u_dim: usize) -> Result<CMat> {
    let w = kernel_basis(p.l())?;
    let wh = w.adjoint();
    let c0 = &(&wh * p.c()) * &w;
    let one = C64::new(1.0, 0.0);
    if u_dim != c0.rows() {
        return Ok((-&(&(&w * &c0) * &wh)).shift(one));
    }
    if c0.norm_max() == 0.0 {
        let a0 = &(&wh * p.a()) * &w;
        if let Ok(t) = cholesky(&-&a0) {
            return Ok(t);
        }
    }
    Ok((-&c0).shift(one))
}

struct Parts {
    w: CMat,
    wh: CMat,
    d: CMat,
    dt: CMat,
    a0: CMat,
    c0: CMat,
    dop: DirichletOperator,
}

fn parts(p: &DiscreteProblem, which: Which, lambda: C64) -> Result<Parts> {
    let w = kernel_basis(p.l())?;
    let wh = w.adjoint();
    let dop = dirichlet_operator(p, which, lambda)?;
    let d = dop.d.clone();
    let dt = &wh * &d;
    let a0 = &(&wh * p.a()) * &w;
    let c0 = &(&wh * p.c()) * &w;
    Ok(Parts { w, wh, d, dt, a0, c0, dop })
}

fn require(p: &DiscreteProblem, case: CaseTag) -> Result<()> {
    if p.case() != case {
        return Err(Error::WrongCase { expected: case.name(), found: p.case().name() });
    }
    Ok(())
}

fn resolve_lambda(p: &DiscreteProblem, lambda: Option<C64>) -> Result<C64> {
    match lambda {
        Some(l) => Ok(l),
        None => default_lambda(p, which_for(p.case())),
    }
}

fn finish(
    p: &DiscreteProblem,
    g: CMat,
    dims: [(&'static str, usize); 4],
    u: CMat,
    u_inv: CMat,
    form: FormTag,
    dop: DirichletOperator,
) -> Result<ReducedSystem> {
    let lift = &free_to_physical(p)? * &u_inv;
    Ok(ReducedSystem {
        g,
        block_map: BlockMap::from_dims(dims),
        u,
        u_inv,
        lambda: dop.lambda,
        form,
        dirichlet: dop,
        lift,
        case: p.case(),
    })
}

/// Similarity maps of the bounded-trace forms between free coordinates
/// `(u, v)` and `(u₀, v₀, x, y)`.
fn bounded_maps(p: &DiscreteProblem, s: &Parts) -> (CMat, CMat) {
    let n = p.dim_x();
    let m = p.dim_dx();
    let k = s.w.cols();
    let proj = &s.wh * &(&CMat::identity(n) - &(&s.d * p.l()));
    let u = CMat::assemble(
        &[k, k, m, m],
        &[n, n],
        &[vec![Some(&proj), None], vec![None, Some(&proj)], vec![Some(p.l()), None], vec![None, Some(p.l())]],
    );
    let u_inv = CMat::assemble(&[n, n], &[k, k, m, m], &[vec![Some(&s.w), None, Some(&s.d), None], vec![None, Some(&s.w), None, Some(&s.d)]]);
    (u, u_inv)
}

/// Unbounded-trace form on `(u₀, v, x, y)`.
pub fn assemble_g(p: &DiscreteProblem, lambda: Option<C64>) -> Result<ReducedSystem> {
    require(p, CaseTag::UnboundedTrace)?;
    let lambda = resolve_lambda(p, lambda)?;
    let s = parts(p, Which::AL, lambda)?;
    let (n, m, k) = (p.dim_x(), p.dim_dx(), s.w.cols());
    let ik = CMat::identity(k);
    let im = CMat::identity(m);
    let minus_dt = -&s.dt;
    let lam_dt = s.dt.scale(lambda);
    let b1w = p.b1() * &s.w;
    let b2w = p.b2() * &s.w;
    let b3_b1d = p.b3() + &(p.b1() * &s.d);
    let g = CMat::assemble(
        &[k, k, m, m],
        &[k, k, m, m],
        &[
            vec![None, Some(&ik), None, Some(&minus_dt)],
            vec![Some(&s.a0), Some(&s.c0), Some(&lam_dt), None],
            vec![None, None, None, Some(&im)],
            vec![Some(&b1w), Some(&b2w), Some(&b3_b1d), Some(p.b4())],
        ],
    );
    let proj = &s.wh * &(&CMat::identity(n) - &(&s.d * p.l()));
    let u = CMat::assemble(
        &[k, k, m, m],
        &[n, k, m],
        &[
            vec![Some(&proj), None, None],
            vec![None, Some(&ik), None],
            vec![Some(p.l()), None, None],
            vec![None, None, Some(&im)],
        ],
    );
    let u_inv = CMat::assemble(
        &[n, k, m],
        &[k, k, m, m],
        &[vec![Some(&s.w), None, Some(&s.d), None], vec![None, Some(&ik), None, None], vec![None, None, None, Some(&im)]],
    );
    finish(p, g, [("u", k), ("v", k), ("x", m), ("y", m)], u, u_inv, FormTag::G, s.dop)
}

/// Bounded-trace form on `(u₀, v₀, x, y)` built with the Dirichlet operator
/// of A.
pub fn assemble_g_underline(p: &DiscreteProblem, lambda: Option<C64>) -> Result<ReducedSystem> {
    require(p, CaseTag::BoundedTrace)?;
    let lambda = resolve_lambda(p, lambda)?;
    let s = parts(p, Which::AL, lambda)?;
    let x_col = &s.dt.scale(lambda) - &(&s.dt * &(p.b3() + &(p.b1() * &s.d)));
    let y_col = &(&(&s.wh * p.c()) * &s.d) - &(&s.dt * &(p.b4() + &(p.b2() * &s.d)));
    bounded_form(p, s, x_col, y_col, FormTag::GUnderline)
}

/// Strong-damping form with bounded trace, built with the Dirichlet operator
/// of C.
pub fn assemble_h_underline(p: &DiscreteProblem, lambda: Option<C64>) -> Result<ReducedSystem> {
    require(p, CaseTag::StrongDampingBounded)?;
    let lambda = resolve_lambda(p, lambda)?;
    let s = parts(p, Which::CL, lambda)?;
    let x_col = &(&(&s.wh * p.a()) * &s.d) - &(&s.dt * &(p.b3() + &(p.b1() * &s.d)));
    let y_col = &s.dt.scale(lambda) - &(&s.dt * &(p.b4() + &(p.b2() * &s.d)));
    bounded_form(p, s, x_col, y_col, FormTag::HUnderline)
}

fn bounded_form(p: &DiscreteProblem, s: Parts, x_col: CMat, y_col: CMat, form: FormTag) -> Result<ReducedSystem> {
    let (m, k) = (p.dim_dx(), s.w.cols());
    let ik = CMat::identity(k);
    let im = CMat::identity(m);
    let b1w = p.b1() * &s.w;
    let b2w = p.b2() * &s.w;
    let uu = &s.a0 - &(&s.dt * &b1w);
    let uv = &s.c0 - &(&s.dt * &b2w);
    let yx = p.b3() + &(p.b1() * &s.d);
    let yy = p.b4() + &(p.b2() * &s.d);
    let g = CMat::assemble(
        &[k, k, m, m],
        &[k, k, m, m],
        &[
            vec![None, Some(&ik), None, None],
            vec![Some(&uu), Some(&uv), Some(&x_col), Some(&y_col)],
            vec![None, None, None, Some(&im)],
            vec![Some(&b1w), Some(&b2w), Some(&yx), Some(&yy)],
        ],
    );
    let (u, u_inv) = bounded_maps(p, &s);
    finish(p, g, [("u", k), ("v", k), ("x", m), ("y", m)], u, u_inv, form, s.dop)
}

/// Strong-damping form with unbounded trace on `(u, v₀, x, y)`.
pub fn assemble_h(p: &DiscreteProblem, lambda: Option<C64>) -> Result<ReducedSystem> {
    require(p, CaseTag::StrongDampingUnbounded)?;
    let lambda = resolve_lambda(p, lambda)?;
    let s = parts(p, Which::CL, lambda)?;
    let (n, m, k) = (p.dim_x(), p.dim_dx(), s.w.cols());
    let im = CMat::identity(m);
    let idn = CMat::identity(n);
    let b2w = p.b2() * &s.w;
    let vu = &(&s.wh * p.a()) - &(&s.dt * p.b1());
    let vv = &s.c0 - &(&s.dt * &b2w);
    let vx = -&(&s.dt * p.b3());
    let vy = &s.dt.scale(lambda) - &(&s.dt * &(&(p.b2() * &s.d) + p.b4()));
    let yy = p.b4() + &(p.b2() * &s.d);
    let g = CMat::assemble(
        &[n, k, m, m],
        &[n, k, m, m],
        &[
            vec![None, Some(&s.w), None, Some(&s.d)],
            vec![Some(&vu), Some(&vv), Some(&vx), Some(&vy)],
            vec![None, None, None, Some(&im)],
            vec![Some(p.b1()), Some(&b2w), Some(p.b3()), Some(&yy)],
        ],
    );
    let proj = &s.wh * &(&idn - &(&s.d * p.l()));
    let u = CMat::assemble(
        &[n, k, m, m],
        &[n, m, n],
        &[
            vec![Some(&idn), None, None],
            vec![None, None, Some(&proj)],
            vec![None, Some(&im), None],
            vec![None, None, Some(p.l())],
        ],
    );
    let u_inv = CMat::assemble(
        &[n, m, n],
        &[n, k, m, m],
        &[vec![Some(&idn), None, None, None], vec![None, None, Some(&im), None], vec![None, Some(&s.w), None, Some(&s.d)]],
    );
    finish(p, g, [("u", n), ("v", k), ("x", m), ("y", m)], u, u_inv, FormTag::H, s.dop)
}

/// The reduced form matching the problem's case.
pub fn assemble(p: &DiscreteProblem, lambda: Option<C64>) -> Result<ReducedSystem> {
    match p.case() {
        CaseTag::UnboundedTrace => assemble_g(p, lambda),
        CaseTag::BoundedTrace => assemble_g_underline(p, lambda),
        CaseTag::StrongDampingUnbounded => assemble_h(p, lambda),
        CaseTag::StrongDampingBounded => assemble_h_underline(p, lambda),
    }
}
