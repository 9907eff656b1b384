use super::{kernel_basis, trace_right_inverse};
use crate::discretize::{CaseTag, DiscreteProblem};
use crate::matcore::{CMat, C64};
use crate::{Error, Result};

/// The reduction matrix restricted to its domain, written in free coordinates
/// that satisfy the domain constraints by construction:
///
/// * bounded cases: `(u, v)` with `x = Lu`, `y = Lv`;
/// * unbounded trace: `(u, v₀, y)` with `v₀ ∈ ker L` coordinates, `x = Lu`,
///   physical velocity `Wv₀ + Ry`;
/// * strong damping, unbounded: `(u, x, v)` with `y = Lv`.
///
/// Each evolution equation is tested against the interior rows `Wᴴ` and
/// the boundary rows separately, so the result is the operator that
/// generates the constrained dynamics (not an orthogonal compression).
pub fn assemble_a_constrained(p: &DiscreteProblem) -> Result<CMat> {
    let n = p.dim_x();
    let m = p.dim_dx();
    let w = kernel_basis(p.l())?;
    let k = w.cols();
    let wh = w.adjoint();
    let r = trace_right_inverse(p.l())?;
    let l = p.l();
    let id = CMat::identity(n);
    let proj_a = &w * &(&wh * p.a());
    let proj_c = &w * &(&wh * p.c());
    let b3l = p.b3() * l;
    let b4l = p.b4() * l;
    Ok(match p.case() {
        CaseTag::BoundedTrace | CaseTag::StrongDampingBounded => {
            let acc_u = &proj_a + &(&r * &(p.b1() + &b3l));
            let acc_v = &proj_c + &(&r * &(p.b2() + &b4l));
            CMat::assemble(&[n, n], &[n, n], &[vec![None, Some(&id)], vec![Some(&acc_u), Some(&acc_v)]])
        }
        CaseTag::UnboundedTrace => {
            let wa = &wh * p.a();
            let c0 = &(&wh * p.c()) * &w;
            let bu = p.b1() + &b3l;
            let bv = p.b2() * &w;
            CMat::assemble(
                &[n, k, m],
                &[n, k, m],
                &[
                    vec![None, Some(&w), Some(&r)],
                    vec![Some(&wa), Some(&c0), None],
                    vec![Some(&bu), Some(&bv), Some(p.b4())],
                ],
            )
        }
        CaseTag::StrongDampingUnbounded => {
            let acc_u = &proj_a + &(&r * p.b1());
            let acc_x = &r * p.b3();
            let acc_v = &proj_c + &(&r * &(p.b2() + &b4l));
            let idm = CMat::identity(n);
            CMat::assemble(
                &[n, m, n],
                &[n, m, n],
                &[vec![None, None, Some(&idm)], vec![None, None, Some(l)], vec![Some(&acc_u), Some(&acc_x), Some(&acc_v)]],
            )
        }
    })
}

/// Map from the free coordinates of [`assemble_a_constrained`] to the
/// physical pair `(u, u̇)` stacked as a `2·dim_X` vector.
pub fn free_to_physical(p: &DiscreteProblem) -> Result<CMat> {
    let n = p.dim_x();
    let m = p.dim_dx();
    let id = CMat::identity(n);
    Ok(match p.case() {
        CaseTag::BoundedTrace | CaseTag::StrongDampingBounded => CMat::identity(2 * n),
        CaseTag::UnboundedTrace => {
            let w = kernel_basis(p.l())?;
            let r = trace_right_inverse(p.l())?;
            let k = w.cols();
            CMat::assemble(&[n, n], &[n, k, m], &[vec![Some(&id), None, None], vec![None, Some(&w), Some(&r)]])
        }
        CaseTag::StrongDampingUnbounded => {
            CMat::assemble(&[n, n], &[n, m, n], &[vec![Some(&id), None, None], vec![None, None, Some(&id)]])
        }
    })
}

/// Free coordinates of the physical pair `(u, u̇)`. Boundary values of the
/// result are taken from the traces, so the map inverts [`free_to_physical`]
/// on its range.
pub fn physical_to_free(p: &DiscreteProblem, u: &[C64], v: &[C64]) -> Result<Vec<C64>> {
    let n = p.dim_x();
    if u.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch(format!("physical state has {}+{} entries, expected {n}+{n}", u.len(), v.len())));
    }
    let mut z = u.to_vec();
    match p.case() {
        CaseTag::BoundedTrace | CaseTag::StrongDampingBounded => z.extend_from_slice(v),
        CaseTag::UnboundedTrace => {
            z.extend(kernel_basis(p.l())?.adjoint().mul_vec(v));
            z.extend(p.l().mul_vec(v));
        }
        CaseTag::StrongDampingUnbounded => {
            z.extend(p.l().mul_vec(u));
            z.extend_from_slice(v);
        }
    }
    Ok(z)
}
