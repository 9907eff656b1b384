//! The check pipeline behind `dynbc run`.

use std::time::Instant;

use dynbc::coupling::{
    assemble, assemble_a_constrained, kernel_restriction, physical_to_free, probe_lambda, ReducedSystem,
};
use dynbc::discretize::DiscreteProblem;
use dynbc::matcore::{eigenvalues, operator_norm, spectral_abscissa, spectral_distance, vec_norm, C64};
use dynbc::semigroup::{
    check_analyticity, check_boundedness, cosine_family, dalembert_check, evolve, log_radii, wentzell_residual,
    AnalyticityVerdict, EvolutionTrace, ProbeSettings,
};
use dynbc::stability::{dyson_phillips, smallness_criterion, split_blocks, verify_zero_pattern};
use dynbc::Error;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{complex, CheckName, ScenarioConfig};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub evidence: Map<String, Value>,
}

/// Everything the checks share: the problem and its reduced forms.
pub struct Context {
    pub problem: DiscreteProblem,
    pub system: ReducedSystem,
    pub weighted: ReducedSystem,
    pub trace: Option<EvolutionTrace>,
}

/// JSON number, with non-finite values spelled out (JSON has no infinity).
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn cplx(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn evidence(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn entry(name: CheckName, pass: bool, ev: Vec<(&str, Value)>) -> CheckEntry {
    CheckEntry {
        name: name.name(),
        status: if pass { Status::Pass } else { Status::Fail },
        reason: None,
        evidence: evidence(ev),
    }
}

fn skipped(name: CheckName, reason: String) -> CheckEntry {
    CheckEntry { name: name.name(), status: Status::Skipped, reason: Some(reason), evidence: Map::new() }
}

fn failed(name: CheckName, err: &Error) -> CheckEntry {
    CheckEntry { name: name.name(), status: Status::Fail, reason: Some(err.to_string()), evidence: Map::new() }
}

/// Assembles the problem and, when any check needs it, the evolution trace.
pub fn prepare(cfg: &ScenarioConfig) -> Result<Context, CliError> {
    let problem = cfg.problem()?;
    let setup = |e: Error| CliError::ConfigInvalid(format!("cannot assemble the reduced system: {e}"));
    let lambda = match cfg.lambda {
        Some(z) => complex(z),
        None => probe_lambda(&problem).map_err(setup)?,
    };
    let system = assemble(&problem, Some(lambda)).map_err(setup)?;
    let weighted = system.phase_space_weighted(&problem).map_err(setup)?;
    let trace = if cfg.checks.iter().any(|c| matches!(c, CheckName::Evolve | CheckName::Wentzell)) {
        let (u, v) = cfg.initial_state(&problem)?;
        let z = physical_to_free(&problem, &u, &v).map_err(setup)?;
        Some(evolve(&system.g, &system.u.mul_vec(&z), cfg.run.t, cfg.run.steps).map_err(setup)?)
    } else {
        None
    };
    Ok(Context { problem, system, weighted, trace })
}

/// Runs every requested check; results come back in pipeline order, each
/// with its wall-clock time.
pub fn run_checks(cfg: &ScenarioConfig, ctx: &Context) -> Vec<(CheckEntry, f64)> {
    let mut order: Vec<CheckName> = cfg.checks.clone();
    order.sort_by_key(|c| c.stage());
    order
        .par_iter()
        .map(|&c| {
            let start = Instant::now();
            let e = run_one(c, cfg, ctx);
            (e, start.elapsed().as_secs_f64())
        })
        .collect()
}

fn run_one(check: CheckName, cfg: &ScenarioConfig, ctx: &Context) -> CheckEntry {
    let result = match check {
        CheckName::Spectrum => spectrum(ctx),
        CheckName::Similarity => similarity(cfg, ctx),
        CheckName::Evolve => evolve_check(ctx),
        CheckName::Wentzell => wentzell(cfg, ctx),
        CheckName::Boundedness => boundedness(cfg, ctx),
        CheckName::Analyticity => analyticity(cfg, ctx),
        CheckName::DysonPhillips => dyson(cfg, ctx),
        CheckName::StabilityCertificate => certificate(cfg, ctx),
        CheckName::Cosine => cosine(cfg, ctx),
    };
    result.unwrap_or_else(|e| failed(check, &e))
}

fn spectrum(ctx: &Context) -> Result<CheckEntry, Error> {
    let ev = eigenvalues(&ctx.system.g)?;
    let abscissa = ev.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(entry(
        CheckName::Spectrum,
        true,
        vec![
            ("dimension", json!(ev.len())),
            ("spectral_abscissa", num(abscissa)),
            ("eigenvalues", Value::Array(ev.into_iter().map(cplx).collect())),
        ],
    ))
}

fn similarity(cfg: &ScenarioConfig, ctx: &Context) -> Result<CheckEntry, Error> {
    let reference = eigenvalues(&assemble_a_constrained(&ctx.problem)?)?;
    let reduced = eigenvalues(&ctx.system.g)?;
    let distance = spectral_distance(&reference, &reduced);
    let defect = ctx.system.inverse_defect();
    let tol = &cfg.run.tolerances;
    Ok(entry(
        CheckName::Similarity,
        distance <= tol.similarity && defect <= tol.inverse_defect,
        vec![
            ("form", json!(ctx.system.form.name())),
            ("lambda", cplx(ctx.system.lambda)),
            ("eigenvalue_mismatch", num(distance)),
            ("tolerance", num(tol.similarity)),
            ("inverse_defect", num(defect)),
            ("inverse_tolerance", num(tol.inverse_defect)),
        ],
    ))
}

/// Per-block Euclidean norms of a reduced state followed by the total norm.
pub fn block_norms(sys: &ReducedSystem, state: &[C64]) -> Vec<f64> {
    let mut out: Vec<f64> = sys.block_map.blocks().iter().map(|b| vec_norm(&state[b.range.clone()])).collect();
    out.push(vec_norm(state));
    out
}

fn evolve_check(ctx: &Context) -> Result<CheckEntry, Error> {
    let trace = ctx.trace.as_ref().expect("trace prepared for evolve");
    let totals: Vec<f64> = trace.states.iter().map(|s| vec_norm(s)).collect();
    let finite = totals.iter().all(|x| x.is_finite());
    Ok(entry(
        CheckName::Evolve,
        finite,
        vec![
            ("samples", json!(trace.len())),
            ("t_end", num(*trace.time_grid.last().unwrap_or(&0.0))),
            ("initial_norm", num(totals[0])),
            ("final_norm", num(*totals.last().unwrap_or(&0.0))),
            ("max_norm", num(totals.iter().copied().fold(0.0, f64::max))),
            ("series", json!("evolve.csv")),
        ],
    ))
}

fn wentzell(cfg: &ScenarioConfig, ctx: &Context) -> Result<CheckEntry, Error> {
    let trace = ctx.trace.as_ref().expect("trace prepared for wentzell");
    let residual = match wentzell_residual(&ctx.problem, &ctx.system, trace, trace.len() - 1) {
        Err(Error::BlockMapMismatch(why)) => return Ok(skipped(CheckName::Wentzell, why)),
        other => other?,
    };
    let tol = cfg.run.tolerances.wentzell;
    Ok(entry(
        CheckName::Wentzell,
        residual <= tol,
        vec![("t", num(cfg.run.t)), ("residual", num(residual)), ("tolerance", num(tol))],
    ))
}

fn boundedness(cfg: &ScenarioConfig, ctx: &Context) -> Result<CheckEntry, Error> {
    let tol = &cfg.run.tolerances;
    let r = check_boundedness(&ctx.weighted.g, cfg.run.t_max, tol.boundedness_sup)?;
    let bounded = r.observed_sup <= tol.boundedness_sup && r.final_slope <= tol.boundedness_slope;
    Ok(entry(
        CheckName::Boundedness,
        bounded,
        vec![
            ("t_max", num(cfg.run.t_max)),
            ("observed_sup", num(r.observed_sup)),
            ("final_decade_slope", num(r.final_slope)),
            ("slope_tolerance", num(tol.boundedness_slope)),
            ("sup_bound", num(tol.boundedness_sup)),
        ],
    ))
}

fn analyticity(cfg: &ScenarioConfig, ctx: &Context) -> Result<CheckEntry, Error> {
    let r = &cfg.run;
    let settings = ProbeSettings {
        omega: r.omega,
        thetas_deg: r.thetas_deg.clone(),
        radii: log_radii(r.r_min, r.r_max, r.radii_per_decade),
        threshold: r.tolerances.analyticity_threshold,
    };
    let abscissa = spectral_abscissa(&ctx.weighted.g)?;
    if abscissa >= r.omega {
        return Ok(skipped(
            CheckName::Analyticity,
            format!("omega = {} does not exceed the spectral abscissa {abscissa:.6e}", r.omega),
        ));
    }
    let rep = check_analyticity(&ctx.weighted.g, &settings)?;
    Ok(entry(
        CheckName::Analyticity,
        rep.verdict == AnalyticityVerdict::ConsistentWithAnalytic,
        vec![
            ("verdict", json!(rep.verdict.name())),
            ("omega", num(rep.omega)),
            ("thetas_deg", json!(rep.thetas_deg)),
            ("sup_norms", Value::Array(rep.sup_norms.iter().map(|&x| num(x)).collect())),
            ("threshold", num(rep.threshold)),
            ("flagged", json!(rep.flagged.len())),
        ],
    ))
}

fn dyson(cfg: &ScenarioConfig, ctx: &Context) -> Result<CheckEntry, Error> {
    let sys = split_blocks(&ctx.weighted, "boundary")?;
    let exp = dyson_phillips(&sys, cfg.run.t, cfg.run.steps, cfg.run.k_max)?;
    let zeros = verify_zero_pattern(&exp);
    let tol = cfg.run.tolerances.dyson_phillips;
    Ok(entry(
        CheckName::DysonPhillips,
        exp.partial_sum_error <= tol && zeros.holds(),
        vec![
            ("split", json!([exp.split.0, exp.split.1])),
            ("k_max", json!(cfg.run.k_max)),
            ("partial_sum_error", num(exp.partial_sum_error)),
            ("tolerance", num(tol)),
            ("zero_pattern_violation", num(zeros.max_violation)),
        ],
    ))
}

/// Fixed, well-spread probe vectors so that reports are reproducible.
fn probe_vectors(dim: usize, count: usize) -> Vec<Vec<C64>> {
    (1..=count)
        .map(|k| {
            (0..dim)
                .map(|j| {
                    let phase = (k * (j + 1)) as f64 * 0.618_033_988_749_895;
                    C64::new(phase.cos(), (1.7 * phase).sin())
                })
                .collect()
        })
        .collect()
}

fn certificate(cfg: &ScenarioConfig, ctx: &Context) -> Result<CheckEntry, Error> {
    let sys = match split_blocks(&ctx.weighted, "boundary")?.with_estimated_bounds() {
        Err(Error::PremiseViolated(why)) => return Ok(skipped(CheckName::StabilityCertificate, why)),
        other => other?,
    };
    let b = sys.bounds.expect("estimated");
    let probes = probe_vectors(ctx.weighted.dim(), cfg.run.probes);
    let cert = smallness_criterion(&sys, &probes, 2000)?;
    let worst = cert.integral_checks.iter().map(|c| (c.integral + c.tail) / c.bound).fold(0.0, f64::max);
    Ok(entry(
        CheckName::StabilityCertificate,
        cert.consistent(),
        vec![
            ("verdict", json!(cert.verdict.name())),
            ("M", num(cert.m)),
            ("M0", num(cert.m0)),
            ("M1", num(b.m1)),
            ("eps1", num(b.eps1)),
            ("M2", num(b.m2)),
            ("eps2", num(b.eps2)),
            ("spectral_abscissa", num(cert.spectral_abscissa)),
            ("probes", json!(cert.integral_checks.len())),
            ("worst_integral_ratio", num(worst)),
        ],
    ))
}

fn cosine(cfg: &ScenarioConfig, ctx: &Context) -> Result<CheckEntry, Error> {
    let (c0, _) = kernel_restriction(ctx.problem.c(), ctx.problem.l())?;
    let [t, s] = cfg.run.cosine_times;
    let residual = dalembert_check(&c0, t, s)?;
    let scale = 1.0 + operator_norm(&cosine_family(&c0, t)?) * operator_norm(&cosine_family(&c0, s)?);
    let tol = cfg.run.tolerances.cosine * scale;
    Ok(entry(
        CheckName::Cosine,
        residual <= tol,
        vec![("t", num(t)), ("s", num(s)), ("residual", num(residual)), ("tolerance", num(tol))],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_are_spelled_out() {
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(f64::NAN), json!("nan"));
        assert_eq!(num(-f64::INFINITY), json!("-inf"));
        assert_eq!(num(1.5), json!(1.5));
    }

    #[test]
    fn probes_are_deterministic() {
        assert_eq!(probe_vectors(4, 3), probe_vectors(4, 3));
        assert_eq!(probe_vectors(4, 3).len(), 3);
    }
}
